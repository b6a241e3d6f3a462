//! Binary parity-check matrices and GF(2) linear algebra.
//!
//! The matrix keeps a dense bit grid and sorted per-row/per-column support
//! lists in sync: metric enumeration walks the supports, while energy deltas
//! and the decoder rely on O(1) entry tests.

use crate::{Error, Result};

/// A dense m×n binary matrix with maintained sparse support lists.
///
/// Rows are check nodes, columns are variable nodes; the 1-entries are the
/// edges of the Tanner graph.
///
/// ```
/// use ldpc_tasa::ParityCheckMatrix;
///
/// let h = ParityCheckMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
/// assert_eq!(h.dims(), (2, 3));
/// assert_eq!(h.col_support(1), &[0, 1]);
/// assert_eq!(h.rank(), 2);
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    m: usize,
    n: usize,
    bits: Vec<bool>,
    row_support: Vec<Vec<usize>>,
    col_support: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// All-zero matrix. Panics if either dimension is zero.
    pub fn zeros(m: usize, n: usize) -> Self {
        assert!(m > 0 && n > 0, "matrix dimensions must be positive");
        Self {
            m,
            n,
            bits: vec![false; m * n],
            row_support: vec![Vec::new(); m],
            col_support: vec![Vec::new(); n],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut h = Self::zeros(size, size);
        for i in 0..size {
            h.toggle_unchecked(i, i);
        }
        h
    }

    /// Builds a matrix from dense rows of 0/1 values.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidDimensions("empty matrix".into()));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDimensions("ragged rows".into()));
        }
        let mut h = Self::zeros(rows.len(), n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    h.toggle_unchecked(i, j);
                }
            }
        }
        Ok(h)
    }

    /// Builds a matrix from per-column row supports.
    pub fn from_cols(m: usize, n: usize, cols: &[Vec<usize>]) -> Result<Self> {
        if cols.len() != n {
            return Err(Error::InvalidDimensions(format!(
                "expected {n} column supports, got {}",
                cols.len()
            )));
        }
        let mut h = Self::zeros(m, n);
        for (j, col) in cols.iter().enumerate() {
            for &i in col {
                if i >= m {
                    return Err(Error::IndexOutOfRange {
                        row: i,
                        col: j,
                        m,
                        n,
                    });
                }
                if !h.get(i, j) {
                    h.toggle_unchecked(i, j);
                }
            }
        }
        Ok(h)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn row_support(&self, i: usize) -> &[usize] {
        &self.row_support[i]
    }

    pub fn col_support(&self, j: usize) -> &[usize] {
        &self.col_support[j]
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row_support[i].len()
    }

    pub fn col_weight(&self, j: usize) -> usize {
        self.col_support[j].len()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        (0..self.n).map(|j| self.col_weight(j)).collect()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.m).map(|i| self.row_weight(i)).collect()
    }

    /// Number of 1-entries (edges of the Tanner graph).
    pub fn ones(&self) -> usize {
        self.row_support.iter().map(Vec::len).sum()
    }

    /// Flips a single entry, keeping both support lists in sync.
    pub fn toggle(&mut self, i: usize, j: usize) -> Result<()> {
        if i >= self.m || j >= self.n {
            return Err(Error::IndexOutOfRange {
                row: i,
                col: j,
                m: self.m,
                n: self.n,
            });
        }
        self.toggle_unchecked(i, j);
        Ok(())
    }

    pub(crate) fn toggle_unchecked(&mut self, i: usize, j: usize) {
        let idx = i * self.n + j;
        if self.bits[idx] {
            self.bits[idx] = false;
            remove_sorted(&mut self.row_support[i], j);
            remove_sorted(&mut self.col_support[j], i);
        } else {
            self.bits[idx] = true;
            insert_sorted(&mut self.row_support[i], j);
            insert_sorted(&mut self.col_support[j], i);
        }
    }

    /// Applies a proposal move (one or two toggles).
    pub fn apply_move(&mut self, mv: &Move) -> Result<()> {
        for (i, j) in mv.toggles() {
            self.toggle(i, j)?;
        }
        Ok(())
    }

    /// Counts of all-zero rows and all-zero columns.
    pub fn validity_violations(&self) -> (usize, usize) {
        let zero_rows = self.row_support.iter().filter(|s| s.is_empty()).count();
        let zero_cols = self.col_support.iter().filter(|s| s.is_empty()).count();
        (zero_rows, zero_cols)
    }

    pub fn is_valid(&self) -> bool {
        self.validity_violations() == (0, 0)
    }

    /// GF(2) rank by forward elimination with partial pivoting on a
    /// word-packed working copy.
    pub fn rank(&self) -> usize {
        let words = self.n.div_ceil(64);
        let mut rows: Vec<Vec<u64>> = (0..self.m)
            .map(|i| {
                let mut packed = vec![0u64; words];
                for &j in &self.row_support[i] {
                    packed[j / 64] |= 1 << (j % 64);
                }
                packed
            })
            .collect();

        let mut rank = 0;
        for col in 0..self.n {
            if rank == self.m {
                break;
            }
            let (w, b) = (col / 64, col % 64);
            let Some(pivot) = (rank..self.m).find(|&r| rows[r][w] >> b & 1 == 1) else {
                continue;
            };
            rows.swap(rank, pivot);
            let (pivot_row, rest) = {
                let (head, tail) = rows.split_at_mut(rank + 1);
                (&head[rank], tail)
            };
            for row in rest.iter_mut() {
                if row[w] >> b & 1 == 1 {
                    for (dst, src) in row.iter_mut().zip(pivot_row.iter()) {
                        *dst ^= src;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Computes H·wordᵀ over GF(2).
    pub fn syndrome(&self, word: &[u8]) -> Vec<u8> {
        assert_eq!(word.len(), self.n, "word length must equal n");
        self.row_support
            .iter()
            .map(|sup| sup.iter().fold(0u8, |acc, &j| acc ^ (word[j] & 1)))
            .collect()
    }

    pub fn syndrome_is_zero(&self, word: &[u8]) -> bool {
        assert_eq!(word.len(), self.n, "word length must equal n");
        self.row_support
            .iter()
            .all(|sup| sup.iter().fold(0u8, |acc, &j| acc ^ (word[j] & 1)) == 0)
    }

    pub fn degree_profile(&self, target_col_weights: &[usize]) -> DegreeProfile {
        assert_eq!(target_col_weights.len(), self.n, "targets length must equal n");
        DegreeProfile {
            col_weights: self.col_weights(),
            row_weights: self.row_weights(),
            target_col_weights: target_col_weights.to_vec(),
        }
    }
}

fn insert_sorted(list: &mut Vec<usize>, value: usize) {
    match list.binary_search(&value) {
        Ok(_) => {}
        Err(pos) => list.insert(pos, value),
    }
}

fn remove_sorted(list: &mut Vec<usize>, value: usize) {
    if let Ok(pos) = list.binary_search(&value) {
        list.remove(pos);
    }
}

/// Column and row degrees together with the prescribed per-column targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub col_weights: Vec<usize>,
    pub row_weights: Vec<usize>,
    pub target_col_weights: Vec<usize>,
}

impl DegreeProfile {
    /// Σ_j |w_c(j) − target(j)|, the column-weight deviation.
    pub fn total_deviation(&self) -> usize {
        self.col_weights
            .iter()
            .zip(&self.target_col_weights)
            .map(|(&w, &t)| w.abs_diff(t))
            .sum()
    }
}

/// A single proposal move on a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Flip one entry.
    Toggle { row: usize, col: usize },
    /// Move a 1 within `col` from `from_row` to `to_row`; preserves the
    /// column weight by construction.
    Swap {
        col: usize,
        from_row: usize,
        to_row: usize,
    },
}

impl Move {
    /// The sequence of single-entry toggles realizing this move.
    pub fn toggles(&self) -> Vec<(usize, usize)> {
        match *self {
            Move::Toggle { row, col } => vec![(row, col)],
            Move::Swap {
                col,
                from_row,
                to_row,
            } => vec![(from_row, col), (to_row, col)],
        }
    }
}

/// Systematic encoder derived from a full-rank parity-check matrix.
///
/// Reduced row echelon form over GF(2) picks m pivot (parity) columns; the
/// remaining k columns carry the message bits.
pub struct SystematicEncoder {
    n: usize,
    info_cols: Vec<usize>,
    pivot_cols: Vec<usize>,
    // For each pivot row, the information-column positions whose XOR gives
    // the pivot bit.
    parity_deps: Vec<Vec<usize>>,
}

impl SystematicEncoder {
    pub fn new(h: &ParityCheckMatrix) -> Result<Self> {
        let (m, n) = h.dims();
        let words = n.div_ceil(64);
        let mut rows: Vec<Vec<u64>> = (0..m)
            .map(|i| {
                let mut packed = vec![0u64; words];
                for &j in h.row_support(i) {
                    packed[j / 64] |= 1 << (j % 64);
                }
                packed
            })
            .collect();

        let mut pivot_cols = Vec::with_capacity(m);
        let mut rank = 0;
        for col in 0..n {
            if rank == m {
                break;
            }
            let (w, b) = (col / 64, col % 64);
            let Some(pivot) = (rank..m).find(|&r| rows[r][w] >> b & 1 == 1) else {
                continue;
            };
            rows.swap(rank, pivot);
            for r in 0..m {
                if r != rank && rows[r][w] >> b & 1 == 1 {
                    let (lo, hi) = rows.split_at_mut(rank.max(r));
                    let (dst, src) = if r > rank {
                        (&mut hi[0], &lo[rank])
                    } else {
                        (&mut lo[r], &hi[0])
                    };
                    for (d, s) in dst.iter_mut().zip(src.iter()) {
                        *d ^= s;
                    }
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }

        if rank < m {
            return Err(Error::RankDeficient { rank, m });
        }

        let is_pivot: Vec<bool> = {
            let mut v = vec![false; n];
            for &c in &pivot_cols {
                v[c] = true;
            }
            v
        };
        let info_cols: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let parity_deps = (0..m)
            .map(|r| {
                (0..n)
                    .filter(|&c| !is_pivot[c] && rows[r][c / 64] >> (c % 64) & 1 == 1)
                    .collect()
            })
            .collect();

        Ok(Self {
            n,
            info_cols,
            pivot_cols,
            parity_deps,
        })
    }

    /// Positions of the k message bits within a codeword.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_cols
    }

    pub fn message_len(&self) -> usize {
        self.info_cols.len()
    }

    /// Encodes a k-bit message into an n-bit codeword with zero syndrome.
    pub fn encode(&self, message: &[u8]) -> Vec<u8> {
        assert_eq!(message.len(), self.info_cols.len(), "message length must equal k");
        let mut word = vec![0u8; self.n];
        for (&col, &bit) in self.info_cols.iter().zip(message) {
            word[col] = bit & 1;
        }
        for (r, &pivot) in self.pivot_cols.iter().enumerate() {
            word[pivot] = self.parity_deps[r]
                .iter()
                .fold(0u8, |acc, &c| acc ^ word[c]);
        }
        word
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(m: usize, n: usize, density: f64, seed: u64) -> ParityCheckMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut h = ParityCheckMatrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                if rng.random::<f64>() < density {
                    h.toggle_unchecked(i, j);
                }
            }
        }
        h
    }

    #[test]
    fn identity_is_full_rank() {
        assert_eq!(ParityCheckMatrix::identity(4).rank(), 4);
    }

    #[test]
    fn duplicate_row_drops_rank() {
        let h = ParityCheckMatrix::from_dense(&[
            vec![1, 0, 1, 0],
            vec![0, 1, 1, 1],
            vec![0, 1, 1, 1],
        ])
        .unwrap();
        assert_eq!(h.rank(), 2);
    }

    #[test]
    fn toggle_sets_single_entry() {
        let mut h = ParityCheckMatrix::zeros(3, 4);
        h.toggle(0, 0).unwrap();
        assert!(h.get(0, 0));
        assert_eq!(h.ones(), 1);
        assert_eq!(h.row_support(0), &[0]);
        assert_eq!(h.col_support(0), &[0]);
    }

    #[test]
    fn toggle_is_an_involution() {
        let mut h = random_matrix(5, 7, 0.4, 1);
        let before = h.clone();
        h.toggle(2, 3).unwrap();
        assert_ne!(h, before);
        h.toggle(2, 3).unwrap();
        assert_eq!(h, before);
    }

    #[test]
    fn toggle_out_of_range_is_an_error() {
        let mut h = ParityCheckMatrix::zeros(2, 2);
        assert!(matches!(
            h.toggle(2, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            h.toggle(0, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn validity_violation_counts() {
        assert_eq!(ParityCheckMatrix::identity(3).validity_violations(), (0, 0));
        assert_eq!(ParityCheckMatrix::zeros(3, 4).validity_violations(), (3, 4));

        let mut h = ParityCheckMatrix::identity(3);
        // Empty one column by moving its 1 onto another column's row.
        h.toggle(2, 2).unwrap();
        h.toggle(2, 1).unwrap();
        assert_eq!(h.validity_violations(), (0, 1));
    }

    #[test]
    fn rank_is_invariant_under_row_permutation() {
        for seed in 0..10 {
            let h = random_matrix(6, 9, 0.35, seed);
            let mut rows: Vec<Vec<u8>> = (0..h.m())
                .map(|i| (0..h.n()).map(|j| h.get(i, j) as u8).collect())
                .collect();
            rows.reverse();
            let permuted = ParityCheckMatrix::from_dense(&rows).unwrap();
            assert_eq!(h.rank(), permuted.rank());
            assert!(h.rank() <= h.m().min(h.n()));
        }
    }

    #[test]
    fn systematic_encoder_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for seed in 0..20 {
            let h = random_matrix(4, 9, 0.5, 100 + seed);
            if h.rank() < h.m() {
                continue;
            }
            let enc = SystematicEncoder::new(&h).unwrap();
            assert_eq!(enc.message_len(), h.n() - h.m());
            let msg: Vec<u8> = (0..enc.message_len()).map(|_| rng.random_range(0..2u8)).collect();
            let word = enc.encode(&msg);
            assert!(h.syndrome_is_zero(&word));
            for (&pos, &bit) in enc.info_positions().iter().zip(&msg) {
                assert_eq!(word[pos], bit);
            }
        }
    }

    #[test]
    fn systematic_encoder_rejects_rank_deficiency() {
        let h = ParityCheckMatrix::from_dense(&[vec![1, 1, 0], vec![1, 1, 0]]).unwrap();
        assert!(matches!(
            SystematicEncoder::new(&h),
            Err(Error::RankDeficient { rank: 1, m: 2 })
        ));
    }

    #[test]
    fn degree_profile_matches_supports() {
        let h = random_matrix(5, 8, 0.4, 3);
        let profile = h.degree_profile(&vec![3; 8]);
        for j in 0..8 {
            assert_eq!(profile.col_weights[j], h.col_support(j).len());
        }
        for i in 0..5 {
            assert_eq!(profile.row_weights[i], h.row_support(i).len());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn supports_stay_consistent_under_toggles(
            (m, n, ops) in (1usize..8, 1usize..8).prop_flat_map(|(m, n)| {
                let ops = proptest::collection::vec((0..m, 0..n), 1..40);
                (Just(m), Just(n), ops)
            })
        ) {
            let mut h = ParityCheckMatrix::zeros(m, n);
            for (i, j) in ops {
                h.toggle(i, j).unwrap();
            }
            // Recompute both support views from the dense bits.
            for i in 0..m {
                let expect: Vec<usize> = (0..n).filter(|&j| h.get(i, j)).collect();
                prop_assert_eq!(h.row_support(i), expect.as_slice());
            }
            for j in 0..n {
                let expect: Vec<usize> = (0..m).filter(|&i| h.get(i, j)).collect();
                prop_assert_eq!(h.col_support(j), expect.as_slice());
            }
        }
    }
}
