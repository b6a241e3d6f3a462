//! The multi-term structural energy function E(H) driving the annealer.
//!
//! E(H) = α₄C₄ + α₆C₆ + α_w·W + α_d·D + α_v·V, optionally extended with a
//! forbidden-subgraph term α_f·(4,2)-trapping-sets and a block-structure
//! term α_b·block_deviation.

use crate::gf2::{Move, ParityCheckMatrix};
use crate::metrics;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Coefficients of the energy terms plus the per-column degree targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyWeights {
    pub alpha4: f64,
    pub alpha6: f64,
    pub alpha_w: f64,
    pub alpha_d: f64,
    pub alpha_v: f64,
    /// Weight of the (4,2) trapping-set penalty; 0 disables the term.
    pub alpha_f: f64,
    /// Weight of the block-deviation penalty; 0 disables the term.
    pub alpha_b: f64,
    pub block_size: Option<usize>,
    pub target_col_weights: Vec<usize>,
}

/// Validity penalty scale: each all-zero row or column costs α_v.
pub const DEFAULT_ALPHA_V: f64 = 1000.0;

impl EnergyWeights {
    /// Default weights for unconstrained construction with a uniform column
    /// weight target.
    pub fn unconstrained(n: usize, target_col_weight: usize) -> Self {
        Self {
            alpha4: 10.0,
            alpha6: 0.1,
            alpha_w: 2.0,
            alpha_d: 0.5,
            alpha_v: DEFAULT_ALPHA_V,
            alpha_f: 0.0,
            alpha_b: 0.0,
            block_size: None,
            target_col_weights: vec![target_col_weight; n],
        }
    }

    /// Constrained-regime base: degree deviations weighted heavily.
    pub fn constrained(n: usize, target_col_weight: usize) -> Self {
        Self {
            alpha_w: 50.0,
            ..Self::unconstrained(n, target_col_weight)
        }
    }

    pub fn with_targets(mut self, targets: Vec<usize>) -> Self {
        self.target_col_weights = targets;
        self
    }

    pub fn with_forbidden(mut self, alpha_f: f64) -> Self {
        self.alpha_f = alpha_f;
        self
    }

    pub fn with_block(mut self, alpha_b: f64, block_size: usize) -> Self {
        self.alpha_b = alpha_b;
        self.block_size = Some(block_size);
        self
    }

    /// Checks the weights against a matrix shape.
    pub fn validate(&self, m: usize, n: usize) -> Result<()> {
        for (name, value) in [
            ("alpha4", self.alpha4),
            ("alpha6", self.alpha6),
            ("alpha_w", self.alpha_w),
            ("alpha_d", self.alpha_d),
            ("alpha_v", self.alpha_v),
            ("alpha_f", self.alpha_f),
            ("alpha_b", self.alpha_b),
        ] {
            if !(value >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be nonnegative, got {value}"
                )));
            }
        }
        if self.target_col_weights.len() != n {
            return Err(Error::InvalidConfig(format!(
                "{} column targets for an n = {n} code",
                self.target_col_weights.len()
            )));
        }
        if self.alpha_b > 0.0 {
            match self.block_size {
                Some(b) if b > 0 && m % b == 0 && n % b == 0 => {}
                Some(b) => {
                    return Err(Error::InvalidBlockSize {
                        block_size: b,
                        m,
                        n,
                    })
                }
                None => {
                    return Err(Error::InvalidConfig(
                        "alpha_b > 0 requires a block_size".into(),
                    ))
                }
            }
        }
        Ok(())
    }

    /// Configuration lint: warns when the conventional dominance ordering
    /// α_v ≫ α₄ ≫ α₆ is not respected. Warnings, not errors.
    pub fn lint(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        if self.alpha_v < 10.0 * self.alpha4 {
            warnings.push(format!(
                "validity weight alpha_v = {} does not dominate alpha4 = {}",
                self.alpha_v, self.alpha4
            ));
        }
        if self.alpha4 < 10.0 * self.alpha6 {
            warnings.push(format!(
                "4-cycle weight alpha4 = {} does not dominate alpha6 = {}",
                self.alpha4, self.alpha6
            ));
        }
        warnings
    }
}

/// Per-term energy values; `total` is their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub total: f64,
    pub c4_term: f64,
    pub c6_term: f64,
    pub weight_term: f64,
    pub degree_term: f64,
    pub validity_term: f64,
    pub forbidden_term: f64,
    pub block_term: f64,
}

impl EnergyBreakdown {
    fn from_terms(
        c4_term: f64,
        c6_term: f64,
        weight_term: f64,
        degree_term: f64,
        validity_term: f64,
        forbidden_term: f64,
        block_term: f64,
    ) -> Self {
        Self {
            total: c4_term
                + c6_term
                + weight_term
                + degree_term
                + validity_term
                + forbidden_term
                + block_term,
            c4_term,
            c6_term,
            weight_term,
            degree_term,
            validity_term,
            forbidden_term,
            block_term,
        }
    }
}

// Degree-term contribution of a single column; zero-weight columns are
// covered by the validity penalty instead.
fn degree_contribution(weight: usize) -> f64 {
    if weight == 0 {
        0.0
    } else {
        1.0 / weight as f64
    }
}

/// Full evaluation of every active term.
pub fn evaluate(h: &ParityCheckMatrix, w: &EnergyWeights) -> Result<EnergyBreakdown> {
    let (m, n) = h.dims();
    w.validate(m, n)?;

    let c4_term = if w.alpha4 > 0.0 {
        w.alpha4 * metrics::count_4_cycles(h) as f64
    } else {
        0.0
    };
    let c6_term = if w.alpha6 > 0.0 {
        w.alpha6 * metrics::count_6_cycles_exact(h) as f64
    } else {
        0.0
    };

    let mut weight_dev = 0usize;
    let mut degree = 0.0;
    for j in 0..n {
        let cw = h.col_weight(j);
        weight_dev += cw.abs_diff(w.target_col_weights[j]);
        degree += degree_contribution(cw);
    }
    let weight_term = w.alpha_w * weight_dev as f64;
    let degree_term = w.alpha_d * degree;

    let (zero_rows, zero_cols) = h.validity_violations();
    let validity_term = w.alpha_v * (zero_rows + zero_cols) as f64;

    let forbidden_term = if w.alpha_f > 0.0 {
        w.alpha_f * metrics::count_trapping_sets_4_2(h) as f64
    } else {
        0.0
    };
    let block_term = if w.alpha_b > 0.0 {
        let b = w.block_size.expect("validated above");
        w.alpha_b * metrics::block_deviation(h, b)? as f64
    } else {
        0.0
    };

    Ok(EnergyBreakdown::from_terms(
        c4_term,
        c6_term,
        weight_term,
        degree_term,
        validity_term,
        forbidden_term,
        block_term,
    ))
}

/// Energy change of a move, term by term, without a full re-evaluation.
///
/// Cheap terms (C₄, W, D, V) are updated analytically; C₆, the forbidden
/// term, and the block term re-count only the triples, subsets, or block
/// affected by the touched row/column. Matches
/// `evaluate(after) − evaluate(before)` exactly up to float rounding.
pub fn evaluate_delta(
    h: &ParityCheckMatrix,
    w: &EnergyWeights,
    mv: &Move,
) -> Result<EnergyBreakdown> {
    let (m, n) = h.dims();
    w.validate(m, n)?;
    for (i, j) in mv.toggles() {
        if i >= m || j >= n {
            return Err(Error::IndexOutOfRange {
                row: i,
                col: j,
                m,
                n,
            });
        }
    }

    let mut scratch = h.clone();
    let mut d_c4 = 0i64;
    let mut d_weight = 0i64;
    let mut d_degree = 0.0f64;
    let mut d_validity = 0i64;
    let mut d_c6 = 0i64;
    let mut d_forbidden = 0i64;
    let mut d_block = 0i64;

    for (i, j) in mv.toggles() {
        let adding = !scratch.get(i, j);

        if w.alpha4 > 0.0 {
            // Only pairs (i, k) with a 1 at column j change their shared
            // count; C(c±1, 2) − C(c, 2) is ±c or ∓(c−1).
            for &k in scratch.col_support(j) {
                if k == i {
                    continue;
                }
                let shared = intersection_len(scratch.row_support(i), scratch.row_support(k));
                if adding {
                    d_c4 += shared as i64;
                } else {
                    d_c4 -= shared as i64 - 1;
                }
            }
        }

        let cw = scratch.col_weight(j);
        let rw = scratch.row_weight(i);
        let (cw_after, rw_after) = if adding {
            (cw + 1, rw + 1)
        } else {
            (cw - 1, rw - 1)
        };
        let target = w.target_col_weights[j];
        d_weight += cw_after.abs_diff(target) as i64 - cw.abs_diff(target) as i64;
        d_degree += degree_contribution(cw_after) - degree_contribution(cw);
        d_validity += (cw_after == 0) as i64 - (cw == 0) as i64;
        d_validity += (rw_after == 0) as i64 - (rw == 0) as i64;

        let c6_before = (w.alpha6 > 0.0).then(|| metrics::count_6_cycles_through_row(&scratch, i));
        let trap_before =
            (w.alpha_f > 0.0).then(|| metrics::count_trapping_sets_4_2_with_col(&scratch, j));
        let block_before = if w.alpha_b > 0.0 {
            let b = w.block_size.expect("validated above");
            Some(metrics::block_deviation_of_block(&scratch, b, j / b))
        } else {
            None
        };

        scratch.toggle_unchecked(i, j);

        if let Some(before) = c6_before {
            d_c6 += metrics::count_6_cycles_through_row(&scratch, i) as i64 - before as i64;
        }
        if let Some(before) = trap_before {
            d_forbidden +=
                metrics::count_trapping_sets_4_2_with_col(&scratch, j) as i64 - before as i64;
        }
        if let Some(before) = block_before {
            let b = w.block_size.expect("validated above");
            d_block += metrics::block_deviation_of_block(&scratch, b, j / b) as i64 - before as i64;
        }
    }

    Ok(EnergyBreakdown::from_terms(
        w.alpha4 * d_c4 as f64,
        w.alpha6 * d_c6 as f64,
        w.alpha_w * d_weight as f64,
        w.alpha_d * d_degree,
        w.alpha_v * d_validity as f64,
        w.alpha_f * d_forbidden as f64,
        w.alpha_b * d_block as f64,
    ))
}

fn intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut x, mut y, mut len) = (0, 0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                len += 1;
                x += 1;
                y += 1;
            }
        }
    }
    len
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn default_weights(n: usize, target: usize) -> EnergyWeights {
        EnergyWeights::unconstrained(n, target)
    }

    #[test]
    fn identity_4x4_with_target_3() {
        let h = ParityCheckMatrix::identity(4);
        let e = evaluate(&h, &default_weights(4, 3)).unwrap();
        assert_eq!(e.c4_term, 0.0);
        assert_eq!(e.c6_term, 0.0);
        assert_eq!(e.weight_term, 16.0);
        assert_eq!(e.degree_term, 2.0);
        assert_eq!(e.validity_term, 0.0);
        assert_eq!(e.total, 18.0);
    }

    #[test]
    fn all_ones_2x2_with_target_2() {
        let h = ParityCheckMatrix::from_dense(&[vec![1, 1], vec![1, 1]]).unwrap();
        let e = evaluate(&h, &default_weights(2, 2)).unwrap();
        assert_eq!(e.c4_term, 10.0);
        assert_eq!(e.weight_term, 0.0);
        assert_eq!(e.degree_term, 0.5);
        assert_eq!(e.total, 10.5);
    }

    #[test]
    fn zeroed_column_pays_the_validity_penalty() {
        // Deleting (2,2) from the identity empties column 2 and row 2, so
        // the validity term counts two violations.
        let mut h = ParityCheckMatrix::identity(3);
        h.toggle(2, 2).unwrap();
        let e = evaluate(&h, &default_weights(3, 1)).unwrap();
        assert_eq!(e.validity_term, 2000.0);
        assert_eq!(e.weight_term, 2.0);
        assert_eq!(e.degree_term, 1.0);
        assert_eq!(e.total, 2003.0);

        // With the lone 1 moved instead of deleted, only the column is
        // empty and exactly one violation is charged.
        let mut moved = ParityCheckMatrix::identity(3);
        moved.toggle(2, 2).unwrap();
        moved.toggle(2, 0).unwrap();
        let e = evaluate(&moved, &default_weights(3, 1)).unwrap();
        assert_eq!(e.validity_term, 1000.0);
    }

    #[test]
    fn breakdown_total_is_the_sum_of_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mut h = ParityCheckMatrix::zeros(6, 8);
            for i in 0..6 {
                for j in 0..8 {
                    if rng.random::<f64>() < 0.4 {
                        h.toggle(i, j).unwrap();
                    }
                }
            }
            let w = default_weights(8, 3).with_forbidden(7.0);
            let e = evaluate(&h, &w).unwrap();
            let sum = e.c4_term
                + e.c6_term
                + e.weight_term
                + e.degree_term
                + e.validity_term
                + e.forbidden_term
                + e.block_term;
            assert!((e.total - sum).abs() <= 1e-9 * sum.abs().max(1.0));
        }
    }

    #[test]
    fn toggling_the_last_one_in_a_column_costs_validity() {
        let mut h = ParityCheckMatrix::identity(3);
        // Keep rows nonzero: add a second 1 to row 2 before clearing (2,2).
        h.toggle(2, 1).unwrap();
        let w = default_weights(3, 1);
        let delta = evaluate_delta(
            &h,
            &w,
            &Move::Toggle { row: 2, col: 2 },
        )
        .unwrap();
        assert_eq!(delta.validity_term, 1000.0);
    }

    #[test]
    fn swap_moves_leave_the_weight_term_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let mut h = ParityCheckMatrix::zeros(6, 6);
            for i in 0..6 {
                for j in 0..6 {
                    if rng.random::<f64>() < 0.5 {
                        h.toggle(i, j).unwrap();
                    }
                }
            }
            let j = rng.random_range(0..6);
            let ones: Vec<usize> = h.col_support(j).to_vec();
            let zeros: Vec<usize> = (0..6).filter(|&i| !h.get(i, j)).collect();
            if ones.is_empty() || zeros.is_empty() {
                continue;
            }
            let mv = Move::Swap {
                col: j,
                from_row: ones[0],
                to_row: zeros[0],
            };
            let delta = evaluate_delta(&h, &default_weights(6, 2), &mv).unwrap();
            assert_eq!(delta.weight_term, 0.0);
            assert_eq!(delta.degree_term, 0.0);
        }
    }

    #[test]
    fn adding_a_4_cycle_never_lowers_the_energy() {
        // A column-internal swap keeps every weight, degree, and validity
        // count fixed while closing a 4-cycle, so the energy moves by
        // exactly alpha4.
        let before_h =
            ParityCheckMatrix::from_dense(&[vec![1, 1, 0], vec![1, 0, 0], vec![0, 1, 1]])
                .unwrap();
        let mut after_h = before_h.clone();
        after_h
            .apply_move(&Move::Swap {
                col: 1,
                from_row: 2,
                to_row: 1,
            })
            .unwrap();
        let w = default_weights(3, 2);
        assert_eq!(metrics::count_4_cycles(&before_h), 0);
        assert_eq!(metrics::count_4_cycles(&after_h), 1);
        let before = evaluate(&before_h, &w).unwrap();
        let after = evaluate(&after_h, &w).unwrap();
        assert_eq!(after.total, before.total + w.alpha4);
    }

    #[test]
    fn lint_flags_inverted_orderings() {
        let good = default_weights(4, 3);
        assert!(good.lint().is_empty());

        let mut bad = default_weights(4, 3);
        bad.alpha6 = 5.0;
        assert_eq!(bad.lint().len(), 1);
        bad.alpha_v = 20.0;
        assert_eq!(bad.lint().len(), 2);
    }

    #[test]
    fn block_term_requires_a_valid_block_size() {
        let h = ParityCheckMatrix::zeros(4, 8);
        let w = default_weights(8, 2).with_block(200.0, 3);
        assert!(matches!(
            evaluate(&h, &w),
            Err(Error::InvalidBlockSize { .. })
        ));
    }

    #[test]
    fn delta_matches_full_recompute_on_random_moves() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for round in 0..60 {
            let (m, n) = (4 + round % 3, 8);
            let mut h = ParityCheckMatrix::zeros(m, n);
            for i in 0..m {
                for j in 0..n {
                    if rng.random::<f64>() < 0.4 {
                        h.toggle(i, j).unwrap();
                    }
                }
            }
            let mut w = default_weights(n, 3).with_forbidden(11.0);
            if m % 4 == 0 {
                w = w.with_block(13.0, 4);
            }
            let mv = Move::Toggle {
                row: rng.random_range(0..m),
                col: rng.random_range(0..n),
            };
            let before = evaluate(&h, &w).unwrap();
            let delta = evaluate_delta(&h, &w, &mv).unwrap();
            let mut after_h = h.clone();
            after_h.apply_move(&mv).unwrap();
            let after = evaluate(&after_h, &w).unwrap();
            let expect = after.total - before.total;
            assert!(
                (delta.total - expect).abs() <= 1e-9 * expect.abs().max(1.0),
                "delta {} vs full {}",
                delta.total,
                expect
            );
        }
    }
}
