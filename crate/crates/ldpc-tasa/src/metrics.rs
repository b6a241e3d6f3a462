//! Exact structural metrics on the Tanner graph: short-cycle counts, girth,
//! (4,2) trapping sets, and block-structure deviation.

use crate::gf2::ParityCheckMatrix;
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Number of length-4 cycles: Σ_{i<j} C(c_ij, 2), where c_ij is the number
/// of columns shared by check rows i and j.
pub fn count_4_cycles(h: &ParityCheckMatrix) -> u64 {
    let m = h.m();
    if m < 2 {
        return 0;
    }
    // Accumulate shared-column counts per row pair by walking each column's
    // support once.
    let mut shared = vec![0u32; m * (m - 1) / 2];
    for j in 0..h.n() {
        let sup = h.col_support(j);
        for (a, &r1) in sup.iter().enumerate() {
            for &r2 in &sup[a + 1..] {
                shared[pair_index(r1, r2, m)] += 1;
            }
        }
    }
    shared
        .iter()
        .map(|&c| {
            let c = c as u64;
            c * c.saturating_sub(1) / 2
        })
        .sum()
}

// Index of the unordered pair (i, j), i < j, in a triangular array.
fn pair_index(i: usize, j: usize, m: usize) -> usize {
    debug_assert!(i < j);
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

/// Number of simple length-6 cycles, enumerated over ordered check triples
/// i < j < k. With A = N(i)∩N(j), B = N(j)∩N(k), C = N(k)∩N(i) and
/// t = |N(i)∩N(j)∩N(k)|, the pairwise-distinct variable choices are
/// |A||B||C| − t(|A|+|B|+|C|) + 2t.
pub fn count_6_cycles_exact(h: &ParityCheckMatrix) -> u64 {
    let m = h.m();
    if m < 3 {
        return 0;
    }
    // Pairwise row-support intersections, indexed triangularly.
    let mut pair_meet: Vec<Vec<usize>> = vec![Vec::new(); m * (m - 1) / 2];
    for i in 0..m {
        for j in (i + 1)..m {
            pair_meet[pair_index(i, j, m)] =
                intersect_sorted(h.row_support(i), h.row_support(j));
        }
    }

    let mut total: u64 = 0;
    for i in 0..m {
        for j in (i + 1)..m {
            let a = &pair_meet[pair_index(i, j, m)];
            if a.is_empty() {
                continue;
            }
            for k in (j + 1)..m {
                let b = &pair_meet[pair_index(j, k, m)];
                if b.is_empty() {
                    continue;
                }
                let c = &pair_meet[pair_index(i, k, m)];
                if c.is_empty() {
                    continue;
                }
                total += distinct_triples(a.len(), b.len(), c.len(), |v| h.get(k, v), a);
            }
        }
    }
    total
}

// Tuples (a, b, c) ∈ A×B×C with pairwise distinct entries; the three
// pairwise intersections all equal N(i)∩N(j)∩N(k), whose size is counted by
// testing membership of A's elements in row k.
fn distinct_triples(
    al: usize,
    bl: usize,
    cl: usize,
    in_row_k: impl Fn(usize) -> bool,
    a: &[usize],
) -> u64 {
    let t = a.iter().filter(|&&v| in_row_k(v)).count() as i64;
    let (al, bl, cl) = (al as i64, bl as i64, cl as i64);
    let count = al * bl * cl - t * (al + bl + cl) + 2 * t;
    debug_assert!(count >= 0);
    count as u64
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[x]);
                x += 1;
                y += 1;
            }
        }
    }
    out
}

/// 6-cycles through check triples that contain `row`. Used for incremental
/// energy updates: toggling an entry in `row` leaves all other triples
/// untouched.
pub(crate) fn count_6_cycles_through_row(h: &ParityCheckMatrix, row: usize) -> u64 {
    let m = h.m();
    if m < 3 {
        return 0;
    }
    let with_row: Vec<Vec<usize>> = (0..m)
        .map(|j| {
            if j == row {
                Vec::new()
            } else {
                intersect_sorted(h.row_support(row), h.row_support(j))
            }
        })
        .collect();

    let mut total = 0;
    for j in 0..m {
        if j == row || with_row[j].is_empty() {
            continue;
        }
        for k in (j + 1)..m {
            if k == row || with_row[k].is_empty() {
                continue;
            }
            let b = intersect_sorted(h.row_support(j), h.row_support(k));
            if b.is_empty() {
                continue;
            }
            // Roles: A = N(row)∩N(j), B = N(j)∩N(k), C = N(k)∩N(row).
            total += distinct_triples(
                with_row[j].len(),
                b.len(),
                with_row[k].len(),
                |v| h.get(k, v),
                &with_row[j],
            );
        }
    }
    total
}

/// Unbiased 6-cycle estimate from `samples` check triples drawn uniformly
/// without replacement, scaled to the full triple count. With `samples`
/// covering every triple this equals the exact count.
pub fn count_6_cycles_sampled(h: &ParityCheckMatrix, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidConfig(
            "sampled 6-cycle counting needs at least one sample".into(),
        ));
    }
    let m = h.m();
    if m < 3 {
        return Ok(0.0);
    }
    let total_triples = m * (m - 1) * (m - 2) / 6;
    let take = samples.min(total_triples);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen = rand::seq::index::sample(&mut rng, total_triples, take);

    let mut acc: u64 = 0;
    for idx in chosen {
        let (i, j, k) = unrank_triple(idx, m);
        let a = intersect_sorted(h.row_support(i), h.row_support(j));
        if a.is_empty() {
            continue;
        }
        let b = intersect_sorted(h.row_support(j), h.row_support(k));
        if b.is_empty() {
            continue;
        }
        let c = intersect_sorted(h.row_support(k), h.row_support(i));
        if c.is_empty() {
            continue;
        }
        acc += distinct_triples(a.len(), b.len(), c.len(), |v| h.get(k, v), &a);
    }
    Ok(acc as f64 * total_triples as f64 / take as f64)
}

// Combinatorial-number-system unranking of the idx-th triple i < j < k
// in colexicographic-compatible order.
fn unrank_triple(mut idx: usize, m: usize) -> (usize, usize, usize) {
    let mut i = 0;
    loop {
        let block = (m - 1 - i) * (m - 2 - i) / 2;
        if idx < block {
            break;
        }
        idx -= block;
        i += 1;
    }
    let mut j = i + 1;
    loop {
        let block = m - 1 - j;
        if idx < block {
            break;
        }
        idx -= block;
        j += 1;
    }
    (i, j, j + 1 + idx)
}

/// Number of (4,2) trapping sets: 4-element variable subsets whose induced
/// subgraph leaves exactly two check nodes with odd degree. Exhaustive over
/// all C(n,4) subsets.
///
/// A check has odd induced degree exactly when the XOR of the four column
/// masks has its bit set, so the odd-check count is one popcount per subset.
pub fn count_trapping_sets_4_2(h: &ParityCheckMatrix) -> u64 {
    let (m, n) = h.dims();
    if n < 4 {
        return 0;
    }
    if m <= 64 {
        let masks: Vec<u64> = (0..n)
            .map(|j| {
                h.col_support(j)
                    .iter()
                    .fold(0u64, |acc, &r| acc | 1u64 << r)
            })
            .collect();
        let mut count = 0u64;
        for a in 0..n - 3 {
            let xa = masks[a];
            for b in (a + 1)..n - 2 {
                let xab = xa ^ masks[b];
                for c in (b + 1)..n - 1 {
                    let xabc = xab ^ masks[c];
                    for &md in &masks[c + 1..] {
                        if (xabc ^ md).count_ones() == 2 {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    } else {
        count_trapping_sets_wide(h)
    }
}

fn count_trapping_sets_wide(h: &ParityCheckMatrix) -> u64 {
    let (m, n) = h.dims();
    let words = m.div_ceil(64);
    let masks: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            let mut mask = vec![0u64; words];
            for &r in h.col_support(j) {
                mask[r / 64] |= 1 << (r % 64);
            }
            mask
        })
        .collect();
    let mut xab = vec![0u64; words];
    let mut xabc = vec![0u64; words];
    let mut count = 0u64;
    for a in 0..n - 3 {
        for b in (a + 1)..n - 2 {
            for w in 0..words {
                xab[w] = masks[a][w] ^ masks[b][w];
            }
            for c in (b + 1)..n - 1 {
                for w in 0..words {
                    xabc[w] = xab[w] ^ masks[c][w];
                }
                for d in (c + 1)..n {
                    let odd: u32 = (0..words)
                        .map(|w| (xabc[w] ^ masks[d][w]).count_ones())
                        .sum();
                    if odd == 2 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Trapping sets whose 4-subset contains the given column; the complement is
/// unaffected by edits to that column.
pub(crate) fn count_trapping_sets_4_2_with_col(h: &ParityCheckMatrix, col: usize) -> u64 {
    let (m, n) = h.dims();
    if n < 4 {
        return 0;
    }
    if m <= 64 {
        let masks: Vec<u64> = (0..n)
            .map(|j| {
                h.col_support(j)
                    .iter()
                    .fold(0u64, |acc, &r| acc | 1u64 << r)
            })
            .collect();
        let others: Vec<u64> = (0..n).filter(|&j| j != col).map(|j| masks[j]).collect();
        let x0 = masks[col];
        let k = others.len();
        let mut count = 0u64;
        for a in 0..k - 2 {
            let xa = x0 ^ others[a];
            for b in (a + 1)..k - 1 {
                let xab = xa ^ others[b];
                for &mc in &others[b + 1..] {
                    if (xab ^ mc).count_ones() == 2 {
                        count += 1;
                    }
                }
            }
        }
        count
    } else {
        // Rare path; fall back to the exhaustive wide count difference.
        count_trapping_sets_wide(h)
            - count_trapping_sets_without_col_wide(h, col)
    }
}

fn count_trapping_sets_without_col_wide(h: &ParityCheckMatrix, col: usize) -> u64 {
    let n = h.n();
    let cols: Vec<Vec<usize>> = (0..n)
        .filter(|&j| j != col)
        .map(|j| h.col_support(j).to_vec())
        .collect();
    let sub = ParityCheckMatrix::from_cols(h.m(), n - 1, &cols).expect("submatrix");
    count_trapping_sets_wide(&sub)
}

/// Maps row `r` to its cyclic shift by `offset` within its row group of
/// size `block`.
pub(crate) fn cyclic_shift_row(r: usize, block: usize, offset: usize) -> usize {
    (r / block) * block + ((r % block) + offset) % block
}

/// Total symmetric difference between each column and the shifted support of
/// its block's reference column; zero exactly for block-circulant matrices.
pub fn block_deviation(h: &ParityCheckMatrix, block: usize) -> Result<u64> {
    let (m, n) = h.dims();
    if block == 0 || m % block != 0 || n % block != 0 {
        return Err(Error::InvalidBlockSize {
            block_size: block,
            m,
            n,
        });
    }
    Ok((0..n / block)
        .map(|g| block_deviation_of_block(h, block, g))
        .sum())
}

pub(crate) fn block_deviation_of_block(h: &ParityCheckMatrix, block: usize, g: usize) -> u64 {
    let j0 = g * block;
    let reference = h.col_support(j0);
    let mut dev = 0u64;
    for d in 1..block {
        let mut shifted: Vec<usize> = reference
            .iter()
            .map(|&r| cyclic_shift_row(r, block, d))
            .collect();
        shifted.sort_unstable();
        dev += symmetric_difference_len(&shifted, h.col_support(j0 + d)) as u64;
    }
    dev
}

fn symmetric_difference_len(a: &[usize], b: &[usize]) -> usize {
    let (mut x, mut y, mut len) = (0, 0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => {
                len += 1;
                x += 1;
            }
            std::cmp::Ordering::Greater => {
                len += 1;
                y += 1;
            }
            std::cmp::Ordering::Equal => {
                x += 1;
                y += 1;
            }
        }
    }
    len + (a.len() - x) + (b.len() - y)
}

/// Length of the shortest cycle in the Tanner graph, or `None` for forests.
///
/// Runs a BFS from every variable node; the first non-tree edge closes the
/// shortest cycle through that root, and the minimum over roots is the girth.
pub fn girth(h: &ParityCheckMatrix) -> Option<usize> {
    let (m, n) = h.dims();
    let nodes = n + m; // variables 0..n, checks n..n+m
    let mut dist = vec![usize::MAX; nodes];
    let mut parent = vec![usize::MAX; nodes];
    let mut queue = Vec::with_capacity(nodes);
    let mut best: Option<usize> = None;

    for root in 0..n {
        if h.col_support(root).is_empty() {
            continue;
        }
        dist.fill(usize::MAX);
        parent.fill(usize::MAX);
        queue.clear();
        queue.push(root);
        dist[root] = 0;

        let mut head = 0;
        'bfs: while head < queue.len() {
            let u = queue[head];
            head += 1;
            let du = dist[u];
            if let Some(b) = best {
                // No closure found from here can beat the current best.
                if 2 * du + 2 >= b {
                    break;
                }
            }
            let neighbors: &[usize] = if u < n {
                h.col_support(u)
            } else {
                h.row_support(u - n)
            };
            for &v in neighbors {
                let w = if u < n { v + n } else { v };
                if dist[w] == usize::MAX {
                    dist[w] = du + 1;
                    parent[w] = u;
                    queue.push(w);
                } else if parent[u] != w {
                    let cycle = du + dist[w] + 1;
                    best = Some(best.map_or(cycle, |b| b.min(cycle)));
                    break 'bfs;
                }
            }
        }
        if best == Some(4) {
            break;
        }
    }
    best
}

/// Counting mode for 6-cycles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SixCycleMode {
    Exact,
    Sampled { samples: usize, seed: u64 },
}

/// Options controlling which optional metrics [`collect`] computes.
#[derive(Debug, Clone, Copy)]
pub struct MetricsOptions {
    pub six_cycles: SixCycleMode,
    pub trapping_sets: bool,
    pub block_size: Option<usize>,
}

impl Default for MetricsOptions {
    fn default() -> Self {
        Self {
            six_cycles: SixCycleMode::Exact,
            trapping_sets: false,
            block_size: None,
        }
    }
}

/// Structural summary of a code.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CodeMetrics {
    pub c4: u64,
    pub c6: f64,
    pub c6_exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trap_42: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_deviation: Option<u64>,
    pub girth: Option<usize>,
    pub rank: usize,
}

/// Computes the full metric set for a matrix.
pub fn collect(h: &ParityCheckMatrix, opts: &MetricsOptions) -> Result<CodeMetrics> {
    let (c6, c6_exact) = match opts.six_cycles {
        SixCycleMode::Exact => (count_6_cycles_exact(h) as f64, true),
        SixCycleMode::Sampled { samples, seed } => {
            (count_6_cycles_sampled(h, samples, seed)?, false)
        }
    };
    let block_deviation = match opts.block_size {
        Some(b) => Some(block_deviation(h, b)?),
        None => None,
    };
    Ok(CodeMetrics {
        c4: count_4_cycles(h),
        c6,
        c6_exact,
        trap_42: opts.trapping_sets.then(|| count_trapping_sets_4_2(h)),
        block_deviation,
        girth: girth(h),
        rank: h.rank(),
    })
}
