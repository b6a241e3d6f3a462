//! Baseline constructions: random placement with repair, Progressive Edge
//! Growth (PEG), and a block-aware PEG variant that propagates each block's
//! reference column by cyclic shifts.

use crate::anneal::{self, rank_repair, repair};
use crate::gf2::ParityCheckMatrix;
use crate::metrics::cyclic_shift_row;
use crate::{Error, Result};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const RANK_REPAIR_BUDGET: usize = 200;

/// Parameters for the PEG family of constructions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PegConfig {
    pub n: usize,
    pub k: usize,
    /// Per-column degrees; columns are processed in nondecreasing-degree
    /// order.
    pub target_col_weights: Vec<usize>,
    /// Block size for the block-aware variant.
    pub block_size: Option<usize>,
    /// Seed for tie-breaking among equally good check nodes.
    pub seed: u64,
}

impl PegConfig {
    pub fn regular(n: usize, k: usize, col_weight: usize, seed: u64) -> Self {
        Self {
            n,
            k,
            target_col_weights: vec![col_weight; n],
            block_size: None,
            seed,
        }
    }

    pub fn with_block_size(mut self, block_size: usize) -> Self {
        self.block_size = Some(block_size);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k >= self.n {
            return Err(Error::InvalidDimensions(format!(
                "need n > k >= 1, got n = {}, k = {}",
                self.n, self.k
            )));
        }
        if self.target_col_weights.len() != self.n {
            return Err(Error::InvalidConfig(format!(
                "{} column targets for an n = {} code",
                self.target_col_weights.len(),
                self.n
            )));
        }
        if self.target_col_weights.iter().any(|&d| d == 0) {
            return Err(Error::InvalidConfig("degrees must be at least 1".into()));
        }
        Ok(())
    }
}

/// Random construction: uniform placement at target column weights, then
/// zero-row/column repair and rank repair.
pub fn construct_random(
    n: usize,
    k: usize,
    targets: &[usize],
    seed: u64,
) -> Result<ParityCheckMatrix> {
    if k == 0 || k >= n {
        return Err(Error::InvalidDimensions(format!(
            "need n > k >= 1, got n = {n}, k = {k}"
        )));
    }
    if targets.len() != n {
        return Err(Error::InvalidConfig(format!(
            "{} column targets for an n = {n} code",
            targets.len()
        )));
    }
    let m = n - k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = anneal::random_placement(m, n, targets, &mut rng);
    repair(&mut h, targets, false, &mut rng);
    rank_repair(&mut h, RANK_REPAIR_BUDGET, &mut rng);
    Ok(h)
}

/// Standard PEG: for each variable node in nondecreasing target-degree
/// order, the first edge attaches to a minimum-degree check; every further
/// edge runs a BFS in the current Tanner graph and attaches to an
/// unreachable check if one exists, otherwise to a check at maximum BFS
/// depth. Ties break by minimum current check degree, then by seeded
/// random choice.
pub fn construct_peg(cfg: &PegConfig) -> Result<ParityCheckMatrix> {
    cfg.validate()?;
    let m = cfg.n - cfg.k;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut h = ParityCheckMatrix::zeros(m, cfg.n);

    let mut order: Vec<usize> = (0..cfg.n).collect();
    order.sort_by_key(|&j| (cfg.target_col_weights[j], j));

    for &j in &order {
        place_column_edges(&mut h, j, cfg.target_col_weights[j], &mut rng)?;
    }
    Ok(h)
}

/// Block-aware PEG: PEG edge placement for each block's first column, the
/// remaining columns are cyclic-shift images of it, so the result is exactly
/// block-circulant.
pub fn construct_block_peg(cfg: &PegConfig) -> Result<ParityCheckMatrix> {
    cfg.validate()?;
    let m = cfg.n - cfg.k;
    let Some(b) = cfg.block_size else {
        return Err(Error::InvalidConfig(
            "block-aware PEG requires a block_size".into(),
        ));
    };
    if b == 0 || m % b != 0 || cfg.n % b != 0 {
        return Err(Error::InvalidBlockSize {
            block_size: b,
            m,
            n: cfg.n,
        });
    }
    for g in 0..cfg.n / b {
        let j0 = g * b;
        if (1..b).any(|d| cfg.target_col_weights[j0 + d] != cfg.target_col_weights[j0]) {
            return Err(Error::InvalidConfig(format!(
                "block {g} mixes target degrees; block columns share their reference weight"
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut h = ParityCheckMatrix::zeros(m, cfg.n);

    let mut blocks: Vec<usize> = (0..cfg.n / b).collect();
    blocks.sort_by_key(|&g| (cfg.target_col_weights[g * b], g));

    for &g in &blocks {
        let j0 = g * b;
        place_column_edges(&mut h, j0, cfg.target_col_weights[j0], &mut rng)?;
        let reference = h.col_support(j0).to_vec();
        for d in 1..b {
            for &r in &reference {
                h.toggle_unchecked(cyclic_shift_row(r, b, d), j0 + d);
            }
        }
    }
    Ok(h)
}

fn place_column_edges<R: Rng>(
    h: &mut ParityCheckMatrix,
    j: usize,
    degree: usize,
    rng: &mut R,
) -> Result<()> {
    let m = h.m();
    for _ in 0..degree.min(m) {
        let check = if h.col_weight(j) == 0 {
            let candidates: Vec<usize> = (0..m).collect();
            pick_min_degree(h, &candidates, rng)
        } else {
            let candidates = bfs_candidates(h, j);
            if candidates.is_empty() {
                return Err(Error::InvalidConfig(format!(
                    "PEG cannot place another edge on column {j}: every check is already attached"
                )));
            }
            pick_min_degree(h, &candidates, rng)
        };
        h.toggle_unchecked(check, j);
    }
    Ok(())
}

// Checks unreachable from variable j in the current graph, or — when the
// whole check set is reachable — the checks at maximum BFS depth. Checks
// already adjacent to j are excluded.
fn bfs_candidates(h: &ParityCheckMatrix, j: usize) -> Vec<usize> {
    let (m, n) = h.dims();
    // Node ids: variables 0..n, checks n..n+m.
    let mut dist = vec![usize::MAX; n + m];
    let mut queue = vec![j];
    dist[j] = 0;
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let neighbors: &[usize] = if u < n {
            h.col_support(u)
        } else {
            h.row_support(u - n)
        };
        for &v in neighbors {
            let w = if u < n { v + n } else { v };
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push(w);
            }
        }
    }

    let unreachable: Vec<usize> = (0..m).filter(|&c| dist[n + c] == usize::MAX).collect();
    if !unreachable.is_empty() {
        return unreachable;
    }
    let max_depth = (0..m).map(|c| dist[n + c]).max().unwrap_or(0);
    if max_depth <= 1 {
        return Vec::new();
    }
    (0..m).filter(|&c| dist[n + c] == max_depth).collect()
}

fn pick_min_degree<R: Rng>(h: &ParityCheckMatrix, candidates: &[usize], rng: &mut R) -> usize {
    let min = candidates
        .iter()
        .map(|&c| h.row_weight(c))
        .min()
        .expect("candidates nonempty");
    let pool: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&c| h.row_weight(c) == min)
        .collect();
    *pool.choose(rng).expect("pool nonempty")
}
