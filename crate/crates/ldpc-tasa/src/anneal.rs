//! Tunneling-augmented simulated annealing with constraint repair, parallel
//! restarts, first-improvement local refinement, and GF(2) rank repair.
//!
//! A trial walks the space of parity-check matrices by single-entry toggles
//! or weight-preserving column swaps. Uphill moves are accepted with
//! probability min(1, exp(−ΔE/T(t)) + p_tunnel(t)); the tunneling floor
//! decays as p₀·exp(−t/t_max) and the temperature cools geometrically from
//! T_init to T_final.

use crate::energy::{self, EnergyBreakdown, EnergyWeights};
use crate::gf2::{Move, ParityCheckMatrix};
use crate::metrics::{self, CodeMetrics, MetricsOptions, SixCycleMode};
use crate::{Error, Result};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Move proposal flavor. Column swaps preserve column weights and are used
/// in weight-constrained regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveMode {
    Toggle,
    ColumnSwap,
}

/// Annealer schedule and budget knobs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnealConfig {
    /// Iterations per trial.
    pub t_max: usize,
    pub t_init: f64,
    pub t_final: f64,
    /// Initial tunneling acceptance floor.
    pub p0: f64,
    /// Number of independent restart trials.
    pub restarts: usize,
    pub move_mode: MoveMode,
    /// Maximum accepted improvements during local refinement (tested flips
    /// are not counted against this budget).
    pub refine_budget: usize,
    pub rank_repair_budget: usize,
    pub seed: u64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        Self {
            t_max: 500,
            t_init: 10.0,
            t_final: 0.01,
            p0: 0.1,
            restarts: 8,
            move_mode: MoveMode::Toggle,
            refine_budget: 100,
            rank_repair_budget: 200,
            seed: 1,
        }
    }
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_init > self.t_final && self.t_final > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "need t_init > t_final > 0, got {} and {}",
                self.t_init, self.t_final
            )));
        }
        if !(0.0..=1.0).contains(&self.p0) {
            return Err(Error::InvalidConfig(format!(
                "p0 must lie in [0, 1], got {}",
                self.p0
            )));
        }
        if self.t_max == 0 || self.restarts == 0 {
            return Err(Error::InvalidConfig(
                "t_max and restarts must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Geometric cooling: T(t) = T_init · (T_final/T_init)^(t/t_max).
pub fn temperature(t: usize, cfg: &AnnealConfig) -> f64 {
    let frac = t as f64 / cfg.t_max as f64;
    cfg.t_init * (cfg.t_final / cfg.t_init).powf(frac)
}

/// Decaying tunneling floor: p₀ · exp(−t/t_max).
pub fn tunnel_probability(t: usize, cfg: &AnnealConfig) -> f64 {
    cfg.p0 * (-(t as f64) / cfg.t_max as f64).exp()
}

/// min(1, exp(−ΔE/T(t)) + p_tunnel(t)).
pub fn acceptance_probability(delta_e: f64, t: usize, cfg: &AnnealConfig) -> f64 {
    let thermal = (-delta_e / temperature(t, cfg)).exp();
    (thermal + tunnel_probability(t, cfg)).min(1.0)
}

/// Draws a move proposal. Returns `None` only in swap mode when no column
/// has both a 1 and a 0.
pub fn propose_move<R: Rng>(
    h: &ParityCheckMatrix,
    mode: MoveMode,
    rng: &mut R,
) -> Option<Move> {
    let (m, n) = h.dims();
    match mode {
        MoveMode::Toggle => Some(Move::Toggle {
            row: rng.random_range(0..m),
            col: rng.random_range(0..n),
        }),
        MoveMode::ColumnSwap => {
            if !(0..n).any(|j| {
                let w = h.col_weight(j);
                w > 0 && w < m
            }) {
                return None;
            }
            loop {
                let col = rng.random_range(0..n);
                let w = h.col_weight(col);
                if w == 0 || w == m {
                    continue;
                }
                let from_row = *h.col_support(col).choose(rng).expect("nonempty");
                let zeros: Vec<usize> = (0..m).filter(|&i| !h.get(i, col)).collect();
                let to_row = *zeros.choose(rng).expect("nonempty");
                return Some(Move::Swap {
                    col,
                    from_row,
                    to_row,
                });
            }
        }
    }
}

/// Restores feasibility in place and returns the toggles performed, so a
/// caller can roll the repair back together with a rejected move.
///
/// Passes: (1) every all-zero column gains min(2, m) ones in random rows;
/// (2) every all-zero row gains a 1, preferring columns below their target
/// weight; (3) with `enforce_targets`, column weights are adjusted to the
/// prescribed targets (removals skip rows that would become empty).
pub fn repair<R: Rng>(
    h: &mut ParityCheckMatrix,
    targets: &[usize],
    enforce_targets: bool,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    let (m, n) = h.dims();
    debug_assert_eq!(targets.len(), n);
    let mut log = Vec::new();

    for _pass in 0..8 {
        let mut changed = false;

        for j in 0..n {
            if h.col_weight(j) == 0 {
                let picks = rand::seq::index::sample(rng, m, 2.min(m));
                for i in picks {
                    h.toggle_unchecked(i, j);
                    log.push((i, j));
                }
                changed = true;
            }
        }

        for i in 0..m {
            if h.row_weight(i) == 0 {
                let under: Vec<usize> = (0..n).filter(|&j| h.col_weight(j) < targets[j]).collect();
                let j = match under.choose(rng) {
                    Some(&j) => j,
                    None => rng.random_range(0..n),
                };
                h.toggle_unchecked(i, j);
                log.push((i, j));
                changed = true;
            }
        }

        if enforce_targets {
            for j in 0..n {
                while h.col_weight(j) < targets[j] {
                    let zeros: Vec<usize> = (0..m).filter(|&i| !h.get(i, j)).collect();
                    match zeros.choose(rng) {
                        Some(&i) => {
                            h.toggle_unchecked(i, j);
                            log.push((i, j));
                            changed = true;
                        }
                        None => break,
                    }
                }
                while h.col_weight(j) > targets[j] {
                    let removable: Vec<usize> = h
                        .col_support(j)
                        .iter()
                        .copied()
                        .filter(|&i| h.row_weight(i) >= 2)
                        .collect();
                    match removable.choose(rng) {
                        Some(&i) => {
                            h.toggle_unchecked(i, j);
                            log.push((i, j));
                            changed = true;
                        }
                        None => break,
                    }
                }
            }
        }

        if !changed {
            break;
        }
    }
    log
}

/// Uniform random placement of `targets[j]` ones per column. The usual
/// trial initializer; callers follow up with [`repair`].
pub fn random_placement<R: Rng>(
    m: usize,
    n: usize,
    targets: &[usize],
    rng: &mut R,
) -> ParityCheckMatrix {
    assert_eq!(targets.len(), n);
    let mut h = ParityCheckMatrix::zeros(m, n);
    for j in 0..n {
        for i in rand::seq::index::sample(rng, m, targets[j].min(m)) {
            h.toggle_unchecked(i, j);
        }
    }
    h
}

/// Outcome of a single annealing trial.
#[derive(Debug, Clone)]
pub struct TrialResult {
    /// Lowest-energy feasible matrix visited, not the final walk state.
    pub matrix: ParityCheckMatrix,
    pub energy: EnergyBreakdown,
    /// Best-so-far total energy after every iteration; non-increasing.
    pub energy_trace: Vec<f64>,
    pub accepted_moves: u64,
    /// Accepted moves that the thermal rule alone would have rejected.
    pub tunnel_accepts: u64,
    pub repair_invocations: u64,
    pub seed: u64,
}

/// Runs one TASA trial from the given initial matrix.
///
/// Each iteration proposes a move, repairs feasibility if the move broke it,
/// evaluates the full energy of the repaired candidate against the current
/// state, and accepts by the tunneling-augmented rule. Rejected moves are
/// rolled back by undoing the recorded toggles in reverse.
pub fn run_tasa_trial<R: Rng>(
    initial: &ParityCheckMatrix,
    weights: &EnergyWeights,
    cfg: &AnnealConfig,
    rng: &mut R,
    seed: u64,
) -> Result<TrialResult> {
    cfg.validate()?;
    let enforce = cfg.move_mode == MoveMode::ColumnSwap;
    let targets = &weights.target_col_weights;

    let mut current = initial.clone();
    repair(&mut current, targets, enforce, rng);
    let mut current_energy = energy::evaluate(&current, weights)?;

    let mut best = current.clone();
    let mut best_energy = current_energy;
    let mut trace = Vec::with_capacity(cfg.t_max + 1);
    trace.push(best_energy.total);

    let mut accepted_moves = 0;
    let mut tunnel_accepts = 0;
    let mut repair_invocations = 0;

    for t in 0..cfg.t_max {
        let Some(mv) = propose_move(&current, cfg.move_mode, rng) else {
            trace.push(best_energy.total);
            continue;
        };

        let mut journal = mv.toggles();
        for &(i, j) in &journal {
            current.toggle_unchecked(i, j);
        }
        if !current.is_valid() {
            journal.extend(repair(&mut current, targets, enforce, rng));
            repair_invocations += 1;
        }

        let candidate_energy = energy::evaluate(&current, weights)?;
        let delta = candidate_energy.total - current_energy.total;
        let thermal = (-delta / temperature(t, cfg)).exp().min(1.0);
        let accept_p = acceptance_probability(delta, t, cfg);
        let u: f64 = rng.random();

        if u < accept_p {
            accepted_moves += 1;
            if u >= thermal {
                tunnel_accepts += 1;
            }
            current_energy = candidate_energy;
            if current_energy.total < best_energy.total {
                best = current.clone();
                best_energy = current_energy;
            }
        } else {
            for &(i, j) in journal.iter().rev() {
                current.toggle_unchecked(i, j);
            }
        }
        trace.push(best_energy.total);
    }

    Ok(TrialResult {
        matrix: best,
        energy: best_energy,
        energy_trace: trace,
        accepted_moves,
        tunnel_accepts,
        repair_invocations,
        seed,
    })
}

// Refinement scans flips in chunks so the per-flip deltas can be evaluated
// in parallel without changing which flip is taken first.
const REFINE_CHUNK: usize = 256;

/// First-improvement hill climbing over single-bit flips in random order.
///
/// Stops after `budget` accepted improvements or at a flip-local optimum;
/// returns the number of accepted improvements.
pub fn local_refine<R: Rng>(
    h: &mut ParityCheckMatrix,
    weights: &EnergyWeights,
    budget: usize,
    rng: &mut R,
) -> Result<u64> {
    let (m, n) = h.dims();
    weights.validate(m, n)?;
    if budget == 0 {
        return Ok(0);
    }
    let mut positions: Vec<(usize, usize)> =
        (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let mut accepted = 0;

    'outer: loop {
        positions.shuffle(rng);
        for chunk in positions.chunks(REFINE_CHUNK) {
            let deltas: Vec<f64> = chunk
                .par_iter()
                .map(|&(i, j)| {
                    energy::evaluate_delta(h, weights, &Move::Toggle { row: i, col: j })
                        .map(|d| d.total)
                })
                .collect::<Result<_>>()?;
            if let Some(pos) = deltas.iter().position(|&d| d < 0.0) {
                let (i, j) = chunk[pos];
                h.toggle_unchecked(i, j);
                accepted += 1;
                if accepted == budget as u64 {
                    return Ok(accepted);
                }
                continue 'outer;
            }
        }
        return Ok(accepted);
    }
}

/// Rank-repair phase 1: weight-preserving column-internal swaps, each kept
/// only if it raises the GF(2) rank. Swaps that would empty a row are never
/// attempted. Returns the achieved rank.
pub fn rank_repair_swaps<R: Rng>(h: &mut ParityCheckMatrix, budget: usize, rng: &mut R) -> usize {
    let m = h.m();
    let mut rank = h.rank();
    let mut attempts = 0;
    while rank < m && attempts < budget {
        attempts += 1;
        let Some(mv) = propose_move(h, MoveMode::ColumnSwap, rng) else {
            break;
        };
        if let Move::Swap { from_row, .. } = mv {
            if h.row_weight(from_row) == 1 {
                continue;
            }
        }
        let toggles = mv.toggles();
        for &(i, j) in &toggles {
            h.toggle_unchecked(i, j);
        }
        let new_rank = h.rank();
        if new_rank > rank {
            rank = new_rank;
        } else {
            for &(i, j) in toggles.iter().rev() {
                h.toggle_unchecked(i, j);
            }
        }
    }
    rank
}

/// Drives the matrix toward full GF(2) row rank while disturbing the graph
/// as little as possible. Returns the achieved rank.
///
/// Half the budget goes to weight-preserving swaps ([`rank_repair_swaps`]),
/// the rest to single toggles kept only when the rank increases. Toggles
/// that would empty a row or column are never attempted — removing the last
/// 1 of a line cannot raise the rank — so validity is preserved throughout.
pub fn rank_repair<R: Rng>(h: &mut ParityCheckMatrix, budget: usize, rng: &mut R) -> usize {
    let (m, n) = h.dims();
    let mut rank = rank_repair_swaps(h, budget / 2, rng);
    let mut attempts = 0;
    let toggle_budget = budget - budget / 2;
    while rank < m && attempts < toggle_budget {
        attempts += 1;
        let (i, j) = (rng.random_range(0..m), rng.random_range(0..n));
        if h.get(i, j) && (h.row_weight(i) == 1 || h.col_weight(j) == 1) {
            continue;
        }
        h.toggle_unchecked(i, j);
        let new_rank = h.rank();
        if new_rank > rank {
            rank = new_rank;
        } else {
            h.toggle_unchecked(i, j);
        }
    }
    rank
}

/// Wall-clock seconds spent in each pipeline phase.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhaseTimings {
    pub anneal_s: f64,
    pub refine_s: f64,
    pub rank_repair_s: f64,
}

/// Result of the full hybrid construction pipeline.
#[derive(Debug, Clone)]
pub struct HybridOutput {
    pub matrix: ParityCheckMatrix,
    pub energy: EnergyBreakdown,
    pub metrics: CodeMetrics,
    pub achieved_rank: usize,
    pub refine_accepts: u64,
    pub trials: Vec<TrialResult>,
    pub timings: PhaseTimings,
}

/// Full hybrid pipeline: `restarts` independent TASA trials from random
/// initial placements, local refinement of the best trial, then rank repair.
///
/// Trial i runs on its own RNG stream seeded `cfg.seed + i`, so results do
/// not depend on the number of worker threads.
pub fn construct_hybrid(
    n: usize,
    k: usize,
    weights: &EnergyWeights,
    cfg: &AnnealConfig,
) -> Result<HybridOutput> {
    if k == 0 || k >= n {
        return Err(Error::InvalidDimensions(format!(
            "need n > k >= 1, got n = {n}, k = {k}"
        )));
    }
    let m = n - k;
    weights.validate(m, n)?;
    cfg.validate()?;
    if weights.target_col_weights.iter().any(|&t| t == 0) {
        return Err(Error::InvalidConfig(
            "column weight targets must be at least 1".into(),
        ));
    }

    let start = Instant::now();
    let mut trials: Vec<TrialResult> = (0..cfg.restarts)
        .into_par_iter()
        .map(|idx| {
            let trial_seed = cfg.seed.wrapping_add(idx as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let mut initial = random_placement(m, n, &weights.target_col_weights, &mut rng);
            repair(
                &mut initial,
                &weights.target_col_weights,
                cfg.move_mode == MoveMode::ColumnSwap,
                &mut rng,
            );
            run_tasa_trial(&initial, weights, cfg, &mut rng, trial_seed)
        })
        .collect::<Result<_>>()?;
    let anneal_s = start.elapsed().as_secs_f64();

    let best_idx = (0..trials.len())
        .min_by(|&a, &b| {
            trials[a]
                .energy
                .total
                .total_cmp(&trials[b].energy.total)
                .then(a.cmp(&b))
        })
        .expect("restarts >= 1");
    let mut matrix = trials[best_idx].matrix.clone();

    let start = Instant::now();
    let mut refine_rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(cfg.restarts as u64));
    let refine_accepts = local_refine(&mut matrix, weights, cfg.refine_budget, &mut refine_rng)?;
    let refine_s = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let mut rank_rng =
        ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(cfg.restarts as u64).wrapping_add(1));
    let achieved_rank = rank_repair(&mut matrix, cfg.rank_repair_budget, &mut rank_rng);
    let rank_repair_s = start.elapsed().as_secs_f64();

    let energy = energy::evaluate(&matrix, weights)?;
    let opts = MetricsOptions {
        six_cycles: SixCycleMode::Exact,
        trapping_sets: weights.alpha_f > 0.0,
        block_size: if weights.alpha_b > 0.0 {
            weights.block_size
        } else {
            None
        },
    };
    let code_metrics = metrics::collect(&matrix, &opts)?;

    trials.shrink_to_fit();
    Ok(HybridOutput {
        matrix,
        energy,
        metrics: code_metrics,
        achieved_rank,
        refine_accepts,
        trials,
        timings: PhaseTimings {
            anneal_s,
            refine_s,
            rank_repair_s,
        },
    })
}
