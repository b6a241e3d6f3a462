//! Named experiment presets and the weight-profile Pareto sweep.
//!
//! Presets cover the unconstrained regimes at n ∈ {64, 96, 128} (rate 1/2,
//! column weight 3) and four constrained regimes: fixed low column weight
//! (set1), an irregular half-2/half-4 profile (set2), explicit (4,2)
//! trapping-set penalties (set3), and block-structured codes (set4).

use crate::anneal::{construct_hybrid, AnnealConfig, MoveMode};
use crate::baselines::{construct_block_peg, construct_peg, construct_random, PegConfig};
use crate::energy::EnergyWeights;
use crate::gf2::ParityCheckMatrix;
use crate::metrics::{self, CodeMetrics, MetricsOptions, SixCycleMode};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Construction methods an experiment compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Hybrid,
    Peg,
    Random,
    BlockPeg,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Hybrid => "hybrid",
            Method::Peg => "peg",
            Method::Random => "random",
            Method::BlockPeg => "block-peg",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hybrid" => Ok(Method::Hybrid),
            "peg" => Ok(Method::Peg),
            "random" => Ok(Method::Random),
            "block-peg" | "block_peg" => Ok(Method::BlockPeg),
            other => Err(Error::InvalidConfig(format!(
                "unknown method '{other}' (expected hybrid, peg, random, or block-peg)"
            ))),
        }
    }
}

/// Code dimensions and degree targets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeSpec {
    pub n: usize,
    pub k: usize,
    pub target_col_weights: Vec<usize>,
    pub block_size: Option<usize>,
}

impl CodeSpec {
    pub fn m(&self) -> usize {
        self.n - self.k
    }
}

/// A fully resolved experiment definition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub code: CodeSpec,
    pub weights: EnergyWeights,
    pub anneal: AnnealConfig,
    pub methods: Vec<Method>,
    pub snr_grid: Vec<f64>,
    pub trials: u64,
    pub target_blers: Vec<f64>,
    pub seeds: Vec<u64>,
}

const DEFAULT_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

fn coarse_grid() -> Vec<f64> {
    (0..16).map(|i| i as f64 * 0.5).collect()
}

fn fine_grid() -> Vec<f64> {
    (0..21).map(|i| i as f64 * 0.25).collect()
}

/// Preset names accepted by [`preset`].
pub fn preset_names() -> Vec<String> {
    let mut names = Vec::new();
    for n in [64, 96, 128] {
        names.push(format!("unconstrained-{n}"));
    }
    for n in [64, 96, 128] {
        names.push(format!("set1-{n}"));
    }
    for n in [64, 96, 128] {
        names.push(format!("set2-{n}"));
    }
    names.push("set3".to_string());
    for n in [64, 96, 128] {
        for b in [4, 8] {
            names.push(format!("set4-{n}-b{b}"));
        }
    }
    names
}

/// Resolves a preset name to a fully populated experiment definition.
pub fn preset(name: &str) -> Result<ExperimentSpec> {
    let unknown = || Error::UnknownPreset {
        name: name.to_string(),
        available: preset_names().join(", "),
    };

    let spec = if let Some(n) = name.strip_prefix("unconstrained-") {
        let n: usize = n.parse().map_err(|_| unknown())?;
        require_size(n).ok_or_else(unknown)?;
        ExperimentSpec {
            name: name.to_string(),
            code: CodeSpec {
                n,
                k: n / 2,
                target_col_weights: vec![3; n],
                block_size: None,
            },
            weights: EnergyWeights::unconstrained(n, 3),
            anneal: AnnealConfig::default(),
            methods: vec![Method::Hybrid, Method::Peg, Method::Random],
            snr_grid: coarse_grid(),
            trials: 1000,
            target_blers: vec![1e-2, 1e-3],
            seeds: DEFAULT_SEEDS.to_vec(),
        }
    } else if let Some(n) = name.strip_prefix("set1-") {
        let n: usize = n.parse().map_err(|_| unknown())?;
        require_size(n).ok_or_else(unknown)?;
        ExperimentSpec {
            name: name.to_string(),
            code: CodeSpec {
                n,
                k: n / 2,
                target_col_weights: vec![2; n],
                block_size: None,
            },
            weights: EnergyWeights::constrained(n, 2),
            anneal: AnnealConfig {
                move_mode: MoveMode::ColumnSwap,
                ..AnnealConfig::default()
            },
            methods: vec![Method::Hybrid, Method::Peg, Method::Random],
            snr_grid: fine_grid(),
            trials: 1000,
            target_blers: vec![1e-1, 1e-2],
            seeds: DEFAULT_SEEDS.to_vec(),
        }
    } else if let Some(n) = name.strip_prefix("set2-") {
        let n: usize = n.parse().map_err(|_| unknown())?;
        require_size(n).ok_or_else(unknown)?;
        let mut targets = vec![2; n / 2];
        targets.extend(vec![4; n - n / 2]);
        ExperimentSpec {
            name: name.to_string(),
            code: CodeSpec {
                n,
                k: n / 2,
                target_col_weights: targets.clone(),
                block_size: None,
            },
            weights: EnergyWeights::constrained(n, 3).with_targets(targets),
            anneal: AnnealConfig {
                move_mode: MoveMode::ColumnSwap,
                ..AnnealConfig::default()
            },
            methods: vec![Method::Hybrid, Method::Peg, Method::Random],
            snr_grid: fine_grid(),
            trials: 1000,
            target_blers: vec![1e-1, 1e-2],
            seeds: DEFAULT_SEEDS.to_vec(),
        }
    } else if name == "set3" {
        // Exact (4,2) trapping-set counting keeps this preset at n = 64.
        let n = 64;
        ExperimentSpec {
            name: name.to_string(),
            code: CodeSpec {
                n,
                k: n / 2,
                target_col_weights: vec![3; n],
                block_size: None,
            },
            weights: EnergyWeights::constrained(n, 3).with_forbidden(100.0),
            anneal: AnnealConfig::default(),
            methods: vec![Method::Hybrid, Method::Peg, Method::Random],
            snr_grid: fine_grid(),
            trials: 1000,
            target_blers: vec![1e-1, 1e-2],
            seeds: DEFAULT_SEEDS.to_vec(),
        }
    } else if let Some(rest) = name.strip_prefix("set4-") {
        let (n_str, b_str) = rest.split_once("-b").ok_or_else(unknown)?;
        let n: usize = n_str.parse().map_err(|_| unknown())?;
        let b: usize = b_str.parse().map_err(|_| unknown())?;
        require_size(n).ok_or_else(unknown)?;
        if !(b == 4 || b == 8) {
            return Err(unknown());
        }
        ExperimentSpec {
            name: name.to_string(),
            code: CodeSpec {
                n,
                k: n / 2,
                target_col_weights: vec![3; n],
                block_size: Some(b),
            },
            weights: EnergyWeights::constrained(n, 3).with_block(200.0, b),
            anneal: AnnealConfig::default(),
            methods: vec![Method::Hybrid, Method::Peg, Method::Random, Method::BlockPeg],
            snr_grid: fine_grid(),
            trials: 1000,
            target_blers: vec![1e-1, 1e-2],
            seeds: DEFAULT_SEEDS.to_vec(),
        }
    } else {
        return Err(unknown());
    };

    Ok(spec)
}

fn require_size(n: usize) -> Option<usize> {
    [64, 96, 128].contains(&n).then_some(n)
}

/// A constructed matrix with its metrics and phase timings.
pub struct ConstructionOutput {
    pub matrix: ParityCheckMatrix,
    pub metrics: CodeMetrics,
    pub construct_s: f64,
    pub refine_s: f64,
    pub rank_repair_s: f64,
}

/// Metric options appropriate for a spec: trapping sets are counted when the
/// forbidden term is active, block deviation when a block size is present.
pub fn metrics_options(spec: &ExperimentSpec) -> MetricsOptions {
    MetricsOptions {
        six_cycles: SixCycleMode::Exact,
        trapping_sets: spec.weights.alpha_f > 0.0,
        block_size: spec.code.block_size,
    }
}

/// Builds one code with the given method and seed.
pub fn construct_method(
    spec: &ExperimentSpec,
    method: Method,
    seed: u64,
) -> Result<ConstructionOutput> {
    let code = &spec.code;
    let opts = metrics_options(spec);
    let started = std::time::Instant::now();
    match method {
        Method::Hybrid => {
            let cfg = AnnealConfig {
                seed,
                ..spec.anneal.clone()
            };
            let out = construct_hybrid(code.n, code.k, &spec.weights, &cfg)?;
            // The hybrid path computes metrics with the weight-derived
            // options; recompute with the spec options so every method
            // reports the same fields.
            let metrics = metrics::collect(&out.matrix, &opts)?;
            Ok(ConstructionOutput {
                matrix: out.matrix,
                metrics,
                construct_s: out.timings.anneal_s,
                refine_s: out.timings.refine_s,
                rank_repair_s: out.timings.rank_repair_s,
            })
        }
        Method::Peg | Method::BlockPeg => {
            let cfg = PegConfig {
                n: code.n,
                k: code.k,
                target_col_weights: code.target_col_weights.clone(),
                block_size: code.block_size,
                seed,
            };
            let matrix = if method == Method::Peg {
                construct_peg(&cfg)?
            } else {
                construct_block_peg(&cfg)?
            };
            let metrics = metrics::collect(&matrix, &opts)?;
            Ok(ConstructionOutput {
                matrix,
                metrics,
                construct_s: started.elapsed().as_secs_f64(),
                refine_s: 0.0,
                rank_repair_s: 0.0,
            })
        }
        Method::Random => {
            let matrix = construct_random(code.n, code.k, &code.target_col_weights, seed)?;
            let metrics = metrics::collect(&matrix, &opts)?;
            Ok(ConstructionOutput {
                matrix,
                metrics,
                construct_s: started.elapsed().as_secs_f64(),
                refine_s: 0.0,
                rank_repair_s: 0.0,
            })
        }
    }
}

/// One entry of a Pareto sweep.
#[derive(Debug, Clone)]
pub struct ParetoPoint {
    pub profile: String,
    pub c4: u64,
    pub c6: u64,
    pub block_deviation: u64,
    pub matrix: ParityCheckMatrix,
}

/// The block-structure weight ladder: cycle-dominant, balanced, and
/// structure-dominant hybrids.
pub fn pareto_profiles() -> [(&'static str, f64); 3] {
    [
        ("cycle-dominant", 20.0),
        ("balanced", 200.0),
        ("structure-dominant", 2000.0),
    ]
}

/// Runs one hybrid construction per weight profile plus standard-PEG and
/// block-PEG reference points. The spec must carry a block size.
pub fn run_pareto(
    spec: &ExperimentSpec,
    profiles: &[(&str, f64)],
    seed: u64,
) -> Result<Vec<ParetoPoint>> {
    let Some(b) = spec.code.block_size else {
        return Err(Error::InvalidConfig(format!(
            "preset '{}' has no block structure; a Pareto sweep needs one",
            spec.name
        )));
    };
    let mut points = Vec::new();

    for &(label, alpha_b) in profiles {
        let weights = EnergyWeights {
            alpha_b,
            ..spec.weights.clone()
        };
        let cfg = AnnealConfig {
            seed,
            ..spec.anneal.clone()
        };
        let out = construct_hybrid(spec.code.n, spec.code.k, &weights, &cfg)?;
        points.push(pareto_point(label, out.matrix, b)?);
    }

    let peg_cfg = PegConfig {
        n: spec.code.n,
        k: spec.code.k,
        target_col_weights: spec.code.target_col_weights.clone(),
        block_size: Some(b),
        seed,
    };
    points.push(pareto_point("peg", construct_peg(&peg_cfg)?, b)?);
    points.push(pareto_point("block-peg", construct_block_peg(&peg_cfg)?, b)?);
    Ok(points)
}

fn pareto_point(label: &str, matrix: ParityCheckMatrix, b: usize) -> Result<ParetoPoint> {
    Ok(ParetoPoint {
        profile: label.to_string(),
        c4: metrics::count_4_cycles(&matrix),
        c6: metrics::count_6_cycles_exact(&matrix),
        block_deviation: metrics::block_deviation(&matrix, b)?,
        matrix,
    })
}

/// Loads an experiment definition from JSON, filling unset fields from the
/// unconstrained defaults. See the README for the schema.
pub fn load_config(text: &str) -> Result<ExperimentSpec> {
    let raw: RawConfig = serde_json::from_str(text)?;
    raw.resolve()
}

#[derive(Deserialize)]
struct RawConfig {
    #[serde(default)]
    name: Option<String>,
    code: RawCode,
    #[serde(default)]
    weights: Option<RawWeights>,
    #[serde(default)]
    anneal: Option<AnnealConfig>,
    #[serde(default)]
    methods: Option<Vec<Method>>,
    #[serde(default)]
    snr_grid: Option<Vec<f64>>,
    #[serde(default)]
    trials: Option<u64>,
    #[serde(default)]
    target_blers: Option<Vec<f64>>,
    #[serde(default)]
    seeds: Option<Vec<u64>>,
}

#[derive(Deserialize)]
struct RawCode {
    n: usize,
    k: usize,
    #[serde(default)]
    target_col_weight: Option<usize>,
    #[serde(default)]
    target_col_weights: Option<Vec<usize>>,
    #[serde(default)]
    block_size: Option<usize>,
}

#[derive(Deserialize, Default)]
struct RawWeights {
    alpha4: Option<f64>,
    alpha6: Option<f64>,
    alpha_w: Option<f64>,
    alpha_d: Option<f64>,
    alpha_v: Option<f64>,
    alpha_f: Option<f64>,
    alpha_b: Option<f64>,
    block_size: Option<usize>,
    target_col_weight: Option<usize>,
    target_col_weights: Option<Vec<usize>>,
}

impl RawConfig {
    fn resolve(self) -> Result<ExperimentSpec> {
        let n = self.code.n;
        let k = self.code.k;
        if k == 0 || k >= n {
            return Err(Error::InvalidConfig(format!(
                "need n > k >= 1, got n = {n}, k = {k}"
            )));
        }
        let targets = match (&self.code.target_col_weights, self.code.target_col_weight) {
            (Some(v), _) => {
                if v.len() != n {
                    return Err(Error::InvalidConfig(format!(
                        "target_col_weights has {} entries for n = {n}",
                        v.len()
                    )));
                }
                v.clone()
            }
            (None, Some(w)) => vec![w; n],
            (None, None) => vec![3; n],
        };

        let rw = self.weights.unwrap_or_default();
        let base = EnergyWeights::unconstrained(n, 3);
        let weight_targets = match (&rw.target_col_weights, rw.target_col_weight) {
            (Some(v), _) => v.clone(),
            (None, Some(w)) => vec![w; n],
            (None, None) => targets.clone(),
        };
        if weight_targets.len() != n {
            return Err(Error::InvalidConfig(format!(
                "weights.target_col_weights has {} entries for n = {n}",
                weight_targets.len()
            )));
        }
        let weights = EnergyWeights {
            alpha4: rw.alpha4.unwrap_or(base.alpha4),
            alpha6: rw.alpha6.unwrap_or(base.alpha6),
            alpha_w: rw.alpha_w.unwrap_or(base.alpha_w),
            alpha_d: rw.alpha_d.unwrap_or(base.alpha_d),
            alpha_v: rw.alpha_v.unwrap_or(base.alpha_v),
            alpha_f: rw.alpha_f.unwrap_or(0.0),
            alpha_b: rw.alpha_b.unwrap_or(0.0),
            block_size: rw.block_size.or(self.code.block_size),
            target_col_weights: weight_targets,
        };

        let spec = ExperimentSpec {
            name: self.name.unwrap_or_else(|| "custom".to_string()),
            code: CodeSpec {
                n,
                k,
                target_col_weights: targets,
                block_size: self.code.block_size,
            },
            weights,
            anneal: self.anneal.unwrap_or_default(),
            methods: self
                .methods
                .unwrap_or_else(|| vec![Method::Hybrid, Method::Peg, Method::Random]),
            snr_grid: self.snr_grid.unwrap_or_else(coarse_grid),
            trials: self.trials.unwrap_or(1000),
            target_blers: self.target_blers.unwrap_or_else(|| vec![1e-2, 1e-3]),
            seeds: self.seeds.unwrap_or_else(|| DEFAULT_SEEDS.to_vec()),
        };
        spec.weights.validate(spec.code.m(), n)?;
        Ok(spec)
    }
}
