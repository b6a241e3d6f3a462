//! Short-block LDPC code construction by tunneling-augmented simulated
//! annealing (TASA), with classical baselines and end-to-end evaluation.
//!
//! The crate builds binary parity-check matrices for blocklengths up to a few
//! hundred bits by minimizing a configurable structural energy function
//! (4-cycles, 6-cycles, degree deviations, trapping sets, block structure),
//! compares them against Progressive Edge Growth and random constructions,
//! and measures block error rates with a sum-product decoder over a
//! BPSK/AWGN channel.
//!
//! ## Modules
//!
//! - [`gf2`] — dense/sparse parity-check matrix, GF(2) rank, systematic encoding
//! - [`alist`] — reader/writer for the alist interchange format
//! - [`metrics`] — exact Tanner-graph metrics: cycle counts, girth, trapping
//!   sets, block deviation
//! - [`energy`] — the multi-term energy function and incremental deltas
//! - [`anneal`] — TASA trials, constraint repair, local refinement, rank
//!   repair, and the full hybrid construction pipeline
//! - [`baselines`] — random, PEG, and block-aware PEG constructions
//! - [`channel`] / [`decoder`] — BPSK over AWGN and belief propagation
//! - [`sim`] — Monte Carlo BLER/BER sweeps, Wilson intervals, SNR gains
//! - [`experiments`] — named experiment presets and Pareto sweeps
//! - [`manifest`] — run manifests for reproducibility
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run --release --example alist_roundtrip      # matrix file I/O
//! cargo run --release --example annealing_schedule   # temperature/tunneling curves
//! cargo run --release --example construct_hybrid     # full TASA pipeline at n=64
//! cargo run --release --example construct_baselines  # PEG vs random structure
//! cargo run --release --example block_structured     # quasi-cyclic tradeoffs
//! cargo run --release --example avoid_trapping_sets  # forbidden-subgraph penalty
//! cargo run --release --example decode_walkthrough   # one transmit/decode round
//! cargo run --release --example bler_sweep           # Monte Carlo BLER curve
//! cargo run --release --example snr_gain             # gain between two codes
//! cargo run --release --example pareto_tradeoffs     # weight-profile frontier
//! ```
//!
//! The `ldpc-tasa` binary exposes the same pipeline as subcommands
//! (`construct`, `metrics`, `simulate`, `compare`, `pareto`); see the README.

pub mod alist;
pub mod anneal;
pub mod baselines;
pub mod channel;
pub mod decoder;
pub mod energy;
pub mod experiments;
pub mod gf2;
pub mod manifest;
pub mod metrics;
pub mod sim;

pub use anneal::{construct_hybrid, AnnealConfig, HybridOutput, MoveMode, TrialResult};
pub use baselines::{construct_block_peg, construct_peg, construct_random, PegConfig};
pub use channel::ChannelConfig;
pub use decoder::DecodeResult;
pub use energy::{EnergyBreakdown, EnergyWeights};
pub use gf2::{Move, ParityCheckMatrix};
pub use metrics::CodeMetrics;
pub use sim::BlerCurve;

use thiserror::Error;

/// Errors shared by every module of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("index ({row}, {col}) out of range for a {m}x{n} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        m: usize,
        n: usize,
    },

    #[error("alist parse error at line {line}: {message}")]
    AlistParse { line: usize, message: String },

    #[error("block size {block_size} must divide rows ({m}) and columns ({n})")]
    InvalidBlockSize {
        block_size: usize,
        m: usize,
        n: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown preset '{name}'; available presets: {available}")]
    UnknownPreset { name: String, available: String },

    #[error("target BLER {target} is not bracketed by curve '{curve}': {reason}")]
    NotBracketed {
        target: f64,
        curve: String,
        reason: String,
    },

    #[error("matrix has GF(2) rank {rank} < m = {m}; systematic encoding needs full rank")]
    RankDeficient { rank: usize, m: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
