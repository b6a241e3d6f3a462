//! Command-line front end: construct codes, report metrics, run Monte Carlo
//! sweeps, compare curves, and sweep Pareto profiles.
//!
//! Exit codes: 0 success, 1 internal failure, 2 usage or configuration
//! error, 3 requested analysis not computable from the data.

use clap::{Args, Parser, Subcommand};
use ldpc_tasa::experiments::{self, ExperimentSpec, Method};
use ldpc_tasa::manifest::RunManifest;
use ldpc_tasa::sim::{self, TransmissionMode};
use ldpc_tasa::{alist, metrics, Error};
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "LDPC_TASA_OUT_DIR";

#[derive(Parser)]
#[command(name = "ldpc-tasa", version, about = "Short-block LDPC construction and evaluation")]
struct Cli {
    /// Cap the worker thread count (default: all cores). Results never
    /// depend on this value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a parity-check matrix and write alist + metrics + manifest.
    Construct(ConstructArgs),
    /// Print the structural metrics of an alist matrix as JSON.
    Metrics(MetricsArgs),
    /// Monte Carlo BLER/BER sweep over an SNR grid, written as CSV.
    Simulate(SimulateArgs),
    /// SNR gain between two measured curves at a target BLER.
    Compare(CompareArgs),
    /// Weight-profile Pareto sweep for a block-structured preset.
    Pareto(ParetoArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// hybrid | peg | random | block-peg
    #[arg(long)]
    method: Method,
    /// Named preset (see README for the catalog).
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// JSON experiment config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: $LDPC_TASA_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    /// Input alist file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Also report block deviation for this block size.
    #[arg(long)]
    block_size: Option<usize>,
    /// Also count (4,2) trapping sets (exhaustive).
    #[arg(long)]
    trap42: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Input alist file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Inclusive grid start:stop:step, e.g. 0:7.5:0.5.
    #[arg(long)]
    snr_grid: String,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output CSV path (default: bler.csv under $LDPC_TASA_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
    /// allzero transmits the zero codeword; systematic encodes random
    /// messages and needs full rank.
    #[arg(long, default_value = "allzero")]
    mode: String,
    /// Label stored in the CSV (default: input file stem).
    #[arg(long)]
    code_id: Option<String>,
}

#[derive(Args)]
struct CompareArgs {
    /// First curve CSV (the candidate).
    #[arg(long)]
    a: PathBuf,
    /// Second curve CSV (the reference).
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value_t = 0.01)]
    target_bler: f64,
}

#[derive(Args)]
struct ParetoArgs {
    /// Block-structured preset, e.g. set4-96-b4.
    #[arg(long)]
    preset: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output directory (default: $LDPC_TASA_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Ignore failure: the global pool may already exist in tests.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err}");
        std::process::exit(exit_code(&err));
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotBracketed { .. } => 3,
        Error::InvalidDimensions(_)
        | Error::IndexOutOfRange { .. }
        | Error::AlistParse { .. }
        | Error::InvalidBlockSize { .. }
        | Error::InvalidConfig(_)
        | Error::UnknownPreset { .. }
        | Error::RankDeficient { .. } => 2,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Construct(args) => construct(args),
        Command::Metrics(args) => print_metrics(args),
        Command::Simulate(args) => simulate(args),
        Command::Compare(args) => compare(args),
        Command::Pareto(args) => pareto(args),
    }
}

fn resolve_out_dir(out: Option<PathBuf>) -> Result<PathBuf, Error> {
    let dir = match out {
        Some(dir) => dir,
        None => match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) => PathBuf::from(dir),
            None => {
                return Err(Error::InvalidConfig(format!(
                    "no --out given and {OUT_DIR_ENV} is not set"
                )))
            }
        },
    };
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn load_spec(preset: Option<&str>, config: Option<&Path>) -> Result<ExperimentSpec, Error> {
    match (preset, config) {
        (Some(name), None) => experiments::preset(name),
        (None, Some(path)) => experiments::load_config(&std::fs::read_to_string(path)?),
        (None, None) => Err(Error::InvalidConfig(
            "pass either --preset or --config".into(),
        )),
        (Some(_), Some(_)) => Err(Error::InvalidConfig(
            "--preset and --config are mutually exclusive".into(),
        )),
    }
}

fn construct(args: ConstructArgs) -> Result<(), Error> {
    let spec = load_spec(args.preset.as_deref(), args.config.as_deref())?;
    for warning in spec.weights.lint() {
        eprintln!("warning: {warning}");
    }
    let seed = args.seed.unwrap_or_else(|| spec.seeds.first().copied().unwrap_or(1));
    let out_dir = resolve_out_dir(args.out)?;

    let output = experiments::construct_method(&spec, args.method, seed)?;
    let alist_path = out_dir.join(format!("{}-{seed}.alist", args.method));
    alist::write_alist_file(&output.matrix, &alist_path)?;

    let mut metrics_json = serde_json::to_string_pretty(&output.metrics)?;
    metrics_json.push('\n');
    std::fs::write(out_dir.join("metrics.json"), metrics_json)?;

    let mut manifest = RunManifest::new(command_line(), &spec, vec![seed])?;
    manifest.record_phase("construct", output.construct_s);
    manifest.record_phase("refine", output.refine_s);
    manifest.record_phase("rank_repair", output.rank_repair_s);
    manifest.write(&out_dir)?;

    println!(
        "{} n={} k={} seed={} -> {}",
        args.method,
        spec.code.n,
        spec.code.k,
        seed,
        alist_path.display()
    );
    println!(
        "c4={} c6={} girth={} rank={}{}{}",
        output.metrics.c4,
        output.metrics.c6,
        output
            .metrics
            .girth
            .map_or("none".to_string(), |g| g.to_string()),
        output.metrics.rank,
        output
            .metrics
            .trap_42
            .map_or(String::new(), |t| format!(" trap_42={t}")),
        output
            .metrics
            .block_deviation
            .map_or(String::new(), |d| format!(" block_deviation={d}")),
    );
    Ok(())
}

fn print_metrics(args: MetricsArgs) -> Result<(), Error> {
    let h = alist::read_alist_file(&args.input)?;
    let opts = metrics::MetricsOptions {
        six_cycles: metrics::SixCycleMode::Exact,
        trapping_sets: args.trap42,
        block_size: args.block_size,
    };
    let report = metrics::collect(&h, &opts)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn simulate(args: SimulateArgs) -> Result<(), Error> {
    let h = alist::read_alist_file(&args.input)?;
    let grid = sim::parse_snr_grid(&args.snr_grid)?;
    let mode = match args.mode.as_str() {
        "allzero" => TransmissionMode::AllZero,
        "systematic" => TransmissionMode::Systematic,
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown mode '{other}' (expected allzero or systematic)"
            )))
        }
    };
    let code_id = args.code_id.unwrap_or_else(|| {
        args.input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "code".to_string())
    });
    let out_path = match args.out {
        Some(path) => path,
        None => resolve_out_dir(None)?.join("bler.csv"),
    };

    let started = Instant::now();
    let curve = sim::run_sweep(&h, &code_id, &grid, args.trials, args.seed, mode)?;
    curve.write_csv_file(&out_path)?;

    let mut manifest = RunManifest::new(
        command_line(),
        &serde_json::json!({
            "input": args.input.display().to_string(),
            "snr_grid": grid,
            "trials": args.trials,
            "mode": mode,
            "code_id": code_id,
        }),
        vec![args.seed],
    )?;
    manifest.record_phase("simulate", started.elapsed().as_secs_f64());
    if let Some(dir) = out_path.parent() {
        if dir.as_os_str().is_empty() {
            manifest.write(".")?;
        } else {
            manifest.write(dir)?;
        }
    }

    println!("wrote {} ({} points)", out_path.display(), curve.points.len());
    Ok(())
}

fn compare(args: CompareArgs) -> Result<(), Error> {
    let a = sim::BlerCurve::read_csv_file(&args.a)?;
    let b = sim::BlerCurve::read_csv_file(&args.b)?;
    let snr_a = sim::snr_at_bler(&a, args.target_bler)?;
    let snr_b = sim::snr_at_bler(&b, args.target_bler)?;
    println!(
        "snr@bler={}: {}={:.3} dB, {}={:.3} dB",
        args.target_bler, a.code_id, snr_a, b.code_id, snr_b
    );
    println!("gain ({} over {}): {:+.2} dB", a.code_id, b.code_id, snr_b - snr_a);
    Ok(())
}

fn pareto(args: ParetoArgs) -> Result<(), Error> {
    let spec = experiments::preset(&args.preset)?;
    let out_dir = resolve_out_dir(args.out)?;
    let started = Instant::now();
    let points = experiments::run_pareto(&spec, &experiments::pareto_profiles(), args.seed)?;

    let mut writer = csv::Writer::from_path(out_dir.join("pareto.csv"))?;
    writer.write_record(["profile", "c4", "c6", "block_deviation", "alist"])?;
    for point in &points {
        let alist_path = out_dir.join(format!("{}-{}.alist", point.profile, args.seed));
        alist::write_alist_file(&point.matrix, &alist_path)?;
        writer.write_record(&[
            point.profile.clone(),
            point.c4.to_string(),
            point.c6.to_string(),
            point.block_deviation.to_string(),
            alist_path.display().to_string(),
        ])?;
    }
    writer.flush().map_err(Error::Io)?;

    let mut manifest = RunManifest::new(command_line(), &spec, vec![args.seed])?;
    manifest.record_phase("construct", started.elapsed().as_secs_f64());
    manifest.write(&out_dir)?;

    println!("wrote {} ({} rows)", out_dir.join("pareto.csv").display(), points.len());
    Ok(())
}

fn command_line() -> Vec<String> {
    std::env::args().collect()
}
