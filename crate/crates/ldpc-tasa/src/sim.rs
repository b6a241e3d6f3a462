//! Monte Carlo BLER/BER estimation: per-SNR trial batches, Wilson score
//! intervals, log-linear SNR interpolation, and curve CSV I/O.

use crate::channel::{self, ChannelConfig};
use crate::decoder::{self, DEFAULT_MAX_ITERS};
use crate::gf2::{ParityCheckMatrix, SystematicEncoder};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// What is transmitted in each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransmissionMode {
    /// Transmit the all-zero codeword; a block error is any nonzero decoded
    /// bit. Valid for linear codes over a symmetric channel and does not
    /// require full rank.
    AllZero,
    /// Encode a random message systematically and count errors on the
    /// information positions. Requires full GF(2) row rank.
    Systematic,
}

/// One measured SNR point.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CurvePoint {
    pub snr_db: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub bit_errors: u64,
    pub bler: f64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// A measured BLER curve with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct BlerCurve {
    pub code_id: String,
    pub seed: u64,
    pub points: Vec<CurvePoint>,
}

const WILSON_Z95: f64 = 1.959963984540054;

/// 95% Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let z = WILSON_Z95;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // The bound touches the estimate exactly at p ∈ {0, 1}; avoid returning
    // rounding dust there.
    let low = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (low, high)
}

/// Runs `trials` Monte Carlo decodes at one SNR. Trial t draws its own RNG
/// stream from `seed + t`, so counts are independent of worker threading.
pub fn run_point(
    h: &ParityCheckMatrix,
    snr_db: f64,
    trials: u64,
    seed: u64,
    mode: TransmissionMode,
) -> Result<CurvePoint> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let cfg = ChannelConfig::from_snr_db(snr_db, seed);
    let encoder = match mode {
        TransmissionMode::AllZero => None,
        TransmissionMode::Systematic => Some(SystematicEncoder::new(h)?),
    };
    let bits_per_block = match &encoder {
        None => h.n() as u64,
        Some(enc) => enc.message_len() as u64,
    };

    let (block_errors, bit_errors) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t));
            match &encoder {
                None => {
                    let word = vec![0u8; h.n()];
                    let y = channel::transmit(&word, &cfg, &mut rng);
                    let llrs = channel::init_llrs(&y, cfg.sigma2);
                    let out = decoder::bp_decode(h, &llrs, DEFAULT_MAX_ITERS);
                    let errs = out.hard_decision.iter().filter(|&&b| b != 0).count() as u64;
                    ((errs > 0) as u64, errs)
                }
                Some(enc) => {
                    let msg: Vec<u8> =
                        (0..enc.message_len()).map(|_| rng.random_range(0..2u8)).collect();
                    let word = enc.encode(&msg);
                    let y = channel::transmit(&word, &cfg, &mut rng);
                    let llrs = channel::init_llrs(&y, cfg.sigma2);
                    let out = decoder::bp_decode(h, &llrs, DEFAULT_MAX_ITERS);
                    let errs = enc
                        .info_positions()
                        .iter()
                        .zip(&msg)
                        .filter(|(&pos, &bit)| out.hard_decision[pos] != bit)
                        .count() as u64;
                    ((errs > 0) as u64, errs)
                }
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let (ci_low, ci_high) = wilson_interval(block_errors, trials);
    Ok(CurvePoint {
        snr_db,
        trials,
        block_errors,
        bit_errors,
        bler: block_errors as f64 / trials as f64,
        ber: bit_errors as f64 / (trials * bits_per_block) as f64,
        ci_low,
        ci_high,
    })
}

/// One [`run_point`] per grid entry. Point i uses seed `seed + i·trials` so
/// trial streams never collide across points.
pub fn run_sweep(
    h: &ParityCheckMatrix,
    code_id: &str,
    snr_grid: &[f64],
    trials: u64,
    seed: u64,
    mode: TransmissionMode,
) -> Result<BlerCurve> {
    if snr_grid.is_empty() {
        return Err(Error::InvalidConfig("SNR grid is empty".into()));
    }
    if snr_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig(
            "SNR grid must be strictly increasing".into(),
        ));
    }
    let points = snr_grid
        .iter()
        .enumerate()
        .map(|(i, &snr)| run_point(h, snr, trials, seed.wrapping_add(i as u64 * trials), mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlerCurve {
        code_id: code_id.to_string(),
        seed,
        points,
    })
}

/// SNR at which the curve crosses `target_bler`, by linear interpolation in
/// (snr_db, log₁₀ BLER) between the bracketing measured points. Never
/// extrapolates; zero-BLER points cannot bracket.
pub fn snr_at_bler(curve: &BlerCurve, target_bler: f64) -> Result<f64> {
    if !(target_bler > 0.0 && target_bler < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "target BLER must lie in (0, 1), got {target_bler}"
        )));
    }
    let not_bracketed = |reason: String| Error::NotBracketed {
        target: target_bler,
        curve: curve.code_id.clone(),
        reason,
    };
    if curve.points.len() < 2 {
        return Err(not_bracketed("curve has fewer than two points".into()));
    }
    for pair in curve.points.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.bler <= 0.0 || b.bler <= 0.0 {
            continue;
        }
        if a.bler >= target_bler && target_bler >= b.bler {
            if a.bler == b.bler {
                return Ok(a.snr_db);
            }
            let la = a.bler.log10();
            let lb = b.bler.log10();
            let lt = target_bler.log10();
            return Ok(a.snr_db + (b.snr_db - a.snr_db) * (la - lt) / (la - lb));
        }
    }
    let floor = curve
        .points
        .iter()
        .filter(|p| p.bler > 0.0)
        .map(|p| p.bler)
        .fold(f64::INFINITY, f64::min);
    Err(not_bracketed(format!(
        "no adjacent nonzero points bracket it (nonzero floor: {})",
        if floor.is_finite() {
            floor.to_string()
        } else {
            "all-zero curve".to_string()
        }
    )))
}

/// SNR gain of curve `a` over curve `b` at a target BLER: snr_b − snr_a.
/// Positive means `a` reaches the target at lower SNR.
pub fn snr_gain(a: &BlerCurve, b: &BlerCurve, target_bler: f64) -> Result<f64> {
    Ok(snr_at_bler(b, target_bler)? - snr_at_bler(a, target_bler)?)
}

const CSV_HEADER: [&str; 9] = [
    "code_id",
    "snr_db",
    "trials",
    "block_errors",
    "bit_errors",
    "bler",
    "ber",
    "ci_low",
    "ci_high",
];

impl BlerCurve {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(CSV_HEADER)?;
        for p in &self.points {
            out.write_record(&[
                self.code_id.clone(),
                p.snr_db.to_string(),
                p.trials.to_string(),
                p.block_errors.to_string(),
                p.bit_errors.to_string(),
                p.bler.to_string(),
                p.ber.to_string(),
                p.ci_low.to_string(),
                p.ci_high.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut input = csv::Reader::from_reader(reader);
        let mut code_id = String::new();
        let mut points = Vec::new();
        for record in input.records() {
            let record = record?;
            let field = |i: usize| -> Result<&str> {
                record
                    .get(i)
                    .ok_or_else(|| Error::InvalidConfig(format!("curve CSV row too short: {record:?}")))
            };
            let parse = |i: usize| -> Result<f64> {
                field(i)?.parse().map_err(|_| {
                    Error::InvalidConfig(format!("bad number '{}' in curve CSV", record.get(i).unwrap_or("")))
                })
            };
            code_id = field(0)?.to_string();
            points.push(CurvePoint {
                snr_db: parse(1)?,
                trials: parse(2)? as u64,
                block_errors: parse(3)? as u64,
                bit_errors: parse(4)? as u64,
                bler: parse(5)?,
                ber: parse(6)?,
                ci_low: parse(7)?,
                ci_high: parse(8)?,
            });
        }
        if points.is_empty() {
            return Err(Error::InvalidConfig("curve CSV has no data rows".into()));
        }
        Ok(Self {
            code_id,
            seed: 0,
            points,
        })
    }

    pub fn write_csv_file(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn read_csv_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Parses an inclusive `start:stop:step` SNR grid specification.
pub fn parse_snr_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidConfig(format!(
            "SNR grid must be start:stop:step, got '{spec}'"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad SNR grid number '{p}'")))
        })
        .collect::<Result<_>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 || stop < start {
        return Err(Error::InvalidConfig(format!(
            "SNR grid needs stop >= start and step > 0, got '{spec}'"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::{construct_peg, PegConfig};
    use proptest::prelude::*;

    fn synthetic_curve(id: &str, points: &[(f64, f64)]) -> BlerCurve {
        BlerCurve {
            code_id: id.to_string(),
            seed: 0,
            points: points
                .iter()
                .map(|&(snr_db, bler)| {
                    let trials = 1000;
                    let block_errors = (bler * trials as f64).round() as u64;
                    let (ci_low, ci_high) = wilson_interval(block_errors, trials);
                    CurvePoint {
                        snr_db,
                        trials,
                        block_errors,
                        bit_errors: block_errors,
                        bler,
                        ber: bler / 8.0,
                        ci_low,
                        ci_high,
                    }
                })
                .collect(),
        }
    }

    #[test]
    fn high_snr_points_measure_zero_errors() {
        let h = construct_peg(&PegConfig::regular(16, 8, 3, 3)).unwrap();
        let p = run_point(&h, 20.0, 500, 1, TransmissionMode::AllZero).unwrap();
        assert_eq!(p.block_errors, 0);
        assert_eq!(p.bler, 0.0);
        assert_eq!(p.ci_low, 0.0);
    }

    #[test]
    fn points_are_deterministic_per_seed() {
        let h = construct_peg(&PegConfig::regular(16, 8, 3, 3)).unwrap();
        let a = run_point(&h, 2.0, 400, 7, TransmissionMode::AllZero).unwrap();
        let b = run_point(&h, 2.0, 400, 7, TransmissionMode::AllZero).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn systematic_mode_requires_full_rank() {
        let h = ParityCheckMatrix::from_dense(&[vec![1, 1, 0], vec![1, 1, 0]]).unwrap();
        assert!(matches!(
            run_point(&h, 2.0, 10, 1, TransmissionMode::Systematic),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn systematic_mode_counts_information_bits() {
        let h = construct_peg(&PegConfig::regular(16, 8, 3, 3)).unwrap();
        let p = run_point(&h, 20.0, 200, 5, TransmissionMode::Systematic).unwrap();
        assert_eq!(p.block_errors, 0);
        // BER denominator is k per block in systematic mode.
        assert_eq!(p.ber, 0.0);
    }

    #[test]
    fn integer_accounting_is_exact() {
        let h = construct_peg(&PegConfig::regular(16, 8, 3, 3)).unwrap();
        let p = run_point(&h, 1.0, 333, 11, TransmissionMode::AllZero).unwrap();
        assert_eq!((p.bler * p.trials as f64).round() as u64, p.block_errors);
        assert!(p.block_errors <= p.trials);
    }

    #[test]
    fn snr_interpolation_endpoints_and_midpoint() {
        let curve = synthetic_curve("c", &[(2.0, 0.1), (3.0, 0.01)]);
        assert!((snr_at_bler(&curve, 0.01).unwrap() - 3.0).abs() < 1e-12);
        assert!((snr_at_bler(&curve, 0.1).unwrap() - 2.0).abs() < 1e-12);
        let mid = snr_at_bler(&curve, 10f64.powf(-1.5)).unwrap();
        assert!((mid - 2.5).abs() < 1e-12);
    }

    #[test]
    fn unbracketed_targets_are_errors_not_extrapolations() {
        let curve = synthetic_curve("c", &[(2.0, 0.1), (3.0, 0.005)]);
        assert!(matches!(
            snr_at_bler(&curve, 0.001),
            Err(Error::NotBracketed { .. })
        ));
        let zero_floor = synthetic_curve("c", &[(2.0, 0.1), (3.0, 0.0)]);
        assert!(matches!(
            snr_at_bler(&zero_floor, 0.01),
            Err(Error::NotBracketed { .. })
        ));
    }

    #[test]
    fn gain_is_antisymmetric_and_zero_on_identical_curves() {
        let a = synthetic_curve("a", &[(1.0, 0.2), (2.0, 0.05), (3.0, 0.004)]);
        let b = synthetic_curve("b", &[(1.5, 0.2), (2.5, 0.05), (3.5, 0.004)]);
        assert_eq!(snr_gain(&a, &a, 0.01).unwrap(), 0.0);
        let ab = snr_gain(&a, &b, 0.01).unwrap();
        let ba = snr_gain(&b, &a, 0.01).unwrap();
        assert!((ab - 0.5).abs() < 1e-9);
        assert!((ab + ba).abs() < 1e-12);
    }

    #[test]
    fn snr_at_bler_is_monotone_in_the_target() {
        let curve = synthetic_curve("c", &[(1.0, 0.3), (2.0, 0.08), (3.0, 0.01), (4.0, 0.002)]);
        let mut last = f64::NEG_INFINITY;
        for target in [0.2, 0.05, 0.02, 0.005] {
            let snr = snr_at_bler(&curve, target).unwrap();
            assert!(snr >= last);
            last = snr;
        }
    }

    #[test]
    fn curve_csv_round_trips() {
        let h = construct_peg(&PegConfig::regular(16, 8, 3, 3)).unwrap();
        let curve = run_sweep(&h, "peg-16", &[1.0, 2.0, 3.0], 100, 3, TransmissionMode::AllZero)
            .unwrap();
        let mut buf = Vec::new();
        curve.write_csv(&mut buf).unwrap();
        let parsed = BlerCurve::read_csv(buf.as_slice()).unwrap();
        assert_eq!(parsed.code_id, "peg-16");
        assert_eq!(parsed.points, curve.points);
    }

    #[test]
    fn grid_parsing_is_inclusive() {
        assert_eq!(parse_snr_grid("0:7.5:0.5").unwrap().len(), 16);
        assert_eq!(parse_snr_grid("0:5:0.25").unwrap().len(), 21);
        assert_eq!(parse_snr_grid("3:3:1").unwrap(), vec![3.0]);
        assert!(parse_snr_grid("5:1:0.5").is_err());
        assert!(parse_snr_grid("0:1:0").is_err());
        assert!(parse_snr_grid("nope").is_err());
    }

    #[test]
    fn wilson_interval_brackets_the_estimate() {
        for &(e, t) in &[(0u64, 50u64), (1, 50), (10, 1000), (999, 1000), (1000, 1000)] {
            let (lo, hi) = wilson_interval(e, t);
            let p = e as f64 / t as f64;
            assert!(lo <= p && p <= hi, "({e},{t})");
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn wilson_interval_narrows_with_more_trials(errors in 0u64..50, trials in 1u64..200, factor in 2u64..6) {
            prop_assume!(errors <= trials);
            let (lo1, hi1) = wilson_interval(errors, trials);
            let (lo2, hi2) = wilson_interval(errors * factor, trials * factor);
            prop_assert!(hi2 - lo2 <= hi1 - lo1 + 1e-12);
        }
    }
}
