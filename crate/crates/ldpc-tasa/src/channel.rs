//! BPSK modulation over the AWGN channel and LLR initialization.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Channel parameters. `sigma2` is derived from the SNR so the two fields
/// are always consistent: σ² = 1 / (2·10^(snr_db/10)).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub snr_db: f64,
    pub sigma2: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn from_snr_db(snr_db: f64, seed: u64) -> Self {
        Self {
            snr_db,
            sigma2: sigma2_for_snr_db(snr_db),
            seed,
        }
    }
}

pub fn sigma2_for_snr_db(snr_db: f64) -> f64 {
    1.0 / (2.0 * 10f64.powf(snr_db / 10.0))
}

/// Maps bits to ±1 symbols and adds Gaussian noise: y_i = (2c_i − 1) + w_i
/// with w_i ~ N(0, σ²).
pub fn transmit<R: Rng>(bits: &[u8], cfg: &ChannelConfig, rng: &mut R) -> Vec<f64> {
    debug_assert!(bits.iter().all(|&b| b <= 1));
    let noise = Normal::new(0.0, cfg.sigma2.sqrt()).expect("sigma2 > 0");
    bits.iter()
        .map(|&c| (2.0 * c as f64 - 1.0) + noise.sample(rng))
        .collect()
}

/// Channel LLRs: LLR_i = −2y_i/σ². Positive values favor bit 0.
pub fn init_llrs(y: &[f64], sigma2: f64) -> Vec<f64> {
    assert!(sigma2 > 0.0);
    y.iter().map(|&v| -2.0 * v / sigma2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sigma2_follows_the_snr_formula() {
        assert!((sigma2_for_snr_db(0.0) - 0.5).abs() < 1e-12);
        assert!((sigma2_for_snr_db(10.0) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn near_noiseless_transmission_matches_the_symbols() {
        let cfg = ChannelConfig::from_snr_db(100.0, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bits = [0u8, 1, 1, 0];
        let y = transmit(&bits, &cfg, &mut rng);
        for (v, &b) in y.iter().zip(&bits) {
            assert!((v - (2.0 * b as f64 - 1.0)).abs() < 1e-3);
        }
    }

    #[test]
    fn llr_values_and_signs() {
        assert!((init_llrs(&[-1.0], 0.5)[0] - 4.0).abs() < 1e-12);
        assert_eq!(init_llrs(&[0.0], 0.5)[0], 0.0);
        for &y in &[-2.5, -0.1, 0.3, 1.7] {
            let llr = init_llrs(&[y], 0.25)[0];
            assert_eq!(llr.signum(), -y.signum());
        }
    }
}
