//! Flooding-schedule sum-product belief propagation in the LLR domain.

use crate::gf2::ParityCheckMatrix;

/// Default iteration cap for belief propagation.
pub const DEFAULT_MAX_ITERS: usize = 50;

// Message magnitudes are clamped here to keep tanh/atanh finite at high SNR.
const MSG_CLAMP: f64 = 30.0;

/// Decoder output.
#[derive(Debug, Clone)]
pub struct DecodeResult {
    pub hard_decision: Vec<u8>,
    /// Whether the syndrome reached zero within the iteration budget.
    pub converged: bool,
    /// Full iterations performed; 0 when the channel decisions already
    /// satisfy every check.
    pub iterations_used: usize,
    pub final_llrs: Vec<f64>,
}

/// Sum-product decoding with the tanh-product check rule and early exit on
/// a zero syndrome. Hard decision is ĉ_i = 1 iff the posterior LLR is
/// negative (positive LLRs favor bit 0; an exact zero resolves to 0).
pub fn bp_decode(h: &ParityCheckMatrix, channel_llrs: &[f64], max_iters: usize) -> DecodeResult {
    let (m, n) = h.dims();
    assert_eq!(channel_llrs.len(), n, "LLR length must equal n");

    // Flattened edge list, check-major.
    let mut edge_var = Vec::with_capacity(h.ones());
    let mut check_edges = Vec::with_capacity(m + 1);
    check_edges.push(0);
    for i in 0..m {
        edge_var.extend_from_slice(h.row_support(i));
        check_edges.push(edge_var.len());
    }
    let mut var_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &v) in edge_var.iter().enumerate() {
        var_edges[v].push(e);
    }

    let hard = |llrs: &[f64]| -> Vec<u8> { llrs.iter().map(|&l| (l < 0.0) as u8).collect() };

    let mut decision = hard(channel_llrs);
    if h.syndrome_is_zero(&decision) {
        return DecodeResult {
            hard_decision: decision,
            converged: true,
            iterations_used: 0,
            final_llrs: channel_llrs.to_vec(),
        };
    }

    let clamp = |v: f64| v.clamp(-MSG_CLAMP, MSG_CLAMP);
    let mut v2c: Vec<f64> = edge_var.iter().map(|&v| clamp(channel_llrs[v])).collect();
    let mut c2v = vec![0.0; edge_var.len()];
    let mut posterior = channel_llrs.to_vec();
    let mut tanh_buf: Vec<f64> = Vec::new();
    let mut suffix: Vec<f64> = Vec::new();

    for iteration in 1..=max_iters {
        // Check update: leave-one-out tanh products via prefix/suffix scans,
        // avoiding division so zero messages stay exact.
        for i in 0..m {
            let edges = check_edges[i]..check_edges[i + 1];
            let deg = edges.len();
            if deg == 0 {
                continue;
            }
            tanh_buf.clear();
            tanh_buf.extend(edges.clone().map(|e| (v2c[e] / 2.0).tanh()));
            suffix.clear();
            suffix.resize(deg + 1, 1.0);
            for idx in (0..deg).rev() {
                suffix[idx] = suffix[idx + 1] * tanh_buf[idx];
            }
            let mut prefix = 1.0;
            for (idx, e) in edges.enumerate() {
                let product: f64 = prefix * suffix[idx + 1];
                let bounded = product.clamp(-(1.0 - 1e-15), 1.0 - 1e-15);
                c2v[e] = clamp(2.0 * bounded.atanh());
                prefix *= tanh_buf[idx];
            }
        }

        // Variable update and posterior.
        for v in 0..n {
            let sum: f64 = var_edges[v].iter().map(|&e| c2v[e]).sum();
            posterior[v] = channel_llrs[v] + sum;
            for &e in &var_edges[v] {
                v2c[e] = clamp(posterior[v] - c2v[e]);
            }
        }

        decision = hard(&posterior);
        if h.syndrome_is_zero(&decision) {
            return DecodeResult {
                hard_decision: decision,
                converged: true,
                iterations_used: iteration,
                final_llrs: posterior,
            };
        }
    }

    DecodeResult {
        hard_decision: decision,
        converged: false,
        iterations_used: max_iters,
        final_llrs: posterior,
    }
}
