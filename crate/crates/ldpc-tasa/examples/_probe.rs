use ldpc_tasa::baselines::{construct_peg, PegConfig};
use ldpc_tasa::metrics::count_4_cycles;

fn main() {
    for n in [36usize, 40, 48, 56, 64] {
        let mut bad = 0;
        for seed in 0..20 {
            let h = construct_peg(&PegConfig::regular(n, n / 2, 3, seed)).unwrap();
            if count_4_cycles(&h) > 0 { bad += 1; }
        }
        println!("n={n}: {bad}/20 seeds with c4>0");
    }
}
