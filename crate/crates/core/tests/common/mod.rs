#![allow(dead_code)]

use lrquench::oracle::pipeline_mismatch;
use lrquench::ModelParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ED_TOL: f64 = 1e-6;

pub fn params(n: usize, h: f64, alpha: f64) -> ModelParams<f64> {
    ModelParams::new(n, h, alpha).unwrap()
}

pub fn compare_quench(n: usize, hi: f64, ai: f64, hf: f64, af: f64, t: f64) -> f64 {
    pipeline_mismatch(&params(n, hi, ai), &params(n, hf, af), t).unwrap().worst()
}

/// Twenty random quench draws over `N ∈ {4, 6, 8, 10}`, with their mismatch.
pub fn random_quench_mismatches(seed: u64) -> Vec<(String, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in [4, 6, 8, 10] {
        for _ in 0..5 {
            let hi = rng.gen_range(0.2..3.0);
            let ai = rng.gen_range(0.3..5.0);
            let hf = rng.gen_range(0.2..3.0);
            let af = rng.gen_range(0.3..5.0);
            let t = [0.0, 0.5, 1.0, 5.0][rng.gen_range(0..4)];
            let label = format!("N={n} ({hi:.3},{ai:.3})->({hf:.3},{af:.3}) t={t}");
            out.push((label, compare_quench(n, hi, ai, hf, af, t)));
        }
    }
    out
}
