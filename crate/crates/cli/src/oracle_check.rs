use lrquench::oracle::{pipeline_mismatch, MAX_SITES};
use lrquench::ModelParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};

pub struct CheckOptions {
    pub draws: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub sizes: Vec<usize>,
}

/// Random quenches compared against exact diagonalization, printed as a
/// table. Fails with a numerical error if any row exceeds the tolerance.
pub fn oracle_check(opts: &CheckOptions) -> CliResult<()> {
    if opts.sizes.is_empty() || opts.sizes.iter().any(|&n| n % 2 != 0 || !(4..=MAX_SITES).contains(&n)) {
        return Err(CliError::Config(format!("sizes must be even and within [4, {MAX_SITES}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    println!(
        "{:>3} {:>7} {:>7} {:>7} {:>7} {:>5}  {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}  result",
        "N", "h_i", "a_i", "h_f", "a_f", "t", "energy", "m_z", "corr", "I_R", "rho", "rate"
    );
    let mut failures = 0;
    for i in 0..opts.draws {
        let n = opts.sizes[i % opts.sizes.len()];
        let (hi, ai) = (rng.gen_range(0.2..3.0), rng.gen_range(0.3..5.0));
        let (hf, af) = (rng.gen_range(0.2..3.0), rng.gen_range(0.3..5.0));
        let t = [0.0, 0.5, 1.0, 5.0][rng.gen_range(0..4)];
        let m = pipeline_mismatch(&ModelParams::new(n, hi, ai)?, &ModelParams::new(n, hf, af)?, t)?;
        let pass = m.worst() < opts.tolerance;
        failures += usize::from(!pass);
        println!(
            "{n:>3} {hi:>7.3} {ai:>7.3} {hf:>7.3} {af:>7.3} {t:>5.1}  {:>9.1e} {:>9.1e} {:>9.1e} {:>9.1e} {:>9.1e} {:>9.1e}  {}",
            m.ground_energy,
            m.magnetization,
            m.correlators,
            m.total_correlation,
            m.density_matrix,
            m.rate,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!("{} of {} draws within {:e}", opts.draws - failures, opts.draws, opts.tolerance);
    if failures > 0 {
        return Err(CliError::OracleMismatch(failures));
    }
    Ok(())
}
