//! Experiment execution. Each kind writes its CSV series first, then a JSON
//! summary carrying the resolved config; a numerical failure is recorded in
//! the summary before it is returned.

use lrquench::analysis::{fit_profile, FitOptions, FiniteSizeFit};
use lrquench::model::uniform_time_grid;
use lrquench::observables::POSITIVITY_TOL;
use lrquench::{
    cgc_verdict, evolve, fgc_verdict, finite_size_fit, ground_state, match_cusps, predicted_cusp_times,
    rate_function_at, tc_profile, CriticalMomentumSource, CuspDetector, EtaReference, ModelParams, ProfilePoint,
    ScalingVerdict,
};
use log::info;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::artifacts::Artifacts;
use crate::config::{ExperimentConfig, Kind, MomentumSource};
use crate::error::{CliError, CliResult};

pub const SUMMARY_FILE: &str = "summary.json";

fn fit_options(cfg: &ExperimentConfig) -> FitOptions<f64> {
    FitOptions {
        window: cfg.fit.window.map(|[lo, hi]| (lo, hi)),
        noise_floor: cfg.fit.noise_floor,
        margin_threshold: cfg.fit.margin_threshold,
        background_jump: cfg.fit.background_jump,
    }
}

fn steady_profile(cfg: &ExperimentConfig, initial: &ModelParams<f64>, fin: &ModelParams<f64>, rs: &[usize]) -> CliResult<Vec<ProfilePoint<f64>>> {
    let state = evolve(&ground_state(initial)?, fin, cfg.time.steady_state_time)?;
    Ok(tc_profile(&state, rs)?)
}

fn write_profile(art: &mut Artifacts, name: &str, profile: &[ProfilePoint<f64>]) -> CliResult<()> {
    art.csv(name, &["R", "I_R"], profile.iter().map(|p| (p.r, p.total_correlation)))
}

fn verdict_json(v: &CliResult<ScalingVerdict<f64>>) -> Value {
    match v {
        Ok(v) => json!(v),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

/// Outcome of a kind-specific runner: the `result` object for the summary
/// and, if the pipeline failed part-way, the error to report.
struct Outcome {
    result: Value,
    error: Option<CliError>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Self { result, error: None }
    }

    fn with(result: Value, error: Option<CliError>) -> Self {
        Self { result, error }
    }
}

fn run_profile(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let (initial, fin) = (cfg.initial()?, cfg.final_params()?);
    let profile = steady_profile(cfg, &initial, &fin, &cfg.r_list())?;
    write_profile(art, "tc_profile.csv", &profile)?;
    let verdict = fit_profile(&profile, &fit_options(cfg)).map_err(CliError::from);
    let mut result = json!({ "verdict": verdict_json(&verdict) });
    if cfg.kind == Kind::Cgc {
        let cgc = verdict.as_ref().map_err(|e| e.to_string()).and_then(|v| cgc_verdict(v).map_err(|e| e.to_string()));
        result["cgc"] = match &cgc {
            Ok(c) => json!(c),
            Err(e) => json!({ "error": e }),
        };
        if let Ok(c) = cgc {
            info!("coarse-grained verdict: {}", json!(c));
        }
    }
    if let Ok(v) = &verdict {
        info!("profile classified {} (margin {:.4})", json!(v.model), v.margin);
    }
    Ok(Outcome::with(result, verdict.err()))
}

fn run_fgc(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let initial = cfg.initial()?;
    let alpha = cfg.model.alpha_initial;
    let rs = cfg.r_list();
    let opts = fit_options(cfg);
    let mut verdicts = Vec::new();
    for (label, h) in [("same_phase", cfg.fgc.h_same_phase), ("cross_phase", cfg.fgc.h_cross_phase)] {
        let fin = ModelParams::new(cfg.model.n, h, alpha)?;
        let profile = steady_profile(cfg, &initial, &fin, &rs)?;
        write_profile(art, &format!("tc_profile_{label}.csv"), &profile)?;
        verdicts.push(fit_profile(&profile, &opts).map_err(CliError::from));
    }
    let mut result = json!({
        "same_phase": verdict_json(&verdicts[0]),
        "cross_phase": verdict_json(&verdicts[1]),
    });
    let (same, cross) = (verdicts.remove(0), verdicts.remove(0));
    let outcome = match (same, cross) {
        (Ok(s), Ok(c)) => fgc_verdict(&s, &c).map_err(CliError::from),
        (Err(e), _) | (_, Err(e)) => Err(e),
    };
    match outcome {
        Ok(o) => {
            info!("fine-grained verdict: {}", json!(o.verdict));
            result["fgc"] = json!(o);
            Ok(Outcome::ok(result))
        }
        Err(e) => {
            result["fgc"] = json!({ "error": e.to_string() });
            Ok(Outcome::with(result, Some(e)))
        }
    }
}

#[derive(Serialize)]
struct CuspRecord {
    t: f64,
    rate: f64,
    index: usize,
}

fn run_rate(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let (initial, fin) = (cfg.initial()?, cfg.final_params()?);
    let times = uniform_time_grid(cfg.time.dt, cfg.time.t_max)?;
    let f = rate_function_at(&initial, &fin, &times)?;
    art.csv("rate_function.csv", &["t", "rate"], f.times.iter().zip(&f.rate))?;
    let detector = CuspDetector {
        median_factor: cfg.cusps.median_factor,
        half_window: cfg.cusps.half_window,
        merge_gap: cfg.cusps.merge_gap,
        abs_floor: cfg.cusps.abs_floor,
    };
    let cusps = detector.detect(&f);
    let source = match cfg.cusps.critical_momenta {
        MomentumSource::Grid => CriticalMomentumSource::Grid,
        MomentumSource::Continuous => CriticalMomentumSource::Continuous,
    };
    let predicted = predicted_cusp_times(&initial, &fin, cfg.time.t_max, source)?;
    let matching = match_cusps(&cusps, &predicted, cfg.time.dt);
    info!("{} cusps detected, {} on predicted times", cusps.len(), matching.matched.len());
    let records: Vec<CuspRecord> = cusps.iter().map(|c| CuspRecord { t: c.t, rate: c.rate, index: c.index }).collect();
    Ok(Outcome::ok(json!({
        "cusps": records,
        "predicted": predicted,
        "matching": matching,
    })))
}

#[derive(Serialize)]
struct SweepRow {
    n: usize,
    verdict: Value,
}

fn run_sweep(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let opts = fit_options(cfg);
    let m = &cfg.model;
    let runs: Vec<(usize, Vec<ProfilePoint<f64>>)> = cfg
        .sweep
        .sizes
        .par_iter()
        .map(|&n| {
            let initial = ModelParams::new(n, m.h_initial, m.alpha_initial)?;
            let fin = ModelParams::new(n, m.h_final, m.alpha_final)?;
            let rs: Vec<usize> = (1..n / 2).collect();
            info!("sweep: N = {n}");
            Ok((n, steady_profile(cfg, &initial, &fin, &rs)?))
        })
        .collect::<CliResult<_>>()?;
    let mut rows = Vec::new();
    let mut etas = Vec::new();
    for (n, profile) in &runs {
        write_profile(art, &format!("profiles/tc_profile_N{n}.csv"), profile)?;
        let v = fit_profile(profile, &opts).map_err(CliError::from);
        if let Ok(ScalingVerdict { eta: Some(eta), .. }) = &v {
            etas.push((*n, *eta));
        }
        rows.push(SweepRow { n: *n, verdict: verdict_json(&v) });
    }
    art.csv("finite_size_sweep.csv", &["N", "eta_N"], etas.iter().copied())?;
    let reference = cfg.sweep.eta_inf.map_or(EtaReference::LargestSize, EtaReference::Known);
    let fit: CliResult<FiniteSizeFit<f64>> = finite_size_fit(&runs, &opts, reference).map_err(CliError::from);
    let mut result = json!({ "sizes": rows });
    match fit {
        Ok(f) => {
            info!("convergence exponent {:.4}", f.beta_exponent);
            result["finite_size_fit"] = json!(f);
            Ok(Outcome::ok(result))
        }
        Err(e) => {
            result["finite_size_fit"] = json!({ "error": e.to_string() });
            Ok(Outcome::with(result, Some(e)))
        }
    }
}

fn tolerances(cfg: &ExperimentConfig) -> Value {
    json!({
        "noise_floor": cfg.fit.noise_floor,
        "margin_threshold": cfg.fit.margin_threshold,
        "positivity_tol": POSITIVITY_TOL,
        "cusp_match_tolerance": cfg.time.dt,
        "cusp_median_factor": cfg.cusps.median_factor,
    })
}

/// Runs one experiment; artifacts land in `cfg.output.dir`.
pub fn run(cfg: &ExperimentConfig) -> CliResult<()> {
    cfg.validate()?;
    let mut art = Artifacts::create(&cfg.output.dir)?;
    info!("running {} into {}", json!(cfg.kind), cfg.output.dir.display());
    let outcome = match cfg.kind {
        Kind::Cgc | Kind::TcProfile => run_profile(cfg, &mut art),
        Kind::Fgc => run_fgc(cfg, &mut art),
        Kind::RateFunction => run_rate(cfg, &mut art),
        Kind::FiniteSizeSweep => run_sweep(cfg, &mut art),
    };
    let (result, error) = match outcome {
        Ok(o) => (o.result, o.error),
        Err(e) => (Value::Null, Some(e)),
    };
    let mut files = art.written().to_vec();
    files.push(SUMMARY_FILE.into());
    files.push(crate::LOG_FILE.into());
    let summary = json!({
        "software": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
        "kind": cfg.kind,
        "log_base": "bits",
        "config": cfg,
        "tolerances": tolerances(cfg),
        "result": result,
        "error": error.as_ref().map(|e| json!({ "message": e.to_string(), "exit_code": e.exit_code() })),
        "artifacts": files,
    });
    art.json(SUMMARY_FILE, &summary)?;
    match error {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
