//! Experiment configuration: TOML sections per concern, every field
//! defaulted, and physics sanity checks that never run the pipeline.

use std::path::{Path, PathBuf};

use lrquench::analysis::{DEFAULT_MARGIN_THRESHOLD, DEFAULT_NOISE_FLOOR};
use lrquench::{FieldPhase, ModelParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Kind {
    Cgc,
    Fgc,
    RateFunction,
    FiniteSizeSweep,
    TcProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub n: usize,
    pub h_initial: f64,
    pub alpha_initial: f64,
    pub h_final: f64,
    pub alpha_final: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self { n: 200, h_initial: 0.5, alpha_initial: 0.5, h_final: 0.5, alpha_final: 0.8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSection {
    /// Snapshot time treated as the steady state.
    pub steady_state_time: f64,
    /// Rate-function grid spacing and extent.
    pub dt: f64,
    pub t_max: f64,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self { steady_state_time: 200.0, dt: 0.05, t_max: 20.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitSection {
    /// Inclusive `[R_min, R_max]`; absent selects the default tail window.
    pub window: Option<[usize; 2]>,
    pub noise_floor: f64,
    pub margin_threshold: f64,
    pub background_jump: Option<f64>,
}

impl Default for FitSection {
    fn default() -> Self {
        Self {
            window: None,
            noise_floor: DEFAULT_NOISE_FLOOR,
            margin_threshold: DEFAULT_MARGIN_THRESHOLD,
            background_jump: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileSection {
    /// Distances to evaluate; absent means `1..=N/2-1`.
    pub r_list: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub sizes: Vec<usize>,
    /// Known thermodynamic-limit exponent; absent uses the largest size.
    pub eta_inf: Option<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self { sizes: (1..=10).map(|i| 50 * i).collect(), eta_inf: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FgcSection {
    pub h_same_phase: f64,
    pub h_cross_phase: f64,
}

impl Default for FgcSection {
    fn default() -> Self {
        Self { h_same_phase: 1.5, h_cross_phase: 2.5 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentumSource {
    Grid,
    Continuous,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CuspSection {
    pub median_factor: f64,
    pub half_window: usize,
    pub merge_gap: usize,
    pub abs_floor: f64,
    pub critical_momenta: MomentumSource,
}

impl Default for CuspSection {
    fn default() -> Self {
        let d = lrquench::CuspDetector::<f64>::default();
        Self {
            median_factor: d.median_factor,
            half_window: d.half_window,
            merge_gap: d.merge_gap,
            abs_floor: d.abs_floor,
            critical_momenta: MomentumSource::Grid,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    /// Worker threads; 0 lets the pool pick the core count.
    pub workers: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from("lrquench-output"), workers: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub time: TimeSection,
    #[serde(default)]
    pub fit: FitSection,
    #[serde(default)]
    pub profile: ProfileSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub fgc: FgcSection,
    #[serde(default)]
    pub cusps: CuspSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl ExperimentConfig {
    pub fn new(kind: Kind) -> Self {
        Self {
            kind,
            model: ModelSection::default(),
            time: TimeSection::default(),
            fit: FitSection::default(),
            profile: ProfileSection::default(),
            sweep: SweepSection::default(),
            fgc: FgcSection::default(),
            cusps: CuspSection::default(),
            output: OutputSection::default(),
        }
    }

    /// Reads a TOML config, or the `config` object of a JSON run summary.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            #[derive(Deserialize)]
            struct Summary {
                config: ExperimentConfig,
            }
            let s: Summary =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            return Ok(s.config);
        }
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn initial(&self) -> CliResult<ModelParams<f64>> {
        Ok(ModelParams::new(self.model.n, self.model.h_initial, self.model.alpha_initial)?)
    }

    pub fn final_params(&self) -> CliResult<ModelParams<f64>> {
        Ok(ModelParams::new(self.model.n, self.model.h_final, self.model.alpha_final)?)
    }

    pub fn r_list(&self) -> Vec<usize> {
        self.profile.r_list.clone().unwrap_or_else(|| (1..self.model.n / 2).collect())
    }

    /// Every problem found, one message per line. Empty means valid.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        let m = &self.model;
        let check_n = |n: usize, what: &str, out: &mut Vec<String>| {
            if !n.is_multiple_of(2) {
                out.push(format!("{what}: N = {n} is odd; the momentum grid needs even N"));
            } else if n < 4 {
                out.push(format!("{what}: N = {n} is too small (need N >= 4)"));
            }
        };
        if self.kind != Kind::FiniteSizeSweep {
            check_n(m.n, "model.n", &mut out);
        }
        for (name, v) in [("model.h_initial", m.h_initial), ("model.h_final", m.h_final)] {
            if !v.is_finite() || v < 0.0 {
                out.push(format!("{name}: field must be finite and >= 0, got {v}"));
            }
        }
        for (name, v) in [("model.alpha_initial", m.alpha_initial), ("model.alpha_final", m.alpha_final)] {
            if !v.is_finite() || v <= 0.0 {
                out.push(format!("{name}: alpha must be finite and > 0, got {v}"));
            }
        }
        let t = &self.time;
        if !t.steady_state_time.is_finite() || t.steady_state_time < 0.0 {
            out.push(format!("time.steady_state_time: must be >= 0, got {}", t.steady_state_time));
        }
        if self.kind == Kind::RateFunction {
            if !(t.dt > 0.0) || !(t.t_max > t.dt) {
                out.push(format!("time: need 0 < dt < t_max, got dt = {}, t_max = {}", t.dt, t.t_max));
            }
            if self.cusps.median_factor <= 0.0 || self.cusps.half_window == 0 {
                out.push("cusps: median_factor must be > 0 and half_window >= 1".into());
            }
        }
        if let Some([lo, hi]) = self.fit.window {
            if lo < 1 || hi < lo {
                out.push(format!("fit.window: need 1 <= R_min <= R_max, got [{lo}, {hi}]"));
            }
        }
        if !(self.fit.noise_floor >= 0.0) || !(self.fit.margin_threshold >= 0.0) {
            out.push("fit: noise_floor and margin_threshold must be >= 0".into());
        }
        if let Some(j) = self.fit.background_jump {
            if !(j > 1.0) {
                out.push(format!("fit.background_jump: must exceed 1, got {j}"));
            }
        }
        if let Some(rs) = &self.profile.r_list {
            let max = m.n / 2 - 1;
            if rs.is_empty() {
                out.push("profile.r_list: empty".into());
            }
            if let Some(bad) = rs.iter().find(|&&r| r < 1 || r > max) {
                out.push(format!("profile.r_list: distance {bad} outside [1, {max}]"));
            }
        }
        match self.kind {
            Kind::Cgc => {
                if m.alpha_initial >= 1.0 {
                    out.push(format!(
                        "model.alpha_initial: the coarse-grained criterion starts in the non-local regime (alpha < 1), got {}",
                        m.alpha_initial
                    ));
                }
            }
            Kind::Fgc => self.fgc_diagnostics(&mut out),
            Kind::FiniteSizeSweep => {
                let s = &self.sweep.sizes;
                if s.len() < lrquench::analysis::MIN_SIZES {
                    out.push(format!("sweep.sizes: need at least {} sizes, got {}", lrquench::analysis::MIN_SIZES, s.len()));
                }
                if s.windows(2).any(|w| w[0] >= w[1]) {
                    out.push("sweep.sizes: must be strictly increasing".into());
                }
                for &n in s {
                    check_n(n, "sweep.sizes", &mut out);
                }
                if self.profile.r_list.is_some() {
                    out.push("profile.r_list: not used by finite_size_sweep (each size uses 1..N/2-1)".into());
                }
            }
            Kind::RateFunction | Kind::TcProfile => {}
        }
        out
    }

    fn fgc_diagnostics(&self, out: &mut Vec<String>) {
        let m = &self.model;
        if m.alpha_final != m.alpha_initial {
            out.push(format!(
                "model.alpha_final: fgc quenches keep alpha fixed; alpha_initial = {} but alpha_final = {}",
                m.alpha_initial, m.alpha_final
            ));
        }
        if !m.n.is_multiple_of(2) || m.n < 4 || !(m.alpha_initial > 0.0) {
            return;
        }
        let phase = |h: f64| ModelParams::new(m.n, h, m.alpha_initial).map(|p| FieldPhase::of(&p));
        let expect = [
            ("model.h_initial", m.h_initial, FieldPhase::Ordered, "must start in the ordered phase"),
            ("fgc.h_same_phase", self.fgc.h_same_phase, FieldPhase::Ordered, "must stay in the ordered phase"),
            ("fgc.h_cross_phase", self.fgc.h_cross_phase, FieldPhase::Disordered, "must cross into the disordered phase"),
        ];
        for (name, h, wanted, why) in expect {
            match phase(h) {
                Ok(p) if p == wanted => {}
                Ok(p) => out.push(format!("{name} = {h}: the fine-grained criterion {why}, but this field is {}", phase_name(p))),
                Err(e) => out.push(format!("{name}: {e}")),
            }
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        let d = self.diagnostics();
        if d.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(d.join("\n")))
        }
    }
}

fn phase_name(p: FieldPhase) -> &'static str {
    match p {
        FieldPhase::Ordered => "ordered",
        FieldPhase::Disordered => "disordered",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_for_every_kind() {
        for kind in [Kind::Cgc, Kind::Fgc, Kind::RateFunction, Kind::FiniteSizeSweep, Kind::TcProfile] {
            let mut cfg = ExperimentConfig::new(kind);
            if kind == Kind::Fgc {
                cfg.model.alpha_final = cfg.model.alpha_initial;
            }
            assert!(cfg.diagnostics().is_empty(), "{kind:?}: {:?}", cfg.diagnostics());
        }
    }

    #[test]
    fn kind_specific_checks() {
        let mut cgc = ExperimentConfig::new(Kind::Cgc);
        cgc.model.alpha_initial = 1.5;
        assert_eq!(cgc.diagnostics().len(), 1);

        let mut sweep = ExperimentConfig::new(Kind::FiniteSizeSweep);
        sweep.sweep.sizes = vec![40, 30, 51];
        assert_eq!(sweep.diagnostics().len(), 3);

        let mut rate = ExperimentConfig::new(Kind::RateFunction);
        rate.time.dt = 0.0;
        assert!(matches!(rate.validate(), Err(CliError::Config(_))));
    }

    #[test]
    fn toml_sections_fill_from_defaults() {
        let cfg: ExperimentConfig = toml::from_str("kind = \"tc_profile\"\n[fit]\nwindow = [2, 30]\n").unwrap();
        assert_eq!(cfg.fit.window, Some([2, 30]));
        assert_eq!(cfg.fit.noise_floor, DEFAULT_NOISE_FLOOR);
        assert_eq!(cfg.model, ModelSection::default());
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&json).unwrap(), cfg);
    }
}
