//! The periodic long-range extended Ising chain in a transverse field:
//! Kac-normalized couplings, their Fourier transform, the quasiparticle
//! dispersion and the finite-size critical fields.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Real};

/// One point of the Hamiltonian family: `N` sites, field `h`, range exponent
/// `alpha`. The Kac normalization is computed once on construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams<T = f64> {
    n: usize,
    h: T,
    alpha: T,
    kac: T,
}

impl<T: Real> ModelParams<T> {
    /// Requires `N` even with `N >= 4` and `alpha > 0`.
    pub fn new(n: usize, h: T, alpha: T) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("N must be even and >= 4, got {n}")));
        }
        if !h.is_finite() {
            return Err(Error::InvalidParameter(format!("h must be finite, got {h}")));
        }
        let kac = kac_normalization(n, alpha)?;
        Ok(Self { n, h, alpha, kac })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Kac normalization `A = Σ_{R=1}^{N/2} R^{-alpha}`.
    pub fn kac(&self) -> T {
        self.kac
    }

    /// Number of positive momenta, `N/2`.
    pub fn num_blocks(&self) -> usize {
        self.n / 2
    }

    pub fn with_field(&self, h: T) -> Result<Self> {
        Self::new(self.n, h, self.alpha)
    }

    pub fn with_alpha(&self, alpha: T) -> Result<Self> {
        Self::new(self.n, self.h, alpha)
    }

    pub fn grid(&self) -> MomentumGrid<T> {
        MomentumGrid::new(self.n).expect("validated size")
    }
}

/// Anti-periodic momenta `k_m = (2m - 1)π/N`, `m = 1..N/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumGrid<T> {
    momenta: Vec<T>,
}

impl<T: Real> MomentumGrid<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("grid needs even N >= 2, got {n}")));
        }
        let nn = T::from_count(n);
        let momenta = (1..=n / 2)
            .map(|m| T::from_count(2 * m - 1) * T::PI() / nn)
            .collect();
        Ok(Self { momenta })
    }

    pub fn momenta(&self) -> &[T] {
        &self.momenta
    }

    pub fn len(&self) -> usize {
        self.momenta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.momenta.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = T> + '_ {
        self.momenta.iter().copied()
    }
}

/// Sudden quench: ground state of `initial`, evolved under `final_params`
/// and sampled on `time_grid`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuenchProtocol<T = f64> {
    pub initial: ModelParams<T>,
    pub final_params: ModelParams<T>,
    time_grid: Vec<T>,
}

impl<T: Real> QuenchProtocol<T> {
    pub fn new(initial: ModelParams<T>, final_params: ModelParams<T>, time_grid: Vec<T>) -> Result<Self> {
        if initial.n() != final_params.n() {
            return Err(Error::SizeMismatch { expected: initial.n(), found: final_params.n() });
        }
        match time_grid.first() {
            Some(&t0) if t0 == T::zero() => {}
            _ => return Err(Error::InvalidParameter("time grid must start at 0".into())),
        }
        if time_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("time grid must be strictly increasing".into()));
        }
        Ok(Self { initial, final_params, time_grid })
    }

    pub fn time_grid(&self) -> &[T] {
        &self.time_grid
    }
}

/// Uniform grid `0, dt, 2dt, …` up to and including `t_max` (within `dt/2`).
pub fn uniform_time_grid<T: Real>(dt: T, t_max: T) -> Result<Vec<T>> {
    if !(dt > T::zero()) || t_max < T::zero() {
        return Err(Error::InvalidParameter(format!("bad time grid dt={dt}, t_max={t_max}")));
    }
    let steps = (t_max / dt + T::lit(0.5)).floor().to_usize().unwrap_or(0);
    Ok((0..=steps).map(|i| T::from_count(i) * dt).collect())
}

/// Default grid: `dt = 0.05` up to `t = 200`.
pub fn default_time_grid<T: Real>() -> Vec<T> {
    uniform_time_grid(T::lit(0.05), T::lit(200.0)).expect("valid defaults")
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
    }
    Ok(())
}

/// Generalized harmonic number `H_{N/2}^{(alpha)} = Σ_{R=1}^{N/2} R^{-alpha}`.
pub fn kac_normalization<T: Real>(n: usize, alpha: T) -> Result<T> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("N must be even and >= 2, got {n}")));
    }
    check_alpha(alpha)?;
    Ok(compensated_sum((1..=n / 2).map(|r| T::from_count(r).powf(-alpha))))
}

/// Alternating harmonic number `Σ_{R=1}^{N/2} (-1)^{R+1} R^{-alpha}`.
pub fn alternating_harmonic<T: Real>(n: usize, alpha: T) -> Result<T> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("N must be even and >= 2, got {n}")));
    }
    check_alpha(alpha)?;
    Ok(compensated_sum((1..=n / 2).map(|r| {
        let term = T::from_count(r).powf(-alpha);
        if r % 2 == 1 {
            term
        } else {
            -term
        }
    })))
}

/// Coupling `J_R = R^{-alpha} / A` for `1 <= R <= N/2`.
pub fn coupling<T: Real>(r: usize, params: &ModelParams<T>) -> Result<T> {
    let half = params.n() / 2;
    if r < 1 || r > half {
        return Err(Error::OutOfRange { index: r as i64, min: 1, max: half as i64 });
    }
    Ok(T::from_count(r).powf(-params.alpha()) / params.kac())
}

/// Fourier transform `J̃_k = (1/A) Σ_{n=1}^{N/2} e^{ikn} n^{-alpha}` by direct
/// compensated summation. Accepts any real `k`.
pub fn jk_coupling<T: Real>(k: T, params: &ModelParams<T>) -> Complex<T> {
    let half = params.n() / 2;
    let alpha = params.alpha();
    let re = compensated_sum((1..=half).map(|m| {
        let x = T::from_count(m);
        (k * x).cos() * x.powf(-alpha)
    }));
    let im = compensated_sum((1..=half).map(|m| {
        let x = T::from_count(m);
        (k * x).sin() * x.powf(-alpha)
    }));
    Complex::new(re / params.kac(), im / params.kac())
}

/// Quasiparticle energy `ω_k = 2 sqrt((h/2 - Re J̃_k)² + (Im J̃_k)²)`.
pub fn dispersion<T: Real>(k: T, params: &ModelParams<T>) -> T {
    dispersion_from(params.h(), jk_coupling(k, params))
}

pub(crate) fn dispersion_from<T: Real>(h: T, jk: Complex<T>) -> T {
    let two = T::lit(2.0);
    two * (h / two - jk.re).hypot(jk.im)
}

/// Gap-closing field at `k → 0`; equals 2 for every `alpha` because of the
/// Kac normalization.
pub fn critical_field_upper<T: Real>(_params: &ModelParams<T>) -> T {
    T::lit(2.0)
}

/// Finite-size gap-closing field at `k → π`: `-2 H̃_{N/2}^{(α)} / H_{N/2}^{(α)}`.
pub fn critical_field_lower<T: Real>(params: &ModelParams<T>) -> T {
    let alt = alternating_harmonic(params.n(), params.alpha()).expect("validated params");
    -T::lit(2.0) * alt / params.kac()
}

/// Range regimes separated by `alpha = 1` and `alpha = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeRegime {
    NonLocal,
    QuasiLocal,
    Local,
}

impl RangeRegime {
    pub fn of<T: Real>(alpha: T) -> Self {
        if alpha < T::one() {
            Self::NonLocal
        } else if alpha < T::lit(2.0) {
            Self::QuasiLocal
        } else {
            Self::Local
        }
    }
}

/// Equilibrium phase along the field direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldPhase {
    Ordered,
    Disordered,
}

impl FieldPhase {
    /// Ordered strictly between the two finite-size critical fields.
    pub fn of<T: Real>(params: &ModelParams<T>) -> Self {
        let lo = critical_field_lower(params);
        let hi = critical_field_upper(params);
        if params.h() > lo && params.h() < hi {
            Self::Ordered
        } else {
            Self::Disordered
        }
    }
}
