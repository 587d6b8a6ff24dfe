//! Loschmidt echo rate functions and their non-analytic cusps.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{block_hamiltonians, bogoliubov_from, bogoliubov_pairs, ground_state, BogoliubovPair};
use crate::linalg::unitary_propagator;
use crate::model::{jk_coupling, ModelParams, QuenchProtocol};
use crate::scalar::{compensated_sum, Real};

/// Rate function sampled on a time grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateFunction<T = f64> {
    pub times: Vec<T>,
    pub rate: Vec<T>,
}

/// Per-block overlap factors `α_k² β_k²` and final energies for the analytic
/// echo `|A_k(t)|² = 1 - 4 α² β² sin²(ω_k^f t)`.
fn mixing<T: Real>(initial: &[BogoliubovPair<T>], fin: &[BogoliubovPair<T>]) -> Vec<(T, T)> {
    initial
        .iter()
        .zip(fin)
        .map(|(i, f)| {
            let alpha = f.u * i.u + f.v * i.v;
            let beta = f.u * i.v - f.v * i.u;
            (alpha * alpha * beta * beta, f.omega)
        })
        .collect()
}

fn check_sizes<T: Real>(initial: &ModelParams<T>, fin: &ModelParams<T>) -> Result<()> {
    if initial.n() != fin.n() {
        return Err(Error::SizeMismatch { expected: initial.n(), found: fin.n() });
    }
    Ok(())
}

fn safe_ln<T: Real>(x: T) -> T {
    x.max(T::min_positive_value()).ln()
}

/// `R(t) = -(1/N) Σ_{k>0} ln(1 - 4 α_k² β_k² sin²(ω_k^f t))`, natural log.
pub fn rate_function<T: Real>(protocol: &QuenchProtocol<T>) -> Result<RateFunction<T>> {
    rate_function_at(&protocol.initial, &protocol.final_params, protocol.time_grid())
}

pub fn rate_function_at<T: Real>(initial: &ModelParams<T>, fin: &ModelParams<T>, times: &[T]) -> Result<RateFunction<T>> {
    check_sizes(initial, fin)?;
    let factors = mixing(&bogoliubov_pairs(initial)?, &bogoliubov_pairs(fin)?);
    let four = T::lit(4.0);
    let inv_n = T::one() / T::from_count(initial.n());
    let rate = times
        .par_iter()
        .map(|&t| {
            let s = compensated_sum(factors.iter().map(|&(ab, w)| {
                let sn = (w * t).sin();
                safe_ln(T::one() - four * ab * sn * sn)
            }));
            T::zero() - s * inv_n
        })
        .collect();
    Ok(RateFunction { times: times.to_vec(), rate })
}

/// Same rate function from the block overlaps `|⟨ψ_k|e^{-i H_k^f t}|ψ_k⟩|²`,
/// evaluated with matrix exponentials instead of Bogoliubov angles.
pub fn rate_function_from_blocks<T: Real>(
    initial: &ModelParams<T>,
    fin: &ModelParams<T>,
    times: &[T],
) -> Result<RateFunction<T>> {
    check_sizes(initial, fin)?;
    let gs = ground_state(initial)?;
    let hams = block_hamiltonians(fin);
    let inv_n = T::one() / T::from_count(initial.n());
    let rate = times
        .par_iter()
        .map(|&t| {
            let s = compensated_sum(gs.blocks.iter().zip(&hams).map(|(b, bh)| {
                let u = unitary_propagator(&bh.matrix, t);
                let amp: Complex<T> = b.rho.trace_product(&u);
                safe_ln(amp.norm_sqr())
            }));
            -s * inv_n
        })
        .collect();
    Ok(RateFunction { times: times.to_vec(), rate })
}

/// A detected non-analytic point of a sampled rate function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cusp<T = f64> {
    pub index: usize,
    pub t: T,
    pub rate: T,
}

/// Cusp detector settings.
///
/// A cusp of the rate function is a sharp maximum, so a sample is flagged
/// when the negated second difference `-Δ²R` exceeds `median_factor` times the
/// median of `|Δ²R|` over the surrounding `±half_window` samples. The local
/// reference keeps smooth transients (whose curvature is large but spread
/// over many samples) from being flagged.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CuspDetector<T = f64> {
    pub median_factor: T,
    pub half_window: usize,
    /// Flags closer than this many samples are merged into one cusp.
    pub merge_gap: usize,
    /// Absolute floor on `-Δ²R`, guarding constant rate functions.
    pub abs_floor: T,
}

impl<T: Real> Default for CuspDetector<T> {
    fn default() -> Self {
        Self { median_factor: T::lit(10.0), half_window: 20, merge_gap: 2, abs_floor: T::lit(1e-10) }
    }
}

fn median<T: Real>(values: &mut [T]) -> T {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite rate"));
    values[values.len() / 2]
}

impl<T: Real> CuspDetector<T> {
    pub fn detect(&self, f: &RateFunction<T>) -> Vec<Cusp<T>> {
        let n = f.rate.len();
        if n < 3 {
            return Vec::new();
        }
        let d2: Vec<T> = (1..n - 1).map(|i| f.rate[i + 1] - f.rate[i] - f.rate[i] + f.rate[i - 1]).collect();
        let abs: Vec<T> = d2.iter().map(|x| x.abs()).collect();

        let mut cusps = Vec::new();
        let mut cluster: Option<(usize, usize)> = None; // (best index, last flagged index)
        let flush = |c: Option<(usize, usize)>, out: &mut Vec<Cusp<T>>| {
            if let Some((best, _)) = c {
                out.push(Cusp { index: best, t: f.times[best], rate: f.rate[best] });
            }
        };
        for (j, &v) in d2.iter().enumerate() {
            let lo = j.saturating_sub(self.half_window);
            let hi = (j + self.half_window + 1).min(abs.len());
            let reference = median(&mut abs[lo..hi].to_vec());
            if -v <= (reference * self.median_factor).max(self.abs_floor) {
                continue;
            }
            let i = j + 1;
            cluster = match cluster {
                Some((best, last)) if i - last <= self.merge_gap => {
                    Some((if f.rate[i] > f.rate[best] { i } else { best }, i))
                }
                other => {
                    flush(other, &mut cusps);
                    Some((i, i))
                }
            };
        }
        flush(cluster, &mut cusps);
        cusps
    }
}

pub fn detect_cusps<T: Real>(f: &RateFunction<T>) -> Vec<Cusp<T>> {
    CuspDetector::default().detect(f)
}

fn alpha_sq_minus_half<T: Real>(k: T, initial: &ModelParams<T>, fin: &ModelParams<T>) -> Result<T> {
    let i = bogoliubov_from(k, initial.h(), jk_coupling(k, initial))?;
    let f = bogoliubov_from(k, fin.h(), jk_coupling(k, fin))?;
    let a = f.u * i.u + f.v * i.v;
    Ok(a * a - T::lit(0.5))
}

/// Momenta `k* ∈ (0, π)` where `α_k² = 1/2`, treating `k` as continuous and
/// refining each bracket by bisection. Meaningful when `J̃_k` varies slowly
/// on the scale of the grid spacing (`alpha > 1`).
pub fn critical_momenta<T: Real>(initial: &ModelParams<T>, fin: &ModelParams<T>) -> Result<Vec<T>> {
    check_sizes(initial, fin)?;
    const SAMPLES: usize = 4096;
    let pi = T::PI();
    let ks: Vec<T> = (0..SAMPLES).map(|j| pi * (T::from_count(j) + T::lit(0.5)) / T::from_count(SAMPLES)).collect();
    let vals = ks.iter().map(|&k| alpha_sq_minus_half(k, initial, fin)).collect::<Result<Vec<T>>>()?;
    let mut roots = Vec::new();
    for j in 0..SAMPLES - 1 {
        if vals[j].is_zero() {
            roots.push(ks[j]);
            continue;
        }
        if vals[j] * vals[j + 1] >= T::zero() {
            continue;
        }
        let (mut lo, mut hi, mut flo) = (ks[j], ks[j + 1], vals[j]);
        for _ in 0..200 {
            let mid = (lo + hi) * T::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = alpha_sq_minus_half(mid, initial, fin)?;
            if fm * flo > T::zero() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push((lo + hi) * T::lit(0.5));
    }
    Ok(roots)
}

/// Near-critical grid modes: both grid momenta on either side of every sign
/// change of `α_k² - 1/2`. At finite `N` these modes produce the sharp maxima
/// of the rate function.
pub fn critical_grid_modes<T: Real>(initial: &ModelParams<T>, fin: &ModelParams<T>) -> Result<Vec<BogoliubovPair<T>>> {
    check_sizes(initial, fin)?;
    let bi = bogoliubov_pairs(initial)?;
    let bf = bogoliubov_pairs(fin)?;
    let dev: Vec<T> = bi
        .iter()
        .zip(&bf)
        .map(|(i, f)| {
            let a = f.u * i.u + f.v * i.v;
            a * a - T::lit(0.5)
        })
        .collect();
    let mut modes: Vec<BogoliubovPair<T>> = Vec::new();
    for j in 0..dev.len().saturating_sub(1) {
        if dev[j] * dev[j + 1] > T::zero() {
            continue;
        }
        for pick in [j, j + 1] {
            if modes.last().is_none_or(|m| m.k != bf[pick].k) {
                modes.push(bf[pick]);
            }
        }
    }
    Ok(modes)
}

/// Predicted cusp `t*_n = π(n + 1/2) / ω^f(k*)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PredictedCusp<T = f64> {
    pub k_star: T,
    pub n: usize,
    pub t: T,
}

/// Which momenta the cusp prediction is anchored to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CriticalMomentumSource {
    /// Grid momenta bracketing `α_k² = 1/2` (what a finite chain shows).
    #[default]
    Grid,
    /// Continuous roots of `α²(k) = 1/2`.
    Continuous,
}

pub fn predicted_cusp_times<T: Real>(
    initial: &ModelParams<T>,
    fin: &ModelParams<T>,
    t_max: T,
    source: CriticalMomentumSource,
) -> Result<Vec<PredictedCusp<T>>> {
    let anchors: Vec<(T, T)> = match source {
        CriticalMomentumSource::Grid => critical_grid_modes(initial, fin)?.iter().map(|m| (m.k, m.omega)).collect(),
        CriticalMomentumSource::Continuous => critical_momenta(initial, fin)?
            .into_iter()
            .map(|k| Ok((k, bogoliubov_from(k, fin.h(), jk_coupling(k, fin))?.omega)))
            .collect::<Result<_>>()?,
    };
    let mut out = Vec::new();
    for (k_star, omega) in anchors {
        let mut n = 0;
        loop {
            let t = T::PI() * (T::from_count(n) + T::lit(0.5)) / omega;
            if t > t_max {
                break;
            }
            out.push(PredictedCusp { k_star, n, t });
            n += 1;
        }
    }
    out.sort_by(|a, b| a.t.partial_cmp(&b.t).expect("finite"));
    Ok(out)
}

/// Outcome of pairing detected cusps with predicted times.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspMatch<T = f64> {
    /// `(detected, nearest predicted)` pairs within tolerance.
    pub matched: Vec<(T, T)>,
    /// Detected times with no prediction within tolerance.
    pub unmatched: Vec<T>,
}

impl<T> CuspMatch<T> {
    pub fn all_matched(&self) -> bool {
        self.unmatched.is_empty()
    }
}

pub fn match_cusps<T: Real>(detected: &[Cusp<T>], predicted: &[PredictedCusp<T>], tolerance: T) -> CuspMatch<T> {
    let mut out = CuspMatch { matched: Vec::new(), unmatched: Vec::new() };
    for c in detected {
        let nearest = predicted
            .iter()
            .map(|p| p.t)
            .min_by(|a, b| (*a - c.t).abs().partial_cmp(&(*b - c.t).abs()).expect("finite"));
        match nearest {
            Some(p) if (p - c.t).abs() <= tolerance => out.matched.push((c.t, p)),
            _ => out.unmatched.push(c.t),
        }
    }
    out
}
