//! Two-site reduced density matrices and total correlation (mutual information).

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::correlators::{contraction_table, correlator_set_from_table, CorrelatorSet};
use crate::error::{Error, Result};
use crate::evolution::ManyBodyState;
use crate::linalg::{entropy_bits, hermitian_eigen, CMatrix};
use crate::scalar::Real;

/// Eigenvalues below `-POSITIVITY_TOL` are reported as a positivity violation.
pub const POSITIVITY_TOL: f64 = 1e-6;

/// Reduced state of sites `i` and `i + r` in the basis
/// `{|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩}` (index `2a + b`, `a` for site `i`).
#[derive(Clone, Debug, PartialEq)]
pub struct TwoSiteState<T = f64> {
    pub r: usize,
    pub t: T,
    pub rho: CMatrix<T>,
}

fn paulis<T: Real>() -> [CMatrix<T>; 4] {
    let (o, z) = (Complex::<T>::one(), Complex::<T>::zero());
    let i = Complex::new(T::zero(), T::one());
    [
        CMatrix::from_rows(&[vec![o, z], vec![z, o]]),
        CMatrix::from_rows(&[vec![z, o], vec![o, z]]),
        CMatrix::from_rows(&[vec![z, -i], vec![i, z]]),
        CMatrix::from_rows(&[vec![o, z], vec![z, -o]]),
    ]
}

/// `ρ = ¼ Σ_{ab} ⟨σ^a σ^b⟩ σ^a ⊗ σ^b`; components odd under spin parity vanish.
pub fn assemble_two_site<T: Real>(c: &CorrelatorSet<T>) -> TwoSiteState<T> {
    let p = paulis::<T>();
    let terms: [(usize, usize, T); 8] = [
        (0, 0, T::one()),
        (3, 0, c.m_z),
        (0, 3, c.m_z),
        (1, 1, c.c_xx),
        (2, 2, c.c_yy),
        (3, 3, c.c_zz),
        (1, 2, c.c_xy),
        (2, 1, c.c_yx),
    ];
    let mut rho = CMatrix::zeros(4);
    for (a, b, w) in terms {
        rho = &rho + &p[a].kron(&p[b]).scale(Complex::new(w * T::lit(0.25), T::zero()));
    }
    TwoSiteState { r: c.r, t: c.t, rho }
}

fn checked_spectrum<T: Real>(values: Vec<T>) -> Result<Vec<T>> {
    if let Some(&worst) = values.iter().find(|&&v| v < -T::lit(POSITIVITY_TOL)) {
        return Err(Error::PositivityViolation(worst.as_f64()));
    }
    Ok(values)
}

impl<T: Real> TwoSiteState<T> {
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        checked_spectrum(hermitian_eigen(&self.rho).values)
    }

    /// Single-site marginal (identical for both sites by translation invariance).
    pub fn marginal_probabilities(&self) -> [T; 2] {
        let up = self.rho[(0, 0)].re + self.rho[(1, 1)].re;
        let down = self.rho[(2, 2)].re + self.rho[(3, 3)].re;
        [up, down]
    }

    /// `I = 2 S(ρ_1) - S(ρ_12)` in bits, from a full diagonalization.
    pub fn mutual_information(&self) -> Result<T> {
        let joint = entropy_bits(&self.eigenvalues()?);
        let single = entropy_bits(&self.marginal_probabilities());
        Ok(single + single - joint)
    }
}

/// Closed-form spectrum of the X-shaped two-site state.
pub fn two_site_spectrum<T: Real>(c: &CorrelatorSet<T>) -> Result<[T; 4]> {
    let q = T::lit(0.25);
    let one = T::one();
    let even = (T::lit(4.0) * c.m_z * c.m_z + (c.c_xx - c.c_yy).powi(2) + (c.c_xy + c.c_yx).powi(2)).sqrt();
    let odd = ((c.c_xx + c.c_yy).powi(2) + (c.c_xy - c.c_yx).powi(2)).sqrt();
    let spectrum = [
        q * (one + c.c_zz + even),
        q * (one + c.c_zz - even),
        q * (one - c.c_zz + odd),
        q * (one - c.c_zz - odd),
    ];
    checked_spectrum(spectrum.to_vec())?;
    Ok(spectrum)
}

/// Mutual information in bits from the closed-form spectrum.
pub fn mutual_information<T: Real>(c: &CorrelatorSet<T>) -> Result<T> {
    let half = T::lit(0.5);
    let single = entropy_bits(&[half * (T::one() + c.m_z), half * (T::one() - c.m_z)]);
    Ok(single + single - entropy_bits(&two_site_spectrum(c)?))
}

/// One point of a total-correlation profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfilePoint<T = f64> {
    pub r: usize,
    pub total_correlation: T,
}

/// `I_R` for every requested distance, sharing one contraction table.
pub fn tc_profile<T: Real>(state: &ManyBodyState<T>, rs: &[usize]) -> Result<Vec<ProfilePoint<T>>> {
    let max_r = state.n() / 2 - 1;
    if let Some(&bad) = rs.iter().find(|&&r| r < 1 || r > max_r) {
        return Err(Error::OutOfRange { index: bad as i64, min: 1, max: max_r as i64 });
    }
    let table = contraction_table(state, rs.iter().copied().max().unwrap_or(1))?;
    rs.par_iter()
        .map(|&r| {
            let c = correlator_set_from_table(&table, r)?;
            Ok(ProfilePoint { r, total_correlation: mutual_information(&c)? })
        })
        .collect()
}
