//! Pfaffians of complex skew-symmetric matrices by Parlett–Reid
//! tridiagonalization with partial pivoting.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{determinant, CMatrix};
use crate::scalar::Real;

/// Largest antisymmetrization correction accepted on construction.
pub const SKEW_TOL: f64 = 1e-8;

/// Even-dimensional complex matrix with `Aᵀ = -A` enforced exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix<T> {
    entries: CMatrix<T>,
    correction: T,
}

impl<T: Real> SkewMatrix<T> {
    /// Antisymmetrizes `(A - Aᵀ)/2` and records `max |A + Aᵀ|/2`.
    pub fn new(m: CMatrix<T>) -> Result<Self> {
        let n = m.dim();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::OddDimension(n));
        }
        let half = T::lit(0.5);
        let mut correction = T::zero();
        let entries = CMatrix::from_fn(n, |i, j| {
            correction = correction.max((m[(i, j)] + m[(j, i)]).norm() * half);
            (m[(i, j)] - m[(j, i)]).scale(half)
        });
        if correction > T::lit(SKEW_TOL) {
            return Err(Error::NotSkew(correction.as_f64()));
        }
        Ok(Self { entries, correction })
    }

    /// Builds from the strict upper triangle, listed row by row.
    pub fn from_upper(n: usize, upper: &[Complex<T>]) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::OddDimension(n));
        }
        if upper.len() != n * (n - 1) / 2 {
            return Err(Error::SizeMismatch { expected: n * (n - 1) / 2, found: upper.len() });
        }
        let mut m = CMatrix::zeros(n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in (i + 1)..n {
                let x = *it.next().expect("length checked");
                m[(i, j)] = x;
                m[(j, i)] = -x;
            }
        }
        Ok(Self { entries: m, correction: T::zero() })
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn correction(&self) -> T {
        self.correction
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }
}

/// Pfaffian together with a pivot-based conditioning indicator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PfaffianValue<T> {
    pub value: Complex<T>,
    /// `min |pivot| / max |pivot|`; tiny values flag near-singular input.
    pub pivot_ratio: T,
}

pub fn pfaffian<T: Real>(m: &SkewMatrix<T>) -> Complex<T> {
    pfaffian_with_condition(m).value
}

pub fn pfaffian_with_condition<T: Real>(m: &SkewMatrix<T>) -> PfaffianValue<T> {
    let n = m.dim();
    let mut a = m.entries.clone();
    let mut pf = Complex::<T>::one();
    let mut min_piv = T::infinity();
    let mut max_piv = T::zero();

    let mut k = 0;
    while k + 1 < n {
        let kp = (k + 1..n)
            .max_by(|&i, &j| a[(i, k)].norm().partial_cmp(&a[(j, k)].norm()).unwrap())
            .expect("non-empty range");
        if kp != k + 1 {
            a.swap_rows_cols(k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)];
        let mag = pivot.norm();
        min_piv = min_piv.min(mag);
        max_piv = max_piv.max(mag);
        if pivot.is_zero() {
            return PfaffianValue { value: Complex::zero(), pivot_ratio: T::zero() };
        }
        pf = pf * pivot;
        if k + 2 < n {
            let tau: Vec<Complex<T>> = (k + 2..n).map(|j| a[(k, j)] / pivot).collect();
            let col: Vec<Complex<T>> = (k + 2..n).map(|i| a[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    a[(i, j)] = a[(i, j)] + tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    let pivot_ratio = if max_piv > T::zero() { min_piv / max_piv } else { T::zero() };
    PfaffianValue { value: pf, pivot_ratio }
}

/// Returns `pf(B M Bᵀ) - det(B) pf(M)`, which vanishes for every congruence
/// `B`. Used by randomized self-tests.
pub fn pfaffian_sign_convention_check<T: Real>(m: &SkewMatrix<T>, congruence: &CMatrix<T>) -> Result<Complex<T>> {
    if congruence.dim() != m.dim() {
        return Err(Error::SizeMismatch { expected: m.dim(), found: congruence.dim() });
    }
    let transformed = &(congruence * &m.entries) * &congruence.transpose();
    let lhs = pfaffian(&SkewMatrix::new(transformed)?);
    let rhs = determinant(congruence) * pfaffian(m);
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn two_by_two() {
        let a = C::new(0.3, -1.7);
        let m = SkewMatrix::from_upper(2, &[a]).unwrap();
        assert!((pfaffian(&m) - a).norm() < 1e-14);
    }

    #[test]
    fn four_by_four_closed_form() {
        let [a, b, cc, d, e, f] = [1.1, -0.4, 2.3, 0.7, -1.9, 0.25].map(c);
        let m = SkewMatrix::from_upper(4, &[a, b, cc, d, e, f]).unwrap();
        let expected = a * f - b * e + cc * d;
        assert!((pfaffian(&m) - expected).norm() < 1e-14);
    }

    #[test]
    fn rejects_odd_and_non_skew() {
        assert!(matches!(SkewMatrix::new(CMatrix::<f64>::zeros(3)), Err(Error::OddDimension(3))));
        let m = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(matches!(SkewMatrix::new(m), Err(Error::NotSkew(_))));
    }

    #[test]
    fn small_correction_is_reported() {
        let m = CMatrix::from_real_rows(&[vec![0.0, 1.0 + 1e-10], vec![-1.0, 0.0]]);
        let s = SkewMatrix::new(m).unwrap();
        assert!(s.correction() > 0.0 && s.correction() < 1e-9);
    }

    #[test]
    fn zero_matrix_has_zero_pfaffian() {
        let m = SkewMatrix::new(CMatrix::<f64>::zeros(6)).unwrap();
        let pv = pfaffian_with_condition(&m);
        assert_eq!(pv.value, C::zero());
        assert_eq!(pv.pivot_ratio, 0.0);
    }

    #[test]
    fn congruence_identity_and_swap() {
        let m = SkewMatrix::from_upper(4, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0].map(c)).unwrap();
        let id = CMatrix::identity(4);
        assert!(pfaffian_sign_convention_check(&m, &id).unwrap().norm() < 1e-13);
        let mut swap = CMatrix::zeros(4);
        swap[(0, 1)] = c(1.0);
        swap[(1, 0)] = c(1.0);
        swap[(2, 2)] = c(1.0);
        swap[(3, 3)] = c(1.0);
        let swapped = &(&swap * m.entries()) * &swap.transpose();
        let pf_swapped = pfaffian(&SkewMatrix::new(swapped).unwrap());
        assert!((pf_swapped + pfaffian(&m)).norm() < 1e-13);
        assert!(pfaffian_sign_convention_check(&m, &swap).unwrap().norm() < 1e-13);
    }

    #[test]
    fn generic_over_f32() {
        let m = SkewMatrix::<f32>::from_upper(4, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0].map(|x| Complex::new(x, 0.0)))
            .unwrap();
        assert!((pfaffian(&m).re - (6.0 - 10.0 + 12.0)).abs() < 1e-5);
    }
}
