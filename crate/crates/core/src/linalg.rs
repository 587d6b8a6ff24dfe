//! Small dense complex matrices: the 4×4 momentum blocks, two-site density
//! matrices and the Pfaffian arguments all live here.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::Real;

/// Square, row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    /// Builds a matrix from rows; panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "ragged matrix rows");
            data.extend_from_slice(row);
        }
        Self { n, data }
    }

    pub fn from_real_rows(rows: &[Vec<T>]) -> Self {
        let rows: Vec<Vec<Complex<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex::new(x, T::zero())).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex<T>>(n: usize, mut f: F) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&x| x * s).collect() }
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.n, other.n);
        let mut acc = Complex::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc = acc + self[(i, j)] * other[(j, i)];
            }
        }
        acc
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// `max |A - A†|`.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.n, other.n);
        Self::from_fn(a * b, |i, j| self[(i / b, j / b)] * other[(i % b, j % b)])
    }

    /// Conjugation `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    pub fn swap_rows_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.n;
        for j in 0..n {
            self.data.swap(a * n + j, b * n + j);
        }
        for i in 0..n {
            self.data.swap(i * n + a, i * n + b);
        }
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

impl<'a, T: Real> Mul<&'a CMatrix<T>> for &'a CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<'a, T: Real> Add<&'a CMatrix<T>> for &'a CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.n, rhs.n);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<'a, T: Real> Sub<&'a CMatrix<T>> for &'a CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.n, rhs.n);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    /// Ascending eigenvalues.
    pub values: Vec<T>,
    /// Eigenvectors stored as columns, in the order of `values`.
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, idx: usize) -> Vec<Complex<T>> {
        (0..self.vectors.dim()).map(|i| self.vectors[(i, idx)]).collect()
    }
}

/// Cyclic complex Jacobi eigensolver.
///
/// Intended for the small (≤ 8×8) Hermitian matrices of the pipeline. Only
/// the Hermitian part of `a` is used.
pub fn hermitian_eigen<T: Real>(a: &CMatrix<T>) -> HermitianEigen<T> {
    let n = a.dim();
    let half = T::lit(0.5);
    let mut m = CMatrix::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)].conj()).scale(half));
    let mut v = CMatrix::identity(n);
    let scale = m.max_abs().max(T::min_positive_value());
    let tol = T::epsilon() * T::epsilon() * scale * scale;

    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + m[(p, q)].norm_sqr();
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= T::min_positive_value() {
                    continue;
                }
                let phase = apq.unscale(mag);
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (mag + mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // G restricted to (p, q) = [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                let gqp = -phase.conj().scale(s);
                let gqq = phase.conj().scale(c);
                let (cc, sc) = (Complex::new(c, T::zero()), Complex::new(s, T::zero()));
                for k in 0..n {
                    let xp = m[(k, p)];
                    let xq = m[(k, q)];
                    m[(k, p)] = xp * cc + xq * gqp;
                    m[(k, q)] = xp * sc + xq * gqq;
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * cc + vq * gqp;
                    v[(k, q)] = vp * sc + vq * gqq;
                }
                for k in 0..n {
                    let xp = m[(p, k)];
                    let xq = m[(q, k)];
                    m[(p, k)] = xp * cc + xq * gqp.conj();
                    m[(q, k)] = xp * sc + xq * gqq.conj();
                }
                m[(p, q)] = Complex::zero();
                m[(q, p)] = Complex::zero();
                m[(p, p)] = Complex::new(m[(p, p)].re, T::zero());
                m[(q, q)] = Complex::new(m[(q, q)].re, T::zero());
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    HermitianEigen { values, vectors }
}

/// Determinant by LU factorization with partial pivoting.
pub fn determinant<T: Real>(a: &CMatrix<T>) -> Complex<T> {
    let n = a.dim();
    let mut m = a.clone();
    let mut det = Complex::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].norm().partial_cmp(&m[(j, col)].norm()).unwrap())
            .unwrap();
        if m[(pivot, col)].is_zero() {
            return Complex::zero();
        }
        if pivot != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(pivot, j)];
                m[(pivot, j)] = tmp;
            }
            det = -det;
        }
        let d = m[(col, col)];
        det = det * d;
        for i in (col + 1)..n {
            let f = m[(i, col)] / d;
            if f.is_zero() {
                continue;
            }
            for j in col..n {
                let sub = f * m[(col, j)];
                m[(i, j)] = m[(i, j)] - sub;
            }
        }
    }
    det
}

/// `exp(-i H t)` for Hermitian `H`, via its eigen-decomposition.
pub fn unitary_propagator<T: Real>(h: &CMatrix<T>, t: T) -> CMatrix<T> {
    let eig = hermitian_eigen(h);
    let n = h.dim();
    let phases: Vec<Complex<T>> = eig.values.iter().map(|&e| Complex::from_polar(T::one(), -e * t)).collect();
    CMatrix::from_fn(n, |i, j| {
        (0..n).fold(Complex::zero(), |acc, l| {
            acc + eig.vectors[(i, l)] * phases[l] * eig.vectors[(j, l)].conj()
        })
    })
}

/// Shannon entropy in bits of a probability vector; entries below `1e-15`
/// contribute nothing.
pub fn entropy_bits<T: Real>(probs: &[T]) -> T {
    let cutoff = T::lit(1e-15);
    probs
        .iter()
        .filter(|&&p| p > cutoff)
        .fold(T::zero(), |acc, &p| acc - p * p.log2())
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn jacobi_diagonalizes_pauli_y() {
        let y = CMatrix::from_rows(&[vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]]);
        let eig = hermitian_eigen(&y);
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        let v = eig.vector(0);
        let yv: Vec<C> = (0..2).map(|i| (0..2).map(|j| y[(i, j)] * v[j]).sum()).collect();
        for i in 0..2 {
            assert!((yv[i] + v[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn jacobi_reconstructs_random_hermitian() {
        let a = CMatrix::from_fn(5, |i, j| {
            let x = ((i * 7 + j * 3) as f64).sin();
            let y = ((i * 2 + j * 5) as f64).cos();
            if i == j {
                c(x, 0.0)
            } else if i < j {
                c(x, y)
            } else {
                c(((j * 7 + i * 3) as f64).sin(), -((j * 2 + i * 5) as f64).cos())
            }
        });
        let eig = hermitian_eigen(&a);
        let d = CMatrix::from_fn(5, |i, j| if i == j { c(eig.values[i], 0.0) } else { C::zero() });
        let rebuilt = d.conjugate_by(&eig.vectors);
        assert!((&rebuilt - &a).max_abs() < 1e-12);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn lu_determinant_small_cases() {
        let m = CMatrix::from_real_rows(&[vec![0.0, 2.0], vec![3.0, 1.0]]);
        assert!((determinant(&m) - c(-6.0, 0.0)).norm() < 1e-14);
        let id = CMatrix::<f64>::identity(6);
        assert!((determinant(&id) - c(1.0, 0.0)).norm() < 1e-15);
        let singular = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(determinant(&singular).norm() < 1e-15);
    }

    #[test]
    fn propagator_is_unitary() {
        let h = CMatrix::from_real_rows(&[vec![1.0, 0.3], vec![0.3, -0.5]]);
        let u = unitary_propagator(&h, 2.7);
        let uu = &u * &u.adjoint();
        assert!((&uu - &CMatrix::identity(2)).max_abs() < 1e-13);
    }

    #[test]
    fn entropy_of_uniform_distribution() {
        assert!((entropy_bits(&[0.25_f64; 4]) - 2.0).abs() < 1e-15);
        assert_eq!(entropy_bits(&[1.0_f64, 0.0]), 0.0);
    }
}
