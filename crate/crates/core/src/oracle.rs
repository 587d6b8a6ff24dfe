//! Exact diagonalization of the spin chain for small `N`.
//!
//! Basis states are bit strings with bit `j` describing site `j`
//! (`0` ⇔ `σ^z = +1`). The Hamiltonian is real symmetric, so the even-parity
//! block is diagonalized with a dense symmetric eigensolver. Everything here
//! is double precision only.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;
use num_traits::Zero;

use serde::Serialize;

use crate::correlators::{correlator_sets, magnetization, CorrelatorSet};
use crate::error::{Error, Result};
use crate::evolution::{evolve, ground_state};
use crate::linalg::CMatrix;
use crate::loschmidt::rate_function_at;
use crate::model::{coupling, ModelParams};
use crate::observables::{assemble_two_site, mutual_information, TwoSiteState};

/// Largest chain handled by the oracle.
pub const MAX_SITES: usize = 12;

type C64 = Complex<f64>;

fn check_size(n: usize) -> Result<()> {
    if n > MAX_SITES {
        return Err(Error::TooLarge(n, MAX_SITES));
    }
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("N must be even and >= 2, got {n}")));
    }
    Ok(())
}

/// Applies `J·S_{i,R}` for every site and range to basis state `s`,
/// reporting `(target, amplitude)` pairs.
fn string_terms(n: usize, couplings: &[f64], s: usize, mut emit: impl FnMut(usize, f64)) {
    for i in 0..n {
        for (idx, &j) in couplings.iter().enumerate() {
            let r = idx + 1;
            let end = (i + r) % n;
            let mut sign = 1.0;
            for m in 1..r {
                if s >> ((i + m) % n) & 1 == 1 {
                    sign = -sign;
                }
            }
            emit(s ^ (1 << i) ^ (1 << end), j * sign);
        }
    }
}

fn field_energy(n: usize, h: f64, s: usize) -> f64 {
    let up = n - s.count_ones() as usize;
    0.5 * h * (up as f64 - (n - up) as f64)
}

/// Full `2^N × 2^N` Hamiltonian with explicit couplings `J_1 … J_{N/2}`.
pub fn dense_hamiltonian_with(n: usize, h: f64, couplings: &[f64]) -> Result<DMatrix<f64>> {
    check_size(n)?;
    if couplings.len() != n / 2 {
        return Err(Error::SizeMismatch { expected: n / 2, found: couplings.len() });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        m[(s, s)] += field_energy(n, h, s);
        string_terms(n, couplings, s, |t, a| m[(t, s)] += a);
    }
    Ok(m)
}

fn couplings_of(params: &ModelParams<f64>) -> Result<Vec<f64>> {
    (1..=params.n() / 2).map(|r| coupling(r, params)).collect()
}

pub fn dense_hamiltonian(params: &ModelParams<f64>) -> Result<DMatrix<f64>> {
    dense_hamiltonian_with(params.n(), params.h(), &couplings_of(params)?)
}

/// Diagonal of `P = Π σ^z`.
pub fn parity_diagonal(n: usize) -> Vec<f64> {
    (0..1usize << n).map(|s| if s.count_ones() % 2 == 0 { 1.0 } else { -1.0 }).collect()
}

fn even_indices(n: usize) -> Vec<usize> {
    (0..1usize << n).filter(|s| s.count_ones() % 2 == 0).collect()
}

/// Normalized state vector over all `2^N` configurations.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amplitudes: DVector<C64>,
}

impl DenseState {
    pub fn new(n: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_size(n)?;
        if amplitudes.len() != 1 << n {
            return Err(Error::SizeMismatch { expected: 1 << n, found: amplitudes.len() });
        }
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("state norm {norm} differs from 1")));
        }
        Ok(Self { n, amplitudes: v })
    }

    /// Every spin along `+z`.
    pub fn all_up(n: usize) -> Result<Self> {
        check_size(n)?;
        let mut a = vec![C64::zero(); 1 << n];
        a[0] = C64::new(1.0, 0.0);
        Self::new(n, a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn overlap(&self, other: &Self) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Reduced state of sites `i` and `i + r` (periodic), index `2a + b`.
    pub fn two_site(&self, i: usize, r: usize) -> Result<TwoSiteState<f64>> {
        let n = self.n;
        if i >= n || r == 0 || r >= n {
            return Err(Error::OutOfRange { index: r as i64, min: 1, max: n as i64 - 1 });
        }
        let j = (i + r) % n;
        let mut rho = CMatrix::zeros(4);
        for s in 0..1usize << n {
            let a = self.amplitudes[s];
            if a.is_zero() {
                continue;
            }
            let row = 2 * (s >> i & 1) + (s >> j & 1);
            for (ai, bj) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let s2 = (s & !(1 << i) & !(1 << j)) | (ai << i) | (bj << j);
                let col = 2 * ai + bj;
                rho[(row, col)] += a * self.amplitudes[s2].conj();
            }
        }
        Ok(TwoSiteState { r, t: 0.0, rho })
    }

    /// `⟨σ^z_i⟩`.
    pub fn magnetization(&self, i: usize) -> Result<f64> {
        if i >= self.n {
            return Err(Error::OutOfRange { index: i as i64, min: 0, max: self.n as i64 - 1 });
        }
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(s, a)| if s >> i & 1 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum())
    }

    /// All Pauli expectations between sites `i` and `i + r`, read off the
    /// reduced density matrix.
    pub fn correlators(&self, i: usize, r: usize) -> Result<CorrelatorSet<f64>> {
        let two = self.two_site(i, r)?;
        let p = paulis();
        let mut residue: f64 = 0.0;
        let mut ev = |a: usize, b: usize| {
            let z = two.rho.trace_product(&p[a].kron(&p[b]));
            residue = residue.max(z.im.abs());
            z.re
        };
        let m_z = ev(3, 0);
        Ok(CorrelatorSet {
            r,
            t: 0.0,
            m_z,
            c_xx: ev(1, 1),
            c_yy: ev(2, 2),
            c_zz: ev(3, 3),
            c_xy: ev(1, 2),
            c_yx: ev(2, 1),
            imag_residue: residue,
        })
    }

    /// Parity-odd expectations that must vanish: `m^x, m^y, C^{xz}, C^{zx},
    /// C^{yz}, C^{zy}`. Returns the largest magnitude among them.
    pub fn forbidden_components(&self, i: usize, r: usize) -> Result<f64> {
        let two = self.two_site(i, r)?;
        let p = paulis();
        let pairs = [(1, 0), (2, 0), (1, 3), (3, 1), (2, 3), (3, 2)];
        Ok(pairs
            .iter()
            .map(|&(a, b)| two.rho.trace_product(&p[a].kron(&p[b])).norm())
            .fold(0.0, f64::max))
    }
}

fn paulis() -> [CMatrix<f64>; 4] {
    [
        CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]),
        CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]),
        CMatrix::from_rows(&[vec![C64::zero(), C64::new(0.0, -1.0)], vec![C64::new(0.0, 1.0), C64::zero()]]),
        CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]),
    ]
}

/// Diagonalized even-parity block of one Hamiltonian.
pub struct EvenSector {
    n: usize,
    indices: Vec<usize>,
    eigen: SymmetricEigen<f64, nalgebra::Dyn>,
}

impl EvenSector {
    pub fn new(params: &ModelParams<f64>) -> Result<Self> {
        Self::from_dense(params.n(), &dense_hamiltonian(params)?)
    }

    pub fn from_dense(n: usize, full: &DMatrix<f64>) -> Result<Self> {
        check_size(n)?;
        let indices = even_indices(n);
        let d = indices.len();
        let block = DMatrix::from_fn(d, d, |a, b| full[(indices[a], indices[b])]);
        Ok(Self { n, indices, eigen: SymmetricEigen::new(block) })
    }

    fn lowest(&self) -> usize {
        self.eigen
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite spectrum"))
            .map(|(i, _)| i)
            .expect("non-empty sector")
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigen.eigenvalues[self.lowest()]
    }

    /// Splitting between the two lowest even-sector levels.
    pub fn gap(&self) -> f64 {
        let mut v: Vec<f64> = self.eigen.eigenvalues.iter().copied().collect();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite spectrum"));
        v[1] - v[0]
    }

    pub fn ground_state(&self) -> DenseState {
        let col = self.eigen.eigenvectors.column(self.lowest());
        let mut a = vec![C64::zero(); 1 << self.n];
        for (pos, &s) in self.indices.iter().enumerate() {
            a[s] = C64::new(col[pos], 0.0);
        }
        DenseState { n: self.n, amplitudes: DVector::from_vec(a) }
    }

    /// `e^{-iHt}|ψ⟩` for an even-parity `ψ`.
    pub fn evolve(&self, psi: &DenseState, t: f64) -> Result<DenseState> {
        if psi.n != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: psi.n });
        }
        let sector: DVector<C64> = DVector::from_iterator(self.indices.len(), self.indices.iter().map(|&s| psi.amplitudes[s]));
        let vecs = self.eigen.eigenvectors.map(|x| C64::new(x, 0.0));
        let mut coeffs = vecs.tr_mul(&sector);
        for (c, &e) in coeffs.iter_mut().zip(self.eigen.eigenvalues.iter()) {
            *c *= C64::from_polar(1.0, -e * t);
        }
        let out = vecs * coeffs;
        let mut a = vec![C64::zero(); 1 << self.n];
        for (pos, &s) in self.indices.iter().enumerate() {
            a[s] = out[pos];
        }
        Ok(DenseState { n: self.n, amplitudes: DVector::from_vec(a) })
    }
}

/// `-(1/N) ln |⟨ψ_0|ψ(t)⟩|²`.
pub fn loschmidt_rate(psi0: &DenseState, psi_t: &DenseState) -> f64 {
    -psi0.overlap(psi_t).norm_sqr().ln() / psi0.n as f64
}

/// Everything the free-fermion pipeline is compared against, for one quench
/// and time.
#[derive(Clone, Debug)]
pub struct OracleSnapshot {
    pub ground_energy: f64,
    pub state: DenseState,
    pub initial: DenseState,
    pub t: f64,
}

impl OracleSnapshot {
    pub fn rate(&self) -> f64 {
        loschmidt_rate(&self.initial, &self.state)
    }

    pub fn correlators(&self, r: usize) -> Result<CorrelatorSet<f64>> {
        let mut c = self.state.correlators(0, r)?;
        c.t = self.t;
        Ok(c)
    }
}

/// Ground state of `initial` evolved under `final_params` for time `t`.
pub fn quench(initial: &ModelParams<f64>, final_params: &ModelParams<f64>, t: f64) -> Result<OracleSnapshot> {
    let start = EvenSector::new(initial)?;
    let psi0 = start.ground_state();
    let state = EvenSector::new(final_params)?.evolve(&psi0, t)?;
    Ok(OracleSnapshot { ground_energy: start.ground_energy(), state, initial: psi0, t })
}

/// Largest absolute deviations between the free-fermion pipeline and exact
/// diagonalization for one quench, per observable family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Mismatch {
    pub ground_energy: f64,
    pub magnetization: f64,
    pub correlators: f64,
    pub total_correlation: f64,
    pub density_matrix: f64,
    pub rate: f64,
}

impl Mismatch {
    pub fn worst(&self) -> f64 {
        [self.ground_energy, self.magnetization, self.correlators, self.total_correlation, self.density_matrix, self.rate]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Runs the quench through both routes and compares every distance
/// `1 ≤ R ≤ N/2 - 1`.
pub fn pipeline_mismatch(initial: &ModelParams<f64>, final_params: &ModelParams<f64>, t: f64) -> Result<Mismatch> {
    let snap = quench(initial, final_params, t)?;
    let gs = ground_state(initial)?;
    let st = evolve(&gs, final_params, t)?;
    let rs: Vec<usize> = (1..initial.n() / 2).collect();
    let mut m = Mismatch {
        ground_energy: (gs.energy(initial)? - snap.ground_energy).abs(),
        magnetization: (magnetization(&st)? - snap.state.magnetization(0)?).abs(),
        ..Mismatch::default()
    };
    for (ours, &r) in correlator_sets(&st, &rs)?.iter().zip(&rs) {
        let ed = snap.correlators(r)?;
        let ed_rho = snap.state.two_site(0, r)?;
        m.correlators = m.correlators.max(ours.max_abs_diff(&ed));
        m.total_correlation = m.total_correlation.max((mutual_information(ours)? - ed_rho.mutual_information()?).abs());
        m.density_matrix = m.density_matrix.max((&assemble_two_site(ours).rho - &ed_rho.rho).max_abs());
    }
    m.rate = (rate_function_at(initial, final_params, &[t])?.rate[0] - snap.rate()).abs();
    Ok(m)
}
