//! Momentum-block dynamics.
//!
//! Each positive momentum `k` carries a 4-dimensional Fock space ordered as
//! `{|0⟩, c_k†c_{-k}†|0⟩, c_k†|0⟩, c_{-k}†|0⟩}`; the first two states form the
//! even-parity pair block and the last two the (decoupled) single-particle
//! block. The block Hamiltonian is written in the sublattice-rotated frame
//! described in `docs/CONVENTIONS.md`, in which the pair block reads
//! `[[-h, 2 Im J̃], [2 Im J̃, h - 4 Re J̃]]` and the single-particle block is
//! `-2 Re J̃ · 1`.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, unitary_propagator, CMatrix};
use crate::model::{dispersion_from, jk_coupling, ModelParams};
use crate::scalar::{pairwise_sum, Real};

/// Dimension of one momentum block.
pub const BLOCK_DIM: usize = 4;

/// Split below which two block levels are treated as an exact crossing.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Below this `ω_k` a Bogoliubov rotation is undefined.
pub const GAPLESS_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct BlockHamiltonian<T> {
    pub k: T,
    pub matrix: CMatrix<T>,
}

/// Builds the 4×4 block Hamiltonian at momentum `k`.
pub fn block_hamiltonian<T: Real>(k: T, params: &ModelParams<T>) -> BlockHamiltonian<T> {
    block_from_coupling(k, params.h(), jk_coupling(k, params))
}

fn block_from_coupling<T: Real>(k: T, h: T, jk: Complex<T>) -> BlockHamiltonian<T> {
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let z = T::zero();
    let matrix = CMatrix::from_real_rows(&[
        vec![-h, two * jk.im, z, z],
        vec![two * jk.im, h - four * jk.re, z, z],
        vec![z, z, -two * jk.re, z],
        vec![z, z, z, -two * jk.re],
    ]);
    BlockHamiltonian { k, matrix }
}

/// All block Hamiltonians on the momentum grid, in grid order.
pub fn block_hamiltonians<T: Real>(params: &ModelParams<T>) -> Vec<BlockHamiltonian<T>> {
    let h = params.h();
    params
        .grid()
        .momenta()
        .par_iter()
        .map(|&k| block_from_coupling(k, h, jk_coupling(k, params)))
        .collect()
}

/// Density matrix of one momentum block.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockState<T> {
    pub k: T,
    pub rho: CMatrix<T>,
}

impl<T: Real> BlockState<T> {
    pub fn purity(&self) -> T {
        self.rho.trace_product(&self.rho).re
    }

    pub fn trace(&self) -> Complex<T> {
        self.rho.trace()
    }
}

/// Product state over momentum blocks, together with the Hamiltonian that
/// generates its dynamics and the elapsed time.
#[derive(Clone, Debug)]
pub struct ManyBodyState<T = f64> {
    pub blocks: Vec<BlockState<T>>,
    pub params: ModelParams<T>,
    pub t: T,
}

impl<T: Real> ManyBodyState<T> {
    pub fn n(&self) -> usize {
        self.params.n()
    }

    /// `Σ_k Tr(ρ_k H_k)` under `params` (total, not per site).
    pub fn energy(&self, params: &ModelParams<T>) -> Result<T> {
        let hams = block_hamiltonians(params);
        let ops: Vec<CMatrix<T>> = hams.into_iter().map(|b| b.matrix).collect();
        Ok(expectation(self, &ops)?.re)
    }
}

/// Ground state: each block is projected onto the lowest eigenvector of its
/// block Hamiltonian.
pub fn ground_state<T: Real>(params: &ModelParams<T>) -> Result<ManyBodyState<T>> {
    let blocks = block_hamiltonians(params)
        .into_par_iter()
        .map(|bh| {
            let eig = hermitian_eigen(&bh.matrix);
            let gap = eig.values[1] - eig.values[0];
            if gap < T::lit(DEGENERACY_TOL) {
                return Err(Error::DegenerateBlock { k: bh.k.as_f64(), gap: gap.as_f64() });
            }
            let v = eig.vector(0);
            let rho = CMatrix::from_fn(BLOCK_DIM, |i, j| v[i] * v[j].conj());
            Ok(BlockState { k: bh.k, rho })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ManyBodyState { blocks, params: *params, t: T::zero() })
}

/// Evolves every block by `exp(-i H_k^f t)` under `final_params`.
pub fn evolve<T: Real>(
    state: &ManyBodyState<T>,
    final_params: &ModelParams<T>,
    t: T,
) -> Result<ManyBodyState<T>> {
    if final_params.n() != state.n() {
        return Err(Error::SizeMismatch { expected: state.n(), found: final_params.n() });
    }
    if t < T::zero() {
        return Err(Error::InvalidParameter(format!("evolution time must be >= 0, got {t}")));
    }
    let hams = block_hamiltonians(final_params);
    let blocks = state
        .blocks
        .par_iter()
        .zip(hams.par_iter())
        .map(|(b, bh)| {
            let u = unitary_propagator(&bh.matrix, t);
            BlockState { k: b.k, rho: b.rho.conjugate_by(&u) }
        })
        .collect();
    Ok(ManyBodyState { blocks, params: *final_params, t: state.t + t })
}

/// `Σ_k Tr(ρ_k O_k)` with a deterministic pairwise reduction over `k`.
pub fn expectation<T: Real>(state: &ManyBodyState<T>, op_blocks: &[CMatrix<T>]) -> Result<Complex<T>> {
    if op_blocks.len() != state.blocks.len() {
        return Err(Error::SizeMismatch { expected: state.blocks.len(), found: op_blocks.len() });
    }
    let terms: Vec<Complex<T>> = state
        .blocks
        .iter()
        .zip(op_blocks)
        .map(|(b, op)| b.rho.trace_product(op))
        .collect();
    Ok(pairwise_sum(&terms, Complex::zero(), &|a, b| a + b))
}

/// Positive-energy eigenvector `(U, V)` of the Bogoliubov–de Gennes matrix
/// `2[σ^z (h/2 - Re J̃) + σ^x Im J̃]`, with eigenvalue `omega`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BogoliubovPair<T> {
    pub k: T,
    pub u: T,
    pub v: T,
    pub omega: T,
}

pub fn bogoliubov_pair<T: Real>(k: T, params: &ModelParams<T>) -> Result<BogoliubovPair<T>> {
    bogoliubov_from(k, params.h(), jk_coupling(k, params))
}

pub(crate) fn bogoliubov_from<T: Real>(k: T, h: T, jk: Complex<T>) -> Result<BogoliubovPair<T>> {
    let half = T::lit(0.5);
    let a = h * half - jk.re;
    let b = jk.im;
    let omega = dispersion_from(h, jk);
    if omega < T::lit(GAPLESS_TOL) {
        return Err(Error::GaplessBlock { k: k.as_f64(), omega: omega.as_f64() });
    }
    // Two algebraically equivalent forms; pick the one without cancellation.
    let (u, v) = if a >= T::zero() { (a + omega * half, b) } else { (b, omega * half - a) };
    let norm = u.hypot(v);
    Ok(BogoliubovPair { k, u: u / norm, v: v / norm, omega })
}

/// Bogoliubov pairs for the whole grid.
pub fn bogoliubov_pairs<T: Real>(params: &ModelParams<T>) -> Result<Vec<BogoliubovPair<T>>> {
    let h = params.h();
    params
        .grid()
        .momenta()
        .par_iter()
        .map(|&k| bogoliubov_from(k, h, jk_coupling(k, params)))
        .collect()
}
