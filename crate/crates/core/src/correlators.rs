//! Two-point spin correlators of Gaussian momentum-block states.
//!
//! Spin strings become products of the Majorana operators
//! `A_l = c_l† + c_l` and `B_l = c_l† - c_l`; their expectations are
//! Pfaffians of the antisymmetric matrix of pairwise contractions. The
//! contractions themselves are momentum sums over the 4×4 blocks. Signs
//! that come from the sublattice-rotated block frame are folded into the
//! prefactors, so every [`CorrelatorSet`] is reported in the lab frame of the
//! spin Hamiltonian.

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolution::{expectation, ManyBodyState, BLOCK_DIM};
use crate::linalg::CMatrix;
use crate::pfaffian::{pfaffian, SkewMatrix};
use crate::scalar::Real;

/// Which Majorana pair an operator block represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// `A_l A_{l+r}`
    Aa,
    /// `B_l B_{l+r}`
    Bb,
    /// `A_l B_{l+r}`
    Ab,
}

/// Block operator for the translation average of `X_l Y_{l+r}` at momentum
/// `k`, without the `2/N` normalization. The `r = 0` identity shift of
/// `A_l B_l` is added separately in [`contraction_table`].
pub fn pair_operator_block<T: Real>(kind: PairKind, k: T, r: i64) -> CMatrix<T> {
    let kr = k * T::lit(r as f64);
    let (s, c) = (kr.sin(), kr.cos());
    let z = Complex::zero();
    let re = |x: T| Complex::new(x, T::zero());
    let im = |x: T| Complex::new(T::zero(), x);
    let rows = match kind {
        PairKind::Aa => vec![
            vec![z, re(s), z, z],
            vec![re(-s), z, z, z],
            vec![z, z, im(s), z],
            vec![z, z, z, im(-s)],
        ],
        PairKind::Bb => vec![
            vec![z, re(s), z, z],
            vec![re(-s), z, z, z],
            vec![z, z, im(-s), z],
            vec![z, z, z, im(s)],
        ],
        PairKind::Ab => vec![
            vec![z, re(-s), z, z],
            vec![re(-s), re(-(c + c)), z, z],
            vec![z, z, re(-c), z],
            vec![z, z, z, re(-c)],
        ],
    };
    CMatrix::from_rows(&rows)
}

/// Transverse magnetization operator for one block: `diag(1, -1, 0, 0)`.
pub fn sigma_z_block<T: Real>() -> CMatrix<T> {
    let mut m = CMatrix::zeros(BLOCK_DIM);
    m[(0, 0)] = Complex::one();
    m[(1, 1)] = -Complex::<T>::one();
    m
}

/// Translation-invariant Majorana contractions `⟨A_l A_{l+r}⟩`,
/// `⟨B_l B_{l+r}⟩`, `⟨A_l B_{l+r}⟩` for `|r| <= r_max`, in the block frame.
#[derive(Clone, Debug)]
pub struct ContractionTable<T> {
    r_max: usize,
    t: T,
    aa: Vec<Complex<T>>,
    bb: Vec<Complex<T>>,
    ab: Vec<Complex<T>>,
}

impl<T: Real> ContractionTable<T> {
    pub fn r_max(&self) -> usize {
        self.r_max
    }

    pub fn t(&self) -> T {
        self.t
    }

    fn idx(&self, r: i64) -> usize {
        assert!(r.unsigned_abs() as usize <= self.r_max, "separation {r} outside table");
        (r + self.r_max as i64) as usize
    }

    pub fn aa(&self, r: i64) -> Complex<T> {
        self.aa[self.idx(r)]
    }

    pub fn bb(&self, r: i64) -> Complex<T> {
        self.bb[self.idx(r)]
    }

    pub fn ab(&self, r: i64) -> Complex<T> {
        self.ab[self.idx(r)]
    }

    /// `⟨B_l A_{l+r}⟩ = -⟨A_{l+r} B_l⟩`.
    pub fn ba(&self, r: i64) -> Complex<T> {
        -self.ab(-r)
    }

    /// Block-frame magnetization `⟨A_l B_l⟩`.
    pub fn frame_magnetization(&self) -> Complex<T> {
        self.ab(0)
    }

    fn contraction(&self, a: Majorana, b: Majorana) -> Complex<T> {
        let d = b.site - a.site;
        match (a.kind, b.kind) {
            (MajoranaKind::A, MajoranaKind::A) => self.aa(d),
            (MajoranaKind::B, MajoranaKind::B) => self.bb(d),
            (MajoranaKind::A, MajoranaKind::B) => self.ab(d),
            (MajoranaKind::B, MajoranaKind::A) => self.ba(d),
        }
    }
}

/// Evaluates every contraction with `|r| <= r_max` on `state`.
pub fn contraction_table<T: Real>(state: &ManyBodyState<T>, r_max: usize) -> Result<ContractionTable<T>> {
    let half = state.n() / 2;
    if r_max > half {
        return Err(Error::OutOfRange { index: r_max as i64, min: 0, max: half as i64 });
    }
    let norm = T::lit(2.0) / T::from_count(state.n());
    let seps: Vec<i64> = (-(r_max as i64)..=r_max as i64).collect();
    let eval = |kind: PairKind, r: i64| -> Result<Complex<T>> {
        let ops: Vec<CMatrix<T>> = state.blocks.iter().map(|b| pair_operator_block(kind, b.k, r)).collect();
        Ok(expectation(state, &ops)?.scale(norm))
    };
    let rows: Vec<(Complex<T>, Complex<T>, Complex<T>)> = seps
        .par_iter()
        .map(|&r| {
            let mut aa = eval(PairKind::Aa, r)?;
            let mut bb = eval(PairKind::Bb, r)?;
            let mut ab = eval(PairKind::Ab, r)?;
            if r == 0 {
                // {A, A} = 2, {B, B} = -2 and A B = 1 - 2 n on a single site.
                aa = Complex::one();
                bb = -Complex::<T>::one();
                let trace = state.blocks.iter().fold(Complex::zero(), |acc, b| acc + b.trace());
                ab = ab + trace.scale(norm);
            }
            Ok((aa, bb, ab))
        })
        .collect::<Result<_>>()?;
    let (mut aa, mut bb, mut ab) = (Vec::new(), Vec::new(), Vec::new());
    for (x, y, z) in rows {
        aa.push(x);
        bb.push(y);
        ab.push(z);
    }
    Ok(ContractionTable { r_max, t: state.t, aa, bb, ab })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MajoranaKind {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Majorana {
    kind: MajoranaKind,
    site: i64,
}

/// Two-site spin correlators with a Pfaffian representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrelatorKind {
    Xx,
    Yy,
    Xy,
    Yx,
}

impl CorrelatorKind {
    pub const ALL: [CorrelatorKind; 4] = [Self::Xx, Self::Yy, Self::Xy, Self::Yx];

    /// Majorana string for sites `0` and `r`:
    /// xx `B0 (A1 B1)…(A_{r-1} B_{r-1}) A_r`, yy `A0 (…) B_r`,
    /// xy `B0 (…) B_r`, yx `A0 (…) A_r`.
    fn string(self, r: usize) -> Vec<Majorana> {
        let (first, last) = match self {
            Self::Xx => (MajoranaKind::B, MajoranaKind::A),
            Self::Yy => (MajoranaKind::A, MajoranaKind::B),
            Self::Xy => (MajoranaKind::B, MajoranaKind::B),
            Self::Yx => (MajoranaKind::A, MajoranaKind::A),
        };
        let mut seq = Vec::with_capacity(2 * r);
        seq.push(Majorana { kind: first, site: 0 });
        for s in 1..r as i64 {
            seq.push(Majorana { kind: MajoranaKind::A, site: s });
            seq.push(Majorana { kind: MajoranaKind::B, site: s });
        }
        seq.push(Majorana { kind: last, site: r as i64 });
        seq
    }

    /// Lab-frame prefactor: the Jordan–Wigner phase (`1, -1, i, i`) times the
    /// sublattice-rotation sign (`(-1)^r` for xx, yy and `-(-1)^r` for xy, yx).
    fn prefactor<T: Real>(self, r: usize) -> Complex<T> {
        let parity = if r.is_multiple_of(2) { T::one() } else { -T::one() };
        match self {
            Self::Xx => Complex::new(parity, T::zero()),
            Self::Yy => Complex::new(-parity, T::zero()),
            Self::Xy | Self::Yx => Complex::new(T::zero(), -parity),
        }
    }
}

/// Antisymmetric contraction matrix and the prefactor that turns its
/// Pfaffian into the lab-frame correlator.
#[derive(Clone, Debug)]
pub struct PfaffianForm<T> {
    pub matrix: SkewMatrix<T>,
    pub prefactor: Complex<T>,
}

impl<T: Real> PfaffianForm<T> {
    pub fn evaluate(&self) -> Complex<T> {
        self.prefactor * pfaffian(&self.matrix)
    }
}

pub fn build_pfaffian_matrix<T: Real>(
    kind: CorrelatorKind,
    r: usize,
    table: &ContractionTable<T>,
) -> Result<PfaffianForm<T>> {
    if r < 1 || r > table.r_max() {
        return Err(Error::OutOfRange { index: r as i64, min: 1, max: table.r_max() as i64 });
    }
    let seq = kind.string(r);
    let dim = seq.len();
    let mut m = CMatrix::zeros(dim);
    for a in 0..dim {
        for b in (a + 1)..dim {
            let v = table.contraction(seq[a], seq[b]);
            m[(a, b)] = v;
            m[(b, a)] = -v;
        }
    }
    Ok(PfaffianForm { matrix: SkewMatrix::new(m)?, prefactor: kind.prefactor(r) })
}

/// Lab-frame magnetization and the five non-vanishing two-site correlators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelatorSet<T = f64> {
    pub r: usize,
    pub t: T,
    pub m_z: T,
    pub c_xx: T,
    pub c_yy: T,
    pub c_zz: T,
    pub c_xy: T,
    pub c_yx: T,
    /// Largest imaginary part discarded from the complex evaluations.
    pub imag_residue: T,
}

impl<T: Real> CorrelatorSet<T> {
    pub fn max_abs_diff(&self, other: &Self) -> T {
        [
            self.m_z - other.m_z,
            self.c_xx - other.c_xx,
            self.c_yy - other.c_yy,
            self.c_zz - other.c_zz,
            self.c_xy - other.c_xy,
            self.c_yx - other.c_yx,
        ]
        .iter()
        .fold(T::zero(), |m, d| m.max(d.abs()))
    }
}

/// Correlators at distance `r` from a shared contraction table.
pub fn correlator_set_from_table<T: Real>(table: &ContractionTable<T>, r: usize) -> Result<CorrelatorSet<T>> {
    let mut residue = T::zero();
    let mut take = |z: Complex<T>| {
        residue = residue.max(z.im.abs());
        z.re
    };
    let mut vals = [T::zero(); 4];
    for (slot, kind) in vals.iter_mut().zip(CorrelatorKind::ALL) {
        *slot = take(build_pfaffian_matrix(kind, r, table)?.evaluate());
    }
    let ri = r as i64;
    // ⟨A0 B0 A_r B_r⟩ by Wick's theorem.
    let zz = table.ab(0) * table.ab(0) - table.aa(ri) * table.bb(ri) + table.ab(ri) * table.ba(ri);
    let c_zz = take(zz);
    let m_z = -take(table.frame_magnetization());
    Ok(CorrelatorSet {
        r,
        t: table.t(),
        m_z,
        c_xx: vals[0],
        c_yy: vals[1],
        c_xy: vals[2],
        c_yx: vals[3],
        c_zz,
        imag_residue: residue,
    })
}

fn check_distance(n: usize, r: usize) -> Result<()> {
    let max = n / 2 - 1;
    if r < 1 || r > max {
        return Err(Error::OutOfRange { index: r as i64, min: 1, max: max as i64 });
    }
    Ok(())
}

/// Correlators at distance `1 <= r <= N/2 - 1`.
pub fn correlator_set<T: Real>(state: &ManyBodyState<T>, r: usize) -> Result<CorrelatorSet<T>> {
    check_distance(state.n(), r)?;
    let table = contraction_table(state, r)?;
    correlator_set_from_table(&table, r)
}

/// Correlators for several distances sharing one contraction table.
pub fn correlator_sets<T: Real>(state: &ManyBodyState<T>, rs: &[usize]) -> Result<Vec<CorrelatorSet<T>>> {
    for &r in rs {
        check_distance(state.n(), r)?;
    }
    let r_max = rs.iter().copied().max().unwrap_or(0);
    let table = contraction_table(state, r_max)?;
    rs.par_iter().map(|&r| correlator_set_from_table(&table, r)).collect()
}

/// Lab-frame transverse magnetization per site.
pub fn magnetization<T: Real>(state: &ManyBodyState<T>) -> Result<T> {
    let ops = vec![sigma_z_block::<T>(); state.blocks.len()];
    let frame = expectation(state, &ops)?.re * T::lit(2.0) / T::from_count(state.n());
    Ok(-frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{evolve, ground_state};
    use crate::model::ModelParams;

    fn params(n: usize, h: f64, alpha: f64) -> ModelParams<f64> {
        ModelParams::new(n, h, alpha).unwrap()
    }

    #[test]
    fn table_invariants_on_quenched_state() {
        let gs = ground_state(&params(14, 0.5, 0.7)).unwrap();
        let st = evolve(&gs, &params(14, 2.2, 2.5), 1.7).unwrap();
        let tab = contraction_table(&st, 7).unwrap();
        assert_eq!(tab.aa(0), Complex::one());
        assert_eq!(tab.bb(0), -Complex::<f64>::one());
        for r in -7i64..=7 {
            let delta = if r == 0 { 2.0 } else { 0.0 };
            assert!((tab.aa(r) + tab.aa(-r) - delta).norm() < 1e-12);
            assert!((tab.bb(r) + tab.bb(-r) + delta).norm() < 1e-12);
        }
        assert!(contraction_table(&st, 8).is_err());
    }

    #[test]
    fn strong_field_ground_state_is_polarized() {
        let gs = ground_state(&params(8, 100.0, 50.0)).unwrap();
        let tab = contraction_table(&gs, 4).unwrap();
        assert!((tab.ab(0).re - 1.0).abs() < 1e-3);
        for r in 1..=4 {
            assert!(tab.ab(r).norm() < 1e-2);
        }
        assert!((magnetization(&gs).unwrap() + 1.0).abs() < 1e-3);
    }

    #[test]
    fn pfaffian_matrices_are_skew() {
        let gs = ground_state(&params(24, 0.9, 1.1)).unwrap();
        let st = evolve(&gs, &params(24, 1.8, 0.4), 2.3).unwrap();
        let tab = contraction_table(&st, 10).unwrap();
        for r in 1..=10 {
            for kind in CorrelatorKind::ALL {
                let form = build_pfaffian_matrix(kind, r, &tab).unwrap();
                assert_eq!(form.matrix.dim(), 2 * r);
                assert!(form.matrix.correction() < 1e-10);
            }
        }
        assert!(build_pfaffian_matrix(CorrelatorKind::Xx, 0, &tab).is_err());
        assert!(build_pfaffian_matrix(CorrelatorKind::Xx, 11, &tab).is_err());
    }

    #[test]
    fn xy_two_site_matches_brute_force_wick() {
        // B0 A1 B1 B2: sum over the three pairings of four operators.
        let gs = ground_state(&params(12, 0.4, 0.9)).unwrap();
        let st = evolve(&gs, &params(12, 2.7, 1.9), 0.8).unwrap();
        let tab = contraction_table(&st, 2).unwrap();
        let b0a1 = tab.ba(1);
        let b0b1 = tab.bb(1);
        let b0b2 = tab.bb(2);
        let a1b1 = tab.ab(0);
        let a1b2 = tab.ab(1);
        let b1b2 = tab.bb(1);
        let wick = b0a1 * b1b2 - b0b1 * a1b2 + b0b2 * a1b1;
        let form = build_pfaffian_matrix(CorrelatorKind::Xy, 2, &tab).unwrap();
        // lab prefactor at r = 2 is -i
        let expected = Complex::new(0.0, -1.0) * wick;
        assert!((form.evaluate() - expected).norm() < 1e-13);
    }

    #[test]
    fn product_state_limit() {
        let gs = ground_state(&params(12, 1e3, 2.0)).unwrap();
        for r in 1..=5 {
            let cs = correlator_set(&gs, r).unwrap();
            assert!((cs.c_zz - cs.m_z * cs.m_z).abs() < 1e-5);
            assert!(cs.c_xx.abs() < 1e-3 && cs.c_yy.abs() < 1e-3);
            assert!(cs.c_xy.abs() < 1e-9 && cs.c_yx.abs() < 1e-9);
        }
    }

    #[test]
    fn distance_bounds() {
        let gs = ground_state(&params(8, 0.5, 1.0)).unwrap();
        assert!(correlator_set(&gs, 0).is_err());
        assert!(correlator_set(&gs, 4).is_err());
        assert!(correlator_set(&gs, 3).is_ok());
    }
}
