//! Ground-state correlators from Toeplitz determinants of the fermionic
//! two-point function, computed without the contraction table.

use std::f64::consts::PI;

use lrquench::oracle::quench;
use lrquench::{correlator_set, ground_state, jk_coupling, magnetization, ModelParams};
use nalgebra::DMatrix;
use num_complex::Complex;

struct Toeplitz {
    g: Vec<f64>,
    offset: i64,
}

impl Toeplitz {
    /// `G_n = (1/N) Σ_k e^{ikn} z_k/|z_k|`, `z_k = h/2 - J̃_k`, over the full grid.
    fn new(p: &ModelParams<f64>, span: i64) -> Self {
        let n = p.n();
        let g = (-span..=span)
            .map(|d| {
                let s: Complex<f64> = (1..=n)
                    .map(|m| {
                        let k = (2 * m - 1) as f64 * PI / n as f64;
                        let z = Complex::new(p.h() / 2.0, 0.0) - jk_coupling(k, p);
                        Complex::new(0.0, k * d as f64).exp() * z / z.norm()
                    })
                    .sum();
                assert!(s.im.abs() < 1e-10);
                s.re / n as f64
            })
            .collect();
        Self { g, offset: span }
    }

    fn at(&self, d: i64) -> f64 {
        self.g[(d + self.offset) as usize]
    }

    fn det(&self, r: usize, shift: i64) -> f64 {
        DMatrix::from_fn(r, r, |i, j| self.at(i as i64 - j as i64 + shift)).determinant()
    }

    fn m_z(&self) -> f64 {
        -self.at(0)
    }

    fn xx(&self, r: usize) -> f64 {
        self.det(r, -1)
    }

    fn yy(&self, r: usize) -> f64 {
        self.det(r, 1)
    }

    fn zz(&self, r: usize) -> f64 {
        let r = r as i64;
        self.at(0).powi(2) - self.at(r) * self.at(-r)
    }
}

#[test]
fn toeplitz_route_agrees_with_exact_diagonalization() {
    for (n, h, alpha) in [(10, 0.7, 1.3), (10, 2.6, 0.8), (8, 1.5, 3.0)] {
        let p = ModelParams::new(n, h, alpha).unwrap();
        let snap = quench(&p, &p, 0.0).unwrap();
        let tp = Toeplitz::new(&p, n as i64);
        assert!((tp.m_z() - snap.state.magnetization(0).unwrap()).abs() < 1e-10);
        for r in 1..n / 2 {
            let ed = snap.correlators(r).unwrap();
            for (a, b) in [(tp.xx(r), ed.c_xx), (tp.yy(r), ed.c_yy), (tp.zz(r), ed.c_zz)] {
                assert!((a - b).abs() < 1e-10, "N={n} R={r}: {a} vs {b}");
            }
        }
    }
}

fn assert_pfaffian_route_matches(n: usize, h: f64, alpha: f64, r_max: usize) {
    let p = ModelParams::new(n, h, alpha).unwrap();
    let gs = ground_state(&p).unwrap();
    let tp = Toeplitz::new(&p, 2 * r_max as i64 + 2);
    assert!((magnetization(&gs).unwrap() - tp.m_z()).abs() < 1e-8);
    for r in 1..=r_max {
        let c = correlator_set(&gs, r).unwrap();
        for (name, a, b) in [("xx", c.c_xx, tp.xx(r)), ("yy", c.c_yy, tp.yy(r)), ("zz", c.c_zz, tp.zz(r))] {
            assert!((a - b).abs() < 1e-8, "N={n} h={h} alpha={alpha} R={r} {name}: {a} vs {b}");
        }
        assert!(c.c_xy.abs() < 1e-8 && c.c_yx.abs() < 1e-8);
    }
}

#[test]
fn nearest_neighbour_limit_matches_toeplitz() {
    assert_pfaffian_route_matches(64, 5.0, 50.0, 20);
}

#[test]
fn long_range_ground_states_match_toeplitz() {
    assert_pfaffian_route_matches(60, 0.7, 1.3, 20);
    assert_pfaffian_route_matches(48, 2.6, 0.6, 20);
}
