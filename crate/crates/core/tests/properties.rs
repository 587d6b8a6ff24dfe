use lrquench::analysis::{fit_profile, FitOptions};
use lrquench::model::uniform_time_grid;
use lrquench::observables::two_site_spectrum;
use lrquench::{
    assemble_two_site, build_pfaffian_matrix, contraction_table, correlator_set, evolve, ground_state,
    mutual_information, rate_function_at, CorrelatorKind, DecayModel, ModelParams, ProfilePoint,
};
use proptest::prelude::*;

#[derive(Clone, Debug)]
struct Quench {
    n: usize,
    hi: f64,
    ai: f64,
    hf: f64,
    af: f64,
    t: f64,
}

impl Quench {
    fn params(&self) -> (ModelParams<f64>, ModelParams<f64>) {
        (ModelParams::new(self.n, self.hi, self.ai).unwrap(), ModelParams::new(self.n, self.hf, self.af).unwrap())
    }
}

fn quench() -> impl Strategy<Value = Quench> {
    (4usize..=24, 0.1f64..3.5, 0.3f64..5.0, 0.1f64..3.5, 0.3f64..5.0, 0.0f64..30.0)
        .prop_filter("avoid the gapless field", |q| (q.1 - 2.0).abs() > 1e-3 && (q.3 - 2.0).abs() > 1e-3)
        .prop_map(|(half, hi, ai, hf, af, t)| Quench { n: 2 * half, hi, ai, hf, af, t })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn two_site_states_are_physical(q in quench(), frac in 0.0f64..1.0) {
        let (pi, pf) = q.params();
        let st = evolve(&ground_state(&pi).unwrap(), &pf, q.t).unwrap();
        let r = 1 + ((q.n / 2 - 2) as f64 * frac) as usize;
        let c = correlator_set(&st, r).unwrap();
        for v in [c.m_z, c.c_xx, c.c_yy, c.c_zz, c.c_xy, c.c_yx] {
            prop_assert!(v.abs() <= 1.0 + 1e-8);
        }
        let rho = assemble_two_site(&c);
        prop_assert!((rho.rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.rho.hermiticity_defect() < 1e-14);
        let eig = rho.eigenvalues().unwrap();
        prop_assert!(eig.iter().all(|&x| x > -1e-10));
        let closed = two_site_spectrum(&c).unwrap();
        prop_assert!(closed.iter().all(|&x| x > -1e-10));
        let i = mutual_information(&c).unwrap();
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&i));
        prop_assert!((i - rho.mutual_information().unwrap()).abs() < 1e-8);
    }

    #[test]
    fn final_energy_is_conserved(q in quench()) {
        let (pi, pf) = q.params();
        let gs = ground_state(&pi).unwrap();
        let e0 = gs.energy(&pf).unwrap();
        let e1 = evolve(&gs, &pf, q.t).unwrap().energy(&pf).unwrap();
        prop_assert!((e0 - e1).abs() < 1e-10 * e0.abs().max(1.0));
    }

    #[test]
    fn evolution_is_unitary(q in quench()) {
        let (pi, pf) = q.params();
        let st = evolve(&ground_state(&pi).unwrap(), &pf, q.t).unwrap();
        for b in &st.blocks {
            prop_assert!((b.trace().re - 1.0).abs() < 1e-12 && b.trace().im.abs() < 1e-12);
            prop_assert!((b.purity() - 1.0).abs() < 1e-12);
            prop_assert!(b.rho.hermiticity_defect() < 1e-13);
        }
    }

    #[test]
    fn pfaffian_matrices_are_skew(q in quench(), frac in 0.0f64..1.0) {
        let (pi, pf) = q.params();
        let st = evolve(&ground_state(&pi).unwrap(), &pf, q.t).unwrap();
        let r_max = q.n / 2 - 1;
        let r = 1 + ((r_max - 1) as f64 * frac) as usize;
        let tab = contraction_table(&st, r_max).unwrap();
        for kind in [CorrelatorKind::Xx, CorrelatorKind::Yy, CorrelatorKind::Xy, CorrelatorKind::Yx] {
            let form = build_pfaffian_matrix(kind, r, &tab).unwrap();
            let m = form.matrix.entries();
            prop_assert_eq!(m.dim(), 2 * r);
            prop_assert!(form.matrix.correction() < 1e-12);
            for i in 0..m.dim() {
                for j in 0..m.dim() {
                    prop_assert!((m[(i, j)] + m[(j, i)]).norm() == 0.0);
                }
            }
        }
    }

    #[test]
    fn rate_function_is_nonnegative(q in quench()) {
        let (pi, pf) = q.params();
        let times = uniform_time_grid(0.1, 10.0).unwrap();
        let f = rate_function_at(&pi, &pf, &times).unwrap();
        prop_assert!(f.rate.iter().all(|&x| x >= -1e-14 && x.is_finite()));
    }

    #[test]
    fn power_laws_are_recovered(eta in 0.2f64..3.0, amp in 1e-3f64..1.0, len in 40usize..200) {
        let profile: Vec<ProfilePoint<f64>> =
            (1..len).map(|r| ProfilePoint { r, total_correlation: amp * (r as f64).powf(-eta) }).collect();
        let v = fit_profile(&profile, &FitOptions::default()).unwrap();
        prop_assert_eq!(v.model, DecayModel::Algebraic);
        prop_assert!((v.eta.unwrap() - eta).abs() < 1e-6);
        prop_assert!((v.r2_alg - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exponentials_are_recovered(xi in 1.0f64..8.0, amp in 1e-3f64..1.0, len in 40usize..200) {
        let profile: Vec<ProfilePoint<f64>> =
            (1..len).map(|r| ProfilePoint { r, total_correlation: amp * (-(r as f64) / xi).exp() }).collect();
        let v = fit_profile(&profile, &FitOptions::default()).unwrap();
        prop_assert_eq!(v.model, DecayModel::Exponential);
        prop_assert!((v.xi.unwrap() - xi).abs() < 1e-6 * xi);
    }
}
