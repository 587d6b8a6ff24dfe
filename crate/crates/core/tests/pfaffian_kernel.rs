use lrquench::linalg::{determinant, CMatrix};
use lrquench::pfaffian::pfaffian_sign_convention_check;
use lrquench::{pfaffian, SkewMatrix};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex<f64>;

fn random_skew(rng: &mut impl Rng, n: usize) -> SkewMatrix<f64> {
    let upper: Vec<C> = (0..n * (n - 1) / 2).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    SkewMatrix::from_upper(n, &upper).unwrap()
}

#[test]
fn square_equals_determinant_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = 2 * rng.gen_range(1..=32);
        let m = random_skew(&mut rng, n);
        let pf = pfaffian(&m);
        let det = determinant(m.entries());
        worst = worst.max((pf * pf - det).norm() / det.norm());
    }
    assert!(worst < 1e-8, "worst relative defect {worst:e}");
}

#[test]
fn small_closed_forms() {
    let (a, b, c) = (C::new(0.3, -1.2), C::new(2.0, 0.5), C::new(-0.7, 0.1));
    let (d, e, f) = (C::new(1.1, 1.1), C::new(0.0, -0.4), C::new(0.9, 0.0));
    let two = SkewMatrix::from_upper(2, &[a]).unwrap();
    assert!((pfaffian(&two) - a).norm() < 1e-14);
    let four = SkewMatrix::from_upper(4, &[a, b, c, d, e, f]).unwrap();
    // entries (01,02,03,12,13,23): pf = a01 a23 - a02 a13 + a03 a12
    let expected = a * f - b * e + c * d;
    assert!((pfaffian(&four) - expected).norm() < 1e-14);
}

#[test]
fn direct_sum_factorizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (p, q) in [(2, 4), (6, 6), (10, 8)] {
        let (a, b) = (random_skew(&mut rng, p), random_skew(&mut rng, q));
        let sum = CMatrix::from_fn(p + q, |i, j| match (i < p, j < p) {
            (true, true) => a.entries()[(i, j)],
            (false, false) => b.entries()[(i - p, j - p)],
            _ => C::new(0.0, 0.0),
        });
        let pf = pfaffian(&SkewMatrix::new(sum).unwrap());
        let expected = pfaffian(&a) * pfaffian(&b);
        assert!((pf - expected).norm() < 1e-10 * expected.norm().max(1.0));
    }
}

#[test]
fn congruence_multiplies_by_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2, 4, 8, 12] {
        let m = random_skew(&mut rng, n);
        let b = CMatrix::from_fn(n, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let scale = (determinant(&b) * pfaffian(&m)).norm().max(1.0);
        assert!(pfaffian_sign_convention_check(&m, &b).unwrap().norm() < 1e-10 * scale);
    }
}

#[test]
fn single_precision_kernel() {
    let a = Complex::<f32>::new(0.5, 0.25);
    let m = SkewMatrix::from_upper(2, &[a]).unwrap();
    assert_eq!(pfaffian(&m), a);
}
