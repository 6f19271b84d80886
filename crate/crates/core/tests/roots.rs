use faberzeros::faber::faber_polynomial;
use faberzeros::halfplane::miller_form_of_degree;
use faberzeros::modforms::miller_form_spec;
use faberzeros::roots::{
    find_roots, match_roots, ostrowski_bound, reversed_truncated_exp, scaled_faber_roots,
    sort_by_argument, truncated_exp_inverse_zeros, ComplexPoly, DEFAULT_TOL,
};
use faberzeros::Complex64;
use itertools::Itertools;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Monic coefficients of `prod (t - r)`, highest first.
fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![c(1.0, 0.0)];
    for &r in roots {
        let mut next = p.clone();
        next.push(c(0.0, 0.0));
        for (i, a) in p.iter().enumerate() {
            next[i + 1] -= a * r;
        }
        p = next;
    }
    p
}

/// Smallest achievable maximum distance, over every permutation.
fn brute_force_bottleneck(a: &[Complex64], b: &[Complex64]) -> f64 {
    (0..a.len())
        .permutations(a.len())
        .map(|p| {
            p.iter()
                .enumerate()
                .map(|(i, &j)| (a[i] - b[j]).norm())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Eigenvalues of the companion matrix of a real monic polynomial.
fn companion_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 0..d {
        m[(0, i)] = -coeffs[i + 1];
        if i + 1 < d {
            m[(i + 1, i)] = 1.0;
        }
    }
    let mut ev: Vec<Complex64> = m
        .complex_eigenvalues()
        .iter()
        .map(|z| c(z.re, z.im))
        .collect();
    sort_by_argument(&mut ev);
    ev
}

#[test]
fn printed_roots_of_small_faber_polynomials() {
    let cases: [(i64, &[f64]); 2] = [
        (24, &[93.0072, 1346.99]),
        (36, &[30.3029, 582.232, 1547.46]),
    ];
    for (k, printed) in cases {
        let f = faber_polynomial(&miller_form_spec(k, 0).unwrap());
        let r = scaled_faber_roots(&f, DEFAULT_TOL).unwrap();
        let mut t: Vec<f64> = r.t.iter().map(|z| z.re).collect();
        t.sort_by(f64::total_cmp);
        for (got, want) in t.iter().zip(printed) {
            assert!((got - want).abs() < 1e-2, "k = {k}: {got} vs {want}");
        }
        assert!(r.t.iter().all(|z| z.im == 0.0));
    }
}

#[test]
fn truncated_exp_quartic_against_companion_matrix() {
    let got = truncated_exp_inverse_zeros(4).unwrap().roots;
    let oracle = companion_roots(&[1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0]);
    for (a, b) in got.iter().zip(&oracle) {
        assert!((a - b).norm() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn truncated_exp_against_companion_matrix() {
    for d in 1..=12usize {
        let mut coeffs = vec![1.0];
        let mut fact = 1.0;
        for i in 1..=d {
            fact *= i as f64;
            coeffs.push(1.0 / fact);
        }
        let got = truncated_exp_inverse_zeros(d).unwrap().roots;
        let oracle = companion_roots(&coeffs);
        // eigenvalues lose accuracy as 1/D! shrinks, so compare residuals too
        if d <= 10 {
            let m = match_roots(&got, &oracle).unwrap();
            assert!(m.max_distance < 1e-10, "D = {d}: {}", m.max_distance);
        }
        let p = reversed_truncated_exp(d).unwrap();
        let worst = |v: &[Complex64]| {
            v.iter()
                .map(|z| p.eval_extended(*z).norm())
                .fold(0.0, f64::max)
        };
        assert!(worst(&got) <= worst(&oracle), "D = {d}");
    }
}

#[test]
fn vieta_relations() {
    let mut fact = 1.0;
    for d in 1..=10usize {
        fact *= d as f64;
        let z = truncated_exp_inverse_zeros(d).unwrap().roots;
        assert_eq!(z.len(), d);
        let sum: Complex64 = z.iter().sum();
        let prod: Complex64 = z.iter().product();
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        assert!((sum - c(-1.0, 0.0)).norm() < 1e-10, "D = {d}: sum {sum}");
        assert!(
            (prod - c(sign / fact, 0.0)).norm() < 1e-10,
            "D = {d}: product {prod}"
        );
    }
}

#[test]
fn inverse_zeros_are_simple_and_sorted() {
    for d in 1..=10usize {
        let z = truncated_exp_inverse_zeros(d).unwrap().roots;
        let min_gap = z
            .iter()
            .tuple_combinations()
            .map(|(a, b)| (a - b).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(min_gap > 1e-3, "D = {d}");
        let args: Vec<f64> = z.iter().map(|w| w.im.atan2(w.re)).collect();
        assert!(args
            .windows(2)
            .all(|w| w[0] <= w[1] || w[0] == std::f64::consts::PI));
        // conjugate pairs for a real polynomial
        for w in &z {
            assert!(z.iter().any(|v| (v - w.conj()).norm() < 1e-12));
        }
    }
}

#[test]
fn inverse_zeros_invert_the_exponential_zeros() {
    // z_{D,r} = 1/t_r where t_r solves 1 + t + ... + t^D/D! = 0
    for d in 1..=8usize {
        let z = truncated_exp_inverse_zeros(d).unwrap().roots;
        for w in z {
            let t = w.inv();
            let mut term = c(1.0, 0.0);
            let mut sum = c(1.0, 0.0);
            for i in 1..=d {
                term = term * t / i as f64;
                sum += term;
            }
            assert!(
                sum.norm() < 1e-10 * (1.0 + t.norm().powi(d as i32)),
                "D = {d}"
            );
        }
    }
}

#[test]
fn reversed_exponential_coefficients() {
    let p = reversed_truncated_exp(3).unwrap();
    let want = [1.0, 1.0, 0.5, 1.0 / 6.0];
    for (a, b) in p.coeffs().iter().zip(want) {
        assert_eq!(*a, c(b, 0.0));
    }
}

#[test]
fn ostrowski_dominates_on_perturbed_cubics() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let a: Vec<f64> = (0..4)
            .map(|i| {
                if i == 0 {
                    1.0
                } else {
                    rng.random_range(-5.0..5.0)
                }
            })
            .collect();
        let b: Vec<f64> = a
            .iter()
            .enumerate()
            .map(|(i, x)| {
                if i == 0 {
                    1.0
                } else {
                    x + rng.random_range(-1e-3..1e-3)
                }
            })
            .collect();
        let (p, q) = (
            ComplexPoly::from_real(&a).unwrap(),
            ComplexPoly::from_real(&b).unwrap(),
        );
        let rp = find_roots(&p, 1e-8).unwrap().roots;
        let rq = find_roots(&q, 1e-8).unwrap().roots;
        let dist = match_roots(&rp, &rq).unwrap().max_distance;
        assert!(dist <= ostrowski_bound(&p, &q).unwrap(), "{a:?}");
    }
}

#[test]
fn matching_against_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=9usize {
        let trials = if n == 9 { 2 } else { 20 };
        for _ in 0..trials {
            let a: Vec<Complex64> = (0..n)
                .map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
                .collect();
            let b: Vec<Complex64> = (0..n)
                .map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
                .collect();
            let m = match_roots(&a, &b).unwrap();
            assert_eq!(m.max_distance, brute_force_bottleneck(&a, &b), "n = {n}");
            let mut seen = m.partner.clone();
            seen.sort_unstable();
            assert_eq!(seen, (0..n).collect::<Vec<_>>());
        }
    }
}

#[test]
fn matching_perturbed_quartic() {
    let z = truncated_exp_inverse_zeros(4).unwrap().roots;
    let mut shuffled: Vec<Complex64> = z.iter().rev().map(|w| w + c(1e-3, -2e-3)).collect();
    shuffled.rotate_left(1);
    let m = match_roots(&z, &shuffled).unwrap();
    assert_eq!(m.max_distance, brute_force_bottleneck(&z, &shuffled));
    for (i, j) in m.pairs() {
        assert!((z[i] - shuffled[j]).norm() < 3e-3);
    }
}

#[test]
fn linear_faber_roots() {
    let f = faber_polynomial(&miller_form_spec(24, 1).unwrap());
    let r = scaled_faber_roots(&f, DEFAULT_TOL).unwrap();
    assert_eq!(r.t, vec![c(696.0, 0.0)]);
    assert_eq!(r.z, vec![c(14.5, 0.0)]);

    let f = faber_polynomial(&miller_form_of_degree(12000, 1).unwrap());
    let r = scaled_faber_roots(&f, DEFAULT_TOL).unwrap();
    assert_eq!(r.t, vec![c(-23256.0, 0.0)]);
    assert!((r.z[0] - c(-1.0 + 0.031, 0.0)).norm() < 1e-12);
}

#[test]
fn quadratic_root_offset_does_not_grow() {
    let gap = |k: u64| {
        let f = faber_polynomial(&miller_form_of_degree(k, 2).unwrap());
        let r = scaled_faber_roots(&f, DEFAULT_TOL).unwrap();
        let z = truncated_exp_inverse_zeros(2).unwrap().roots;
        let scaled: Vec<Complex64> = z.iter().map(|w| w * (2.0 * k as f64)).collect();
        match_roots(&r.t, &scaled).unwrap().max_distance
    };
    let (g1, g2) = (gap(12000), gap(24000));
    assert!(g1 <= 2000.0 && g2 <= 2000.0, "{g1} {g2}");
    assert!(g2 <= g1, "{g1} -> {g2}");
}

#[test]
fn acceptance_workloads_meet_residual_tolerance() {
    for d in 1..=4usize {
        for i in 0..7 {
            let k = 1200u64 << i;
            let f = faber_polynomial(&miller_form_of_degree(k, d).unwrap());
            let r = scaled_faber_roots(&f, 1e-10).unwrap();
            assert_eq!(r.t.len(), d);
        }
    }
}

fn complex_in(range: f64) -> impl Strategy<Value = Complex64> {
    (-range..range, -range..range).prop_map(|(re, im)| c(re, im))
}

fn separated(roots: &[Complex64], gap: f64) -> bool {
    roots
        .iter()
        .tuple_combinations()
        .all(|(a, b)| (a - b).norm() >= gap)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ostrowski_dominates_random_pairs(
        roots in prop::collection::vec(complex_in(3.0), 1..=6),
        delta in prop::collection::vec(complex_in(1e-2), 6),
    ) {
        let a = from_roots(&roots);
        let b: Vec<Complex64> = a
            .iter()
            .enumerate()
            .map(|(i, x)| if i == 0 { *x } else { x + delta[i - 1] })
            .collect();
        let (p, q) = (ComplexPoly::monic(a).unwrap(), ComplexPoly::monic(b).unwrap());
        let rp = find_roots(&p, 1e-8).unwrap().roots;
        let rq = find_roots(&q, 1e-8).unwrap().roots;
        let dist = match_roots(&rp, &rq).unwrap().max_distance;
        prop_assert!(dist <= ostrowski_bound(&p, &q).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn recovers_separated_roots(roots in prop::collection::vec(complex_in(10.0), 1..=12)) {
        prop_assume!(separated(&roots, 0.5));
        let p = ComplexPoly::monic(from_roots(&roots)).unwrap();
        let set = find_roots(&p, DEFAULT_TOL).unwrap();
        prop_assert_eq!(set.len(), roots.len());
        let m = match_roots(&set.roots, &roots).unwrap();
        prop_assert!(m.max_distance < 1e-7, "{}", m.max_distance);
    }

    #[test]
    fn scaling_the_variable_scales_the_roots(roots in prop::collection::vec(complex_in(2.0), 1..=6), e in -20i32..20) {
        prop_assume!(separated(&roots, 0.2));
        let s = 2f64.powi(e);
        let scaled: Vec<Complex64> = roots.iter().map(|r| r * s).collect();
        let a = find_roots(&ComplexPoly::monic(from_roots(&roots)).unwrap(), DEFAULT_TOL).unwrap();
        let b = find_roots(&ComplexPoly::monic(from_roots(&scaled)).unwrap(), DEFAULT_TOL).unwrap();
        let back: Vec<Complex64> = b.roots.iter().map(|r| r / s).collect();
        prop_assert!(match_roots(&a.roots, &back).unwrap().max_distance < 1e-8);
    }
}
