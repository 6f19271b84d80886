use faberzeros::exact::{frac, int, to_f64, Rational};
use faberzeros::faber::{
    closed_form_check, faber_polynomial, is_integral, renormalized_coeffs, scaled_deviations,
    FaberPoly,
};
use faberzeros::modforms::{
    custom_form_spec, decompose_weight, miller_basis_series, miller_form_spec, ModularFormSpec,
};
use faberzeros::qseries::{delta_series, eisenstein_series, gamma_k, TruncatedSeries};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn weights_up_to(max: i64) -> impl Iterator<Item = i64> {
    (4..=max).step_by(2)
}

/// `Delta^l E_k' F(j)` modulo `q^order`.
fn reconstruct(f: &FaberPoly, order: i64) -> TruncatedSeries {
    let w = decompose_weight(f.k() as i64).unwrap();
    let ell = w.ell as i64;
    let fj = f.compose_j(order - ell);
    let dl = delta_series(order + 1).pow(w.ell);
    let e = eisenstein_series(w.k_prime, order).unwrap();
    dl.mul(&e).mul(&fj).truncate(order)
}

#[test]
fn weight_decomposition() {
    let cases = [
        (4, 0, 4),
        (12, 1, 0),
        (14, 0, 14),
        (26, 1, 14),
        (24, 2, 0),
        (1200, 100, 0),
        (1210, 100, 10),
    ];
    for (k, ell, kp) in cases {
        let w = decompose_weight(k).unwrap();
        assert_eq!((w.ell, w.k_prime), (ell, kp), "k = {k}");
        assert_eq!(12 * w.ell + w.k_prime as u64, k as u64);
    }
    for bad in [-4, 2, 13, 1] {
        assert!(decompose_weight(bad).is_err(), "k = {bad}");
    }
    assert_eq!(decompose_weight(0).unwrap().ell, 0);
}

#[test]
fn miller_basis_is_echelon_up_to_120() {
    for k in weights_up_to(120) {
        let ell = decompose_weight(k).unwrap().ell as i64;
        let basis = miller_basis_series(k, ell + 3).unwrap();
        assert_eq!(basis.len() as i64, ell + 1);
        for (m, f) in basis.iter().enumerate() {
            for n in 0..=ell {
                let expected = if n == m as i64 {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                assert_eq!(f.coeff(n).unwrap(), expected, "k = {k}, m = {m}, n = {n}");
            }
        }
    }
}

#[test]
fn miller_shortcut_matches_basis() {
    for k in weights_up_to(120) {
        let ell = decompose_weight(k).unwrap().ell;
        let basis = miller_basis_series(k, ell as i64 + 1).unwrap();
        for (m, f) in basis.iter().enumerate() {
            let from_series = ModularFormSpec::from_series(k, f).unwrap();
            assert_eq!(
                from_series,
                miller_form_spec(k, m as u64).unwrap(),
                "k = {k}, m = {m}"
            );
        }
    }
}

#[test]
fn faber_reconstructs_miller_basis() {
    for k in [12, 24, 36, 40, 62, 74, 100, 110, 120] {
        let ell = decompose_weight(k).unwrap().ell as i64;
        let order = ell + 6;
        let basis = miller_basis_series(k, order).unwrap();
        for (m, f) in basis.iter().enumerate() {
            let faber = faber_polynomial(&miller_form_spec(k, m as u64).unwrap());
            assert!(reconstruct(&faber, order) == *f, "k = {k}, m = {m}");
        }
    }
}

#[test]
fn miller_faber_polynomials_are_integral() {
    for k in weights_up_to(120) {
        let ell = decompose_weight(k).unwrap().ell;
        for m in 0..=ell {
            let f = faber_polynomial(&miller_form_spec(k, m).unwrap());
            assert!(is_integral(&f), "k = {k}, m = {m}");
            assert_eq!(f.degree() as u64, ell - m);
            assert!(f.coeffs()[0].is_one());
        }
    }
}

#[test]
fn linear_faber_for_every_residue() {
    // F_{k, l-1}(t) = t + 24 l + gamma(k') - 744
    for k in [28, 30, 32, 34, 36, 38, 1204, 1206, 1208, 1210, 1214] {
        let w = decompose_weight(k).unwrap();
        let f = faber_polynomial(&miller_form_spec(k, w.ell - 1).unwrap());
        let expected = int(24 * w.ell as i64 - 744) + gamma_k(w.k_prime).unwrap();
        assert_eq!(f.coeffs(), &[int(1), expected], "k = {k}");
    }
}

#[test]
fn closed_form_families() {
    for ell in 2..=50u64 {
        assert!(closed_form_check(12 * ell, ell - 1).unwrap());
        assert!(closed_form_check(12 * ell, ell - 2).unwrap());
        if ell >= 3 {
            assert!(closed_form_check(12 * ell, ell - 3).unwrap());
        }
    }
    assert!(closed_form_check(28, 1).is_err());
    assert!(closed_form_check(120, 0).is_err());
}

#[test]
fn linear_deviation_is_constant() {
    for ell in [100u64, 1000, 12345] {
        let f = faber_polynomial(&miller_form_spec(12 * ell as i64, ell - 1).unwrap());
        assert_eq!(scaled_deviations(&f)[1], int(372));
        assert!(renormalized_coeffs(&f)[0].is_zero());
    }
}

#[test]
fn quadratic_deviation_limit() {
    // x_2 = 36 (8 l^2 - 495 l + 4438) against (2k)^2 / 2 = 288 l^2
    let ell = 20000u64;
    let f = faber_polynomial(&miller_form_spec(12 * ell as i64, ell - 2).unwrap());
    let dev = to_f64(&scaled_deviations(&f)[2]);
    assert!((dev - 742.5).abs() < 0.01 * 742.5, "{dev}");
}

fn small_weight() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![24i64, 26, 28, 30, 32, 34, 36, 38, 48, 50, 58, 62])
}

fn custom_spec() -> impl Strategy<Value = ModularFormSpec> {
    small_weight().prop_flat_map(|k| {
        let ell = decompose_weight(k).unwrap().ell;
        (0..=ell).prop_flat_map(move |m| {
            let d = (ell - m) as usize;
            prop::collection::vec((-50i64..50, 1i64..5), d).prop_map(move |a| {
                let a: Vec<Rational> = a.into_iter().map(|(n, q)| frac(n, q)).collect();
                custom_form_spec(k, m, &a).unwrap()
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn custom_forms_reconstruct(spec in custom_spec()) {
        let f = faber_polynomial(&spec);
        let ell = spec.ell() as i64;
        let series = reconstruct(&f, ell + 1);
        prop_assert_eq!(series.valuation(), spec.m() as i64);
        prop_assert_eq!(series.window(spec.m() as i64, ell + 1), spec.unit_coeffs().to_vec());
    }

    #[test]
    fn delta_multiple_has_same_faber_polynomial(spec in custom_spec()) {
        let shifted = spec.times_delta();
        prop_assert_eq!(shifted.k(), spec.k() + 12);
        prop_assert_eq!(shifted.degree(), spec.degree());
        let (a, b) = (faber_polynomial(&shifted), faber_polynomial(&spec));
        prop_assert_eq!(a.coeffs(), b.coeffs());
    }

    #[test]
    fn faber_is_linear_in_the_window(k in small_weight(), s in -5i64..6) {
        let ell = decompose_weight(k).unwrap().ell;
        let a = miller_form_spec(k, 0).unwrap();
        let b = miller_form_spec(k, 1).unwrap();
        let mut y = a.unit_coeffs().to_vec();
        y[1] = int(s);
        let combo = ModularFormSpec::new(k, 0, y).unwrap();
        // f_{k,0} + s f_{k,1} has F = F_{k,0} + s F_{k,1}
        let fa = faber_polynomial(&a);
        let fb = faber_polynomial(&b);
        let fc = faber_polynomial(&combo);
        prop_assert_eq!(fc.degree() as u64, ell);
        for i in 0..=ell as usize {
            let lower = if i >= 1 { fb.coeffs()[i - 1].clone() } else { Rational::zero() };
            prop_assert_eq!(&fc.coeffs()[i], &(&fa.coeffs()[i] + lower * int(s)));
        }
    }
}

#[test]
fn spec_json_format() {
    let spec = custom_form_spec(24, 1, &[frac(-1, 2)]).unwrap();
    let text = serde_json::to_string(&spec).unwrap();
    assert_eq!(text, r#"{"k":24,"m":1,"unit_coeffs":["1","-1/2"]}"#);
    let back: ModularFormSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(back, spec);
    assert!(
        serde_json::from_str::<ModularFormSpec>(r#"{"k":24,"m":1,"unit_coeffs":["1"]}"#).is_err()
    );
    assert!(
        serde_json::from_str::<ModularFormSpec>(r#"{"k":13,"m":0,"unit_coeffs":["1"]}"#).is_err()
    );
}

#[test]
fn faber_json_format() {
    let f = faber_polynomial(&miller_form_spec(24, 0).unwrap());
    let text = serde_json::to_string(&f).unwrap();
    assert_eq!(
        text,
        r#"{"k":24,"m":0,"D":2,"coeffs_desc":["1","-1440","125280"]}"#
    );
    let back: FaberPoly = serde_json::from_str(&text).unwrap();
    assert_eq!(back, f);
}
