#![allow(clippy::excessive_precision)]

use casimir_lamb::casimir::*;
use casimir_lamb::emsum::ExpansionOrder;
use casimir_lamb::quad::QuadSpec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn tight() -> QuadSpec {
    QuadSpec {
        relative_tolerance: 1e-12,
        absolute_tolerance: 1e-300,
        ..QuadSpec::default()
    }
}

/// `(1/pi) int g(s) F(s) ds` in the cutoff-free limit, from a 40-digit evaluation.
const ORACLE: [(&str, f64, f64); 6] = [
    ("welton", 2.0, 0.021_023_104_103_775_308_533),
    ("welton", 3.0, 0.009_294_752_777_721_394_492_5),
    ("welton", 5.0, 0.003_337_830_190_605_140_964),
    ("welton", 10.0, 0.000_833_611_910_800_445_578_1),
    ("bethe", 2.0, 0.020_756_548_794_947_977_061),
    ("bethe", 5.0, 0.003_331_154_766_605_249_278_8),
];

fn weight(name: &str, eta: f64) -> SpectralWeight {
    match name {
        "welton" => SpectralWeight::welton(eta).unwrap(),
        _ => SpectralWeight::bethe(eta).unwrap(),
    }
}

#[test]
fn richardson_limit_matches_frozen_oracle() {
    for (name, eta, reference) in ORACLE {
        let q =
            sawtooth_moment_limit(&weight(name, eta), CutoffFamily::Gaussian, &tight()).unwrap();
        let v = q.value / PI;
        assert!(
            (v - reference).abs() < 1e-14,
            "{name} eta={eta}: {v} vs {reference}"
        );
        assert!((v - reference).abs() <= q.error_estimate / PI);
    }
}

#[test]
fn expansion_error_matches_oracle_within_first_omitted_term() {
    for (name, eta, reference) in ORACLE {
        let s = normalized_series(&weight(name, eta), ExpansionOrder::Optimal).unwrap();
        let err = (s.partial_sum - reference).abs();
        // Exact-arithmetic check where the omitted term is resolvable; rounding floor otherwise.
        assert!(
            err <= s.remainder_bound.max(4.0 * f64::EPSILON * reference),
            "{name} eta={eta}"
        );
    }
}

#[test]
fn finite_cutoff_quadrature_matches_regulated_expansion() {
    let geom = PlateGeometry::new(50.0, 1.0).unwrap();
    let w = SpectralWeight::welton(10.0).unwrap();
    for fam in [CutoffFamily::Gaussian, CutoffFamily::Quartic] {
        let profile = CutoffProfile::relative_to(fam, &geom, 300.0).unwrap();
        let q = h_casimir_quadrature(&w, &geom, &profile, &tight()).unwrap();
        let e =
            h_casimir_expansion_regulated(&w, &geom, &profile, ExpansionOrder::Optimal).unwrap();
        let tol = e.remainder_bound + q.error_estimate;
        assert!(
            (q.value - e.value).abs() <= tol,
            "{fam}: {} vs {} (tol {tol})",
            q.value,
            e.value
        );
    }
    let sech = CutoffProfile::relative_to(CutoffFamily::Sech, &geom, 300.0).unwrap();
    assert!(h_casimir_expansion_regulated(&w, &geom, &sech, ExpansionOrder::Optimal).is_err());
}

#[test]
fn random_weights_expansion_agrees_with_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let geom = PlateGeometry::new(10.0, 1.0).unwrap();
    for i in 0..20 {
        let gamma = if rng.gen_bool(0.5) { -2 } else { -1 };
        let eta: f64 = rng.gen_range(2.0..50.0);
        let beta = [0.0, 0.5, 1.0, 2.0][rng.gen_range(0..4)];
        let xi = eta * rng.gen_range(1.0..1.5);
        let amplitude = rng.gen_range(0.5..2.0);
        let w = SpectralWeight::new(amplitude, beta, gamma, xi, eta).unwrap();
        let e = h_casimir_expansion(&w, &geom, ExpansionOrder::Optimal).unwrap();
        let q = h_casimir_limit(&w, &geom, CutoffFamily::Gaussian, &tight()).unwrap();
        let tol = e.remainder_bound + q.error_estimate;
        assert!(
            (e.value - q.value).abs() <= tol,
            "case {i}: w = {w:?}: expansion {} quadrature {} tol {tol}",
            e.value,
            q.value
        );
    }
}

#[test]
fn density_ratio_bound_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for _ in 0..10_000 {
        let kd = 10f64.powf(rng.gen_range(-3.0..3.0));
        let k = kd * 10f64.powf(rng.gen_range(-2.0..5.0));
        let ratio = rho_correction(k, kd).unwrap().abs() / rho_free(k);
        assert!(
            ratio <= kd / (2.0 * k) * (1.0 + 1e-12),
            "k = {k}, kd = {kd}"
        );
    }
}

#[test]
fn zero_point_weight_series_terminates() {
    let c = SpectralWeight::casimir().taylor_coefficients(40).unwrap();
    for (k, v) in c.iter().enumerate() {
        if k == 2 {
            assert_eq!(*v, 1.0);
        } else {
            assert_eq!(*v, 0.0, "coefficient {k}");
        }
    }
    let s = normalized_series(&SpectralWeight::casimir(), ExpansionOrder::Optimal).unwrap();
    assert_eq!(s.terms[0], 0.0);
    assert!(s.terms.iter().skip(2).all(|&t| t == 0.0));
    assert_eq!(s.remainder_bound, 0.0);
}

#[test]
fn energy_routes_agree() {
    for (l, d) in [(1.0, 1.0), (10.0, 2.0), (3.0, 0.5)] {
        let geom = PlateGeometry::new(l, d).unwrap();
        let profile = CutoffProfile::relative_to(CutoffFamily::Gaussian, &geom, 1e3).unwrap();
        let closed = casimir_energy(&geom, &profile, CasimirRoute::ClosedForm).unwrap();
        let exp = casimir_energy(&geom, &profile, CasimirRoute::Expansion).unwrap();
        let quad = casimir_energy(&geom, &profile, CasimirRoute::Quadrature).unwrap();
        assert!(((exp - closed) / closed).abs() < 1e-12);
        assert!(((quad - closed) / closed).abs() < 1e-3);
    }
}

#[test]
fn regulator_families_agree_at_large_cutoff() {
    let geom = PlateGeometry::new(1.0, 1.0).unwrap();
    let closed = casimir_closed_form(&geom);
    for fam in CutoffFamily::ALL {
        let profile = CutoffProfile::relative_to(fam, &geom, 1e3).unwrap();
        let v = casimir_energy(&geom, &profile, CasimirRoute::Quadrature).unwrap();
        assert!(((v - closed) / closed).abs() < 2e-3, "{fam}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn taylor_coefficients_reproduce_the_weight(
        beta in prop::sample::select(vec![0.0, 0.5, 1.0, 1.5]),
        gamma in -3i32..=3,
        eta in 1.0f64..5.0,
        stretch in 1.0f64..2.0,
        s in 0.0f64..0.3,
    ) {
        let w = SpectralWeight::new(1.0, beta, gamma, eta * stretch, eta).unwrap();
        let c = w.taylor_coefficients(60).unwrap();
        let series: f64 = c.iter().rev().fold(0.0, |acc, &x| acc * s + x);
        let direct = w.shape(s);
        prop_assert!((series - direct).abs() <= 1e-12 * direct.abs());
    }

    #[test]
    fn bulk_density_scales_as_fourth_power(k in 0.1f64..10.0, fam in prop::sample::select(CutoffFamily::ALL.to_vec())) {
        let a = bulk_energy_density(&CutoffProfile::new(fam, k).unwrap());
        let b = bulk_energy_density(&CutoffProfile::new(fam, 2.0 * k).unwrap());
        prop_assert!((b / a - 16.0).abs() < 1e-12);
        prop_assert!(a > 0.0);
    }
}
