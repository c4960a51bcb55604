use casimir_lamb::emsum::{
    asymptotic_eval, bethe_inner_sum, em_sum, fixed_eval, stirling_term, ExpansionOrder,
    SmoothFunction,
};
use casimir_lamb::special::{bernoulli_f64, gamma_half_ratio};
use proptest::prelude::*;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

fn polynomial(coeffs: Vec<f64>) -> SmoothFunction<'static> {
    let c2 = coeffs.clone();
    SmoothFunction::analytic(
        move |t| coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c),
        move |m, t| {
            c2.iter()
                .enumerate()
                .skip(m)
                .map(|(k, &c)| {
                    c * ((k - m + 1)..=k).map(|j| j as f64).product::<f64>()
                        * t.powi((k - m) as i32)
                })
                .sum()
        },
    )
}

/// `d^m/dt^m e^{-t^2} = (-1)^m H_m(t) e^{-t^2}` with physicists' Hermite polynomials.
fn gaussian() -> SmoothFunction<'static> {
    SmoothFunction::analytic(
        |t: f64| (-t * t).exp(),
        |m, t| {
            let (mut h0, mut h1) = (1.0, 2.0 * t);
            let hm = if m == 0 {
                h0
            } else {
                for k in 1..m {
                    let h2 = 2.0 * t * h1 - 2.0 * k as f64 * h0;
                    h0 = h1;
                    h1 = h2;
                }
                h1
            };
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * hm * (-t * t).exp()
        },
    )
}

fn ln_factorial(n: u32) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

#[test]
fn gaussian_sum_within_remainder_bound() {
    let direct: f64 = (0..=20).map(|p| (-(p as f64).powi(2)).exp()).sum();
    for r in 1..=3 {
        let res = em_sum(&gaussian(), 20, r).unwrap();
        let err = (res.estimate - direct).abs();
        assert!(
            err <= res.remainder_bound,
            "r = {r}: error {err} > bound {}",
            res.remainder_bound
        );
    }
}

#[test]
fn stirling_series_within_next_term() {
    // ln Gamma(z) at integer z is ln((z-1)!), summed exactly term by term.
    for z in [5u32, 10, 20] {
        let zf = z as f64;
        let target = (ln_factorial(z - 1) - (zf - 0.5) * zf.ln() + zf - 0.5 * (2.0 * PI).ln()) / zf;
        for r in 1..=8 {
            let bound = stirling_term(r + 1, zf).abs();
            if bound < 1e-14 {
                break;
            }
            let s = fixed_eval(|n| stirling_term(n, zf), r).unwrap();
            let err = (s.partial_sum - target).abs();
            assert!(
                err <= bound,
                "z = {z}, r = {r}: error {err} > bound {bound}"
            );
        }
    }
}

#[test]
fn stirling_terms_diverge_at_small_argument() {
    let s = asymptotic_eval(|n| stirling_term(n, 0.5), 30).unwrap();
    assert!(s.diverged);
    assert!(s.truncation_index <= 3);
}

#[test]
fn bethe_inner_sum_near_inverse_sqrt_two() {
    for n in 1..=1000u64 {
        let v = bethe_inner_sum(n).unwrap();
        assert!((v - FRAC_1_SQRT_2).abs() <= gamma_half_ratio(n), "n = {n}");
    }
}

#[test]
fn optimal_truncation_never_keeps_a_growing_term() {
    for z in [0.7, 1.0, 2.0, 3.0] {
        let s = ExpansionOrder::Optimal
            .evaluate(|n| stirling_term(n, z))
            .unwrap();
        for w in s.terms.windows(2) {
            assert!(w[1].abs() <= w[0].abs());
        }
        if s.diverged {
            assert!(s.remainder_bound > s.terms.last().unwrap().abs());
        }
    }
}

proptest! {
    #[test]
    fn exact_on_low_degree_polynomials(
        r in 1usize..=3,
        n_upper in 1u64..40,
        coeffs in prop::collection::vec(-3.0f64..3.0, 6),
    ) {
        let degree = 2 * r - 1;
        let c: Vec<f64> = coeffs.into_iter().take(degree + 1).collect();
        let f = polynomial(c.clone());
        let direct: f64 = (0..=n_upper).map(|p| f.value(p as f64)).sum();
        let scale: f64 = (0..=n_upper).map(|p| f.value(p as f64).abs()).sum::<f64>().max(1.0);
        let res = em_sum(&f, n_upper, r).unwrap();
        prop_assert!((res.estimate - direct).abs() <= 1e-12 * scale);
        prop_assert!(res.remainder_bound <= 1e-9 * scale);
    }

    #[test]
    fn correction_terms_follow_bernoulli_coefficients(n_upper in 1u64..20) {
        // f(t) = t^3: only the first correction is nonzero, b_2/2! * 3 N^2.
        let f = polynomial(vec![0.0, 0.0, 0.0, 1.0]);
        let res = em_sum(&f, n_upper, 2).unwrap();
        let nf = n_upper as f64;
        let expected = bernoulli_f64(2).unwrap() / 2.0 * 3.0 * nf * nf;
        prop_assert!((res.correction_terms[0] - expected).abs() < 1e-12 * expected.max(1.0));
        prop_assert!(res.correction_terms[1].abs() < 1e-12 * expected.max(1.0));
    }
}
