use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;
use statrs::function::gamma as reference;
use terp::example3::gamma_constant;
use terp::gamma::{gamma, gamma_derivatives, polygamma};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn constant_of_the_example_family() {
    for (p, q) in [(-5, 4), (-4, 3), (-11, 10), (-7, 5)] {
        let a1 = p as f64 / q as f64;
        let expected = reference::gamma(a1 + 2.0) * reference::gamma(-a1 - 1.0) / (2.0 * PI);
        let got = gamma_constant(Rational64::new(p, q)).unwrap();
        assert!(got.re.abs() < 1e-14);
        assert!(close(got.im, expected, 1e-12), "{p}/{q}: {} vs {expected}", got.im);
    }
}

#[test]
fn poles_are_rejected() {
    for k in [0.0, -1.0, -4.0] {
        assert!(gamma(c(k, 0.0)).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn real_axis_matches_statrs(x in -6.0f64..12.0) {
        prop_assume!((x - x.round()).abs() > 1e-3 || x > 0.5);
        let got = gamma(c(x, 0.0)).unwrap();
        let expected = reference::gamma(x);
        prop_assert!(got.im.abs() <= 1e-12 * expected.abs().max(1.0));
        prop_assert!(close(got.re, expected, 1e-11), "{}: {} vs {}", x, got.re, expected);
    }

    #[test]
    fn digamma_matches_statrs(x in 0.05f64..20.0) {
        let got = polygamma(0, c(x, 0.0)).unwrap();
        prop_assert!(close(got.re, reference::digamma(x), 1e-10));
    }

    #[test]
    fn reflection_and_recurrence(re in -4.0f64..4.0, im in 0.1f64..3.0) {
        let z = c(re, im);
        let g = gamma(z).unwrap();
        let reflected = g * gamma(c(1.0, 0.0) - z).unwrap();
        let expected = c(PI, 0.0) / (z * PI).sin();
        prop_assert!((reflected - expected).norm() <= 1e-10 * expected.norm().max(1.0));
        let shifted = gamma(z + 1.0).unwrap();
        prop_assert!((shifted - z * g).norm() <= 1e-11 * shifted.norm().max(1.0));
    }

    #[test]
    fn derivatives_are_consistent(x in 0.3f64..6.0) {
        let d = gamma_derivatives(c(x, 0.0), 2).unwrap();
        let psi = polygamma(0, c(x, 0.0)).unwrap();
        let psi1 = polygamma(1, c(x, 0.0)).unwrap();
        prop_assert!((d[1] - d[0] * psi).norm() <= 1e-10 * d[1].norm().max(1.0));
        prop_assert!((d[2] - d[0] * (psi * psi + psi1)).norm() <= 1e-9 * d[2].norm().max(1.0));
    }
}
