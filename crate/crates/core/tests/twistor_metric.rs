use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use terp::curvature::build_h_jet;
use terp::example3::*;
use terp::linalg::{self, CMat};
use terp::twistor::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn report(r: Complex64, t: Complex64) -> TwistorReport {
    twistor_report(&example3_lattice(&Example3Config::at(r, t)).unwrap()).unwrap()
}

#[test]
fn components_and_signatures() {
    for (r, t, sig) in [
        (c(1.0, 0.0), c(0.0, 0.0), (3, 0)),
        (c(0.0, 1.0), c(0.05, 0.0), (3, 0)),
        (c(2.0, 0.0), c(0.0, 0.0), (3, 0)),
        (c(-3.0, 1.0), c(0.0, 2.0), (3, 0)),
        (c(1.2, 0.0), c(0.3, 0.0), (1, 2)),
        (c(0.0, 0.0), c(1.5, 0.0), (1, 2)),
    ] {
        let rep = report(r, t);
        assert!(rep.pure, "({r}, {t})");
        assert_eq!(rep.global_section_dim, 3);
        assert_eq!(rep.signature, Some(sig), "({r}, {t})");
        assert_eq!(rep.sign, 1);
    }
}

#[test]
fn gram_is_hermitian_and_constant_in_z() {
    for (r, t) in [(c(0.4, 0.3), c(0.1, -0.2)), (c(2.5, 0.0), c(0.0, 0.0)), (c(0.5, 0.0), c(0.8, 0.8))] {
        let rep = report(r, t);
        let g = rep.gram.unwrap();
        assert!(linalg::approx_eq(&g, &g.adjoint(), 1e-9 * linalg::max_abs(&g)));
        assert!(rep.z_dependence.unwrap() < 1e-9);
    }
}

#[test]
fn purity_follows_the_wall_off_the_wall() {
    let radii = [0.0, 0.3, 0.9, 1.3, 1.7, 2.2];
    let ts = [c(0.0, 0.0), c(0.05, 0.0), c(0.15, 0.26), c(0.0, 1.0), c(-0.6, -0.1)];
    for &r in &radii {
        for &t in &ts {
            let cfg = Example3Config::at(c(r, 0.0), t);
            let expected = example3_expected(&cfg);
            if expected.wall.abs() < 1e-3 {
                continue;
            }
            let lat = example3_lattice(&cfg).unwrap();
            let rep = twistor_report(&lat).unwrap();
            assert!(rep.pure, "({r}, {t})");
            assert_eq!(is_pure_polarized(&lat), expected.wall > 0.0, "({r}, {t})");
            if expected.wall < 0.0 {
                assert_eq!(rep.signature, Some((1, 2)));
            }
        }
    }
}

#[test]
fn purity_is_open_near_sampled_points() {
    for (r, t) in [(c(1.0, 0.0), c(0.1, 0.0)), (c(2.0, 0.5), c(0.0, 0.3)), (c(0.5, 0.0), c(1.0, 0.0))] {
        let centre = is_pure_polarized(&example3_lattice(&Example3Config::at(r, t)).unwrap());
        for k in 0..8 {
            let a = 2.0 * PI * k as f64 / 8.0;
            let d = Complex64::from_polar(1e-3, a);
            let lat = example3_lattice(&Example3Config::at(r + d, t - d * 0.5)).unwrap();
            assert!(twistor_report(&lat).unwrap().pure);
            assert_eq!(is_pure_polarized(&lat), centre);
        }
    }
}

/// Smallest eigenvalue of the gram on the `t = 0` slice, zero where the
/// extension is not pure.
fn smallest_eigenvalue(r: f64) -> f64 {
    match report(c(r, 0.0), c(0.0, 0.0)).gram {
        Some(g) => linalg::hermitian_eigenvalues(&g)[0],
        None => 0.0,
    }
}

#[test]
fn wall_on_the_real_slice_is_at_root_two() {
    let (mut a, mut b) = (1.3, 1.5);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-9 {
        let x1 = b - g * (b - a);
        let x2 = a + g * (b - a);
        if smallest_eigenvalue(x1) < smallest_eigenvalue(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    assert!(((a + b) / 2.0 - SQRT_2).abs() < 1e-6, "{}", (a + b) / 2.0);
    let wall = example3_lattice(&Example3Config::at(c(SQRT_2, 0.0), c(0.0, 0.0))).unwrap();
    assert!(metric_gram(&wall).is_err());
    assert!(!is_pure_polarized(&wall));
}

fn metric_dr(r: Complex64) -> f64 {
    let cfg = Example3Config::at(r, c(0.0, 0.0));
    let lat = example3_lattice(&cfg).unwrap();
    let ks = kodaira_spencer(&lat, &example3_dr(cfg.r)).unwrap();
    tangent_metric(&lat, &ks).unwrap()
}

#[test]
fn metric_on_the_real_slice_is_the_poincare_form() {
    for r in [0.1, 0.5, 1.0, 1.3, 1.6, 2.0, 2.9] {
        let rho: f64 = r * r / 2.0;
        let expected = 2.0 / (1.0 - rho).powi(2);
        let got = metric_dr(c(r, 0.0));
        assert!((got / expected - 1.0).abs() < 1e-9, "r = {r}: {got} vs {expected}");
    }
    let rotated = metric_dr(Complex64::from_polar(1.0, 0.7));
    assert!((rotated - 8.0).abs() < 1e-9);
}

/// Second-order expansion of `h(∂_r, ∂_r)` at the origin computed from the
/// jet of `H = X̄ᵗʳX` in a real `P`-orthonormal frame.
#[test]
fn expansion_at_the_origin_matches_the_h_jet() {
    let origin = example3_lattice(&Example3Config::default()).unwrap();
    let ks = kodaira_spencer(&origin, &example3_dr(c(0.0, 0.0))).unwrap();
    let q = real_orthonormal_frame(&origin).unwrap();
    let d = linalg::inverse(&q).unwrap() * &ks[0] * &q;
    let n = 2;
    let h = build_h_jet(&d, n).unwrap();
    let v = linalg::vec_of(&d);
    let mut x = linalg::CVec::zeros(n * v.len());
    x.rows_mut(0, v.len()).copy_from(&v);
    for r in [0.01, 0.02] {
        let t = c(r, 0.0);
        let hm: CMat = &h.c00 + h.c10.map(|z| z * t) + h.c01.map(|z| z * t.conj()) + h.c11.map(|z| z * t.norm_sqr());
        let quad = (x.adjoint() * &hm * &x)[(0, 0)].re;
        let got = metric_dr(t);
        assert!((got - quad).abs() < 1e-3 * r * r, "r = {r}: {got} vs {quad}");
        assert!((quad - (2.0 + 2.0 * r * r)).abs() < 1e-12);
    }
}

#[test]
fn inverse_coordinate_stays_bounded() {
    for (r, tol) in [(10.0, 0.5), (100.0, 1e-2), (1000.0, 1e-3)] {
        let cfg = Example3Config::at(c(r, 0.0), c(0.0, 0.0));
        let lat = example3_lattice(&cfg).unwrap();
        let ks = kodaira_spencer(&lat, &example3_d_inv_r(cfg.r)).unwrap();
        let m = tangent_metric(&lat, &ks).unwrap();
        assert!((m - 8.0).abs() < tol, "r = {r}: {m}");
    }
}

#[test]
fn non_pure_points_are_reported_not_raised() {
    let lat = example3_lattice(&Example3Config::at(c(1.0, 0.0), c(0.25, 0.0))).unwrap();
    let rep = twistor_report(&lat).unwrap();
    assert!(!rep.pure || rep.signature.is_none());
    assert!(metric_gram(&lat).is_err());
}
