#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use terp::exponent::FracExponent;
use terp::laurent::LaurentMatrix;
use terp::linalg::{self, CMat};
use terp::terp::TopologicalData;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| random_complex(rng))
}

/// Exponents with denominator 4 in `[-3, 3]`.
pub fn random_alpha<R: Rng>(rng: &mut R, mu: usize) -> Vec<FracExponent> {
    (0..mu).map(|_| FracExponent::new(rng.random_range(-12..=12), 4)).collect()
}

/// `C_1, …, C_depth` with random entries exactly where `α_i − k ≥ α_j`.
pub fn random_good_c<R: Rng>(rng: &mut R, alpha: &[FracExponent], depth: usize) -> Vec<CMat> {
    let mu = alpha.len();
    (1..=depth as i64)
        .map(|k| {
            CMat::from_fn(mu, mu, |i, j| {
                let allowed = alpha[i].shift(-k) >= alpha[j];
                if allowed {
                    random_complex(rng)
                } else {
                    c(0.0, 0.0)
                }
            })
        })
        .collect()
}

pub fn basis_of(c: &[CMat]) -> LaurentMatrix {
    let mu = c.first().map_or(0, |m| m.nrows());
    let mut v = LaurentMatrix::identity(mu);
    for (k, m) in c.iter().enumerate() {
        v = v.add(&LaurentMatrix::monomial(-(k as i32 + 1), m.clone())).unwrap();
    }
    v
}

/// `G_0 + Σ_{k=1}^{order} z^k G_k` with a well-conditioned `G_0`.
pub fn random_basis_change<R: Rng>(rng: &mut R, mu: usize, order: i32) -> LaurentMatrix {
    loop {
        let g0 = linalg::eye(mu) + random_matrix(rng, mu, mu).scale(0.4);
        let sv = linalg::singular_values(&g0);
        if sv[sv.len() - 1] < 0.2 {
            continue;
        }
        let mut g = LaurentMatrix::constant(g0);
        for k in 1..=order {
            g = g.add(&LaurentMatrix::monomial(k, random_matrix(rng, mu, mu).scale(0.5))).unwrap();
        }
        return g;
    }
}

pub fn columns(v: &LaurentMatrix) -> Vec<LaurentMatrix> {
    let (rows, cols) = v.shape();
    (0..cols)
        .map(|j| {
            let terms = v.terms().map(|(e, m)| (e, m.columns(j, 1).into_owned()));
            LaurentMatrix::from_terms(rows, 1, terms).unwrap()
        })
        .collect()
}

pub fn sorted(mut v: Vec<FracExponent>) -> Vec<FracExponent> {
    v.sort();
    v
}

pub fn plain_topology(alpha: Vec<FracExponent>) -> TopologicalData {
    let mu = alpha.len();
    TopologicalData {
        mu,
        weight: 0,
        alpha_ref: alpha,
        n: CMat::zeros(mu, mu),
        s: CMat::zeros(mu, mu),
        kappa: linalg::eye(mu),
        pmat: linalg::eye(mu),
    }
}
