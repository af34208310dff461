//! The rank-3 family with spectrum `(α₁, 0, −α₁)`, `α₁ ∈ (−3/2, −1)`,
//! parametrised by two complex numbers `(r, t)`:
//!
//! ```text
//! v₁ = s₁ + r z⁻¹ s₂ + (r²/2) z⁻² s₃ + t z⁻¹ s₃
//! v₂ = s₂ + r z⁻¹ s₃
//! v₃ = s₃
//! ```
//!
//! with `P(sᵢ, sⱼ) = δ_{i+j,4}` and weight 0.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::exponent::FracExponent;
use crate::gamma::gamma;
use crate::linalg::{self, c, CMat};
use crate::terp::{Filtration, Lattice, TopologicalData};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example3Config {
    pub alpha1: Rational64,
    pub r: Complex64,
    pub t: Complex64,
}

impl Default for Example3Config {
    fn default() -> Self {
        Self { alpha1: Rational64::new(-5, 4), r: c(0.0, 0.0), t: c(0.0, 0.0) }
    }
}

impl Example3Config {
    pub fn at(r: Complex64, t: Complex64) -> Self {
        Self { r, t, ..Self::default() }
    }

    pub fn rho(&self) -> f64 {
        self.r.norm_sqr() / 2.0
    }

    pub fn theta(&self) -> f64 {
        self.t.norm_sqr()
    }
}

fn check_alpha(alpha1: Rational64) -> Result<()> {
    if alpha1 <= Rational64::new(-3, 2) || alpha1 >= Rational64::from_integer(-1) {
        return Err(Error::Invalid(format!("alpha1 = {alpha1} is outside (-3/2, -1)")));
    }
    Ok(())
}

fn to_f64(q: Rational64) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// `γ = −(1/2πi)·Γ(α₁+2)·Γ(α₃−1)`.
pub fn gamma_constant(alpha1: Rational64) -> Result<Complex64> {
    check_alpha(alpha1)?;
    let a1 = to_f64(alpha1);
    let g = gamma(c(a1 + 2.0, 0.0))? * gamma(c(-a1 - 1.0, 0.0))?;
    Ok(-g / c(0.0, 2.0 * PI))
}

pub fn example3_topology(alpha1: Rational64) -> Result<TopologicalData> {
    check_alpha(alpha1)?;
    let g = gamma_constant(alpha1)?;
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let s = linalg::from_rows(&[vec![z, z, g], vec![z, one, z], vec![-g, z, z]]);
    Ok(TopologicalData {
        mu: 3,
        weight: 0,
        alpha_ref: vec![
            FracExponent::with_imag(alpha1, 0.0),
            FracExponent::integer(0),
            FracExponent::with_imag(-alpha1, 0.0),
        ],
        n: CMat::zeros(3, 3),
        s,
        kappa: linalg::antidiag(3),
        pmat: linalg::antidiag(3),
    })
}

pub fn example3_c(r: Complex64, t: Complex64) -> Vec<CMat> {
    let z = c(0.0, 0.0);
    let c1 = linalg::from_rows(&[vec![z, z, z], vec![r, z, z], vec![t, r, z]]);
    let mut c2 = CMat::zeros(3, 3);
    c2[(2, 0)] = r * r / 2.0;
    vec![c1, c2]
}

pub fn example3_lattice(cfg: &Example3Config) -> Result<Lattice> {
    Lattice::new(example3_topology(cfg.alpha1)?, example3_c(cfg.r, cfg.t))
}

/// The reference flag `F¹ = ⟨A₁⟩ ⊂ F⁰ = F⁻¹ = ⟨A₁, A₂⟩ ⊂ F⁻² = everything`.
pub fn example3_flag() -> Filtration {
    let e = linalg::eye(3);
    let mut steps = BTreeMap::new();
    steps.insert(-2, e.clone());
    steps.insert(-1, e.columns(0, 2).into_owned());
    steps.insert(0, e.columns(0, 2).into_owned());
    steps.insert(1, e.columns(0, 1).into_owned());
    Filtration::new(3, steps)
}

/// Closed-form expectations for the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example3Expected {
    pub pure: bool,
    /// `(1−ρ)⁴ − θ`; the twistor extension is pure off its zero set.
    pub wall: f64,
    /// Displayed value of `h(∂_r, ∂_r)` on `t = 0`.
    pub metric_rr: f64,
    /// Displayed value of `h(∂_{1/r}, ∂_{1/r})` on `t = 0`.
    pub metric_inv_rr: f64,
}

pub fn example3_expected(cfg: &Example3Config) -> Example3Expected {
    let rho = cfg.rho();
    let wall = (1.0 - rho).powi(4) - cfg.theta();
    let denom = (1.0 - rho).powi(4);
    Example3Expected {
        pure: wall != 0.0,
        wall,
        metric_rr: 2.0 * (1.0 + rho * rho) / denom,
        metric_inv_rr: 8.0 * rho * rho * (1.0 + rho * rho) / denom,
    }
}

/// Derivative of `(C₁, C₂)` along `∂_r`.
pub fn example3_dr(r: Complex64) -> Vec<CMat> {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let d1 = linalg::from_rows(&[vec![z, z, z], vec![one, z, z], vec![z, one, z]]);
    let mut d2 = CMat::zeros(3, 3);
    d2[(2, 0)] = r;
    vec![d1, d2]
}

/// Derivative of `(C₁, C₂)` along `∂_t`.
pub fn example3_dt() -> Vec<CMat> {
    let mut d1 = CMat::zeros(3, 3);
    d1[(2, 0)] = c(1.0, 0.0);
    vec![d1, CMat::zeros(3, 3)]
}

/// Derivative along `∂_{1/r} = −r²·∂_r`.
pub fn example3_d_inv_r(r: Complex64) -> Vec<CMat> {
    example3_dr(r).into_iter().map(|m| m * (-r * r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_has_vanishing_coefficients() {
        let lat = example3_lattice(&Example3Config::default()).unwrap();
        assert_eq!(lat.pole_depth(), 0);
    }

    #[test]
    fn alpha_range_enforced() {
        assert!(example3_topology(Rational64::new(-3, 2)).is_err());
        assert!(example3_topology(Rational64::from_integer(-1)).is_err());
        assert!(example3_topology(Rational64::new(-6, 5)).is_ok());
    }

    #[test]
    fn expected_values_at_rho_one_half() {
        let e = example3_expected(&Example3Config::at(c(1.0, 0.0), c(0.0, 0.0)));
        assert!(e.pure);
        assert!((e.metric_rr - 40.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_constant_is_imaginary() {
        let g = gamma_constant(Rational64::new(-5, 4)).unwrap();
        assert!(g.re.abs() < 1e-15);
        assert!(g.im > 0.0);
    }
}
