//! Gamma function, polygamma functions and higher derivatives of Gamma for
//! complex arguments.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// B_2, B_4, ..., B_20.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const SHIFT: f64 = 20.0;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn check_pole(z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::Invalid(format!("pole of Gamma at {}", z.re)));
    }
    Ok(())
}

fn shift_count(z: Complex64) -> usize {
    if z.re >= SHIFT {
        0
    } else {
        (SHIFT - z.re).ceil() as usize
    }
}

fn ln_gamma_large(z: Complex64) -> Complex64 {
    let mut s = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln();
    let zinv = z.inv();
    let z2 = zinv * zinv;
    let mut p = zinv;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let m = 2.0 * (k as f64 + 1.0);
        s += p * (b / (m * (m - 1.0)));
        p *= z2;
    }
    s
}

/// Γ(z) for complex `z` away from the poles.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re < 0.5 {
        let s = (PI * z).sin();
        return Ok(Complex64::new(PI, 0.0) / (s * gamma(1.0 - z)?));
    }
    let m = shift_count(z);
    let mut denom = Complex64::new(1.0, 0.0);
    for k in 0..m {
        denom *= z + k as f64;
    }
    Ok(ln_gamma_large(z + m as f64).exp() / denom)
}

/// Polygamma `ψ^{(n)}(z)`; `n = 0` is the digamma function.
pub fn polygamma(n: usize, z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    let m = shift_count(z);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let nf = factorial(n);
    let mut corr = Complex64::new(0.0, 0.0);
    for k in 0..m {
        corr += (z + k as f64).powi(-(n as i32) - 1) * (sign * nf);
    }
    let w = z + m as f64;
    let large = if n == 0 {
        let mut s = w.ln() - 0.5 * w.inv();
        let w2 = (w * w).inv();
        let mut p = w2;
        for (k, b) in BERNOULLI.iter().enumerate() {
            let m2 = 2.0 * (k as f64 + 1.0);
            s -= p * (b / m2);
            p *= w2;
        }
        s
    } else {
        let lead = -sign;
        let mut s = w.powi(-(n as i32)) * factorial(n - 1) + w.powi(-(n as i32) - 1) * (nf / 2.0);
        for (k, b) in BERNOULLI.iter().enumerate() {
            let k2 = 2 * (k + 1);
            let coeff = b * factorial(k2 + n - 1) / factorial(k2);
            s += w.powi(-((k2 + n) as i32)) * coeff;
        }
        s * lead
    };
    Ok(large - corr)
}

/// Derivatives `Γ^{(0)}(z), …, Γ^{(k)}(z)` via `Γ' = Γ·ψ` and Leibniz.
pub fn gamma_derivatives(z: Complex64, k: usize) -> Result<Vec<Complex64>> {
    let g0 = gamma(z)?;
    let psi: Vec<Complex64> = (0..k).map(|j| polygamma(j, z)).collect::<Result<_>>()?;
    let mut g = vec![Complex64::new(1.0, 0.0)];
    for m in 0..k {
        let mut next = Complex64::new(0.0, 0.0);
        for j in 0..=m {
            next += psi[j] * g[m - j] * binomial(m, j);
        }
        g.push(next);
    }
    Ok(g.into_iter().map(|x| x * g0).collect())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn special_values() {
        assert!((gamma(cx(1.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((gamma(cx(0.5)).unwrap() - PI.sqrt()).norm() < 1e-14);
        assert!((gamma(cx(5.0)).unwrap() - 24.0).norm() < 1e-12);
        assert!((gamma(cx(-0.5)).unwrap() + 2.0 * PI.sqrt()).norm() < 1e-13);
        let euler = 0.577_215_664_901_532_9;
        assert!((polygamma(0, cx(1.0)).unwrap() + euler).norm() < 1e-14);
        assert!((polygamma(1, cx(1.0)).unwrap() - PI * PI / 6.0).norm() < 1e-14);
        assert!((polygamma(2, cx(1.0)).unwrap() + 2.0 * 1.202_056_903_159_594_3).norm() < 1e-13);
        assert!(gamma(cx(-2.0)).is_err());
    }

    #[test]
    fn recurrence_in_the_complex_plane() {
        let z = Complex64::new(0.3, 1.7);
        let g = gamma(z).unwrap();
        assert!((gamma(z + 1.0).unwrap() - z * g).norm() < 1e-13 * g.norm().max(1.0));
        let p = polygamma(1, z).unwrap();
        assert!((polygamma(1, z + 1.0).unwrap() - (p - z.powi(-2))).norm() < 1e-13);
    }

    #[test]
    fn first_derivative_is_gamma_times_digamma() {
        let d = gamma_derivatives(cx(0.5), 2).unwrap();
        assert!((d[1] - d[0] * polygamma(0, cx(0.5)).unwrap()).norm() < 1e-14);
    }
}
