//! Truncated jets in one holomorphic parameter `t` and its conjugate:
//! `a = c00 + t·c10 + t̄·c01 + t t̄·c11` modulo `t²` and `t̄²`.
//!
//! Coefficients may be constant matrices or Laurent matrices in `z`; a Laurent
//! polynomial with jet coefficients is always stored as a jet of Laurent
//! polynomials.

use num_complex::Complex64;

use crate::error::Result;
use crate::laurent::LaurentMatrix;
use crate::linalg::{self, CMat};

/// Ring operations needed of a jet coefficient.
pub trait JetCoeff: Clone {
    fn jmul(&self, other: &Self) -> Result<Self>;
    fn jadd(&self, other: &Self) -> Result<Self>;
    fn jneg(&self) -> Self;
    /// Entrywise complex conjugation of the coefficient data.
    fn jconj(&self) -> Self;
    fn jtranspose(&self) -> Self;
    fn zero_like(&self) -> Self;
}

impl JetCoeff for CMat {
    fn jmul(&self, other: &Self) -> Result<Self> {
        if self.ncols() != other.nrows() {
            return Err(crate::Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        Ok(self * other)
    }
    fn jadd(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(crate::Error::Shape("jet addition shape mismatch".into()));
        }
        Ok(self + other)
    }
    fn jneg(&self) -> Self {
        -self
    }
    fn jconj(&self) -> Self {
        linalg::conj(self)
    }
    fn jtranspose(&self) -> Self {
        self.transpose()
    }
    fn zero_like(&self) -> Self {
        CMat::zeros(self.nrows(), self.ncols())
    }
}

impl JetCoeff for LaurentMatrix {
    fn jmul(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
    fn jadd(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }
    fn jneg(&self) -> Self {
        self.neg()
    }
    fn jconj(&self) -> Self {
        self.conj_coeffs()
    }
    fn jtranspose(&self) -> Self {
        self.transpose()
    }
    fn zero_like(&self) -> Self {
        let (r, c) = self.shape();
        LaurentMatrix::zero(r, c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet2<T> {
    pub c00: T,
    pub c10: T,
    pub c01: T,
    pub c11: T,
}

impl<T: JetCoeff> Jet2<T> {
    pub fn constant(v: T) -> Self {
        let z = v.zero_like();
        Self { c00: v, c10: z.clone(), c01: z.clone(), c11: z }
    }

    /// The jet `t·v`.
    pub fn t(v: T) -> Self {
        let z = v.zero_like();
        Self { c00: z.clone(), c10: v, c01: z.clone(), c11: z }
    }

    /// The jet `t̄·v`.
    pub fn tbar(v: T) -> Self {
        let z = v.zero_like();
        Self { c00: z.clone(), c10: z.clone(), c01: v, c11: z }
    }

    pub fn mul(&self, b: &Self) -> Result<Self> {
        let a = self;
        let c00 = a.c00.jmul(&b.c00)?;
        let c10 = a.c00.jmul(&b.c10)?.jadd(&a.c10.jmul(&b.c00)?)?;
        let c01 = a.c00.jmul(&b.c01)?.jadd(&a.c01.jmul(&b.c00)?)?;
        let c11 = a
            .c00
            .jmul(&b.c11)?
            .jadd(&a.c10.jmul(&b.c01)?)?
            .jadd(&a.c01.jmul(&b.c10)?)?
            .jadd(&a.c11.jmul(&b.c00)?)?;
        Ok(Self { c00, c10, c01, c11 })
    }

    pub fn add(&self, b: &Self) -> Result<Self> {
        Ok(Self {
            c00: self.c00.jadd(&b.c00)?,
            c10: self.c10.jadd(&b.c10)?,
            c01: self.c01.jadd(&b.c01)?,
            c11: self.c11.jadd(&b.c11)?,
        })
    }

    pub fn sub(&self, b: &Self) -> Result<Self> {
        self.add(&b.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(JetCoeff::jneg)
    }

    /// Formal conjugation: `t ↔ t̄` together with conjugated coefficients.
    pub fn conj(&self) -> Self {
        Self {
            c00: self.c00.jconj(),
            c10: self.c01.jconj(),
            c01: self.c10.jconj(),
            c11: self.c11.jconj(),
        }
    }

    pub fn transpose(&self) -> Self {
        self.map(JetCoeff::jtranspose)
    }

    fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Self { c00: f(&self.c00), c10: f(&self.c10), c01: f(&self.c01), c11: f(&self.c11) }
    }

    /// Inverse given an inverter for the value part.
    pub fn inv_with(&self, inv0: impl Fn(&T) -> Result<T>) -> Result<Self> {
        let i00 = inv0(&self.c00)?;
        let i10 = i00.jmul(&self.c10)?.jmul(&i00)?.jneg();
        let i01 = i00.jmul(&self.c01)?.jmul(&i00)?.jneg();
        let inner = self
            .c11
            .jmul(&i00)?
            .jadd(&self.c10.jmul(&i01)?)?
            .jadd(&self.c01.jmul(&i10)?)?;
        let i11 = i00.jmul(&inner)?.jneg();
        Ok(Self { c00: i00, c10: i10, c01: i01, c11: i11 })
    }

    /// `(∂_t, ∂_t̄, ∂_t ∂_t̄)` at the base point.
    pub fn derivatives(&self) -> (T, T, T) {
        (self.c10.clone(), self.c01.clone(), self.c11.clone())
    }
}

impl Jet2<CMat> {
    pub fn inv(&self) -> Result<Self> {
        self.inv_with(linalg::inverse)
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(linalg::eye(n))
    }

    /// Kronecker product, expanded to second order.
    pub fn kron(&self, b: &Self) -> Self {
        let k = linalg::kron;
        Self {
            c00: k(&self.c00, &b.c00),
            c10: k(&self.c00, &b.c10) + k(&self.c10, &b.c00),
            c01: k(&self.c00, &b.c01) + k(&self.c01, &b.c00),
            c11: k(&self.c00, &b.c11) + k(&self.c10, &b.c01) + k(&self.c01, &b.c10) + k(&self.c11, &b.c00),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|m| m.map(|x| x * s))
    }

    pub fn max_abs(&self) -> f64 {
        [&self.c00, &self.c10, &self.c01, &self.c11]
            .into_iter()
            .map(linalg::max_abs)
            .fold(0.0, f64::max)
    }
}

impl Jet2<LaurentMatrix> {
    pub fn inv(&self, order: i32) -> Result<Self> {
        self.inv_with(|a| a.linv_unit(order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, from_rows};

    fn delta() -> CMat {
        from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, 1.0), c(-1.0, 0.0)]])
    }

    #[test]
    fn first_order_terms_square_to_zero() {
        let one = Jet2::identity(2);
        let p = one.add(&Jet2::t(delta())).unwrap();
        let m = one.sub(&Jet2::t(delta())).unwrap();
        let prod = p.mul(&m).unwrap();
        assert_eq!(prod, Jet2::identity(2));
    }

    #[test]
    fn mixed_product_lands_in_c11() {
        let d = delta();
        let prod = Jet2::t(d.clone()).mul(&Jet2::tbar(linalg::conj(&d))).unwrap();
        let (dt, dtb, mixed) = prod.derivatives();
        assert!(linalg::is_zero(&dt) && linalg::is_zero(&dtb));
        assert_eq!(mixed, &d * linalg::conj(&d));
    }

    #[test]
    fn inverse_of_one_plus_t_delta() {
        let a = Jet2::identity(2).add(&Jet2::t(delta())).unwrap();
        let inv = a.inv().unwrap();
        assert_eq!(inv, Jet2::identity(2).sub(&Jet2::t(delta())).unwrap());
        assert_eq!(Jet2::identity(3).inv().unwrap(), Jet2::identity(3));
    }

    #[test]
    fn conjugation_swaps_directions() {
        let j = Jet2::t(delta());
        let cj = j.conj();
        assert!(linalg::is_zero(&cj.c10));
        assert_eq!(cj.c01, linalg::conj(&delta()));
        assert_eq!(cj.conj(), j);
    }
}
