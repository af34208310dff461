//! Exponents of elementary sections: an exact rational part plus an optional
//! imaginary part.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;

use crate::error::Error;

#[derive(Debug, Clone, Copy)]
pub struct FracExponent {
    pub rational: Rational64,
    pub imag: f64,
}

impl FracExponent {
    pub fn new(num: i64, den: i64) -> Self {
        Self { rational: Rational64::new(num, den), imag: 0.0 }
    }

    pub fn integer(k: i64) -> Self {
        Self::new(k, 1)
    }

    pub fn with_imag(rational: Rational64, imag: f64) -> Self {
        Self { rational, imag }
    }

    pub fn re(&self) -> f64 {
        *self.rational.numer() as f64 / *self.rational.denom() as f64
    }

    pub fn is_integer(&self) -> bool {
        self.rational.is_integer() && self.imag == 0.0
    }

    /// Same class modulo integers, i.e. the same monodromy eigenvalue.
    pub fn congruent(&self, other: &Self) -> bool {
        (self.rational - other.rational).is_integer() && self.imag == other.imag
    }

    /// Integer difference `self - other` when the two are congruent.
    pub fn int_diff(&self, other: &Self) -> Option<i64> {
        let d = self.rational - other.rational;
        (d.is_integer() && self.imag == other.imag).then(|| d.to_integer())
    }

    pub fn shift(&self, k: i64) -> Self {
        Self { rational: self.rational + Rational64::from_integer(k), imag: self.imag }
    }

    pub fn neg(&self) -> Self {
        Self { rational: -self.rational, imag: -self.imag }
    }

    /// Representative in the strip `(0, 1]` of the same class.
    pub fn principal(&self) -> Self {
        let r = self.rational;
        let k = r.ceil().to_integer() - 1;
        self.shift(-k)
    }

    pub fn floor(&self) -> i64 {
        self.rational.floor().to_integer()
    }
}

impl PartialEq for FracExponent {
    fn eq(&self, other: &Self) -> bool {
        self.rational == other.rational && self.imag == other.imag
    }
}

impl Eq for FracExponent {}

impl PartialOrd for FracExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Real part first, imaginary part as tie-break.
impl Ord for FracExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rational.cmp(&other.rational).then(self.imag.total_cmp(&other.imag))
    }
}

impl fmt::Display for FracExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        if self.imag != 0.0 {
            if self.imag > 0.0 {
                write!(f, "+{}i", self.imag)?;
            } else {
                write!(f, "{}i", self.imag)?;
            }
        }
        Ok(())
    }
}

impl FromStr for FracExponent {
    type Err = Error;

    /// Accepts `"a"`, `"a/b"`, `"a/b+ci"` and `"a/b-ci"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad exponent {s:?}"));
        if s.is_empty() {
            return Err(bad());
        }
        let (real_part, imag) = if let Some(stripped) = s.strip_suffix('i') {
            let cut = stripped
                .char_indices()
                .skip(1)
                .filter(|&(_, ch)| ch == '+' || ch == '-')
                .map(|(i, _)| i)
                .last()
                .ok_or_else(bad)?;
            let im: f64 = stripped[cut..].trim_start_matches('+').parse().map_err(|_| bad())?;
            (&stripped[..cut], im)
        } else {
            (s, 0.0)
        };
        let rational = match real_part.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Rational64::new(n, d)
            }
            None => Rational64::from_integer(real_part.trim().parse().map_err(|_| bad())?),
        };
        Ok(Self { rational, imag })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let a: FracExponent = "-5/4".parse().unwrap();
        assert_eq!(a, FracExponent::new(-5, 4));
        assert_eq!(a.to_string(), "-5/4");
        let b: FracExponent = "1/2+0.25i".parse().unwrap();
        assert_eq!(b.imag, 0.25);
        assert_eq!(b.to_string(), "1/2+0.25i");
        let c: FracExponent = "-3/6-1i".parse().unwrap();
        assert_eq!(c.rational, Rational64::new(-1, 2));
        assert_eq!(c.imag, -1.0);
        assert_eq!("0".parse::<FracExponent>().unwrap().to_string(), "0");
        assert!("1/0".parse::<FracExponent>().is_err());
        assert!("x".parse::<FracExponent>().is_err());
    }

    #[test]
    fn principal_strip() {
        assert_eq!(FracExponent::new(-5, 4).principal(), FracExponent::new(3, 4));
        assert_eq!(FracExponent::integer(0).principal(), FracExponent::integer(1));
        assert_eq!(FracExponent::integer(1).principal(), FracExponent::integer(1));
        assert_eq!(FracExponent::new(5, 4).principal(), FracExponent::new(1, 4));
    }

    #[test]
    fn ordering_breaks_ties_on_imaginary_part() {
        let a = FracExponent::with_imag(Rational64::new(1, 2), -1.0);
        let b = FracExponent::with_imag(Rational64::new(1, 2), 1.0);
        assert!(a < b);
        assert!(FracExponent::new(-1, 2) < a);
    }
}
