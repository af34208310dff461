//! Laurent polynomials in `z` with complex matrix coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponent::FracExponent;
use crate::linalg::{self, CMat};

/// Finite sum `Σ_e z^e · coeff[e]` with matrices of a fixed shape.
/// Coefficients that are exactly zero are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    terms: BTreeMap<i32, CMat>,
}

impl LaurentMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(linalg::eye(n))
    }

    pub fn constant(m: CMat) -> Self {
        Self::monomial(0, m)
    }

    pub fn monomial(e: i32, m: CMat) -> Self {
        let mut out = Self::zero(m.nrows(), m.ncols());
        out.insert(e, m);
        out
    }

    pub fn from_terms<I>(rows: usize, cols: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, CMat)>,
    {
        let mut out = Self::zero(rows, cols);
        for (e, m) in terms {
            if m.shape() != (rows, cols) {
                return Err(Error::Shape(format!(
                    "coefficient of z^{e} is {}x{}, expected {rows}x{cols}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            out.accumulate(e, &m);
        }
        Ok(out)
    }

    fn insert(&mut self, e: i32, m: CMat) {
        if linalg::is_zero(&m) {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, m);
        }
    }

    fn accumulate(&mut self, e: i32, m: &CMat) {
        let sum = match self.terms.get(&e) {
            Some(old) => old + m,
            None => m.clone(),
        };
        self.insert(e, sum);
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn support(&self) -> Vec<i32> {
        self.terms.keys().copied().collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &CMat)> {
        self.terms.iter().map(|(&e, m)| (e, m))
    }

    pub fn coeff(&self, e: i32) -> Option<&CMat> {
        self.terms.get(&e)
    }

    pub fn coeff_or_zero(&self, e: i32) -> CMat {
        self.terms.get(&e).cloned().unwrap_or_else(|| CMat::zeros(self.rows, self.cols))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for (ea, a) in &self.terms {
            for (eb, b) in &other.terms {
                out.accumulate(ea + eb, &(a * b));
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Shape("addition of differently shaped Laurent matrices".into()));
        }
        let mut out = self.clone();
        for (e, m) in &other.terms {
            out.accumulate(*e, m);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|m| -m)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|m| m * s)
    }

    fn map(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        let mut out = Self::zero(self.rows, self.cols);
        for (e, m) in &self.terms {
            out.insert(*e, f(m));
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for (e, m) in &self.terms {
            out.insert(*e, m.transpose());
        }
        out
    }

    /// Entrywise conjugation of the coefficients, keeping `z`.
    pub fn conj_coeffs(&self) -> Self {
        self.map(linalg::conj)
    }

    /// `z ↦ 1/z` combined with conjugated coefficients: `Σ z^{-e} conj(A_e)`.
    pub fn conj_flip(&self) -> Self {
        let mut out = Self::zero(self.rows, self.cols);
        for (e, m) in &self.terms {
            out.insert(-e, linalg::conj(m));
        }
        out
    }

    /// Substitution `z ↦ -z`.
    pub fn negate_z(&self) -> Self {
        let mut out = Self::zero(self.rows, self.cols);
        for (e, m) in &self.terms {
            out.insert(*e, if e % 2 == 0 { m.clone() } else { -m });
        }
        out
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        let mut out = Self::zero(self.rows, self.cols);
        for (e, m) in &self.terms {
            out.insert(e + k, m.clone());
        }
        out
    }

    /// Keep only exponents in `lo..=hi`.
    pub fn truncate(&self, lo: i32, hi: i32) -> Self {
        let mut out = Self::zero(self.rows, self.cols);
        for (e, m) in self.terms.range(lo..=hi) {
            out.insert(*e, m.clone());
        }
        out
    }

    /// Zero out entries below `tol` in absolute value.
    pub fn prune(&self, tol: f64) -> Self {
        self.map(|m| m.map(|x| if x.norm() <= tol { Complex64::new(0.0, 0.0) } else { x }))
    }

    /// Largest entry modulus over all coefficients.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(linalg::max_abs).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.shape() == other.shape()
            && self.sub(other).map(|d| d.max_abs() <= tol).unwrap_or(false)
    }

    pub fn eval(&self, z: Complex64) -> CMat {
        let mut out = CMat::zeros(self.rows, self.cols);
        for (e, m) in &self.terms {
            out += m * z.powi(*e);
        }
        out
    }

    /// Inverse of a unit, truncated to exponents in `-order..=order`.
    ///
    /// Writes `a = a₀(1 + ε)` and sums the geometric series in `-ε`. This
    /// converges formally when `ε` is one-sided (only positive or only
    /// negative exponents) or nilpotent; any other input is rejected.
    pub fn linv_unit(&self, order: i32) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of a non-square Laurent matrix".into()));
        }
        let n = self.rows;
        let a0 = self.coeff_or_zero(0);
        let a0_inv = linalg::inverse(&a0)
            .map_err(|_| Error::Singular("exponent-0 coefficient is not invertible".into()))?;
        let mut eps = Self::zero(n, n);
        for (e, m) in &self.terms {
            if *e != 0 {
                eps.insert(*e, -(&a0_inv * m));
            }
        }
        let one_sided = eps.min_exp().is_none_or(|lo| lo > 0)
            || eps.max_exp().is_none_or(|hi| hi < 0);
        let window = |x: &Self| if one_sided { x.truncate(-order, order) } else { x.clone() };
        let cap = if one_sided { order.max(0) as usize + 1 } else { 4 * n + 2 * order.max(0) as usize + 4 };

        let mut total = Self::identity(n);
        let mut power = Self::identity(n);
        let mut converged = false;
        for _ in 0..cap {
            power = window(&power.mul(&eps)?);
            if power.is_zero() {
                converged = true;
                break;
            }
            total = total.add(&power)?;
        }
        if !one_sided && !converged {
            return Err(Error::Singular(
                "Laurent matrix is not a unit in a one-sided completion".into(),
            ));
        }
        Ok(total.mul(&Self::constant(a0_inv))?.truncate(-order, order))
    }
}

/// Basis adapted to the V-filtration, as produced by [`valuation_eliminate`].
#[derive(Debug, Clone)]
pub struct GoodBasis {
    /// Columns in elementary-section coordinates (each `μ×1`).
    pub columns: Vec<LaurentMatrix>,
    /// Leading order of each column.
    pub orders: Vec<FracExponent>,
    /// Column `j` holds the leading part of column `j` as a flat vector.
    pub leading: CMat,
}

/// Lowest order of `col` and its coefficient vector there. Entries at most
/// `floor` are treated as zero.
fn leading_part(alpha: &[FracExponent], col: &LaurentMatrix, floor: f64) -> Option<(FracExponent, Vec<Complex64>)> {
    let mu = alpha.len();
    let mut best: Option<FracExponent> = None;
    for (e, m) in col.terms() {
        for (i, a) in alpha.iter().enumerate() {
            if m[(i, 0)].norm() > floor {
                let o = a.shift(e as i64);
                if best.is_none_or(|b| o < b) {
                    best = Some(o);
                }
            }
        }
    }
    let order = best?;
    let mut v = vec![Complex64::new(0.0, 0.0); mu];
    for (i, a) in alpha.iter().enumerate() {
        if let Some(k) = order.int_diff(a) {
            if let Some(m) = col.coeff(k as i32) {
                if m[(i, 0)].norm() > floor {
                    v[i] = m[(i, 0)];
                }
            }
        }
    }
    Some((order, v))
}

/// Gaussian elimination on lowest-order elementary-section components.
///
/// `alpha[i]` is the order of the reference section `s_i`; an entry `x` at
/// row `i` and exponent `e` of a column contributes `x·z^e·s_i`, of order
/// `alpha[i] + e`. Whenever the leading parts of columns sharing a
/// monodromy eigenvalue are linearly dependent, the column of highest order
/// in the dependency absorbs `z`-power multiples of the others, which strictly
/// raises its order. On exit the leading parts in each eigenvalue class are
/// independent, so the orders are the spectral numbers of the lattice.
pub fn valuation_eliminate(alpha: &[FracExponent], columns: &[LaurentMatrix]) -> Result<GoodBasis> {
    const ZERO_TOL: f64 = 1e-9;
    const DEP_TOL: f64 = 1e-8;
    let mu = alpha.len();
    if columns.len() != mu {
        return Err(Error::Shape(format!("{} columns for {} reference sections", columns.len(), mu)));
    }
    for c in columns {
        if c.shape() != (mu, 1) {
            return Err(Error::Shape("columns must be μ×1".into()));
        }
    }
    let full_rank_somewhere = [1e-3, 0.7, 1.0, 10.0, 1e3, 1e6].iter().any(|&radius| {
        let z0 = Complex64::from_polar(radius, 0.5137);
        let eval = CMat::from_fn(mu, mu, |i, j| columns[j].eval(z0)[(i, 0)]);
        let sv = linalg::singular_values(&eval);
        let top = sv.first().copied().unwrap_or(0.0);
        top.is_finite() && top > 0.0 && sv.last().copied().unwrap_or(0.0) > 1e-10 * top
    });
    if !full_rank_somewhere {
        return Err(Error::RankDeficient("columns do not have full rank".into()));
    }

    let mut cols: Vec<LaurentMatrix> = columns.to_vec();
    // Magnitude of the largest term that went into each column; cancellation
    // leaves round-off relative to this, not to what survives.
    let mut scales: Vec<f64> = cols.iter().map(|c| c.max_abs()).collect();
    let cap = 10_000;
    for _ in 0..cap {
        let parts: Vec<(FracExponent, Vec<Complex64>)> = cols
            .iter()
            .zip(&scales)
            .map(|(c, &s)| leading_part(alpha, c, ZERO_TOL * s))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::RankDeficient("a column vanished during elimination".into()))?;

        let mut classes: Vec<Vec<usize>> = Vec::new();
        for j in 0..mu {
            match classes.iter_mut().find(|g| parts[g[0]].0.congruent(&parts[j].0)) {
                Some(g) => g.push(j),
                None => classes.push(vec![j]),
            }
        }

        let mut changed = false;
        'classes: for group in &classes {
            let mut ordered = group.clone();
            let weight: Vec<f64> = (0..mu)
                .map(|j| parts[j].1.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() / scales[j])
                .collect();
            ordered.sort_by(|&a, &b| {
                parts[a].0.cmp(&parts[b].0).then(weight[b].total_cmp(&weight[a])).then(a.cmp(&b))
            });
            let mut kept: Vec<usize> = Vec::new();
            for &j in &ordered {
                if !kept.is_empty() {
                    let m = CMat::from_fn(mu, kept.len(), |i, k| parts[kept[k]].1[i]);
                    let v = CMat::from_fn(mu, 1, |i, _| parts[j].1[i]);
                    let coef = linalg::least_squares(&m, &v);
                    if linalg::frob(&(&v - &m * &coef)) <= DEP_TOL * linalg::frob(&v) {
                        let mut acc = cols[j].clone();
                        let mut scale = scales[j];
                        for (k, &jk) in kept.iter().enumerate() {
                            let a = coef[(k, 0)];
                            if a.norm() == 0.0 {
                                continue;
                            }
                            let d = parts[j].0.int_diff(&parts[jk].0).expect("same class") as i32;
                            acc = acc.add(&cols[jk].shift(d).scale(-a))?;
                            scale = scale.max(scales[jk] * a.norm());
                        }
                        cols[j] = acc.prune(ZERO_TOL * scale);
                        scales[j] = scale;
                        changed = true;
                        break 'classes;
                    }
                }
                kept.push(j);
            }
        }
        if !changed {
            let orders: Vec<FracExponent> = parts.iter().map(|p| p.0).collect();
            let leading = CMat::from_fn(mu, mu, |i, j| parts[j].1[i]);
            return Ok(GoodBasis { columns: cols, orders, leading });
        }
    }
    Err(Error::RankDeficient("elimination did not terminate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, from_rows};

    fn m2(a: [[f64; 2]; 2]) -> CMat {
        CMat::from_fn(2, 2, |i, j| c(a[i][j], 0.0))
    }

    #[test]
    fn identity_is_unit() {
        let b = LaurentMatrix::from_terms(2, 2, [(1, m2([[1.0, 2.0], [0.0, 3.0]]))]).unwrap();
        assert_eq!(LaurentMatrix::identity(2).mul(&b).unwrap(), b);
    }

    #[test]
    fn exponents_add() {
        let cm = m2([[1.0, 2.0], [3.0, 4.0]]);
        let dm = m2([[0.0, 1.0], [1.0, 0.0]]);
        let p = LaurentMatrix::monomial(-1, cm.clone())
            .mul(&LaurentMatrix::monomial(1, dm.clone()))
            .unwrap();
        assert_eq!(p.support(), vec![0]);
        assert_eq!(p.coeff(0).unwrap(), &(cm * dm));
    }

    #[test]
    fn difference_of_squares() {
        let cm = from_rows(&[vec![c(0.3, 1.0), c(2.0, 0.0)], vec![c(-1.0, 0.5), c(0.0, -0.7)]]);
        let plus = LaurentMatrix::identity(2).add(&LaurentMatrix::monomial(-1, cm.clone())).unwrap();
        let minus = LaurentMatrix::identity(2).sub(&LaurentMatrix::monomial(-1, cm.clone())).unwrap();
        let p = plus.mul(&minus).unwrap();
        assert_eq!(p.support(), vec![-2, 0]);
        assert!(linalg::approx_eq(p.coeff(-2).unwrap(), &-(&cm * &cm), 1e-14));
        assert!(linalg::approx_eq(p.coeff(0).unwrap(), &linalg::eye(2), 0.0));
    }

    #[test]
    fn geometric_series_inverse() {
        let b = m2([[0.5, 1.0], [-2.0, 0.25]]);
        let a = LaurentMatrix::identity(2).add(&LaurentMatrix::monomial(1, b.clone())).unwrap();
        let inv = a.linv_unit(2).unwrap();
        let expect = LaurentMatrix::from_terms(
            2,
            2,
            [(0, linalg::eye(2)), (1, -b.clone()), (2, &b * &b)],
        )
        .unwrap();
        assert!(inv.approx_eq(&expect, 1e-14));
        assert!(LaurentMatrix::identity(3).linv_unit(4).unwrap() == LaurentMatrix::identity(3));
    }

    #[test]
    fn two_sided_nilpotent_unit() {
        let n = m2([[0.0, 0.0], [1.0, 0.0]]);
        let a = LaurentMatrix::from_terms(2, 2, [(0, linalg::eye(2)), (1, n.clone()), (-1, n.scale(2.0))])
            .unwrap();
        let inv = a.linv_unit(3).unwrap();
        assert!(a.mul(&inv).unwrap().approx_eq(&LaurentMatrix::identity(2), 1e-14));
        let m = m2([[0.0, 1.0], [1.0, 0.0]]);
        let bad = LaurentMatrix::from_terms(2, 2, [(0, linalg::eye(2)), (1, m.clone()), (-1, m)]).unwrap();
        assert!(bad.linv_unit(3).is_err());
    }

    #[test]
    fn singular_constant_term_rejected() {
        let a = LaurentMatrix::constant(m2([[1.0, 0.0], [0.0, 0.0]]));
        assert!(matches!(a.linv_unit(2), Err(Error::Singular(_))));
    }

    fn col(entries: &[(usize, i32, f64)], mu: usize) -> LaurentMatrix {
        let mut out = LaurentMatrix::zero(mu, 1);
        for &(i, e, x) in entries {
            let mut m = CMat::zeros(mu, 1);
            m[(i, 0)] = c(x, 0.0);
            out = out.add(&LaurentMatrix::monomial(e, m)).unwrap();
        }
        out
    }

    #[test]
    fn elimination_raises_dependent_column() {
        let alpha = vec![FracExponent::integer(0), FracExponent::integer(1)];
        // s_0 + z s_1 and z s_0 + z s_1: the second is z·(first) up to higher order.
        let c0 = col(&[(0, 0, 1.0), (1, 1, 1.0)], 2);
        let c1 = col(&[(0, 1, 1.0), (1, 0, 1.0)], 2);
        let gb = valuation_eliminate(&alpha, &[c0.clone(), c1.clone()]).unwrap();
        let mut o = gb.orders.clone();
        o.sort();
        assert_eq!(o, vec![FracExponent::integer(0), FracExponent::integer(1)]);

        let c1 = col(&[(0, 1, 1.0), (1, 1, 1.0)], 2);
        let gb = valuation_eliminate(&alpha, &[c0, c1]).unwrap();
        let mut o = gb.orders.clone();
        o.sort();
        assert_eq!(o, vec![FracExponent::integer(0), FracExponent::integer(2)]);
    }

    #[test]
    fn rank_deficient_columns_rejected() {
        let alpha = vec![FracExponent::integer(0), FracExponent::integer(1)];
        let c0 = col(&[(0, 0, 1.0)], 2);
        assert!(matches!(
            valuation_eliminate(&alpha, &[c0.clone(), c0]),
            Err(Error::RankDeficient(_))
        ));
    }
}
