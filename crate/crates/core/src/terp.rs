//! Topological data, lattices in the reference elementary-section basis,
//! spectra, the pairing condition, the gamma twist and the Hodge filtration.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponent::FracExponent;
use crate::gamma;
use crate::laurent::{valuation_eliminate, GoodBasis, LaurentMatrix};
use crate::linalg::{self, CMat};

#[derive(Debug, Clone, PartialEq)]
pub struct TopologicalData {
    pub mu: usize,
    pub weight: i64,
    pub alpha_ref: Vec<FracExponent>,
    pub n: CMat,
    pub s: CMat,
    pub kappa: CMat,
    pub pmat: CMat,
}

impl TopologicalData {
    pub fn validate(&self) -> Result<()> {
        let mu = self.mu;
        if mu == 0 {
            return Err(Error::Invalid("rank must be positive".into()));
        }
        if self.alpha_ref.len() != mu {
            return Err(Error::Shape(format!("alphaRef has {} entries, mu = {mu}", self.alpha_ref.len())));
        }
        for (name, m) in [("N", &self.n), ("S", &self.s), ("kappa", &self.kappa), ("Pmat", &self.pmat)] {
            if m.shape() != (mu, mu) {
                return Err(Error::Shape(format!("{name} is {}x{}, expected {mu}x{mu}", m.nrows(), m.ncols())));
            }
        }
        if !is_nilpotent(&self.n) {
            return Err(Error::Invalid("N is not nilpotent".into()));
        }
        if let Some(a) = self.alpha_ref.iter().find(|a| a.imag != 0.0) {
            return Err(Error::Invalid(format!("eigenvalue of exponent {a} is off the unit circle")));
        }
        let kk = &self.kappa * linalg::conj(&self.kappa);
        if !linalg::approx_eq(&kk, &linalg::eye(mu), 1e-10) {
            return Err(Error::Invalid("kappa is not an anti-involution".into()));
        }
        let w_even = self.weight.rem_euclid(2) == 0;
        let scale = linalg::max_abs(&self.s).max(1.0);
        for i in 0..mu {
            for j in 0..mu {
                let one_i = self.alpha_ref[i].is_integer();
                let one_j = self.alpha_ref[j].is_integer();
                let (a, b) = (self.s[(i, j)], self.s[(j, i)]);
                let bad = if one_i != one_j {
                    a.norm() > 1e-10 * scale
                } else {
                    let symmetric = if one_i { w_even } else { !w_even };
                    let expected = if symmetric { a } else { -a };
                    (b - expected).norm() > 1e-10 * scale
                };
                if bad {
                    return Err(Error::Invalid(format!("S violates the symmetry rule at ({i},{j})")));
                }
            }
        }
        if linalg::inverse(&self.pmat).is_err() {
            return Err(Error::Invalid("Pmat is singular".into()));
        }
        Ok(())
    }

    /// Groups reference indices by monodromy eigenvalue, in order of first
    /// appearance.
    pub fn eigen_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.mu {
            match classes.iter_mut().find(|g| self.alpha_ref[g[0]].congruent(&self.alpha_ref[i])) {
                Some(g) => g.push(i),
                None => classes.push(vec![i]),
            }
        }
        classes
    }

    /// Whether reference section `i` lies in the eigenvalue-1 part.
    pub fn in_unipotent_part(&self, i: usize) -> bool {
        self.alpha_ref[i].is_integer()
    }
}

pub fn is_nilpotent(a: &CMat) -> bool {
    let n = a.nrows();
    let norm = linalg::frob(a);
    if norm == 0.0 {
        return true;
    }
    linalg::frob(&linalg::mat_pow(&a.scale(1.0 / norm), n)) < 1e-8
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub topo: TopologicalData,
    /// `C_1, …, C_n` of the basis `v = s·(1 + Σ z^{-k} C_k)`.
    pub c: Vec<CMat>,
}

impl Lattice {
    pub fn new(topo: TopologicalData, c: Vec<CMat>) -> Result<Self> {
        topo.validate()?;
        for (k, m) in c.iter().enumerate() {
            if m.shape() != (topo.mu, topo.mu) {
                return Err(Error::Shape(format!("C_{} has the wrong shape", k + 1)));
            }
        }
        Ok(Self { topo, c })
    }

    pub fn mu(&self) -> usize {
        self.topo.mu
    }

    /// `V(z) = 1 + Σ z^{-k} C_k`.
    pub fn basis(&self) -> LaurentMatrix {
        let mu = self.mu();
        let mut v = LaurentMatrix::identity(mu);
        for (k, m) in self.c.iter().enumerate() {
            v = v.add(&LaurentMatrix::monomial(-(k as i32 + 1), m.clone())).expect("uniform shape");
        }
        v
    }

    /// Highest `k` with `C_k ≠ 0`.
    pub fn pole_depth(&self) -> usize {
        self.c.iter().rposition(|m| !linalg::is_zero(m)).map_or(0, |k| k + 1)
    }

    /// `n = ⌊α_μ − α_1⌋` from the spectrum.
    pub fn n(&self) -> Result<usize> {
        let sp = spectral_numbers(self)?;
        let d = sp[sp.len() - 1].rational - sp[0].rational;
        Ok(d.floor().to_integer().max(0) as usize)
    }

    /// `(C_k)_{ij} = 0` whenever `α_i − k < α_j`.
    pub fn is_good_basis(&self) -> bool {
        let a = &self.topo.alpha_ref;
        self.c.iter().enumerate().all(|(k, m)| {
            let k = k as i64 + 1;
            (0..self.mu()).all(|i| {
                (0..self.mu()).all(|j| a[i].shift(-k) >= a[j] || m[(i, j)].norm() == 0.0)
            })
        })
    }

    fn columns(&self) -> Vec<LaurentMatrix> {
        let v = self.basis();
        (0..self.mu())
            .map(|j| {
                let terms = v.terms().map(|(e, m)| (e, m.columns(j, 1).into_owned()));
                LaurentMatrix::from_terms(self.mu(), 1, terms).expect("column shape")
            })
            .collect()
    }

    pub fn good_basis(&self) -> Result<GoodBasis> {
        valuation_eliminate(&self.topo.alpha_ref, &self.columns())
    }
}

/// Sorted spectrum (real part, then imaginary part).
pub fn spectral_numbers(lat: &Lattice) -> Result<Vec<FracExponent>> {
    let mut orders = lat.good_basis()?.orders;
    orders.sort();
    Ok(orders)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairingReport {
    pub holds: bool,
    pub residue_gram: CMat,
    pub max_violation: f64,
}

/// Checks that `z^{-w}P(v^tr, v) = V(z)^tr·Pmat·V(−z)` has no negative powers
/// of `z` and an invertible constant term.
pub fn check_pairing(lat: &Lattice) -> PairingReport {
    let v = lat.basis();
    let prod = v
        .transpose()
        .mul(&LaurentMatrix::constant(lat.topo.pmat.clone()))
        .and_then(|x| x.mul(&v.negate_z()))
        .expect("square shapes");
    let scale = v.max_abs().powi(2).max(1.0) * linalg::max_abs(&lat.topo.pmat).max(1.0);
    let max_violation = prod
        .terms()
        .filter(|(e, _)| *e < 0)
        .map(|(_, m)| linalg::max_abs(m))
        .fold(0.0, f64::max);
    let residue_gram = prod.coeff_or_zero(0);
    let invertible = linalg::inverse(&residue_gram).is_ok();
    PairingReport { holds: max_violation <= 1e-10 * scale && invertible, residue_gram, max_violation }
}

/// `G^{(α)} = Σ_k Γ^{(k)}(α)/k! · (−N/2πi)^k`.
pub fn gamma_twist(alpha: FracExponent, n: &CMat) -> Result<CMat> {
    let re = alpha.re();
    if !(re > 0.0 && re <= 1.0) {
        return Err(Error::Invalid(format!("exponent {alpha} is outside the strip (0, 1]")));
    }
    if !is_nilpotent(n) {
        return Err(Error::Invalid("N is not nilpotent".into()));
    }
    let mu = n.nrows();
    let z = Complex64::new(re, alpha.imag);
    let derivs = gamma::gamma_derivatives(z, mu.saturating_sub(1))?;
    let step = n.map(|x| -x / Complex64::new(0.0, 2.0 * PI));
    let mut g = CMat::zeros(mu, mu);
    let mut power = linalg::eye(mu);
    let mut fact = 1.0;
    for (k, d) in derivs.iter().enumerate() {
        if k > 0 {
            power = &power * &step;
            fact *= k as f64;
        }
        g += power.map(|x| x * *d / fact);
    }
    Ok(g)
}

/// Decreasing filtration `p ↦ F^p`, stored between `bottom` (everything) and
/// `top` (the last nonzero step).
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    pub dim: usize,
    pub steps: BTreeMap<i32, CMat>,
}

impl Filtration {
    pub fn new(dim: usize, steps: BTreeMap<i32, CMat>) -> Self {
        Self { dim, steps }
    }

    pub fn bottom(&self) -> i32 {
        self.steps.keys().next().copied().unwrap_or(0)
    }

    pub fn top(&self) -> i32 {
        self.steps.keys().next_back().copied().unwrap_or(0)
    }

    pub fn get(&self, p: i32) -> CMat {
        if self.steps.is_empty() {
            return linalg::eye(self.dim);
        }
        if p < self.bottom() {
            return linalg::eye(self.dim);
        }
        if p > self.top() {
            return CMat::zeros(self.dim, 0);
        }
        let (_, m) = self.steps.range(..=p).next_back().expect("p within range");
        m.clone()
    }

    pub fn dim_at(&self, p: i32) -> usize {
        linalg::dim(&self.get(p))
    }

    pub fn is_decreasing(&self) -> bool {
        (self.bottom()..=self.top()).all(|p| linalg::contains(&self.get(p), &self.get(p + 1)))
    }

    /// `p ↦ dim F^p − dim F^{p+1}` over the nonzero range.
    pub fn hodge_numbers(&self) -> BTreeMap<i32, usize> {
        (self.bottom()..=self.top())
            .map(|p| (p, self.dim_at(p) - self.dim_at(p + 1)))
            .filter(|&(_, h)| h > 0)
            .collect()
    }

    /// The filtration `M·F^•` for an invertible `M`.
    pub fn transform(&self, m: &CMat) -> Self {
        let steps = self.steps.iter().map(|(&p, f)| (p, linalg::orth(&(m * f), linalg::RANK_TOL))).collect();
        Self { dim: self.dim, steps }
    }

    /// Restriction to the coordinate subspace spanned by `idx`.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        let sub = coordinate_subspace(self.dim, idx);
        let steps = self
            .steps
            .iter()
            .map(|(&p, f)| {
                let i = linalg::intersect(f, &sub);
                let rows = CMat::from_fn(idx.len(), i.ncols(), |r, c| i[(idx[r], c)]);
                (p, linalg::orth(&rows, linalg::RANK_TOL))
            })
            .collect();
        Self { dim: idx.len(), steps }
    }
}

pub fn coordinate_subspace(dim: usize, idx: &[usize]) -> CMat {
    CMat::from_fn(dim, idx.len(), |r, c| if r == idx[c] { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
}

/// Block-diagonal gamma twist over all eigenvalue classes.
pub fn gamma_twist_total(topo: &TopologicalData) -> Result<CMat> {
    let mu = topo.mu;
    let mut g = CMat::zeros(mu, mu);
    for class in topo.eigen_classes() {
        let alpha = topo.alpha_ref[class[0]].principal();
        let nb = CMat::from_fn(class.len(), class.len(), |a, b| topo.n[(class[a], class[b])]);
        let gb = gamma_twist(alpha, &nb)?;
        for (a, &i) in class.iter().enumerate() {
            for (b, &j) in class.iter().enumerate() {
                g[(i, j)] = gb[(a, b)];
            }
        }
    }
    Ok(g)
}

/// Untwisted filtration `F^•` read off a good basis: the leading part of a
/// good-basis element of order β lies in `F^p` exactly for `p ≤ ⌊w − β⌋`.
pub fn naive_hodge_filtration(lat: &Lattice) -> Result<Filtration> {
    let gb = lat.good_basis()?;
    let w = lat.topo.weight;
    let levels: Vec<i32> = gb
        .orders
        .iter()
        .map(|b| (FracExponent::integer(w).rational - b.rational).floor().to_integer() as i32)
        .collect();
    let lo = *levels.iter().min().expect("mu > 0");
    let hi = *levels.iter().max().expect("mu > 0");
    let mut steps = BTreeMap::new();
    for p in lo..=hi {
        let cols: Vec<usize> = (0..levels.len()).filter(|&j| levels[j] >= p).collect();
        let m = CMat::from_fn(lat.mu(), cols.len(), |i, k| gb.leading[(i, cols[k])]);
        steps.insert(p, linalg::orth(&m, linalg::RANK_TOL));
    }
    Ok(Filtration::new(lat.mu(), steps))
}

/// `F̃^• = G^{-1} F^•`.
pub fn hodge_filtration(lat: &Lattice) -> Result<Filtration> {
    let f = naive_hodge_filtration(lat)?;
    let g = gamma_twist_total(&lat.topo)?;
    Ok(f.transform(&linalg::inverse(&g)?))
}

/// Multiplicities `d(α)` of a sorted spectrum.
pub fn multiplicities(spectrum: &[FracExponent]) -> BTreeMap<FracExponent, usize> {
    let mut out = BTreeMap::new();
    for a in spectrum {
        *out.entry(*a).or_insert(0) += 1;
    }
    out
}
