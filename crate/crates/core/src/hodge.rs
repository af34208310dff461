//! Weight filtrations of nilpotent endomorphisms, primitive parts, and the
//! membership tests for (polarized) mixed Hodge structures.
//!
//! Graded pieces `Gr^W_l = W_l / W_{l-1}` are handled in coordinates: `Q_l`
//! is an orthonormal basis of the orthogonal complement of `W_{l-1}` inside
//! `W_l`, and a class `[x]` has coordinates `Q_l^† x`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, RANK_TOL};
use crate::terp::{is_nilpotent, Filtration, TopologicalData};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightFiltration {
    pub center: i32,
    pub dim: usize,
    /// `W_l` for every `l` between the last zero and the first full step.
    pub steps: BTreeMap<i32, CMat>,
}

impl WeightFiltration {
    pub fn get(&self, l: i32) -> CMat {
        match (self.steps.keys().next(), self.steps.keys().next_back()) {
            (Some(&lo), _) if l < lo => CMat::zeros(self.dim, 0),
            (_, Some(&hi)) if l > hi => linalg::eye(self.dim),
            _ => self.steps.get(&l).cloned().unwrap_or_else(|| CMat::zeros(self.dim, 0)),
        }
    }

    /// Orthonormal representatives of `Gr^W_l`.
    pub fn graded_basis(&self, l: i32) -> CMat {
        let lower = self.get(l - 1);
        let upper = self.get(l);
        if upper.ncols() == 0 {
            return CMat::zeros(self.dim, 0);
        }
        let proj = &lower * lower.adjoint();
        let rest = &upper - &proj * &upper;
        linalg::orth_abs(&rest, RANK_TOL)
    }

    pub fn graded_dim(&self, l: i32) -> usize {
        self.graded_basis(l).ncols()
    }

    /// Weights present, lowest first.
    pub fn weights(&self) -> Vec<i32> {
        let (lo, hi) = self.range();
        (lo..=hi).filter(|&l| self.graded_dim(l) > 0).collect()
    }

    fn range(&self) -> (i32, i32) {
        (
            self.steps.keys().next().copied().unwrap_or(self.center),
            self.steps.keys().next_back().copied().unwrap_or(self.center),
        )
    }
}

/// The monodromy weight filtration:
/// `W_{c+k} = Σ_{j ≥ 0} N^j(ker N^{k+2j+1})`.
pub fn weight_filtration(n: &CMat, center: i32) -> Result<WeightFiltration> {
    if n.nrows() != n.ncols() {
        return Err(Error::Shape("N must be square".into()));
    }
    if !is_nilpotent(n) {
        return Err(Error::Invalid("N is not nilpotent".into()));
    }
    let dim = n.nrows();
    let m = dim as i32;
    let norm = linalg::frob(n);
    let unit = if norm > 0.0 { n.scale(1.0 / norm) } else { n.clone() };
    let mut steps = BTreeMap::new();
    for k in -m..=m {
        let mut acc = CMat::zeros(dim, 0);
        for j in 0..=dim as i32 {
            let e = k + 2 * j + 1;
            if e <= 0 {
                continue;
            }
            let ker = linalg::null_space_abs(&linalg::mat_pow(&unit, e as usize), RANK_TOL);
            let img = linalg::mat_pow(&unit, j as usize) * ker;
            acc = linalg::orth_abs(&linalg::hcat(&acc, &img), RANK_TOL);
        }
        steps.insert(center + k, acc);
    }
    Ok(WeightFiltration { center, dim, steps })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimitivePart {
    pub l: i32,
    pub lambda: Complex64,
    /// Representatives in the ambient space, orthogonal to `W_{l-1}`.
    pub basis: CMat,
    /// The same subspace in `Gr^W_l` coordinates.
    pub coords: CMat,
}

/// Matrix of `N^j : Gr_l → Gr_{l-2j}` in graded coordinates.
fn induced_power(w: &WeightFiltration, n: &CMat, l: i32, j: usize) -> CMat {
    let src = w.graded_basis(l);
    let dst = w.graded_basis(l - 2 * j as i32);
    dst.adjoint() * linalg::mat_pow(n, j) * src
}

fn kernel(map: &CMat) -> CMat {
    if map.nrows() == 0 || linalg::max_abs(map) < RANK_TOL {
        linalg::eye(map.ncols())
    } else {
        linalg::null_space(map, RANK_TOL)
    }
}

/// `P_l = ker(N^{l-c+1} : Gr_l → Gr_{2c-l-2})` for `l ≥ c`.
pub fn primitive_parts(n: &CMat, center: i32, lambda: Complex64) -> Result<Vec<PrimitivePart>> {
    let w = weight_filtration(n, center)?;
    let mut out = Vec::new();
    for l in w.weights() {
        if l < center {
            continue;
        }
        let q = w.graded_basis(l);
        let map = induced_power(&w, n, l, (l - center + 1) as usize);
        let coords = kernel(&map);
        if coords.ncols() == 0 {
            continue;
        }
        out.push(PrimitivePart { l, lambda, basis: &q * &coords, coords });
    }
    Ok(out)
}

fn monodromy_eigenvalue(topo: &TopologicalData, i: usize) -> Complex64 {
    let a = topo.alpha_ref[i];
    Complex64::from_polar((2.0 * PI * a.imag).exp(), -2.0 * PI * a.re())
}

fn sub(m: &CMat, idx: &[usize]) -> CMat {
    CMat::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])])
}

/// The two parts of the flat space: eigenvalue 1 (centre `w`) and the rest
/// (centre `w − 1`), each split into eigenvalue blocks.
struct Part {
    center: i32,
    idx: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

fn parts(topo: &TopologicalData, weight: i64) -> Vec<Part> {
    let classes = topo.eigen_classes();
    let mut out = Vec::new();
    for unip in [true, false] {
        let blocks: Vec<Vec<usize>> =
            classes.iter().filter(|c| topo.in_unipotent_part(c[0]) == unip).cloned().collect();
        if blocks.is_empty() {
            continue;
        }
        let mut idx: Vec<usize> = blocks.iter().flatten().copied().collect();
        idx.sort_unstable();
        let center = if unip { weight } else { weight - 1 } as i32;
        out.push(Part { center, idx, blocks });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DcPmhsReport {
    pub dims_match: bool,
    pub n_lowers_f: bool,
    pub primitive_compatible: bool,
    pub graded_decomposition: bool,
    pub s_orthogonal: bool,
    pub failures: Vec<String>,
}

impl DcPmhsReport {
    pub fn holds(&self) -> bool {
        self.dims_match && self.n_lowers_f && self.primitive_compatible && self.graded_decomposition && self.s_orthogonal
    }
}

/// `F^p Gr_l` in graded coordinates.
fn f_on_graded(f: &Filtration, w: &WeightFiltration, p: i32, l: i32) -> CMat {
    let q = w.graded_basis(l);
    let inter = linalg::intersect(&f.get(p), &w.get(l));
    linalg::orth_abs(&(q.adjoint() * inter), RANK_TOL)
}

/// Span of `m·x` for `x` ranging over the orthonormal columns `basis`.
fn image_of(m: &CMat, basis: &CMat) -> CMat {
    let scale = linalg::max_abs(m).max(1.0);
    linalg::orth_abs(&(m * basis), RANK_TOL * scale)
}

fn p_range(fs: &[&Filtration], mu: usize) -> (i32, i32) {
    let lo = fs.iter().map(|f| f.bottom()).min().unwrap_or(0);
    let hi = fs.iter().map(|f| f.top()).max().unwrap_or(0);
    (lo - mu as i32 - 1, hi + mu as i32 + 1)
}

fn primitive_coords(n: &CMat, w: &WeightFiltration, l: i32) -> CMat {
    kernel(&induced_power(w, n, l, (l - w.center + 1) as usize))
}

/// Conditions for `F` to lie in the compact dual of the
/// PMHS classifying space, relative to the reference filtration `F0`.
pub fn check_dc_pmhs(f: &Filtration, topo: &TopologicalData, f0: &Filtration, weight: i64) -> Result<DcPmhsReport> {
    let mu = topo.mu;
    if f.dim != mu || f0.dim != mu {
        return Err(Error::Shape("filtration dimension differs from the rank".into()));
    }
    let mut rep = DcPmhsReport {
        dims_match: true,
        n_lowers_f: true,
        primitive_compatible: true,
        graded_decomposition: true,
        s_orthogonal: true,
        failures: Vec::new(),
    };
    let (plo, phi) = p_range(&[f, f0], mu);

    for part in parts(topo, weight) {
        let c = part.center;
        for block in &part.blocks {
            let nb = sub(&topo.n, block);
            let fb = f.restrict(block);
            let f0b = f0.restrict(block);
            let w = weight_filtration(&nb, c)?;
            let weights = w.weights();
            let lam = monodromy_eigenvalue(topo, block[0]);

            for p in plo..=phi {
                let fp = fb.get(p);
                let fp1 = fb.get(p - 1);
                if !linalg::contains(&fp1, &(&nb * &fp)) {
                    rep.n_lowers_f = false;
                    rep.failures.push(format!("N F^{p} not inside F^{} (λ = {lam:.6})", p - 1));
                }
            }

            for &l in weights.iter().filter(|&&l| l >= c) {
                let prim = primitive_coords(&nb, &w, l);
                for p in plo..=phi {
                    let d = linalg::dim(&linalg::intersect(&f_on_graded(&fb, &w, p, l), &prim));
                    let d0 = linalg::dim(&linalg::intersect(&f_on_graded(&f0b, &w, p, l), &prim));
                    if d != d0 {
                        rep.dims_match = false;
                        rep.failures.push(format!("dim F^{p}P_{l} = {d}, reference {d0} (λ = {lam:.6})"));
                    }
                }
                for j in 0..=(l - c) as usize {
                    let target = l - 2 * j as i32;
                    let nj = induced_power(&w, &nb, l, j);
                    let image = image_of(&nj, &prim);
                    for p in plo..=phi {
                        let lhs = linalg::intersect(&f_on_graded(&fb, &w, p, target), &image);
                        let fpj = linalg::intersect(&f_on_graded(&fb, &w, p + j as i32, l), &prim);
                        let rhs = image_of(&nj, &fpj);
                        if !linalg::span_eq(&lhs, &rhs) {
                            rep.primitive_compatible = false;
                            rep.failures.push(format!("F^{p}N^{j}P_{l} ≠ N^{j}F^{}P_{l}", p + j as i32));
                        }
                    }
                }
            }

            for &l in &weights {
                for p in plo..=phi {
                    let whole = f_on_graded(&fb, &w, p, l);
                    let mut pieces = CMat::zeros(w.graded_dim(l), 0);
                    let mut total = 0;
                    let j0 = (c - l).max(0);
                    for j in j0..=(mu as i32) {
                        let src = l + 2 * j;
                        if src < c || w.graded_dim(src) == 0 {
                            continue;
                        }
                        let prim = primitive_coords(&nb, &w, src);
                        let image = image_of(&induced_power(&w, &nb, src, j as usize), &prim);
                        let piece = linalg::intersect(&whole, &image);
                        total += linalg::dim(&piece);
                        pieces = linalg::span_sum(&pieces, &piece);
                    }
                    if total != linalg::dim(&whole) || linalg::dim(&pieces) != total {
                        rep.graded_decomposition = false;
                        rep.failures.push(format!("F^{p}Gr_{l} is not the sum of its primitive pieces"));
                    }
                }
            }
        }

        let fpart = f.restrict(&part.idx);
        let sp = sub(&topo.s, &part.idx);
        let scale = linalg::max_abs(&sp).max(1.0);
        for p in plo..=phi {
            let a = fpart.get(p);
            let b = fpart.get(c + 1 - p);
            if a.ncols() == 0 || b.ncols() == 0 {
                continue;
            }
            let val = linalg::max_abs(&(a.transpose() * &sp * b));
            if val > 1e-9 * scale {
                rep.s_orthogonal = false;
                rep.failures.push(format!("S(F^{p}, F^{}) = {val:.3e} ≠ 0", c + 1 - p));
            }
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityCheck {
    pub l: i32,
    pub p: i32,
    pub q: i32,
    pub dim: usize,
    /// Smallest eigenvalue of `i^{p−q} S(u, (−N)^{l−c} κ v)` on `P^{p,q}`.
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationReport {
    pub hodge_decomposition: bool,
    pub positive: bool,
    pub checks: Vec<PositivityCheck>,
    pub failures: Vec<String>,
    /// The nilpotent used in the polarizing form.
    pub polarizing_nilpotent: &'static str,
}

impl PolarizationReport {
    pub fn holds(&self) -> bool {
        self.hodge_decomposition && self.positive
    }
}

/// Positivity of the induced forms on the primitive Hodge pieces.
pub fn check_pmhs_polarized(f: &Filtration, topo: &TopologicalData, weight: i64) -> Result<PolarizationReport> {
    let mu = topo.mu;
    if f.dim != mu {
        return Err(Error::Shape("filtration dimension differs from the rank".into()));
    }
    let mut rep = PolarizationReport {
        hodge_decomposition: true,
        positive: true,
        checks: Vec::new(),
        failures: Vec::new(),
        polarizing_nilpotent: "-N",
    };
    let (plo, phi) = p_range(&[f], mu);
    for part in parts(topo, weight) {
        let c = part.center;
        let idx = &part.idx;
        let np = sub(&topo.n, idx);
        let sp = sub(&topo.s, idx);
        let kp = sub(&topo.kappa, idx);
        let fp = f.restrict(idx);
        let w = weight_filtration(&np, c)?;
        for &l in w.weights().iter().filter(|&&l| l >= c) {
            let q = w.graded_basis(l);
            let prim = primitive_coords(&np, &w, l);
            let dim_p = linalg::dim(&prim);
            let kappa_gr = |y: &CMat| q.adjoint() * &kp * linalg::conj(&(&q * y));
            let k = (l - c) as usize;
            let form = sp.clone() * linalg::mat_pow(&(-&np), k);
            let mut total = 0;
            for p in plo..=phi {
                let qq = l - p;
                let fpp = linalg::intersect(&f_on_graded(&fp, &w, p, l), &prim);
                let fq = linalg::intersect(&f_on_graded(&fp, &w, qq, l), &prim);
                let piece = linalg::intersect(&fpp, &kappa_gr(&fq));
                let d = linalg::dim(&piece);
                if d == 0 {
                    continue;
                }
                total += d;
                let lift = &q * &piece;
                let phase = Complex64::new(0.0, 1.0).powi(p - qq);
                let h = (lift.transpose() * &form * &kp * linalg::conj(&lift)).map(|x| x * phase);
                let herm_err = linalg::max_abs(&(&h - h.adjoint()));
                let ev = linalg::hermitian_eigenvalues(&h);
                let scale = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
                let min = ev.first().copied().unwrap_or(0.0);
                if min.abs() <= 1e-10 * scale.max(1e-300) || scale == 0.0 {
                    return Err(Error::Degenerate(format!("induced form on P^{{{p},{qq}}} of P_{l} is degenerate")));
                }
                if herm_err > 1e-8 * scale {
                    rep.positive = false;
                    rep.failures.push(format!("induced form on P^{{{p},{qq}}} is not hermitian"));
                }
                if min <= 0.0 {
                    rep.positive = false;
                    rep.failures.push(format!("induced form on P^{{{p},{qq}}} of P_{l} has eigenvalue {min:.6e}"));
                }
                rep.checks.push(PositivityCheck { l, p, q: qq, dim: d, min_eigenvalue: min });
            }
            if total != dim_p {
                rep.hodge_decomposition = false;
                rep.failures.push(format!("Hodge pieces of P_{l} have total dimension {total}, expected {dim_p}"));
            }
        }
    }
    Ok(rep)
}


#[cfg(test)]
mod example_tests {
    use super::*;
    use crate::example3::{example3_flag, example3_lattice, example3_topology, Example3Config};
    use crate::terp::hodge_filtration;
    use num_rational::Rational64;

    #[test]
    fn reference_flag_is_polarized() {
        let topo = example3_topology(Rational64::new(-5, 4)).unwrap();
        let f0 = example3_flag();
        let dc = check_dc_pmhs(&f0, &topo, &f0, 0).unwrap();
        assert!(dc.holds(), "{:?}", dc.failures);
        let pol = check_pmhs_polarized(&f0, &topo, 0).unwrap();
        assert!(pol.holds(), "{:?}", pol.failures);
        assert_eq!(pol.polarizing_nilpotent, "-N");
    }

    #[test]
    fn flipped_pairing_breaks_positivity() {
        let mut topo = example3_topology(Rational64::new(-5, 4)).unwrap();
        topo.s = -topo.s.clone();
        let f0 = example3_flag();
        let pol = check_pmhs_polarized(&f0, &topo, 0).unwrap();
        assert!(!pol.positive);
    }

    #[test]
    fn lattice_filtration_at_origin() {
        let lat = example3_lattice(&Example3Config::default()).unwrap();
        let f = hodge_filtration(&lat).unwrap();
        let dc = check_dc_pmhs(&f, &lat.topo, &example3_flag(), 0).unwrap();
        assert!(dc.holds(), "{:?}", dc.failures);
        let pol = check_pmhs_polarized(&f, &lat.topo, 0).unwrap();
        assert!(pol.holds(), "{:?}", pol.failures);
    }
}
