//! Tangent-space calculus on the classifying space: the membership tests for
//! the bundles of Kodaira–Spencer classes, the horizontal rank, the matrix
//! `M_R(ξ, ξ̄)` of the curvature at a point where `H = 1`, the holomorphic
//! sectional curvature contraction and the ratio
//!
//! ```text
//! φ(A) = −tr([A, Ā]·conj([A, Ā])ᵗʳ) / tr(A·Āᵗʳ)²
//! ```
//!
//! on symmetric nilpotent matrices, with a multi-start estimate of its
//! supremum.
//!
//! Tensor indices are ordered (pole order) ⊗ (dual vector) ⊗ (vector), with
//! column-major `vec`, so that `(X ⊗ Y)·vec(A) = vec(Y·A·Xᵗʳ)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exponent::FracExponent;
use crate::jet::Jet2;
use crate::linalg::{self, c, CMat, RANK_TOL};

const ENTRY_TOL: f64 = 1e-10;
const MATCH_TOL: f64 = 1e-9;
const NILPOTENT_TOL: f64 = 1e-8;
const FEASIBLE_TOL: f64 = 1e-10;
const FD_STEP: f64 = 1e-6;

/// The coefficients `Δ₁ … Δₙ` of a section `Σ (Δ_k)_{ji} z^{-k} ⊗ v*_i ⊗ v_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct KSVector {
    pub delta: Vec<CMat>,
}

impl KSVector {
    pub fn new(delta: Vec<CMat>) -> Result<Self> {
        let mu = delta.first().map(|d| d.nrows()).unwrap_or(0);
        if delta.iter().any(|d| d.shape() != (mu, mu)) {
            return Err(Error::Shape("KS coefficients must be square of a common size".into()));
        }
        Ok(Self { delta })
    }

    pub fn mu(&self) -> usize {
        self.delta.first().map(|d| d.nrows()).unwrap_or(0)
    }

    pub fn order(&self) -> usize {
        self.delta.len()
    }
}

fn scale_of(ms: &[&CMat]) -> f64 {
    ms.iter().map(|m| linalg::max_abs(m)).fold(1.0, f64::max)
}

/// `Δ_kᵗʳ·P + (−1)^k·P·Δ_k = 0` for every `k`.
pub fn g2_check(ks: &KSVector, pmat: &CMat) -> Result<bool> {
    if pmat.shape() != (ks.mu(), ks.mu()) {
        return Err(Error::Shape("Pmat does not match the KS coefficients".into()));
    }
    Ok(ks.delta.iter().enumerate().all(|(i, d)| {
        let sign = if (i + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = d.transpose() * pmat + (pmat * d).scale(sign);
        linalg::max_abs(&lhs) <= ENTRY_TOL * scale_of(&[d, pmat])
    }))
}

fn below(alpha: &[FracExponent], i: usize, k: usize, j: usize) -> bool {
    alpha[i].rational - (k as i64) < alpha[j].rational
}

/// `(Δ_k)_{ij} = 0` whenever `α_i − k < α_j`.
pub fn g3_check(ks: &KSVector, alpha: &[FracExponent]) -> Result<bool> {
    let mu = ks.mu();
    if alpha.len() != mu {
        return Err(Error::Shape(format!("spectrum has {} entries, expected {mu}", alpha.len())));
    }
    for (kk, d) in ks.delta.iter().enumerate() {
        let tol = ENTRY_TOL * scale_of(&[d]);
        for i in 0..mu {
            for j in 0..mu {
                if below(alpha, i, kk + 1, j) && d[(i, j)].norm() > tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The coefficient of `z^{-l}` in `B' − B` vanishes for `l = 1 … n−1`:
/// `(−1−l)·Δ_{l+1} + Σ_{k=l}^{n} [B_{k−1−l}, Δ_k] = 0`, where `b[m]` holds
/// `B_{m−1}`.
pub fn g4_check(ks: &KSVector, b: &[CMat]) -> Result<bool> {
    let n = ks.order();
    let mu = ks.mu();
    if n <= 1 {
        return Ok(true);
    }
    if b.len() < n {
        return Err(Error::Shape(format!("need B_-1 … B_{}, got {} coefficients", n as i64 - 2, b.len())));
    }
    if b.iter().any(|m| m.shape() != (mu, mu)) {
        return Err(Error::Shape("B coefficients must match the KS coefficients".into()));
    }
    let refs: Vec<&CMat> = ks.delta.iter().chain(b.iter()).collect();
    let tol = ENTRY_TOL * scale_of(&refs).powi(2);
    for l in 1..n {
        let mut acc = if l < n { ks.delta[l].scale(-1.0 - l as f64) } else { CMat::zeros(mu, mu) };
        for k in l..=n {
            acc += linalg::commutator(&b[k - l], &ks.delta[k - 1]);
        }
        if linalg::max_abs(&acc) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimension of `{Δ₁ : g2, g3 at k = 1, [U, Δ₁] = 0}`.
pub fn horizontal_rank(u: &CMat, pmat: &CMat, alpha: &[FracExponent]) -> Result<usize> {
    let mu = u.nrows();
    if u.shape() != (mu, mu) || pmat.shape() != (mu, mu) || alpha.len() != mu {
        return Err(Error::Shape("U, Pmat and the spectrum must share the rank".into()));
    }
    let idx = |i: usize, j: usize| j * mu + i;
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let zero = vec![c(0.0, 0.0); mu * mu];
    for a in 0..mu {
        for bb in 0..mu {
            // (Δᵗʳ P − P Δ)_{ab}
            let mut g2 = zero.clone();
            // ([U, Δ])_{ab}
            let mut com = zero.clone();
            for k in 0..mu {
                g2[idx(k, a)] += pmat[(k, bb)];
                g2[idx(k, bb)] -= pmat[(a, k)];
                com[idx(k, bb)] += u[(a, k)];
                com[idx(a, k)] -= u[(k, bb)];
            }
            rows.push(g2);
            rows.push(com);
            if below(alpha, a, 1, bb) {
                let mut e = zero.clone();
                e[idx(a, bb)] = c(1.0, 0.0);
                rows.push(e);
            }
        }
    }
    let m = CMat::from_fn(rows.len(), mu * mu, |r, k| rows[r][k]);
    Ok(mu * mu - linalg::rank(&m, RANK_TOL))
}

/// `𝒰 = ((α_i − 1 − α_j)·(C₁)_{ij})`, the pole part of `z²∇_z` for a lattice
/// with one-dimensional spectral pieces.
pub fn pole_part(alpha: &[FracExponent], c1: &CMat) -> CMat {
    CMat::from_fn(c1.nrows(), c1.ncols(), |i, j| c1[(i, j)] * (alpha[i].re() - 1.0 - alpha[j].re()))
}

/// Indices `(i, l, m)` with `α_i − 2 > α_l − 1 > α_m` and `m ≠ μ+1−i`.
pub fn rank_drop_triple(alpha: &[FracExponent]) -> Option<(usize, usize, usize)> {
    let mu = alpha.len();
    let r = |k: usize| alpha[k].rational;
    for i in 0..mu {
        for l in 0..mu {
            for m in 0..mu {
                if m != mu - 1 - i && r(i) - 2 > r(l) - 1 && r(l) - 1 > r(m) {
                    return Some((i, l, m));
                }
            }
        }
    }
    None
}

/// A rank-five family with a rank-drop triple: spectrum `(−3, −3/2, 0, 3/2, 3)`,
/// antidiagonal pairing and `C₁ = x·(E₅₄ + E₂₁)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizontalWitness {
    pub alpha: Vec<FracExponent>,
    pub pmat: CMat,
    pub c1: CMat,
    pub u: CMat,
}

pub fn horizontal_witness(x: Complex64) -> HorizontalWitness {
    let alpha: Vec<FracExponent> =
        [(-3, 1), (-3, 2), (0, 1), (3, 2), (3, 1)].iter().map(|&(p, q)| FracExponent::new(p, q)).collect();
    let mut c1 = CMat::zeros(5, 5);
    c1[(4, 3)] = x;
    c1[(1, 0)] = x;
    let u = pole_part(&alpha, &c1);
    HorizontalWitness { alpha, pmat: linalg::antidiag(5), c1, u }
}

fn superdiagonal(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if j == i + 1 { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// `H = X̄ᵗʳ·X` as a second-order jet in `(t, t̄)`, where `C₁ = t·Δ₁` and
///
/// ```text
/// X = 1_n ⊗ (1 − ½(1 ⊗ K + K ⊗ 1)) + N_z ⊗ (C̄ ⊗ 1 − 1 ⊗ C̄),   K = [C̄, C]
/// ```
pub fn build_h_jet(delta1: &CMat, n: usize) -> Result<Jet2<CMat>> {
    let mu = delta1.nrows();
    if delta1.ncols() != mu {
        return Err(Error::Shape("Delta1 must be square".into()));
    }
    if n == 0 {
        return Err(Error::Invalid("pole order n must be at least 1".into()));
    }
    let one = Jet2::identity(mu);
    let cj = Jet2::t(delta1.clone());
    let cb = cj.conj();
    let k = cb.mul(&cj)?.sub(&cj.mul(&cb)?)?;
    let inner = Jet2::identity(mu * mu).sub(&one.kron(&k).add(&k.kron(&one))?.scale(c(0.5, 0.0)))?;
    let shift = cb.kron(&one).sub(&one.kron(&cb))?;
    let x = Jet2::identity(n).kron(&inner).add(&Jet2::constant(superdiagonal(n)).kron(&shift))?;
    x.conj().transpose().mul(&x)
}

/// `M_R(ξ, ξ̄) = ξ̄(H)·ξ(H) − (ξ̄ξ)(H)` read off the jet of `H`.
pub fn curvature_matrix_jet(delta1: &CMat, n: usize) -> Result<CMat> {
    let h = build_h_jet(delta1, n)?;
    Ok(&h.c01 * &h.c10 - &h.c11)
}

/// The closed form
///
/// ```text
/// M_R = 1_n ⊗ S − 1_{n−1} ⊗ (ΔΔ̄⊗1 + 1⊗ΔΔ̄ − Δ̄⊗Δ − Δ⊗Δ̄) + 1'_{n−1} ⊗ R
/// S = 1 ⊗ [Δ̄, Δ] + [Δ̄, Δ] ⊗ 1
/// R = Δ̄Δ⊗1 + 1⊗Δ̄Δ − Δ̄⊗Δ − Δ⊗Δ̄
/// ```
///
/// with `1_{n−1} = diag(0, 1, …, 1)` and `1'_{n−1} = diag(1, …, 1, 0)`.
pub fn curvature_matrix_closed(delta1: &CMat, n: usize) -> Result<CMat> {
    let mu = delta1.nrows();
    if delta1.ncols() != mu {
        return Err(Error::Shape("Delta1 must be square".into()));
    }
    if n == 0 {
        return Err(Error::Invalid("pole order n must be at least 1".into()));
    }
    let d = delta1;
    let db = linalg::conj(d);
    let i = linalg::eye(mu);
    let k = linalg::commutator(&db, d);
    let cross = linalg::kron(&db, d) + linalg::kron(d, &db);
    let s = linalg::kron(&i, &k) + linalg::kron(&k, &i);
    let dd = d * &db;
    let t2 = linalg::kron(&dd, &i) + linalg::kron(&i, &dd) - &cross;
    let bd = &db * d;
    let r = linalg::kron(&bd, &i) + linalg::kron(&i, &bd) - &cross;
    let lower = CMat::from_fn(n, n, |a, b| if a == b && a > 0 { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let upper = CMat::from_fn(n, n, |a, b| if a == b && a + 1 < n { c(1.0, 0.0) } else { c(0.0, 0.0) });
    Ok(linalg::kron(&linalg::eye(n), &s) - linalg::kron(&lower, &t2) + linalg::kron(&upper, &r))
}

/// Both routes to `M_R`; a disagreement beyond `1e−9` is an internal error.
pub fn curvature_matrix(delta1: &CMat, n: usize) -> Result<CMat> {
    let closed = curvature_matrix_closed(delta1, n)?;
    let jet = curvature_matrix_jet(delta1, n)?;
    let err = linalg::max_abs(&(&closed - &jet));
    let scale = linalg::max_abs(delta1).powi(2).max(1.0);
    if err > MATCH_TOL * scale {
        return Err(Error::Mismatch(format!("closed-form and jet curvature differ by {err:.3e}")));
    }
    Ok(closed)
}

/// `h(M_R·KSξ, KSξ)` with `KSξ = e₁ ⊗ vec(Δ₁)` and `h` the standard form.
pub fn tensor_contraction(delta1: &CMat, n: usize) -> Result<f64> {
    let m = curvature_matrix(delta1, n)?;
    let v = linalg::vec_of(delta1);
    let mut x = linalg::CVec::zeros(n * v.len());
    x.rows_mut(0, v.len()).copy_from(&v);
    let y = m * &x;
    let val: Complex64 = y.iter().zip(x.iter()).map(|(a, b)| a * b.conj()).sum();
    Ok(val.re)
}

/// `−‖[Δ₁, Δ̄₁]‖²_F`, cross-checked against [`tensor_contraction`] when `Δ₁`
/// is symmetric.
pub fn curvature_contraction(delta1: &CMat) -> Result<f64> {
    if delta1.nrows() != delta1.ncols() {
        return Err(Error::Shape("Delta1 must be square".into()));
    }
    let k = linalg::commutator(delta1, &linalg::conj(delta1));
    let value = -linalg::frob(&k).powi(2);
    let norm = linalg::frob(delta1);
    if norm > 0.0 && linalg::frob(&(delta1 - delta1.transpose())) <= ENTRY_TOL * norm {
        let tensor = tensor_contraction(delta1, 1)?;
        if (tensor - value).abs() > MATCH_TOL * norm.powi(4).max(1.0) {
            return Err(Error::Mismatch(format!("tensor contraction {tensor} differs from {value}")));
        }
    }
    Ok(value)
}

fn phi_raw(a: &CMat) -> f64 {
    let k = linalg::commutator(a, &linalg::conj(a));
    -linalg::frob(&k).powi(2) / linalg::frob(a).powi(4)
}

/// `‖(A/‖A‖)^μ‖_F`.
pub fn nilpotency_residual(a: &CMat) -> f64 {
    let norm = linalg::frob(a);
    if norm == 0.0 {
        return 0.0;
    }
    linalg::frob(&linalg::mat_pow(&a.scale(1.0 / norm), a.nrows()))
}

/// `φ(A)` for a nonzero symmetric nilpotent `A`.
pub fn phi_value(a: &CMat) -> Result<f64> {
    if a.nrows() != a.ncols() {
        return Err(Error::Shape("A must be square".into()));
    }
    let norm = linalg::frob(a);
    if norm == 0.0 {
        return Err(Error::Invalid("A is zero".into()));
    }
    if linalg::frob(&(a - a.transpose())) > ENTRY_TOL * norm {
        return Err(Error::Invalid("A is not symmetric".into()));
    }
    if nilpotency_residual(a) >= NILPOTENT_TOL {
        return Err(Error::Invalid("A is not nilpotent".into()));
    }
    Ok(phi_raw(a))
}

/// A symmetric nilpotent Jordan block of size `m`, `Q·J·Q⁻¹` with
/// `Q = ((1+i)/2)·1 + ((1−i)/2)·E` and `E` the antidiagonal.
pub fn symmetric_jordan_block(m: usize) -> CMat {
    let j = CMat::from_fn(m, m, |a, b| if a == b + 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let e = linalg::antidiag(m);
    let q = linalg::eye(m).map(|x| x * c(0.5, 0.5)) + e.map(|x| x * c(0.5, -0.5));
    let qinv = linalg::eye(m).map(|x| x * c(0.5, -0.5)) + e.map(|x| x * c(0.5, 0.5));
    q * j * qinv
}

/// A random nonzero symmetric nilpotent matrix: a direct sum of symmetric
/// Jordan blocks with random sizes, conjugated by a random complex
/// orthogonal matrix and scaled by a random complex number.
pub fn random_symmetric_nilpotent<R: Rng>(mu: usize, rng: &mut R) -> CMat {
    assert!(mu >= 2, "nonzero symmetric nilpotents need mu >= 2");
    let mut sizes = Vec::new();
    let mut left = mu;
    while left > 0 {
        let s = rng.random_range(1..=left);
        sizes.push(s);
        left -= s;
    }
    if sizes.iter().all(|&s| s == 1) {
        sizes = vec![2];
        sizes.extend(std::iter::repeat_n(1, mu - 2));
    }
    let mut a = CMat::zeros(mu, mu);
    let mut off = 0;
    for s in sizes {
        a.view_mut((off, off), (s, s)).copy_from(&symmetric_jordan_block(s));
        off += s;
    }
    let mut y = CMat::zeros(mu, mu);
    for i in 0..mu {
        for j in (i + 1)..mu {
            let v = c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            y[(i, j)] = v;
            y[(j, i)] = -v;
        }
    }
    let o = y.exp();
    let scale = c(rng.random_range(0.5..2.0), rng.random_range(-1.0..1.0));
    (&o * a * o.transpose()).map(|x| x * scale)
}

/// Result of [`phi_supremum_estimate`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhiEstimate {
    pub value: f64,
    pub restart: usize,
    pub matrix: CMat,
    pub residual: f64,
    pub feasible_restarts: usize,
    pub restarts: usize,
}

/// Coordinates on symmetric matrices: real then imaginary parts of the
/// upper triangle, row by row.
struct SymCoords {
    mu: usize,
    pairs: Vec<(usize, usize)>,
}

impl SymCoords {
    fn new(mu: usize) -> Self {
        let pairs = (0..mu).flat_map(|i| (i..mu).map(move |j| (i, j))).collect();
        Self { mu, pairs }
    }

    fn len(&self) -> usize {
        2 * self.pairs.len()
    }

    fn unpack(&self, x: &[f64]) -> CMat {
        let m = self.pairs.len();
        let mut a = CMat::zeros(self.mu, self.mu);
        for (p, &(i, j)) in self.pairs.iter().enumerate() {
            let v = c(x[p], x[m + p]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
        a
    }

    fn direction(&self, p: usize) -> CMat {
        let m = self.pairs.len();
        let (i, j) = self.pairs[p % m];
        let v = if p < m { c(1.0, 0.0) } else { c(0.0, 1.0) };
        let mut e = CMat::zeros(self.mu, self.mu);
        e[(i, j)] = v;
        e[(j, i)] = v;
        e
    }

    fn normalize(&self, x: &mut [f64]) {
        let n = linalg::frob(&self.unpack(x));
        if n > 0.0 {
            x.iter_mut().for_each(|v| *v /= n);
        }
    }

    /// Real and imaginary parts of `tr(A^k)`, `k = 1 … μ`, and their Jacobian.
    fn traces(&self, x: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
        let a = self.unpack(x);
        let mut powers = vec![linalg::eye(self.mu)];
        for k in 1..=self.mu {
            powers.push(&powers[k - 1] * &a);
        }
        let mut val = Vec::with_capacity(2 * self.mu);
        let mut jac = DMatrix::zeros(2 * self.mu, self.len());
        for k in 1..=self.mu {
            let t = powers[k].trace();
            val.push(t.re);
            val.push(t.im);
            for p in 0..self.len() {
                let d = (&powers[k - 1] * self.direction(p)).trace() * k as f64;
                jac[(2 * (k - 1), p)] = d.re;
                jac[(2 * (k - 1) + 1, p)] = d.im;
            }
        }
        (val, jac)
    }
}

fn gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|p| {
            y[p] = x[p] + FD_STEP;
            let up = f(&y);
            y[p] = x[p] - FD_STEP;
            let down = f(&y);
            y[p] = x[p];
            (up - down) / (2.0 * FD_STEP)
        })
        .collect()
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Armijo gradient ascent of `f` on the unit sphere of `‖A‖_F`.
fn ascend(coords: &SymCoords, f: &dyn Fn(&[f64]) -> f64, x: &mut Vec<f64>, iters: usize) {
    let mut step = 1.0;
    let mut fx = f(x);
    for _ in 0..iters {
        let g = gradient(f, x);
        let gg = norm2(&g);
        if gg < 1e-20 {
            return;
        }
        loop {
            let mut y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + step * b).collect();
            coords.normalize(&mut y);
            let fy = f(&y);
            if fy >= fx + 1e-4 * step * gg {
                *x = y;
                fx = fy;
                step = (step * 2.0).min(1e3);
                break;
            }
            step *= 0.5;
            if step < 1e-14 {
                return;
            }
        }
    }
}

/// Gauss–Newton projection onto `tr(A^k) = 0`, `k = 1 … μ`, followed by
/// normalisation. For symmetric `A` these equations cut out the nilpotent
/// cone.
fn project(coords: &SymCoords, x: &[f64]) -> Option<Vec<f64>> {
    let mut y = x.to_vec();
    coords.normalize(&mut y);
    for _ in 0..100 {
        let (val, jac) = coords.traces(&y);
        if norm2(&val).sqrt() < 1e-15 {
            break;
        }
        let pinv = jac.pseudo_inverse(1e-10).ok()?;
        let delta = pinv * DMatrix::from_column_slice(val.len(), 1, &val);
        y.iter_mut().zip(delta.iter()).for_each(|(a, d)| *a -= d);
        coords.normalize(&mut y);
    }
    let res = nilpotency_residual(&coords.unpack(&y));
    (res < FEASIBLE_TOL).then_some(y)
}

/// Removes the components of `g` normal to the nilpotent cone at `x`.
fn tangent_part(coords: &SymCoords, x: &[f64], g: &[f64]) -> Vec<f64> {
    let (_, jac) = coords.traces(x);
    let svd = jac.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut out = g.to_vec();
    for (r, &s) in svd.singular_values.iter().enumerate() {
        if s > 1e-8 * top {
            let row = vt.row(r);
            let dot: f64 = row.iter().zip(g).map(|(a, b)| a * b).sum();
            out.iter_mut().zip(row.iter()).for_each(|(o, v)| *o -= dot * v);
        }
    }
    out
}

/// Projected Armijo ascent of `φ` along the nilpotent cone.
fn ascend_on_cone(coords: &SymCoords, x: &mut Vec<f64>, iters: usize) {
    let f = |y: &[f64]| phi_raw(&coords.unpack(y));
    let mut step = 1.0;
    let mut fx = f(x);
    for _ in 0..iters {
        let g = tangent_part(coords, x, &gradient(&f, x));
        let gg = norm2(&g);
        if gg < 1e-18 {
            return;
        }
        loop {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + step * b).collect();
            if let Some(y) = project(coords, &trial) {
                let fy = f(&y);
                if fy >= fx + 1e-4 * step * gg {
                    *x = y;
                    fx = fy;
                    step = (step * 2.0).min(1e3);
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-14 {
                return;
            }
        }
    }
}

/// One restart: penalized ascent, projection, projected ascent. Returns
/// `(φ, A, residual)` for a feasible end point.
fn single_restart(coords: &SymCoords, seed: u64, restart: usize) -> Option<(f64, CMat, f64)> {
    let mut rng = restart_rng(seed, restart);
    let mut x: Vec<f64> = (0..coords.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    coords.normalize(&mut x);
    let mut rho = 1.0;
    for _ in 0..40 {
        let penalized = |y: &[f64]| {
            let a = coords.unpack(y);
            phi_raw(&a) - rho * nilpotency_residual(&a).powi(2)
        };
        ascend(coords, &penalized, &mut x, 50);
        if nilpotency_residual(&coords.unpack(&x)) < 1e-4 {
            break;
        }
        rho *= 2.0;
    }
    let mut y = project(coords, &x)?;
    ascend_on_cone(coords, &mut y, 400);
    let a = coords.unpack(&y);
    let residual = nilpotency_residual(&a);
    (residual < FEASIBLE_TOL).then(|| (phi_raw(&a), a, residual))
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Multi-start estimate of `sup φ` over nonzero symmetric nilpotent `μ×μ`
/// matrices.
///
/// Each restart draws a random symmetric unit matrix, runs gradient ascent
/// on `φ − ρ·‖A^μ‖²` with `ρ` doubled until the nilpotency residual is small,
/// projects onto the nilpotent cone and continues with projected ascent.
/// The best feasible iterate wins; ties go to the lowest restart index.
pub fn phi_supremum_estimate(mu: usize, restarts: usize, seed: u64) -> Result<PhiEstimate> {
    if mu < 2 {
        return Err(Error::Invalid("mu must be at least 2".into()));
    }
    if restarts == 0 {
        return Err(Error::Invalid("at least one restart is required".into()));
    }
    let coords = SymCoords::new(mu);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(restarts);
    let mut outcomes: Vec<Option<(f64, CMat, f64)>> = vec![None; restarts];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let coords = &coords;
                scope.spawn(move || {
                    (w..restarts)
                        .step_by(workers)
                        .map(|r| (r, single_restart(coords, seed, r)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (r, out) in h.join().expect("restart worker panicked") {
                outcomes[r] = out;
            }
        }
    });
    let feasible = outcomes.iter().filter(|o| o.is_some()).count();
    let mut best: Option<PhiEstimate> = None;
    for (restart, out) in outcomes.into_iter().enumerate() {
        let Some((value, matrix, residual)) = out else { continue };
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(PhiEstimate { value, restart, matrix, residual, feasible_restarts: 0, restarts });
        }
    }
    let mut best = best.ok_or_else(|| Error::Infeasible(format!("no feasible iterate in {restarts} restarts")))?;
    best.feasible_restarts = feasible;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta() -> CMat {
        linalg::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, 1.0), c(-1.0, 0.0)]])
    }

    fn ex(p: i64, q: i64) -> FracExponent {
        FracExponent::new(p, q)
    }

    #[test]
    fn g2_parity_rule() {
        let sym = KSVector::new(vec![linalg::from_real_rows(&[&[1.0, 2.0], &[2.0, 3.0]])]).unwrap();
        assert!(g2_check(&sym, &linalg::eye(2)).unwrap());
        let anti = KSVector::new(vec![CMat::zeros(2, 2), linalg::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]])]).unwrap();
        assert!(g2_check(&anti, &linalg::eye(2)).unwrap());
        let mut d = CMat::zeros(3, 3);
        d[(1, 0)] = c(1.0, 0.0);
        let ks = KSVector::new(vec![d.clone()]).unwrap();
        assert!(!g2_check(&ks, &linalg::antidiag(3)).unwrap());
        d[(2, 1)] = c(1.0, 0.0);
        assert!(g2_check(&KSVector::new(vec![d]).unwrap(), &linalg::antidiag(3)).unwrap());
    }

    #[test]
    fn g3_pattern_for_the_rank_three_spectrum() {
        let alpha = vec![ex(-5, 4), ex(0, 1), ex(5, 4)];
        let mut d = CMat::zeros(3, 3);
        for (i, j) in [(1, 0), (2, 0), (2, 1)] {
            d[(i, j)] = c(1.0, 0.5);
        }
        assert!(g3_check(&KSVector::new(vec![d.clone()]).unwrap(), &alpha).unwrap());
        d[(0, 1)] = c(1.0, 0.0);
        assert!(!g3_check(&KSVector::new(vec![d]).unwrap(), &alpha).unwrap());
        assert!(g3_check(&KSVector::new(vec![CMat::zeros(3, 3)]).unwrap(), &alpha).unwrap());
    }

    #[test]
    fn g4_with_single_coefficient_needs_commuting_b() {
        let d = delta();
        let ks = KSVector::new(vec![d.clone(), CMat::zeros(2, 2)]).unwrap();
        let commuting = vec![d.clone(), CMat::zeros(2, 2)];
        assert!(g4_check(&ks, &commuting).unwrap());
        let other = vec![linalg::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]), CMat::zeros(2, 2)];
        assert!(!g4_check(&ks, &other).unwrap());
        assert!(matches!(g4_check(&ks, &[]), Err(Error::Shape(_))));
        assert!(g4_check(&KSVector::new(vec![d]).unwrap(), &[]).unwrap());
    }

    #[test]
    fn horizontal_rank_drops_off_the_origin() {
        let w0 = horizontal_witness(c(0.0, 0.0));
        let w1 = horizontal_witness(c(0.7, -0.2));
        assert!(rank_drop_triple(&w0.alpha).is_some());
        let r0 = horizontal_rank(&w0.u, &w0.pmat, &w0.alpha).unwrap();
        let r1 = horizontal_rank(&w1.u, &w1.pmat, &w1.alpha).unwrap();
        assert_eq!(r0, 6);
        assert!(r1 < r0, "{r1} vs {r0}");
    }

    #[test]
    fn h_jet_is_identity_at_the_base_point() {
        let h = build_h_jet(&delta(), 3).unwrap();
        assert!(linalg::approx_eq(&h.c00, &linalg::eye(12), 1e-14));
        let z = build_h_jet(&CMat::zeros(2, 2), 2).unwrap();
        assert_eq!(z, Jet2::identity(8));
    }

    #[test]
    fn closed_form_matches_jet() {
        for n in 1..=3 {
            let m = curvature_matrix(&delta(), n).unwrap();
            assert_eq!(m.nrows(), 4 * n);
        }
        assert!(linalg::is_zero(&curvature_matrix(&CMat::zeros(3, 3), 2).unwrap()));
    }

    #[test]
    fn contraction_of_the_two_by_two_witness() {
        assert!((curvature_contraction(&delta()).unwrap() + 32.0).abs() < 1e-12);
        assert_eq!(curvature_contraction(&CMat::zeros(2, 2)).unwrap(), 0.0);
        for n in 1..=3 {
            assert!((tensor_contraction(&delta(), n).unwrap() + 32.0).abs() < 1e-10);
        }
    }

    #[test]
    fn phi_on_witnesses() {
        assert!((phi_value(&delta()).unwrap() + 2.0).abs() < 1e-12);
        let mut padded = CMat::zeros(3, 3);
        padded.view_mut((0, 0), (2, 2)).copy_from(&delta());
        assert!((phi_value(&padded).unwrap() + 2.0).abs() < 1e-12);
        assert!(phi_value(&CMat::zeros(2, 2)).is_err());
        assert!(phi_value(&linalg::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])).is_err());
        assert!(phi_value(&linalg::eye(2)).is_err());
    }

    #[test]
    fn jordan_blocks_are_symmetric_nilpotent() {
        for m in 2..=5 {
            let a = symmetric_jordan_block(m);
            assert!(linalg::approx_eq(&a, &a.transpose(), 1e-14));
            assert!(nilpotency_residual(&a) < 1e-14);
            assert!(linalg::frob(&linalg::mat_pow(&a, m - 1)) > 0.1);
        }
    }

    #[test]
    fn mu_two_supremum() {
        let est = phi_supremum_estimate(2, 4, 7).unwrap();
        assert!((est.value + 2.0).abs() < 1e-6, "{}", est.value);
        assert!(est.residual < FEASIBLE_TOL);
    }
}
