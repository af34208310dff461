//! Small dense complex linear-algebra helpers shared by the other modules.
//!
//! Subspaces are represented by matrices whose columns span them. Functions
//! returning subspaces always return orthonormal columns.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Default relative tolerance for rank decisions.
pub const RANK_TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Unit column vector `e_j` of length `n`.
pub fn coordinate_basis_vector(n: usize, j: usize) -> CMat {
    CMat::from_fn(n, 1, |i, _| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

pub fn from_rows(rows: &[Vec<Complex64>]) -> CMat {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    CMat::from_fn(r, c, |i, j| rows[i][j])
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    CMat::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
}

/// Entrywise complex conjugate.
pub fn conj(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

pub fn frob(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn is_zero(m: &CMat) -> bool {
    m.iter().all(|z| z.re == 0.0 && z.im == 0.0)
}

/// Exchange matrix: ones on the antidiagonal.
pub fn antidiag(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if i + j + 1 == n { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// Singular values in descending order with the matching left singular
/// vectors (`r×r`) and right singular vectors (`n×n`), all as columns.
fn svd_parts(m: &CMat) -> (Vec<f64>, CMat, CMat) {
    let (r, n) = m.shape();
    let f = faer::Mat::<faer::c64>::from_fn(r, n, |i, j| {
        let z = m[(i, j)];
        faer::c64::new(z.re, z.im)
    });
    let svd = f.svd().expect("singular value decomposition converges");
    let s = svd.S().column_vector();
    let k = r.min(n);
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&a, &b| s[b].re.total_cmp(&s[a].re));
    let order: Vec<usize> = idx.iter().copied().chain(k..r.max(n)).collect();
    let sv: Vec<f64> = idx.iter().map(|&i| s[i].re).collect();
    let (fu, fv) = (svd.U(), svd.V());
    let u = CMat::from_fn(r, r, |i, j| {
        let z = fu[(i, order[j])];
        Complex64::new(z.re, z.im)
    });
    let v = CMat::from_fn(n, n, |i, j| {
        let z = fv[(i, order[j])];
        Complex64::new(z.re, z.im)
    });
    (sv, u, v)
}

/// Singular values in descending order together with a full set of right
/// singular vectors (as columns, same order, padded past `min(r, n)`).
fn svd_full(m: &CMat) -> (Vec<f64>, CMat) {
    let (sv, _, v) = svd_parts(m);
    (sv, v)
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    svd_parts(m).0
}

/// Minimum-norm least-squares solution of `m·x = b`.
pub fn least_squares(m: &CMat, b: &CMat) -> CMat {
    let (r, n) = m.shape();
    if r == 0 || n == 0 {
        return CMat::zeros(n, b.ncols());
    }
    let (sv, u, v) = svd_parts(m);
    let top = sv.first().copied().unwrap_or(0.0);
    let mut x = CMat::zeros(n, b.ncols());
    for (k, &s) in sv.iter().enumerate() {
        if s <= 1e-13 * top || s == 0.0 {
            continue;
        }
        let uk = u.column(k);
        let vk = v.column(k);
        for c in 0..b.ncols() {
            let proj = uk.dotc(&b.column(c)) / s;
            for i in 0..n {
                x[(i, c)] += vk[i] * proj;
            }
        }
    }
    x
}

pub fn rank(m: &CMat, tol: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol * top).count()
}

/// Orthonormal basis of the kernel, using a relative singular value cutoff.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let n = m.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return eye(n);
    }
    let (sv, v) = svd_full(m);
    let top = sv.first().copied().unwrap_or(0.0);
    let r = if top == 0.0 { 0 } else { sv.iter().filter(|&&x| x > tol * top).count() };
    v.columns(r, n - r).into_owned()
}

/// Null space keeping directions whose singular value is at most `tol`
/// in absolute terms.
pub fn null_space_abs(m: &CMat, tol: f64) -> CMat {
    let n = m.ncols();
    if m.nrows() == 0 || n == 0 {
        return eye(n);
    }
    let (sv, v) = svd_full(m);
    let r = sv.iter().filter(|&&x| x > tol).count();
    v.columns(r, n - r).into_owned()
}

/// Row and column scale factors bringing the geometric mean of the nonzero
/// entry moduli in every row and column close to one. Entries below `1e-13`
/// of the largest modulus count as round-off and are ignored.
pub fn equilibrate(m: &CMat) -> (Vec<f64>, Vec<f64>) {
    let (rows, cols) = m.shape();
    let floor = 1e-13 * max_abs(m);
    let entry = |i: usize, j: usize| {
        let v = m[(i, j)].norm();
        if v > floor { v } else { 0.0 }
    };
    let mut rs = vec![1.0f64; rows];
    let mut cs = vec![1.0f64; cols];
    let geo = |vals: &mut dyn Iterator<Item = f64>| -> f64 {
        let (mut s, mut k) = (0.0, 0usize);
        for v in vals {
            if v > 0.0 {
                s += v.ln();
                k += 1;
            }
        }
        if k == 0 {
            1.0
        } else {
            (s / k as f64).exp()
        }
    };
    for _ in 0..30 {
        for (i, r) in rs.iter_mut().enumerate() {
            let g = geo(&mut (0..cols).map(|j| entry(i, j) * *r * cs[j]));
            *r /= g.sqrt();
        }
        for (j, cj) in cs.iter_mut().enumerate() {
            let g = geo(&mut (0..rows).map(|i| entry(i, j) * rs[i] * *cj));
            *cj /= g.sqrt();
        }
    }
    (rs, cs)
}

/// Kernel after row/column equilibration. Much more robust than
/// [`null_space`] for block systems whose entries span many orders of
/// magnitude. The returned columns are not orthonormal.
pub fn null_space_equilibrated(m: &CMat, tol: f64) -> CMat {
    let (rs, cs) = equilibrate(m);
    let scaled = CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * rs[i] * cs[j]);
    let k = null_space(&scaled, tol);
    CMat::from_fn(m.ncols(), k.ncols(), |i, j| k[(i, j)] * cs[i])
}

/// Ratio of extreme singular values after equilibration; invariant under
/// rescaling rows and columns.
pub fn equilibrated_rcond(m: &CMat) -> f64 {
    let (rs, cs) = equilibrate(m);
    let scaled = CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * rs[i] * cs[j]);
    let sv = singular_values(&scaled);
    match (sv.first(), sv.last()) {
        (Some(&top), Some(&low)) if top > 0.0 => low / top,
        _ => 0.0,
    }
}

/// Orthonormal basis of the column span keeping singular values above the
/// absolute threshold `tol`.
pub fn orth_abs(m: &CMat, tol: f64) -> CMat {
    let (r, n) = m.shape();
    if n == 0 || r == 0 {
        return CMat::zeros(r, 0);
    }
    let (sv, u, _) = svd_parts(m);
    let keep = sv.iter().filter(|&&x| x > tol).count();
    u.columns(0, keep).into_owned()
}

/// Orthonormal basis of the column span.
pub fn orth(m: &CMat, tol: f64) -> CMat {
    let (r, n) = m.shape();
    if n == 0 || r == 0 {
        return CMat::zeros(r, 0);
    }
    let (sv, u, _) = svd_parts(m);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return CMat::zeros(r, 0);
    }
    let keep = sv.iter().filter(|&&x| x > tol * top).count();
    u.columns(0, keep).into_owned()
}

pub fn hcat(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = CMat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn vcat(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.ncols());
    let mut out = CMat::zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

pub fn span_sum(a: &CMat, b: &CMat) -> CMat {
    orth(&hcat(a, b), RANK_TOL)
}

pub fn intersect(a: &CMat, b: &CMat) -> CMat {
    let dim = a.nrows();
    if a.ncols() == 0 || b.ncols() == 0 {
        return CMat::zeros(dim, 0);
    }
    let a = orth(a, RANK_TOL);
    let b = orth(b, RANK_TOL);
    if a.ncols() == 0 || b.ncols() == 0 {
        return CMat::zeros(dim, 0);
    }
    let k = null_space(&hcat(&a, &(-&b)), RANK_TOL);
    let top = k.rows(0, a.ncols()).into_owned();
    orth(&(&a * top), RANK_TOL)
}

pub fn dim(a: &CMat) -> usize {
    if a.ncols() == 0 {
        0
    } else {
        rank(a, RANK_TOL)
    }
}

/// Whether span(b) is contained in span(a).
pub fn contains(a: &CMat, b: &CMat) -> bool {
    if b.ncols() == 0 || dim(b) == 0 {
        return true;
    }
    dim(&hcat(a, b)) == dim(a)
}

pub fn span_eq(a: &CMat, b: &CMat) -> bool {
    contains(a, b) && contains(b, a)
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape(format!("inverse of {}x{} matrix", m.nrows(), m.ncols())));
    }
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    let low = s.last().copied().unwrap_or(0.0);
    if top == 0.0 || low <= 1e-14 * top {
        return Err(Error::Singular("matrix is numerically singular".into()));
    }
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("matrix is not invertible".into()))
}

/// Eigenvalues of the hermitian part, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let mut e: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(|a, b| a.total_cmp(b));
    e
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Column-stacking vectorisation.
pub fn vec_of(m: &CMat) -> CVec {
    CVec::from_iterator(m.len(), m.iter().copied())
}

pub fn unvec(v: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_iterator(rows, cols, v.iter().copied())
}

pub fn approx_eq(a: &CMat, b: &CMat, tol: f64) -> bool {
    a.shape() == b.shape() && max_abs(&(a - b)) <= tol
}

pub fn mat_pow(a: &CMat, k: usize) -> CMat {
    let mut out = eye(a.nrows());
    for _ in 0..k {
        out = &out * a;
    }
    out
}
