//! The real-structure involution τ, global sections of the twistor extension,
//! purity and polarization, and the hermitian metric `h(a, b) = z^{-w}P(a, τb)`.
//!
//! Only semisimple monodromy (`N = 0`) is supported.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::LaurentMatrix;
use crate::linalg::{self, CMat};
use crate::terp::Lattice;

/// Zero threshold for gram eigenvalues.
pub const GRAM_ZERO: f64 = 1e-8;
const KERNEL_TOL: f64 = 1e-10;
const PURITY_TOL: f64 = 1e-9;

fn require_semisimple(lat: &Lattice) -> Result<()> {
    if !linalg::is_zero(&lat.topo.n) {
        return Err(Error::Unsupported("twistor construction needs N = 0".into()));
    }
    Ok(())
}

/// `T(z)` with `τ(s·p(z)) = s·T(z)·p̄(1/z)`, where
/// `T_{li} = κ_{li} z^{w − α_i − α_l}`.
pub fn tau_matrix(lat: &Lattice) -> Result<LaurentMatrix> {
    require_semisimple(lat)?;
    let topo = &lat.topo;
    let mu = topo.mu;
    let mut t = LaurentMatrix::zero(mu, mu);
    for l in 0..mu {
        for i in 0..mu {
            let k = topo.kappa[(l, i)];
            if k.norm() == 0.0 {
                continue;
            }
            let e = crate::FracExponent::integer(topo.weight)
                .rational
                - topo.alpha_ref[i].rational
                - topo.alpha_ref[l].rational;
            if !e.is_integer() {
                return Err(Error::Invalid(format!(
                    "kappa pairs s_{} with s_{} but w - α_{} - α_{} is not an integer",
                    i + 1,
                    l + 1,
                    i + 1,
                    l + 1
                )));
            }
            let mut m = CMat::zeros(mu, mu);
            m[(l, i)] = k;
            t = t.add(&LaurentMatrix::monomial(e.to_integer() as i32, m))?;
        }
    }
    Ok(t)
}

/// τ applied to `s·p(z)`, returned as the coordinates `T(z)·p̄(1/z)`.
pub fn apply_tau(t: &LaurentMatrix, p: &LaurentMatrix) -> Result<LaurentMatrix> {
    t.mul(&p.conj_flip())
}

/// Solutions of `V(z)·a(z) = T(z)·V̄(1/z)·b(1/z)` with `a`, `b` polynomial of
/// degree at most `degree_bound`.
#[derive(Debug, Clone)]
pub struct GlobalSections {
    pub degree_bound: usize,
    /// Column `j` is the `v`-coordinate polynomial `a_j(z)`.
    pub sections: Vec<LaurentMatrix>,
    /// Values `a_j(0)`, one per column.
    pub eval0: CMat,
}

impl GlobalSections {
    pub fn dim(&self) -> usize {
        self.sections.len()
    }

    /// Purity: `μ` independent sections whose values at `z = 0` span the fibre.
    pub fn is_pure(&self, mu: usize) -> bool {
        if self.dim() != mu {
            return false;
        }
        linalg::equilibrated_rcond(&self.eval0) > PURITY_TOL
    }
}

pub fn degree_bound(lat: &Lattice, t: &LaurentMatrix) -> Result<usize> {
    let n = lat.n()?.max(lat.pole_depth());
    let pole = t.max_exp().unwrap_or(0).max(-t.min_exp().unwrap_or(0)).max(0) as usize;
    Ok(n + pole)
}

pub fn global_sections(lat: &Lattice) -> Result<GlobalSections> {
    let t = tau_matrix(lat)?;
    let d = degree_bound(lat, &t)?;
    let mu = lat.mu();
    let v = lat.basis();
    let r = t.mul(&v.conj_flip())?;

    let mut exps: Vec<i32> = Vec::new();
    for k in 0..=d as i32 {
        exps.extend(v.support().iter().map(|e| e + k));
        exps.extend(r.support().iter().map(|e| e - k));
    }
    exps.sort_unstable();
    exps.dedup();
    let row_of = |e: i32| exps.binary_search(&e).expect("exponent collected");

    let nblocks = d + 1;
    let mut sys = CMat::zeros(exps.len() * mu, 2 * nblocks * mu);
    for k in 0..nblocks {
        for (e, m) in v.terms() {
            let row = row_of(e + k as i32) * mu;
            let mut blk = sys.view_mut((row, k * mu), (mu, mu));
            blk += m;
        }
        for (e, m) in r.terms() {
            let row = row_of(e - k as i32) * mu;
            let mut blk = sys.view_mut((row, (nblocks + k) * mu), (mu, mu));
            blk -= m;
        }
    }
    let ker = linalg::null_space_equilibrated(&sys, KERNEL_TOL);
    let sections: Vec<LaurentMatrix> = (0..ker.ncols())
        .map(|j| {
            let terms = (0..nblocks).map(|k| (k as i32, ker.view((k * mu, j), (mu, 1)).into_owned()));
            LaurentMatrix::from_terms(mu, 1, terms).expect("column shape")
        })
        .collect();
    let eval0 = ker.view((0, 0), (mu, ker.ncols())).into_owned();
    Ok(GlobalSections { degree_bound: d, sections, eval0 })
}

/// `h(a, b)` for sections given by their `s`-coordinates, as a Laurent
/// polynomial in `z` (constant for global sections).
fn pairing_h(pmat_t: &LaurentMatrix, pa: &LaurentMatrix, pb: &LaurentMatrix) -> Result<LaurentMatrix> {
    pa.transpose().mul(pmat_t)?.mul(&pb.conj_flip().negate_z())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistorReport {
    pub global_section_dim: usize,
    pub degree_bound: usize,
    pub pure: bool,
    /// Gram of `h` on the sections normalised to equal `v` at `z = 0`.
    pub gram: Option<CMat>,
    pub signature: Option<(usize, usize)>,
    /// Largest non-constant coefficient of `h` relative to the gram scale.
    pub z_dependence: Option<f64>,
    /// Overall sign applied to `h`; calibrated so the rank-3 example is
    /// positive definite at its origin.
    pub sign: i8,
}

/// Sections normalised by `a_j(0) = e_j`, i.e. the polynomial matrix `A(z)`
/// with `s`-coordinates `V(z)·A(z)`.
fn section_frame(mu: usize, gs: &GlobalSections) -> Result<LaurentMatrix> {
    let mut a = LaurentMatrix::zero(mu, mu);
    for (j, s) in gs.sections.iter().enumerate() {
        for (e, m) in s.terms() {
            let mut blk = CMat::zeros(mu, mu);
            blk.set_column(j, &m.column(0));
            a = a.add(&LaurentMatrix::monomial(e, blk))?;
        }
    }
    Ok(a)
}

fn normalised_frame(lat: &Lattice, gs: &GlobalSections) -> Result<LaurentMatrix> {
    let inv = linalg::inverse(&gs.eval0)?;
    section_frame(lat.mu(), gs)?.mul(&LaurentMatrix::constant(inv))
}

fn gram_of_frame(lat: &Lattice, a: &LaurentMatrix) -> Result<(CMat, f64)> {
    let mu = lat.mu();
    let t = tau_matrix(lat)?;
    let pmat_t = LaurentMatrix::constant(lat.topo.pmat.clone()).mul(&t.negate_z())?;
    let p = lat.basis().mul(a)?;
    let cols: Vec<LaurentMatrix> = (0..mu)
        .map(|j| {
            let terms = p.terms().map(|(e, m)| (e, m.columns(j, 1).into_owned()));
            LaurentMatrix::from_terms(mu, 1, terms).expect("column shape")
        })
        .collect();
    let mut gram = CMat::zeros(mu, mu);
    let mut drift: f64 = 0.0;
    for i in 0..mu {
        for j in 0..mu {
            let h = pairing_h(&pmat_t, &cols[i], &cols[j])?;
            gram[(i, j)] = h.coeff_or_zero(0)[(0, 0)];
            for (e, m) in h.terms() {
                if e != 0 {
                    drift = drift.max(m[(0, 0)].norm());
                }
            }
        }
    }
    let scale = linalg::max_abs(&gram).max(f64::MIN_POSITIVE);
    Ok((gram, drift / scale))
}

/// Signature of the hermitian part, with the zero threshold applied after
/// scaling to unit diagonal (a congruence, so the signature is unchanged).
pub fn signature(gram: &CMat) -> Option<(usize, usize)> {
    let mu = gram.nrows();
    let d: Vec<f64> = (0..mu)
        .map(|i| {
            let x = gram[(i, i)].re.abs();
            if x > 0.0 { 1.0 / x.sqrt() } else { 1.0 }
        })
        .collect();
    let scaled = CMat::from_fn(mu, mu, |i, j| gram[(i, j)] * d[i] * d[j]);
    let ev = linalg::hermitian_eigenvalues(&scaled);
    if ev.iter().any(|x| x.abs() < GRAM_ZERO) {
        return None;
    }
    let plus = ev.iter().filter(|&&x| x > 0.0).count();
    Some((plus, ev.len() - plus))
}

/// Purity and polarization data; never fails on degenerate points.
pub fn twistor_report(lat: &Lattice) -> Result<TwistorReport> {
    let gs = global_sections(lat)?;
    let mu = lat.mu();
    let pure = gs.is_pure(mu);
    let mut rep = TwistorReport {
        global_section_dim: gs.dim(),
        degree_bound: gs.degree_bound,
        pure,
        gram: None,
        signature: None,
        z_dependence: None,
        sign: 1,
    };
    if pure {
        let a = normalised_frame(lat, &gs)?;
        let (gram, drift) = gram_of_frame(lat, &a)?;
        let (raw, _) = gram_of_frame(lat, &section_frame(mu, &gs)?)?;
        rep.signature = signature(&raw);
        rep.gram = Some(gram);
        rep.z_dependence = Some(drift);
    }
    Ok(rep)
}

/// Gram matrix of `h`; fails on non-pure or degenerate points.
pub fn metric_gram(lat: &Lattice) -> Result<TwistorReport> {
    let rep = twistor_report(lat)?;
    if !rep.pure {
        return Err(Error::NotPure(format!(
            "{} global sections, evaluation at 0 not invertible or dimension short",
            rep.global_section_dim
        )));
    }
    if rep.signature.is_none() {
        return Err(Error::Degenerate("gram has an eigenvalue below the zero threshold".into()));
    }
    Ok(rep)
}

/// Whether the point is pure with positive definite `h`.
pub fn is_pure_polarized(lat: &Lattice) -> bool {
    matches!(
        twistor_report(lat),
        Ok(TwistorReport { pure: true, signature: Some((p, 0)), .. }) if p == lat.mu()
    )
}

/// Coefficients `Δ_k` of `z^{-k}`, `k ≥ 1`, in `V^{-1}·∂V` for a tangent
/// direction given by the derivatives `∂C_k`.
pub fn kodaira_spencer(lat: &Lattice, dc: &[CMat]) -> Result<Vec<CMat>> {
    let mu = lat.mu();
    let mut dv = LaurentMatrix::zero(mu, mu);
    for (k, m) in dc.iter().enumerate() {
        dv = dv.add(&LaurentMatrix::monomial(-(k as i32 + 1), m.clone()))?;
    }
    let depth = lat.n()?.max(lat.pole_depth()).max(dc.len());
    let order = (depth * (mu + 1) + 2) as i32;
    let prod = lat.basis().linv_unit(order)?.mul(&dv)?;
    Ok((1..=depth as i32).map(|k| prod.coeff_or_zero(-k)).collect())
}

/// `h(ξ, ξ) = Σ_k Tr(Δ'_k Δ'_k^†)` where `Δ'` is the Kodaira–Spencer class
/// written in an `h`-orthonormal frame of global sections.
pub fn tangent_metric(lat: &Lattice, delta: &[CMat]) -> Result<f64> {
    let mu = lat.mu();
    if delta.iter().all(linalg::is_zero) {
        return Ok(0.0);
    }
    for d in delta {
        if d.shape() != (mu, mu) {
            return Err(Error::Shape("Kodaira–Spencer coefficients must be μ×μ".into()));
        }
    }
    let gs = global_sections(lat)?;
    if !gs.is_pure(mu) {
        return Err(Error::NotPure("tangent metric needs a pure point".into()));
    }
    let a = normalised_frame(lat, &gs)?;
    let (gram, _) = gram_of_frame(lat, &a)?;
    let herm = (&gram + gram.adjoint()).scale(0.5);
    let chol = herm
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Degenerate("h is not positive definite here".into()))?;
    let x = linalg::inverse(&chol.l())?.transpose();
    let frame = a.mul(&LaurentMatrix::constant(x))?;
    let mut dz = LaurentMatrix::zero(mu, mu);
    for (k, m) in delta.iter().enumerate() {
        dz = dz.add(&LaurentMatrix::monomial(-(k as i32 + 1), m.clone()))?;
    }
    let order = (gs.degree_bound + delta.len() + 2) as i32;
    let inv = frame.linv_unit(order)?;
    let gamma = inv.mul(&dz)?.mul(&frame)?;
    Ok(gamma
        .terms()
        .filter(|(e, _)| *e < 0)
        .map(|(_, m)| m.iter().map(Complex64::norm_sqr).sum::<f64>())
        .sum())
}

/// A basis `Q` of the reference space, orthonormal for `Pmat`, fixed by the
/// real structure (`κ·Q̄ = Q`). Exists when `T` is constant and `h` is
/// positive definite at `C = 0`.
pub fn real_orthonormal_frame(lat: &Lattice) -> Result<CMat> {
    let t = tau_matrix(lat)?;
    if t.support().iter().any(|&e| e != 0) {
        return Err(Error::Unsupported("real frame needs a constant τ-matrix".into()));
    }
    let topo = &lat.topo;
    let mu = topo.mu;
    let k = &topo.kappa;
    let i = Complex64::new(0.0, 1.0);
    let mut cands: Vec<CMat> = Vec::new();
    for j in 0..mu {
        let e = linalg::coordinate_basis_vector(mu, j);
        cands.push(&e + k * linalg::conj(&e));
        let ie = e.map(|x| x * i);
        cands.push(&ie + k * linalg::conj(&ie));
    }
    let mut chosen: Vec<CMat> = Vec::new();
    for cnd in cands {
        if linalg::frob(&cnd) < 1e-12 {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(cnd.clone());
        let m = CMat::from_fn(mu, trial.len(), |r, c| trial[c][(r, 0)]);
        if linalg::rank(&m, 1e-9) == trial.len() {
            chosen = trial;
        }
        if chosen.len() == mu {
            break;
        }
    }
    let b = |x: &CMat, y: &CMat| (x.transpose() * &topo.pmat * y)[(0, 0)].re;
    let mut q: Vec<CMat> = Vec::new();
    for x in chosen {
        let mut y = x.clone();
        for u in &q {
            y -= u.map(|z| z * b(u, &x));
        }
        let nrm = b(&y, &y);
        if nrm <= GRAM_ZERO {
            return Err(Error::Degenerate("reference point is not polarized".into()));
        }
        q.push(y.scale(1.0 / nrm.sqrt()));
    }
    Ok(CMat::from_fn(mu, mu, |r, c| q[c][(r, 0)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example3::{example3_lattice, Example3Config};
    use crate::linalg::c;

    #[test]
    fn tau_is_an_involution_on_the_example() {
        let lat = example3_lattice(&Example3Config::at(c(0.7, 0.2), c(-0.3, 0.4))).unwrap();
        let t = tau_matrix(&lat).unwrap();
        let v = lat.basis();
        let twice = apply_tau(&t, &apply_tau(&t, &v).unwrap()).unwrap();
        assert!(twice.approx_eq(&v, 1e-12));
        assert_eq!(twice.support(), v.support());
    }

    #[test]
    fn origin_is_pure_and_positive() {
        let lat = example3_lattice(&Example3Config::default()).unwrap();
        let rep = metric_gram(&lat).unwrap();
        assert_eq!(rep.global_section_dim, 3);
        assert_eq!(rep.signature, Some((3, 0)));
        assert!(linalg::approx_eq(rep.gram.as_ref().unwrap(), &linalg::eye(3), 1e-12));
    }

    #[test]
    fn nonzero_monodromy_log_is_unsupported() {
        let mut lat = example3_lattice(&Example3Config::default()).unwrap();
        lat.topo.n[(2, 0)] = c(1.0, 0.0);
        assert!(matches!(tau_matrix(&lat), Err(Error::Unsupported(_))));
    }

    #[test]
    fn vanishing_direction_has_zero_length() {
        let lat = example3_lattice(&Example3Config::at(c(0.5, 0.0), c(0.0, 0.0))).unwrap();
        assert_eq!(tangent_metric(&lat, &[CMat::zeros(3, 3)]).unwrap(), 0.0);
    }

    #[test]
    fn real_frame_is_fixed_and_orthonormal() {
        let lat = example3_lattice(&Example3Config::default()).unwrap();
        let q = real_orthonormal_frame(&lat).unwrap();
        assert!(linalg::approx_eq(&(q.transpose() * &lat.topo.pmat * &q), &linalg::eye(3), 1e-12));
        assert!(linalg::approx_eq(&(&lat.topo.kappa * linalg::conj(&q)), &q, 1e-12));
    }
}
