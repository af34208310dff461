//! C ABI for `terp`.
//!
//! Objects cross the boundary as opaque handles created by a `*_new` or
//! `*_from_*` function and released with the matching `*_free`. Every
//! fallible function returns a [`TerpStatus`]; on failure a description is
//! available from [`terp_last_error_message`] on the same thread.
//!
//! Complex matrices are passed as row-major arrays of interleaved
//! `(re, im)` doubles, so a `μ×μ` matrix occupies `2·μ²` doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_rational::Rational64;
use terp::example3::{example3_lattice, Example3Config};
use terp::linalg::{c, CMat};
use terp::terp::{spectral_numbers, Lattice};
use terp::{curvature, schema, twistor, Error};

/// Result of a call through the C ABI.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    BufferTooSmall = 3,
    ShapeMismatch = 10,
    InvalidInput = 11,
    ParseError = 12,
    Unsupported = 13,
    Singular = 20,
    RankDeficient = 21,
    NotPure = 22,
    Degenerate = 23,
    Infeasible = 24,
    InternalMismatch = 25,
    Panic = 99,
}

impl From<&Error> for TerpStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Shape(_) => TerpStatus::ShapeMismatch,
            Error::Invalid(_) => TerpStatus::InvalidInput,
            Error::Parse(_) => TerpStatus::ParseError,
            Error::Unsupported(_) => TerpStatus::Unsupported,
            Error::Singular(_) => TerpStatus::Singular,
            Error::RankDeficient(_) => TerpStatus::RankDeficient,
            Error::NotPure(_) => TerpStatus::NotPure,
            Error::Degenerate(_) => TerpStatus::Degenerate,
            Error::Infeasible(_) => TerpStatus::Infeasible,
            Error::Mismatch(_) => TerpStatus::InternalMismatch,
        }
    }
}

/// Opaque lattice handle.
pub struct TerpLattice {
    inner: Lattice,
}

/// Purity and polarization summary of a lattice's twistor extension.
///
/// `signature_plus` and `signature_minus` are meaningful only when
/// `has_signature` is true.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct TerpTwistorReport {
    pub global_section_dim: usize,
    pub pure: bool,
    pub has_signature: bool,
    pub signature_plus: usize,
    pub signature_minus: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(TerpStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(TerpStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(TerpStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TerpStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TerpStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside terp".into());
            TerpStatus::Panic
        }
    }
}

unsafe fn deref<'a>(h: *const TerpLattice) -> Result<&'a Lattice, Fail> {
    h.as_ref().map(|l| &l.inner).ok_or_else(|| null("lattice handle"))
}

unsafe fn complex_matrix(data: *const f64, rows: usize, cols: usize) -> Result<CMat, Fail> {
    if data.is_null() {
        return Err(null("matrix data"));
    }
    let raw = std::slice::from_raw_parts(data, 2 * rows * cols);
    Ok(CMat::from_fn(rows, cols, |i, j| {
        let k = 2 * (i * cols + j);
        c(raw[k], raw[k + 1])
    }))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn into_handle(inner: Lattice) -> *mut TerpLattice {
    Box::into_raw(Box::new(TerpLattice { inner }))
}

/// Message describing the most recent failure on this thread, or null.
///
/// The pointer stays valid until the next `terp_*` call on the same thread.
#[no_mangle]
pub extern "C" fn terp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn terp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse a lattice from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn terp_lattice_from_json(json: *const c_char, out: *mut *mut TerpLattice) -> TerpStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Fail(TerpStatus::InvalidUtf8, format!("json is not UTF-8: {e}")))?;
        let lat = schema::parse_lattice(text)?;
        write_out(out, into_handle(lat))
    })
}

/// The rank-3 family at `(r, t)` with `α₁ = alpha1_num / alpha1_den`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn terp_example3_lattice(
    r_re: f64,
    r_im: f64,
    t_re: f64,
    t_im: f64,
    alpha1_num: i64,
    alpha1_den: i64,
    out: *mut *mut TerpLattice,
) -> TerpStatus {
    guard(|| {
        if alpha1_den == 0 {
            return Err(Fail(TerpStatus::InvalidInput, "alpha1 denominator is zero".into()));
        }
        let cfg = Example3Config { alpha1: Rational64::new(alpha1_num, alpha1_den), r: c(r_re, r_im), t: c(t_re, t_im) };
        write_out(out, into_handle(example3_lattice(&cfg)?))
    })
}

/// Release a lattice handle. Null is accepted and ignored.
///
/// # Safety
/// `lattice` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn terp_lattice_free(lattice: *mut TerpLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Rank `μ` of the lattice.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn terp_lattice_mu(lattice: *const TerpLattice, out: *mut usize) -> TerpStatus {
    guard(|| write_out(out, deref(lattice)?.mu()))
}

/// Serialise the lattice to JSON. Release the string with [`terp_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn terp_lattice_to_json(lattice: *const TerpLattice, out: *mut *mut c_char) -> TerpStatus {
    guard(|| {
        let text = schema::lattice_to_string(deref(lattice)?);
        let s = CString::new(text).map_err(|e| Fail(TerpStatus::InternalMismatch, e.to_string()))?;
        write_out(out, s.into_raw())
    })
}

/// Release a string returned by this library. Null is accepted and ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn terp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Spectral numbers in ascending order as fractions `num[k] / den[k]`
/// (rational parts only).
///
/// `len` is the capacity of both arrays; it must be at least `μ`. The
/// number written is stored in `written`.
///
/// # Safety
/// `num` and `den` must have room for `len` entries; pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn terp_spectrum(
    lattice: *const TerpLattice,
    num: *mut i64,
    den: *mut i64,
    len: usize,
    written: *mut usize,
) -> TerpStatus {
    guard(|| {
        let spec = spectral_numbers(deref(lattice)?)?;
        if num.is_null() || den.is_null() {
            return Err(null("spectrum buffer"));
        }
        if len < spec.len() {
            return Err(Fail(TerpStatus::BufferTooSmall, format!("need {} entries, got {len}", spec.len())));
        }
        for (k, a) in spec.iter().enumerate() {
            let q = a.rational;
            num.add(k).write(*q.numer());
            den.add(k).write(*q.denom());
        }
        write_out(written, spec.len())
    })
}

/// Purity of the twistor extension and the signature of `h`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn terp_twistor_report(lattice: *const TerpLattice, out: *mut TerpTwistorReport) -> TerpStatus {
    guard(|| {
        let rep = twistor::twistor_report(deref(lattice)?)?;
        let (plus, minus) = rep.signature.unwrap_or((0, 0));
        write_out(
            out,
            TerpTwistorReport {
                global_section_dim: rep.global_section_dim,
                pure: rep.pure,
                has_signature: rep.signature.is_some(),
                signature_plus: plus,
                signature_minus: minus,
            },
        )
    })
}

/// `h(ξ, ξ)` for the tangent vector with derivatives `∂C_1, …, ∂C_count`.
///
/// `dc` holds `count` consecutive `μ×μ` complex matrices.
///
/// # Safety
/// `dc` must hold `2·count·μ²` doubles; pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn terp_tangent_metric(
    lattice: *const TerpLattice,
    dc: *const f64,
    count: usize,
    out: *mut f64,
) -> TerpStatus {
    guard(|| {
        let lat = deref(lattice)?;
        let mu = lat.mu();
        let mats = (0..count)
            .map(|k| complex_matrix(dc.wrapping_add(2 * k * mu * mu), mu, mu))
            .collect::<Result<Vec<_>, _>>()?;
        let delta = twistor::kodaira_spencer(lat, &mats)?;
        write_out(out, twistor::tangent_metric(lat, &delta)?)
    })
}

/// `φ(A) = −‖[A, Ā]‖²_F / ‖A‖⁴_F` for a nonzero `mu×mu` matrix.
///
/// # Safety
/// `a` must hold `2·mu²` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn terp_phi_value(a: *const f64, mu: usize, out: *mut f64) -> TerpStatus {
    guard(|| write_out(out, curvature::phi_value(&complex_matrix(a, mu, mu)?)?))
}

/// Multi-start estimate of the supremum of `φ` over symmetric nilpotent
/// `mu×mu` matrices.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn terp_phi_supremum_estimate(mu: usize, restarts: usize, seed: u64, out: *mut f64) -> TerpStatus {
    guard(|| write_out(out, curvature::phi_supremum_estimate(mu, restarts, seed)?.value))
}

/// `Σ_{ij} R_{i\bar j j \bar i}` for the curvature of `Δ₁`.
///
/// # Safety
/// `delta1` must hold `2·mu²` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn terp_curvature_contraction(delta1: *const f64, mu: usize, out: *mut f64) -> TerpStatus {
    guard(|| write_out(out, curvature::curvature_contraction(&complex_matrix(delta1, mu, mu)?)?))
}
