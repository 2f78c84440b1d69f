//! C ABI over `gq-core`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns a
//! [`GqStatus`]; on anything other than `GQ_STATUS_OK` the thread-local
//! message from [`gq_last_error_message`] says what went wrong. Strings
//! handed out by the library are released with [`gq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use gq_core::dsl::{self, DslError, Options};
use gq_core::{check_nilpotent, Derivation, Error, GradedAlgebra, Polynomial};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    SemanticError = 4,
    AlgebraMismatch = 5,
    DegreeMismatch = 6,
    InvalidArgument = 7,
    KernelError = 8,
    Panic = 9,
}

/// Free graded-commutative algebra.
pub struct GqAlgebra {
    inner: GradedAlgebra,
}

/// Polynomial in a [`GqAlgebra`].
pub struct GqPolynomial {
    inner: Polynomial,
}

/// Homogeneous derivation of a [`GqAlgebra`].
pub struct GqDerivation {
    inner: Derivation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(GqStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::AlgebraMismatch => GqStatus::AlgebraMismatch,
            Error::DegreeMismatch(_) | Error::Inhomogeneous | Error::EvenDegree(_) => GqStatus::DegreeMismatch,
            Error::DuplicateName(_)
            | Error::NegativeDegree { .. }
            | Error::UnknownGenerator(_)
            | Error::InvalidArgument(_) => GqStatus::InvalidArgument,
            _ => GqStatus::KernelError,
        };
        Failure(status, e.to_string())
    }
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Self {
        let status = match e {
            DslError::Parse(_) => GqStatus::ParseError,
            DslError::Semantic(_) => GqStatus::SemanticError,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GqStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GqStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside gq");
            GqStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(GqStatus::NullPointer, format!("null pointer: {what}"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(GqStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw();
    Ok(())
}

unsafe fn strings<'a>(p: *const *const c_char, n: usize, what: &str) -> Result<Vec<&'a str>, Failure> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if p.is_null() {
        return Err(null(what));
    }
    std::slice::from_raw_parts(p, n).iter().map(|&s| str_arg(s, what)).collect()
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next gq call on the same thread.
#[no_mangle]
pub extern "C" fn gq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn gq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Algebra on `n` generators with the given names and degrees.
///
/// # Safety
/// `names` and `degrees` must point to `n` valid entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gq_algebra_new(
    names: *const *const c_char,
    degrees: *const i64,
    n: usize,
    out: *mut *mut GqAlgebra,
) -> GqStatus {
    guard(|| {
        let names = strings(names, n, "names")?;
        let degrees: &[i64] = if n == 0 {
            &[]
        } else if degrees.is_null() {
            return Err(null("degrees"));
        } else {
            std::slice::from_raw_parts(degrees, n)
        };
        let alg = GradedAlgebra::new(names.into_iter().zip(degrees.iter().copied()))?;
        put(out, GqAlgebra { inner: alg })
    })
}

/// # Safety
/// `alg` must come from [`gq_algebra_new`], or be NULL.
#[no_mangle]
pub unsafe extern "C" fn gq_algebra_free(alg: *mut GqAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Number of generators, or 0 for NULL.
///
/// # Safety
/// `alg` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn gq_algebra_len(alg: *const GqAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.inner.len())
}

/// Parses `src`, e.g. `"1/2*x^2*d:x - y"`, in `alg`.
///
/// # Safety
/// Pointers must be valid; `src` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gq_poly_parse(
    alg: *const GqAlgebra,
    src: *const c_char,
    out: *mut *mut GqPolynomial,
) -> GqStatus {
    guard(|| {
        let alg = handle(alg, "alg")?;
        let src = str_arg(src, "src")?;
        let p = dsl::parse_polynomial(&alg.inner, src)?;
        put(out, GqPolynomial { inner: p })
    })
}

/// # Safety
/// `p` must come from this library, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn gq_poly_free(p: *mut GqPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

unsafe fn binary(
    a: *const GqPolynomial,
    b: *const GqPolynomial,
    out: *mut *mut GqPolynomial,
    op: fn(&Polynomial, &Polynomial) -> Polynomial,
) -> GqStatus {
    guard(|| {
        let (a, b) = (handle(a, "a")?, handle(b, "b")?);
        if a.inner.algebra() != b.inner.algebra() {
            return Err(Error::AlgebraMismatch.into());
        }
        put(out, GqPolynomial { inner: op(&a.inner, &b.inner) })
    })
}

/// # Safety
/// `a`, `b` live handles over the same algebra; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gq_poly_add(
    a: *const GqPolynomial,
    b: *const GqPolynomial,
    out: *mut *mut GqPolynomial,
) -> GqStatus {
    binary(a, b, out, |x, y| x + y)
}

/// # Safety
/// `a`, `b` live handles over the same algebra; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gq_poly_sub(
    a: *const GqPolynomial,
    b: *const GqPolynomial,
    out: *mut *mut GqPolynomial,
) -> GqStatus {
    binary(a, b, out, |x, y| x - y)
}

/// Graded-commutative product `a*b`.
///
/// # Safety
/// `a`, `b` live handles over the same algebra; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gq_poly_mul(
    a: *const GqPolynomial,
    b: *const GqPolynomial,
    out: *mut *mut GqPolynomial,
) -> GqStatus {
    binary(a, b, out, |x, y| x * y)
}

/// # Safety
/// `p` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn gq_poly_is_zero(p: *const GqPolynomial) -> bool {
    p.as_ref().is_some_and(|p| p.inner.is_zero())
}

/// Canonical text of `p`; free with [`gq_string_free`].
///
/// # Safety
/// `p` live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gq_poly_to_string(p: *const GqPolynomial, out: *mut *mut c_char) -> GqStatus {
    guard(|| {
        let p = handle(p, "p")?;
        put_string(out, p.inner.to_string())
    })
}

/// Derivation of `degree` sending generator `i` to `images[i]`, parsed in `alg`.
///
/// # Safety
/// `images` must hold one string per generator of `alg`; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gq_derivation_new(
    alg: *const GqAlgebra,
    degree: i32,
    images: *const *const c_char,
    n: usize,
    out: *mut *mut GqDerivation,
) -> GqStatus {
    guard(|| {
        let alg = handle(alg, "alg")?;
        let images = strings(images, n, "images")?
            .into_iter()
            .map(|s| dsl::parse_polynomial(&alg.inner, s))
            .collect::<Result<Vec<_>, _>>()?;
        let q = Derivation::new(&alg.inner, degree, images)?;
        put(out, GqDerivation { inner: q })
    })
}

/// # Safety
/// `d` must come from this library, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn gq_derivation_free(d: *mut GqDerivation) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d`, `p` live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gq_derivation_apply(
    d: *const GqDerivation,
    p: *const GqPolynomial,
    out: *mut *mut GqPolynomial,
) -> GqStatus {
    guard(|| {
        let (d, p) = (handle(d, "d")?, handle(p, "p")?);
        let r = d.inner.apply(&p.inner)?;
        put(out, GqPolynomial { inner: r })
    })
}

/// Checks `Q² = 0` generator by generator. `*passed` receives the verdict.
/// On failure `*witness`, if non-NULL, receives "witness: residual".
///
/// # Safety
/// `d` live handle; `passed` writable; `witness` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn gq_derivation_check_nilpotent(
    d: *const GqDerivation,
    passed: *mut bool,
    witness: *mut *mut c_char,
) -> GqStatus {
    guard(|| {
        let d = handle(d, "d")?;
        if passed.is_null() {
            return Err(null("passed"));
        }
        let cert = check_nilpotent(&d.inner)?;
        *passed = cert.passed();
        if !witness.is_null() {
            *witness = ptr::null_mut();
            if let (Some(w), Some(r)) = (cert.witness, cert.residual) {
                put_string(witness, format!("{w}: {r}"))?;
            }
        }
        Ok(())
    })
}

/// Runs a script. `*exit_code` gets the CLI exit code (0 pass, 1 fail,
/// 2 parse error, 3 semantic or runtime error) and `*report` the text or
/// JSON report. Parse and semantic errors also return a non-OK status.
///
/// # Safety
/// `src` NUL-terminated; `base_dir` NUL-terminated or NULL; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn gq_run_script(
    src: *const c_char,
    base_dir: *const c_char,
    json: bool,
    exit_code: *mut i32,
    report: *mut *mut c_char,
) -> GqStatus {
    guard(|| {
        let src = str_arg(src, "src")?;
        if exit_code.is_null() || report.is_null() {
            return Err(null("out"));
        }
        *report = ptr::null_mut();
        let base_dir = if base_dir.is_null() {
            None
        } else {
            Some(PathBuf::from(str_arg(base_dir, "base_dir")?))
        };
        let opts = Options { base_dir, timing: false };
        match dsl::run_source(src, &opts) {
            Ok(r) => {
                *exit_code = r.exit_code();
                put_string(report, if json { r.to_json() } else { r.to_text() })
            }
            Err(e) => {
                *exit_code = e.exit_code();
                Err(e.into())
            }
        }
    })
}
