//! C interface to `tautrel`.
//!
//! Every fallible function returns a [`TautrelStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`tautrel_last_error`] on the same thread. Objects are opaque handles owned
//! by the caller and released with the matching `_free` function; strings
//! returned by the library are released with [`tautrel_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clap::Parser;
use tautrel::cli::{dispatch, Cli, Format};
use tautrel::kappa::KappaPolynomial;
use tautrel::named::{named_series, SeriesTag};
use tautrel::pixton::{pixton_class, PixtonInput};
use tautrel::rational::{format_rational, parse_rational};
use tautrel::series::PowerSeries;
use tautrel::strata::{enumerate_stable_graphs, integrate, AmbientMonomial, StrataElement};
use tautrel::Error;

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TautrelStatus {
    Ok = 0,
    Domain = 1,
    OutOfRange = 2,
    Divisibility = 3,
    Specialization = 4,
    NotARelation = 5,
    NotInP = 6,
    Degenerate = 7,
    Unstable = 8,
    Parse = 9,
    NullPointer = 10,
    InvalidUtf8 = 11,
    Panic = 12,
}

/// A truncated power series with exact rational coefficients.
pub struct TautrelSeries {
    inner: PowerSeries,
}

/// A polynomial in kappa classes.
pub struct TautrelRelation {
    inner: KappaPolynomial,
}

/// A linear combination of decorated strata.
pub struct TautrelElement {
    inner: StrataElement,
}

struct Failure {
    status: TautrelStatus,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Domain(_) => TautrelStatus::Domain,
            Error::OutOfRange(_) => TautrelStatus::OutOfRange,
            Error::Divisibility(_) => TautrelStatus::Divisibility,
            Error::Specialization(_) => TautrelStatus::Specialization,
            Error::NotARelation(_) => TautrelStatus::NotARelation,
            Error::NotInP(_) => TautrelStatus::NotInP,
            Error::Degenerate(_) => TautrelStatus::Degenerate,
            Error::Unstable { .. } => TautrelStatus::Unstable,
            Error::Parse(_) => TautrelStatus::Parse,
        };
        Failure { status, message: e.to_string() }
    }
}

fn failure(status: TautrelStatus, message: &str) -> Failure {
    Failure { status, message: message.to_string() }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TautrelStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TautrelStatus::Ok,
        Ok(Err(fail)) => {
            set_error(&fail.message);
            fail.status
        }
        Err(_) => {
            set_error("internal panic");
            TautrelStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(failure(TautrelStatus::NullPointer, &format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| failure(TautrelStatus::InvalidUtf8, &format!("{what} is not valid UTF-8")))
}

unsafe fn read_slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(failure(TautrelStatus::NullPointer, &format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| failure(TautrelStatus::NullPointer, &format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(failure(TautrelStatus::NullPointer, "output pointer is null"));
    }
    out.write(v);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| failure(TautrelStatus::Domain, "string contains a nul byte"))?;
    write_out(out, c.into_raw())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tautrel_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Forgets the last error message.
#[no_mangle]
pub extern "C" fn tautrel_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tautrel_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a named series (`A`, `B`, `calA`, `calB`, `H0`, `H1`, `D`, `Stirling`) through `order`.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_series_new(name: *const c_char, order: usize, out: *mut *mut TautrelSeries) -> TautrelStatus {
    guard(|| {
        let tag: SeriesTag = read_str(name, "name")?.parse()?;
        if tag == SeriesTag::Phi {
            return Err(failure(TautrelStatus::Domain, "Phi needs tautrel_series_phi"));
        }
        let inner = named_series(tag, order, None)?;
        write_out(out, Box::into_raw(Box::new(TautrelSeries { inner })))
    })
}

/// `Phi(z, q)` in `q` through `order` at rational `lambda` and `z` given as `"p/q"` strings.
///
/// # Safety
/// `lambda` and `z` must be nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_series_phi(
    order: usize,
    lambda: *const c_char,
    z: *const c_char,
    out: *mut *mut TautrelSeries,
) -> TautrelStatus {
    guard(|| {
        let l = parse_rational(read_str(lambda, "lambda")?)?;
        let zz = parse_rational(read_str(z, "z")?)?;
        let inner = named_series(SeriesTag::Phi, order, Some((&l, &zz)))?;
        write_out(out, Box::into_raw(Box::new(TautrelSeries { inner })))
    })
}

/// Truncation order of a series.
///
/// # Safety
/// `s` must be a live series handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_series_order(s: *const TautrelSeries, out: *mut usize) -> TautrelStatus {
    guard(|| write_out(out, handle(s, "series")?.inner.order()))
}

/// Coefficient `k` as a `"p/q"` string.
///
/// # Safety
/// `s` must be a live series handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_series_coeff(s: *const TautrelSeries, k: usize, out: *mut *mut c_char) -> TautrelStatus {
    guard(|| {
        let c = handle(s, "series")?.inner.coeff(k)?;
        write_string(out, format_rational(c))
    })
}

/// Releases a series.
///
/// # Safety
/// `s` must be null or a series handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tautrel_series_free(s: *mut TautrelSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// The bracket `<tau_k1 ... tau_kn>` as a `"p/q"` string; zero when no genus fits.
///
/// # Safety
/// `ks` must point to `n` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_bracket(ks: *const u32, n: usize, out: *mut *mut c_char) -> TautrelStatus {
    guard(|| {
        let ks = read_slice(ks, n, "ks")?;
        if ks.is_empty() {
            return Err(failure(TautrelStatus::Domain, "at least one index is needed"));
        }
        let table = tautrel::closed::Descendents::global();
        let v = match tautrel::closed::implied_genus(ks) {
            Some(g) => table.bracket_at(g, ks)?,
            None => tautrel::Rational::from_integer(0.into()),
        };
        write_string(out, format_rational(&v))
    })
}

/// The Faber-Zagier relation for `(g, r, sigma)`, with `sigma` written `"1,3,3"` or `""`.
///
/// # Safety
/// `sigma` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_fz_relation(
    g: u32,
    r: u32,
    sigma: *const c_char,
    out: *mut *mut TautrelRelation,
) -> TautrelStatus {
    guard(|| {
        let sigma: tautrel::fz::FzPartition = read_str(sigma, "sigma")?.parse()?;
        let inner = tautrel::fz::fz_relation(g, r, &sigma)?;
        write_out(out, Box::into_raw(Box::new(TautrelRelation { inner })))
    })
}

/// Human-readable form, e.g. `1800*k1^2 - 25920*k2`.
///
/// # Safety
/// `rel` must be a live relation handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_relation_to_string(rel: *const TautrelRelation, out: *mut *mut c_char) -> TautrelStatus {
    guard(|| write_string(out, handle(rel, "relation")?.inner.to_string()))
}

/// JSON list of `{"kappa": [...], "coeff": "p/q"}` terms.
///
/// # Safety
/// `rel` must be a live relation handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_relation_to_json(rel: *const TautrelRelation, out: *mut *mut c_char) -> TautrelStatus {
    guard(|| {
        let j = serde_json::to_string(&handle(rel, "relation")?.inner.to_json()).expect("terms serialize");
        write_string(out, j)
    })
}

/// Releases a relation.
///
/// # Safety
/// `rel` must be null or a relation handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tautrel_relation_free(rel: *mut TautrelRelation) {
    if !rel.is_null() {
        drop(Box::from_raw(rel));
    }
}

/// Pixton's relation `R^d_{g,A}` with `A` given as `n` entries in `{0, 1}`.
///
/// # Safety
/// `a` must point to `n` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_pixton_class(
    g: u32,
    a: *const u8,
    n: usize,
    d: u32,
    out: *mut *mut TautrelElement,
) -> TautrelStatus {
    guard(|| {
        let a = read_slice(a, n, "a")?.to_vec();
        let input = PixtonInput::new(g, a, d)?;
        let inner = pixton_class(&input)?;
        write_out(out, Box::into_raw(Box::new(TautrelElement { inner })))
    })
}

/// Number of terms of an element.
///
/// # Safety
/// `el` must be a live element handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_element_num_terms(el: *const TautrelElement, out: *mut usize) -> TautrelStatus {
    guard(|| write_out(out, handle(el, "element")?.inner.len()))
}

/// JSON list of terms `{"graph", "kappa", "psi", "coeff"}`.
///
/// # Safety
/// `el` must be a live element handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_element_to_json(el: *const TautrelElement, out: *mut *mut c_char) -> TautrelStatus {
    guard(|| {
        let j = serde_json::to_string(&handle(el, "element")?.inner.to_json()).expect("terms serialize");
        write_string(out, j)
    })
}

/// Integral of the element times `psi_1^{psi[0]} ... kappa_1^{kappa[0]} kappa_2^{kappa[1]} ...`.
///
/// # Safety
/// `el` must be a live element handle, `psi` and `kappa` must point to
/// `n_psi` and `n_kappa` readable values, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_element_integrate(
    el: *const TautrelElement,
    psi: *const u32,
    n_psi: usize,
    kappa: *const u32,
    n_kappa: usize,
    out: *mut *mut c_char,
) -> TautrelStatus {
    guard(|| {
        let el = handle(el, "element")?;
        let m = AmbientMonomial { psi: read_slice(psi, n_psi, "psi")?.to_vec(), kappa: read_slice(kappa, n_kappa, "kappa")?.to_vec() };
        let v = integrate(&el.inner, &m)?;
        write_string(out, format_rational(&v))
    })
}

/// Releases an element.
///
/// # Safety
/// `el` must be null or an element handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tautrel_element_free(el: *mut TautrelElement) {
    if !el.is_null() {
        drop(Box::from_raw(el));
    }
}

/// Number of stable graphs of type `(g, n)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_stable_graph_count(g: u32, n: usize, out: *mut usize) -> TautrelStatus {
    guard(|| write_out(out, enumerate_stable_graphs(g, n)?.len()))
}

/// Runs a verification suite (`series`, `strata`, `pixton-pairings`, ...) and
/// writes the JSON report. `passed` receives whether every check held.
///
/// # Safety
/// `suite` must be a nul-terminated string; `out` and `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tautrel_verify(
    suite: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
    passed: *mut bool,
) -> TautrelStatus {
    guard(|| {
        let suite = read_str(suite, "suite")?;
        let seed = seed.to_string();
        let cli = Cli::try_parse_from(["tautrel", "verify", suite, "--seed", &seed])
            .map_err(|e| failure(TautrelStatus::Parse, e.to_string().trim()))?;
        let report = dispatch(&cli)?;
        write_out(passed, report.passed)?;
        write_string(out, report.render(Format::Json))
    })
}
