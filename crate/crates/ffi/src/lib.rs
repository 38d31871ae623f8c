//! C ABI over `sricci`.
//!
//! Complexes live behind an opaque [`SricciComplex`] handle. Every fallible
//! call returns an [`SricciStatus`]; on failure the message is available from
//! [`sricci_last_error_message`] until the next call on the same thread.
//! Strings handed out by the library must be released with
//! [`sricci_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sricci::curvature::FaceCurvature;
use sricci::document::{parse_document_str, ComplexDocument};
use sricci::report::{run, Command, RunOptions};
use sricci::spectral::{down_laplacian, spectrum, DEFAULT_ZERO_THRESHOLD};
use sricci::{Error, SimplicialComplex, WeightAssignment, WeightScheme};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SricciStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    BufferTooSmall = 3,
    Panic = 4,
    /// Unparseable document, bad weights, unknown generator or parameters.
    InvalidInput = 10,
    NotPure = 11,
    NotOrientable = 12,
    NotRegular = 13,
    DimensionOutOfRange = 14,
    FaceNotInComplex = 15,
    NotAdjacent = 16,
    Disconnected = 17,
    /// A theorem's hypothesis does not hold for this complex.
    HypothesisUnmet = 18,
    Numerical = 19,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SricciWeights {
    Delta = 0,
    Unit = 1,
}

/// Opaque handle to a parsed complex.
pub struct SricciComplex {
    doc: ComplexDocument,
    complex: SimplicialComplex,
    delta: Option<WeightAssignment>,
    unit: WeightAssignment,
}

impl SricciComplex {
    fn new(doc: ComplexDocument) -> Result<Self, Error> {
        let complex = doc.complex()?;
        let delta = WeightAssignment::delta(&complex).ok();
        let unit = WeightAssignment::unit(&complex);
        Ok(SricciComplex {
            doc,
            complex,
            delta,
            unit,
        })
    }

    fn weights(&self, scheme: SricciWeights) -> Result<&WeightAssignment, Error> {
        match scheme {
            SricciWeights::Unit => Ok(&self.unit),
            SricciWeights::Delta => self
                .delta
                .as_ref()
                .ok_or_else(|| Error::InvalidWeight("delta weights need a pure complex".into())),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> SricciStatus {
    use SricciStatus as S;
    if err.is_input_error() {
        return S::InvalidInput;
    }
    match err {
        Error::NotPure(_) => S::NotPure,
        Error::NotOrientable(_) => S::NotOrientable,
        Error::NotRegular(_) => S::NotRegular,
        Error::DimensionOutOfRange { .. } => S::DimensionOutOfRange,
        Error::FaceNotInComplex(_) => S::FaceNotInComplex,
        Error::NotAdjacent(..) => S::NotAdjacent,
        Error::DisconnectedSupports | Error::DisconnectedPair(..) | Error::DisconnectedComplex(_) => S::Disconnected,
        Error::HeterogeneousDegreeSum { .. }
        | Error::NoQualifyingEigenvalue
        | Error::BoundaryDegreeZero(_)
        | Error::NonPositiveK(_)
        | Error::IsolatedVertex(_)
        | Error::NonPositiveGraphCurvature(_) => S::HypothesisUnmet,
        _ => S::Numerical,
    }
}

enum Failure {
    Status(SricciStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SricciStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SricciStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            SricciStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(SricciStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(SricciStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(h: *const SricciComplex) -> Result<&'a SricciComplex, Failure> {
    h.as_ref().ok_or_else(|| null("complex handle"))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Parses a JSON complex document. On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sricci_complex_from_json(json: *const c_char, out: *mut *mut SricciComplex) -> SricciStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let c = SricciComplex::new(parse_document_str(text)?)?;
        put(out, Box::into_raw(Box::new(c)), "out")
    })
}

/// Builds a fixture complex such as `torus_grid` with params `{3, 3}`.
///
/// # Safety
/// `name` must be NUL-terminated, `params` must point to `n_params` values
/// (or be null when `n_params` is 0), and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sricci_complex_generate(
    name: *const c_char,
    params: *const u64,
    n_params: usize,
    out: *mut *mut SricciComplex,
) -> SricciStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let params = if n_params == 0 {
            &[][..]
        } else if params.is_null() {
            return Err(null("params"));
        } else {
            std::slice::from_raw_parts(params, n_params)
        };
        let c = SricciComplex::new(sricci::generate::generate(name, params)?)?;
        put(out, Box::into_raw(Box::new(c)), "out")
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sricci_complex_free(h: *mut SricciComplex) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sricci_complex_dim(h: *const SricciComplex, out: *mut usize) -> SricciStatus {
    guard(|| put(out, handle(h)?.complex.dim(), "out"))
}

/// Number of faces of dimension `d`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sricci_complex_face_count(h: *const SricciComplex, d: usize, out: *mut usize) -> SricciStatus {
    guard(|| {
        let k = &handle(h)?.complex;
        if d > k.dim() {
            return Err(Error::DimensionOutOfRange { dim: d, max: k.dim() }.into());
        }
        put(out, k.face_count(d), "out")
    })
}

/// Curvature between faces `a` and `b` of dimension `d`, indexed in
/// lexicographic order of their vertex ids.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sricci_ricci(
    h: *const SricciComplex,
    weights: SricciWeights,
    d: usize,
    a: usize,
    b: usize,
    out: *mut f64,
) -> SricciStatus {
    guard(|| {
        let c = handle(h)?;
        let fc = FaceCurvature::new(&c.complex, c.weights(weights)?, d)?;
        let n = fc.face_count();
        if a >= n || b >= n {
            return Err(Error::FaceNotInComplex(format!("index {} of {n}", a.max(b))).into());
        }
        put(out, fc.ricci(a, b)?.kappa, "out")
    })
}

/// Ascending eigenvalues of the down Laplacian on `d`-faces. `*len` receives
/// the number of eigenvalues; if it exceeds `cap`, nothing is written and
/// `BufferTooSmall` is returned.
///
/// # Safety
/// `buf` must hold `cap` doubles (may be null when `cap` is 0) and `len` must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn sricci_down_spectrum(
    h: *const SricciComplex,
    weights: SricciWeights,
    d: usize,
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
) -> SricciStatus {
    guard(|| {
        let c = handle(h)?;
        let s = spectrum(
            &down_laplacian(&c.complex, d, c.weights(weights)?)?,
            DEFAULT_ZERO_THRESHOLD,
        )?;
        let n = s.eigenvalues.len();
        put(len, n, "len")?;
        if n > cap {
            return Err(Failure::Status(
                SricciStatus::BufferTooSmall,
                format!("need {n} slots, have {cap}"),
            ));
        }
        if n > 0 {
            if buf.is_null() {
                return Err(null("buf"));
            }
            ptr::copy_nonoverlapping(s.eigenvalues.as_ptr(), buf, n);
        }
        Ok(())
    })
}

/// Runs `command` (`summary`, `spectrum`, `curvature`, `verify`, `dual`) with
/// default options and returns the machine-readable JSON report.
///
/// # Safety
/// `command` must be NUL-terminated and `out` valid. Free `*out` with
/// [`sricci_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sricci_report_json(
    h: *const SricciComplex,
    command: *const c_char,
    weights: SricciWeights,
    out: *mut *mut c_char,
) -> SricciStatus {
    guard(|| {
        let c = handle(h)?;
        let command: Command = read_str(command, "command")?.parse()?;
        let opts = RunOptions {
            weights: match weights {
                SricciWeights::Delta => WeightScheme::Delta,
                SricciWeights::Unit => WeightScheme::Unit,
            },
            ..RunOptions::default()
        };
        let report = run(command, &c.doc, &opts)?;
        put(out, into_c_string(report.to_json()), "out")
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn sricci_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn sricci_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
