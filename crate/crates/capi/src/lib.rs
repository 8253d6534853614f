//! C interface: opaque handles over parsed presentations and extension
//! files, status codes for every failure class, and reports returned as
//! JSON strings.
//!
//! Conventions: every function that can fail returns [`PtsStatus`] and
//! writes its result through an out-pointer only on `Ok`. Returned strings
//! are heap-allocated and must be released with [`pts_string_free`];
//! handles with their matching `*_free` function. The most recent error
//! message is kept per thread and read with [`pts_last_error_message`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::json;

use ptscheme::{
    analyze_extension, build_truncated_system, builtin_catalog, catalog_entry, enumerate_points,
    find_stabilization, multilinearize, parse_extension, parse_presentation,
    sigma_permutation_report, ParseError, PolyMatrix, Presentation, QuantumAffineParams,
    SkewPbwError, SkewPbwPresentation,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtsStatus {
    /// Success; out-parameters are filled.
    PtsOk = 0,
    /// The computation rejected its input; see `pts_last_error_message`.
    PtsErrDomain = 1,
    /// The input text did not parse.
    PtsErrParse = 2,
    /// A required pointer argument was null.
    PtsErrNullArgument = 3,
    /// A string argument was not valid UTF-8.
    PtsErrInvalidUtf8 = 4,
    /// An internal invariant failed; the library state is still usable.
    PtsErrPanic = 5,
}

/// A parsed graded-algebra presentation.
pub struct PtsPresentation {
    inner: Presentation,
}

/// A parsed skew PBW extension.
pub struct PtsExtension {
    inner: SkewPbwPresentation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error message unavailable").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// What went wrong, as a status plus recorded message.
enum CallError {
    Parse(String),
    Domain(String),
}

impl From<ParseError> for CallError {
    fn from(e: ParseError) -> CallError {
        CallError::Parse(e.to_string())
    }
}

impl From<ptscheme::SchemeError> for CallError {
    fn from(e: ptscheme::SchemeError) -> CallError {
        CallError::Domain(e.to_string())
    }
}

impl From<ptscheme::QaError> for CallError {
    fn from(e: ptscheme::QaError) -> CallError {
        CallError::Domain(e.to_string())
    }
}

impl From<SkewPbwError> for CallError {
    fn from(e: SkewPbwError) -> CallError {
        CallError::Domain(e.to_string())
    }
}

impl From<serde_json::Error> for CallError {
    fn from(e: serde_json::Error) -> CallError {
        CallError::Domain(format!("Serialization: {e}"))
    }
}

/// Run a fallible body behind a panic guard and record any error message.
fn guarded(body: impl FnOnce() -> Result<PtsStatus, CallError>) -> PtsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => {
            clear_last_error();
            status
        }
        Ok(Err(CallError::Parse(msg))) => {
            set_last_error(msg);
            PtsStatus::PtsErrParse
        }
        Ok(Err(CallError::Domain(msg))) => {
            set_last_error(msg);
            PtsStatus::PtsErrDomain
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("Panic: {msg}"));
            PtsStatus::PtsErrPanic
        }
    }
}

/// Read a required C string argument.
///
/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn required_str<'a>(ptr: *const c_char) -> Result<&'a str, PtsStatus> {
    if ptr.is_null() {
        return Err(PtsStatus::PtsErrNullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| PtsStatus::PtsErrInvalidUtf8)
}

fn export_string(s: String, out: *mut *mut c_char) -> Result<PtsStatus, CallError> {
    let c = CString::new(s.replace('\0', " ")).expect("interior NULs replaced");
    unsafe { *out = c.into_raw() };
    Ok(PtsStatus::PtsOk)
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be a pointer previously returned through one of this library's
/// out-parameters and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The most recent error message on this thread, or an empty string. The
/// caller owns the result and frees it with `pts_string_free`.
#[no_mangle]
pub extern "C" fn pts_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        let borrowed = slot.borrow();
        let msg = borrowed.as_deref().unwrap_or_default();
        msg.to_owned().into_raw()
    })
}

/// Parse presentation text into a handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be a valid
/// pointer. On `PtsOk` the caller owns the handle and releases it with
/// `pts_presentation_free`.
#[no_mangle]
pub unsafe extern "C" fn pts_presentation_parse(
    text: *const c_char,
    out: *mut *mut PtsPresentation,
) -> PtsStatus {
    if out.is_null() {
        return PtsStatus::PtsErrNullArgument;
    }
    let text = match required_str(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    guarded(|| {
        let inner = parse_presentation(text)?;
        *out = Box::into_raw(Box::new(PtsPresentation { inner }));
        Ok(PtsStatus::PtsOk)
    })
}

/// Release a presentation handle. Null is ignored.
///
/// # Safety
/// `handle` must come from `pts_presentation_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pts_presentation_free(handle: *mut PtsPresentation) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Borrow the presentation behind a handle.
///
/// # Safety
/// `handle` must be null or a live pointer from `pts_presentation_parse`.
unsafe fn presentation<'a>(handle: *const PtsPresentation) -> Result<&'a Presentation, PtsStatus> {
    handle.as_ref().map(|h| &h.inner).ok_or(PtsStatus::PtsErrNullArgument)
}

/// Render the canonical text of a presentation.
///
/// # Safety
/// `handle` must be a live presentation handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pts_presentation_render(
    handle: *const PtsPresentation,
    out: *mut *mut c_char,
) -> PtsStatus {
    if out.is_null() {
        return PtsStatus::PtsErrNullArgument;
    }
    let pres = match presentation(handle) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guarded(|| export_string(pres.render(), out))
}

/// Multilinearize every relation; the result lists the slotted polynomials.
///
/// # Safety
/// `handle` must be a live presentation handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pts_multilinearize_json(
    handle: *const PtsPresentation,
    out: *mut *mut c_char,
) -> PtsStatus {
    if out.is_null() {
        return PtsStatus::PtsErrNullArgument;
    }
    let pres = match presentation(handle) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guarded(|| {
        let names = pres.var_names();
        let rendered = pres
            .relations()
            .iter()
            .map(|r| Ok(multilinearize(r)?.render(names)))
            .collect::<Result<Vec<_>, CallError>>()?;
        let value = json!({
            "field": pres.field().to_string(),
            "var_names": names,
            "multilinearized": rendered,
        });
        export_string(serde_json::to_string_pretty(&value)?, out)
    })
}

/// Enumerate X_m over F_p; points come back as arrays of integer residues.
///
/// # Safety
/// `handle` must be a live presentation handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pts_scheme_json(
    handle: *const PtsPresentation,
    p: u32,
    m: u32,
    out: *mut *mut c_char,
) -> PtsStatus {
    if out.is_null() {
        return PtsStatus::PtsErrNullArgument;
    }
    let pres = match presentation(handle) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guarded(|| {
        if m == 0 {
            return Err(CallError::Domain(
                "TruncationTooShort: the truncation length must be at least 1".to_string(),
            ));
        }
        let sys = build_truncated_system(pres, m, true)?;
        let points = enumerate_points(&sys, p)?;
        let value = json!({
            "p": p,
            "m": m,
            "n": pres.n(),
            "var_names": pres.var_names(),
            "equations": sys.render().lines().collect::<Vec<_>>(),
            "count": points.len(),
            "points": points.iter().map(|t| t.residue_rows()).collect::<Vec<_>>(),
        });
        export_string(serde_json::to_string_pretty(&value)?, out)
    })
}

/// Search for an empirical stabilization degree; see the library report.
///
/// # Safety
/// `handle` must be a live presentation handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pts_stabilize_json(
    handle: *const PtsPresentation,
    p: u32,
    m_max: u32,
    out: *mut *mut c_char,
) -> PtsStatus {
    if out.is_null() {
        return PtsStatus::PtsErrNullArgument;
    }
    let pres = match presentation(handle) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guarded(|| {
        let report = find_stabilization(pres, p, m_max)?;
        export_string(serde_json::to_string_pretty(&report)?, out)
    })
}

fn matrix_rows(m: &PolyMatrix, names: &[String]) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.at(r, c).render(names)).collect())
        .collect()
}

/// Quantum affine report: the matrices F and G, the variety E, and the
/// successor permutation of E(F_p).
///
/// # Safety
/// `handle` must be a live presentation handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pts_qaffine_json(
    handle: *const PtsPresentation,
    p: u32,
    out: *mut *mut c_char,
) -> PtsStatus {
    if out.is_null() {
        return PtsStatus::PtsErrNullArgument;
    }
    let pres = match presentation(handle) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guarded(|| {
        let params = QuantumAffineParams::from_presentation(pres)?;
        let names = pres.var_names().to_vec();
        let e = params.variety_e();
        let sigma = sigma_permutation_report(&params, p)?;
        let value = json!({
            "n": params.n(),
            "field": params.field().to_string(),
            "p": p,
            "var_names": names,
            "q": params
                .entries()
                .map(|((i, j), v)| json!([i, j, v.to_string()]))
                .collect::<Vec<_>>(),
            "f": matrix_rows(&params.build_f(), &names),
            "g": matrix_rows(&params.build_g(), &names),
            "e_is_zero_ideal": e.is_zero_ideal(),
            "e_generators": e
                .generators()
                .iter()
                .map(|g| g.render(&names))
                .collect::<Vec<_>>(),
            "sigma": sigma,
        });
        export_string(serde_json::to_string_pretty(&value)?, out)
    })
}

/// Parse extension-file text into a handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be a valid
/// pointer. On `PtsOk` the caller owns the handle and releases it with
/// `pts_extension_free`.
#[no_mangle]
pub unsafe extern "C" fn pts_extension_parse(
    text: *const c_char,
    out: *mut *mut PtsExtension,
) -> PtsStatus {
    if out.is_null() {
        return PtsStatus::PtsErrNullArgument;
    }
    let text = match required_str(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    guarded(|| {
        let inner = parse_extension(text)?;
        *out = Box::into_raw(Box::new(PtsExtension { inner }));
        Ok(PtsStatus::PtsOk)
    })
}

/// Release an extension handle. Null is ignored.
///
/// # Safety
/// `handle` must come from `pts_extension_parse` or
/// `pts_catalog_instantiate` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pts_extension_free(handle: *mut PtsExtension) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Borrow the extension behind a handle.
///
/// # Safety
/// `handle` must be null or a live extension handle.
unsafe fn extension<'a>(handle: *const PtsExtension) -> Result<&'a SkewPbwPresentation, PtsStatus> {
    handle.as_ref().map(|h| &h.inner).ok_or(PtsStatus::PtsErrNullArgument)
}

/// Render the canonical text of an extension.
///
/// # Safety
/// `handle` must be a live extension handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pts_extension_render(
    handle: *const PtsExtension,
    out: *mut *mut c_char,
) -> PtsStatus {
    if out.is_null() {
        return PtsStatus::PtsErrNullArgument;
    }
    let ext = match extension(handle) {
        Ok(e) => e,
        Err(status) => return status,
    };
    guarded(|| export_string(ext.render(), out))
}

/// Full point-module analysis of an extension over F_p.
///
/// # Safety
/// `handle` must be a live extension handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pts_extension_analyze_json(
    handle: *const PtsExtension,
    p: u32,
    m_max: u32,
    out: *mut *mut c_char,
) -> PtsStatus {
    if out.is_null() {
        return PtsStatus::PtsErrNullArgument;
    }
    let ext = match extension(handle) {
        Ok(e) => e,
        Err(status) => return status,
    };
    guarded(|| {
        let report = analyze_extension(ext, p, m_max)?;
        export_string(serde_json::to_string_pretty(&report)?, out)
    })
}

/// List the built-in catalog: names, summaries, and constants.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pts_catalog_json(out: *mut *mut c_char) -> PtsStatus {
    if out.is_null() {
        return PtsStatus::PtsErrNullArgument;
    }
    guarded(|| {
        let value = builtin_catalog()
            .iter()
            .map(|entry| {
                json!({
                    "name": entry.name,
                    "summary": entry.summary,
                    "constants": entry
                        .constants
                        .iter()
                        .map(|(name, default)| json!({ "name": name, "default": default }))
                        .collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>();
        export_string(serde_json::to_string_pretty(&value)?, out)
    })
}

/// Instantiate a catalog entry. `overrides_json` is null or a JSON object
/// mapping constant names to literal strings, e.g. `{"q": "3"}`.
///
/// # Safety
/// `name` must be a valid NUL-terminated string, `overrides_json` null or
/// the same, `out` a valid pointer. On `PtsOk` the caller owns the handle.
#[no_mangle]
pub unsafe extern "C" fn pts_catalog_instantiate(
    name: *const c_char,
    overrides_json: *const c_char,
    out: *mut *mut PtsExtension,
) -> PtsStatus {
    if out.is_null() {
        return PtsStatus::PtsErrNullArgument;
    }
    let name = match required_str(name) {
        Ok(n) => n,
        Err(status) => return status,
    };
    let overrides_text = if overrides_json.is_null() {
        None
    } else {
        match required_str(overrides_json) {
            Ok(t) => Some(t),
            Err(status) => return status,
        }
    };
    guarded(|| {
        let overrides: BTreeMap<String, String> = match overrides_text {
            None => BTreeMap::new(),
            Some(text) => serde_json::from_str(text)
                .map_err(|e| CallError::Parse(format!("SyntaxError: overrides: {e}")))?,
        };
        let entry = catalog_entry(name)?;
        let inner = entry.instantiate(&overrides)?;
        *out = Box::into_raw(Box::new(PtsExtension { inner }));
        Ok(PtsStatus::PtsOk)
    })
}
