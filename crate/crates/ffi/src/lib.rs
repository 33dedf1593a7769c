//! C ABI for the supergeom engine.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every call returns an [`SgStatus`]; on failure a message is available from
//! [`sg_last_error_message`] until the next failing call on the same thread.
//! Strings returned through out-parameters are owned by the caller and must be
//! released with [`sg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use supergeom::calculus::{canonical_theta, exterior_derivative};
use supergeom::cohomology::betti_numbers;
use supergeom::forms::GradedForm;
use supergeom::identities::verify_structure_identities;
use supergeom::json::{form_from_json, form_to_json, ConstantsJson};
use supergeom::{Error, StructureConstants};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    EqualBlocks = 3,
    Parse = 4,
    Shape = 5,
    Cap = 6,
    Panic = 7,
}

/// Structure constants of `sl(n|m)` in the canonical basis.
pub struct SgGeometry {
    k: StructureConstants,
}

/// A matrix-valued differential form.
pub struct SgForm {
    form: GradedForm,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SgStatus {
    match e {
        Error::EqualBlocks(_) => SgStatus::EqualBlocks,
        Error::TooSmall { .. } => SgStatus::InvalidArgument,
        Error::Parse(_) => SgStatus::Parse,
        Error::ShapeMismatch(_) | Error::DegreeMismatch { .. } => SgStatus::Shape,
        Error::DegreeCapExceeded { .. } => SgStatus::Cap,
        _ => SgStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (SgStatus, String)>) -> SgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SgStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SgStatus::Panic
        }
    }
}

fn lift<T>(r: supergeom::Result<T>) -> Result<T, (SgStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (SgStatus, String) {
    (SgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (SgStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (SgStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Builds the structure constants for `sl(n|m)`; `n ≠ m`, `n + m ≥ 2`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn sg_geometry_new(n: usize, m: usize, out: *mut *mut SgGeometry) -> SgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let k = lift(StructureConstants::canonical(n, m))?;
        out.write(Box::into_raw(Box::new(SgGeometry { k })));
        Ok(())
    })
}

/// # Safety
/// `geometry` must be null or a handle from [`sg_geometry_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sg_geometry_free(geometry: *mut SgGeometry) {
    if !geometry.is_null() {
        drop(Box::from_raw(geometry));
    }
}

/// Writes `n`, `m` and the number of basis derivations.
///
/// # Safety
/// `geometry` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_geometry_dimensions(
    geometry: *const SgGeometry,
    n: *mut usize,
    m: *mut usize,
    dim: *mut usize,
) -> SgStatus {
    guard(|| {
        let g = deref(geometry, "geometry")?;
        write_out(n, g.k.n(), "n")?;
        write_out(m, g.k.m(), "m")?;
        write_out(dim, g.k.dim(), "dim")
    })
}

/// Basis table and structure constants as JSON (1-based indices).
///
/// # Safety
/// `geometry` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_structure_constants_json(geometry: *const SgGeometry, out: *mut *mut c_char) -> SgStatus {
    guard(|| {
        let g = deref(geometry, "geometry")?;
        let text = serde_json::to_string(&ConstantsJson::new(&g.k)).expect("serialisable");
        write_out(out, into_c_string(text), "out")
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The canonical 1-form `Θ`.
///
/// # Safety
/// `geometry` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_form_canonical_theta(geometry: *const SgGeometry, out: *mut *mut SgForm) -> SgStatus {
    guard(|| {
        let g = deref(geometry, "geometry")?;
        let form = lift(canonical_theta(&g.k))?;
        write_out(out, Box::into_raw(Box::new(SgForm { form })), "out")
    })
}

/// Parses a form from JSON: `{n, m, degree, entries: [{index, matrix}]}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_form_from_json(json: *const c_char, out: *mut *mut SgForm) -> SgStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| (SgStatus::Parse, e.to_string()))?;
        let form = lift(form_from_json(text))?;
        write_out(out, Box::into_raw(Box::new(SgForm { form })), "out")
    })
}

/// # Safety
/// `form` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_form_to_json(form: *const SgForm, out: *mut *mut c_char) -> SgStatus {
    guard(|| {
        let f = deref(form, "form")?;
        write_out(out, into_c_string(form_to_json(&f.form)), "out")
    })
}

/// # Safety
/// All handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_form_exterior_derivative(
    geometry: *const SgGeometry,
    form: *const SgForm,
    out: *mut *mut SgForm,
) -> SgStatus {
    guard(|| {
        let g = deref(geometry, "geometry")?;
        let f = deref(form, "form")?;
        let d = lift(exterior_derivative(&f.form, &g.k))?;
        write_out(out, Box::into_raw(Box::new(SgForm { form: d })), "out")
    })
}

/// # Safety
/// Both forms must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_form_wedge(left: *const SgForm, right: *const SgForm, out: *mut *mut SgForm) -> SgStatus {
    guard(|| {
        let a = deref(left, "left")?;
        let b = deref(right, "right")?;
        let w = lift(a.form.wedge(&b.form))?;
        write_out(out, Box::into_raw(Box::new(SgForm { form: w })), "out")
    })
}

/// # Safety
/// `form` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_form_degree(form: *const SgForm, out: *mut usize) -> SgStatus {
    guard(|| write_out(out, deref(form, "form")?.form.degree(), "out"))
}

/// # Safety
/// `form` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_form_is_zero(form: *const SgForm, out: *mut bool) -> SgStatus {
    guard(|| write_out(out, deref(form, "form")?.form.is_zero(), "out"))
}

/// # Safety
/// `form` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sg_form_free(form: *mut SgForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Checks the structure-constant identities; `passed` receives the verdict and
/// `report` (if not null) the JSON report.
///
/// # Safety
/// `geometry` must be a live handle, `passed` writable, `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sg_verify_identities(
    geometry: *const SgGeometry,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> SgStatus {
    guard(|| {
        let g = deref(geometry, "geometry")?;
        let r = verify_structure_identities(&g.k);
        write_out(passed, r.passed, "passed")?;
        if !report.is_null() {
            report.write(into_c_string(serde_json::to_string(&r).expect("serialisable")));
        }
        Ok(())
    })
}

/// Writes `b_0 … b_{max_p}` into `out`, which must hold `max_p + 1` entries.
/// Forms of degree above `degree_cap` are never built.
///
/// # Safety
/// `geometry` must be a live handle and `out` valid for `max_p + 1` writes.
#[no_mangle]
pub unsafe extern "C" fn sg_betti_numbers(
    geometry: *const SgGeometry,
    max_p: usize,
    degree_cap: usize,
    out: *mut usize,
) -> SgStatus {
    guard(|| {
        let g = deref(geometry, "geometry")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let b = lift(betti_numbers(max_p, &g.k, degree_cap))?;
        ptr::copy_nonoverlapping(b.as_ptr(), out, b.len());
        Ok(())
    })
}

/// Message for the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
