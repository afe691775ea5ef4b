//! C ABI for the cartankit library.
//!
//! Conventions:
//! * every object is an opaque handle created by a `ck_*_from_*` constructor
//!   and released by the matching `ck_*_free`;
//! * fallible calls return a [`CkStatus`] and write their result through an
//!   out-pointer, which is left untouched on failure;
//! * the last error message is kept per thread and can be copied out with
//!   [`ck_last_error_message`];
//! * strings are UTF-8, NUL-terminated; strings returned by the library must
//!   be released with [`ck_string_free`].
//!
//! The header `include/cartankit.h` is generated from this file by cbindgen
//! at build time.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cartankit::bergmann::{kobayashi_distance, mobius_apply};
use cartankit::dynamics::{wolff_construction, MapExpr, WolffSchedule};
use cartankit::horoball::HoroballParams;
use cartankit::spectral::spectral_decompose;
use cartankit::triple::triple_product;
use cartankit::{CartanError, Element, TripleSpace};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CkStatus {
    Ok = 0,
    /// A pointer argument was NULL or a buffer was too small.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Structurally invalid input (bad JSON, wrong dimensions, bad index).
    InvalidArgument = 3,
    /// Operands live in different triple spaces.
    SpaceMismatch = 4,
    /// The operation is undefined for the given factor kind.
    Unsupported = 5,
    /// Input failed a mathematical validation.
    ValidationFailed = 6,
    /// A point left the domain of the operation.
    DomainError = 7,
    /// A singular or near-singular configuration was hit.
    Singular = 8,
    /// An iteration or factorization did not converge.
    NumericalFailure = 9,
    /// A panic was caught at the FFI boundary.
    InternalPanic = 10,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &CartanError) -> CkStatus {
    match err {
        CartanError::SpaceMismatch(_) => CkStatus::SpaceMismatch,
        CartanError::Unsupported(_) => CkStatus::Unsupported,
        CartanError::InvalidArgument(_) => CkStatus::InvalidArgument,
        CartanError::Validation(_) => CkStatus::ValidationFailed,
        CartanError::Domain(_) => CkStatus::DomainError,
        CartanError::Singular(_) => CkStatus::Singular,
        CartanError::Numerical(_) => CkStatus::NumericalFailure,
        CartanError::NonConvergence { .. } => CkStatus::NumericalFailure,
    }
}

fn fail(err: CartanError) -> CkStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn guard(f: impl FnOnce() -> CkStatus) -> CkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            CkStatus::InternalPanic
        }
    }
}

macro_rules! nonnull {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(r) => r,
            None => {
                set_error("NULL argument");
                return CkStatus::NullArgument;
            }
        }
    };
}

fn read_str<'a>(p: *const c_char) -> Result<&'a str, CkStatus> {
    if p.is_null() {
        set_error("NULL string argument");
        return Err(CkStatus::NullArgument);
    }
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        CkStatus::InvalidUtf8
    })
}

fn give<T>(out: *mut *mut T, value: T) -> CkStatus {
    if out.is_null() {
        set_error("NULL out-pointer");
        return CkStatus::NullArgument;
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    CkStatus::Ok
}

fn write_f64(out: *mut f64, value: f64) -> CkStatus {
    if out.is_null() {
        set_error("NULL out-pointer");
        return CkStatus::NullArgument;
    }
    unsafe { *out = value };
    CkStatus::Ok
}

/// Opaque triple space handle.
pub struct CkSpace(TripleSpace);
/// Opaque element handle.
pub struct CkElement(Element);
/// Opaque result of the Wolff construction for a fixed-point-free map.
pub struct CkWolff {
    data: cartankit::dynamics::WolffData,
}

/// Copy the last error message of this thread into `buf` (truncated to
/// `cap − 1` bytes, always NUL-terminated when `cap > 0`). Returns the full
/// message length in bytes.
#[no_mangle]
pub extern "C" fn ck_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Release a string returned by the library.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn ck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a triple space from its JSON description, e.g.
/// `{"factors":[{"kind":"rect","rows":2,"cols":2},{"kind":"spin","n":4}]}`.
#[no_mangle]
pub extern "C" fn ck_space_from_json(json: *const c_char, out: *mut *mut CkSpace) -> CkStatus {
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match TripleSpace::from_json(text) {
            Ok(space) => give(out, CkSpace(space)),
            Err(e) => fail(e),
        }
    })
}

/// Ambient coordinate dimension of the space.
#[no_mangle]
pub extern "C" fn ck_space_total_dim(space: *const CkSpace, out: *mut usize) -> CkStatus {
    let s = nonnull!(space);
    if out.is_null() {
        set_error("NULL out-pointer");
        return CkStatus::NullArgument;
    }
    unsafe { *out = s.0.total_dim() };
    CkStatus::Ok
}

/// Rank of the space (sum of the factor ranks).
#[no_mangle]
pub extern "C" fn ck_space_rank(space: *const CkSpace, out: *mut usize) -> CkStatus {
    let s = nonnull!(space);
    if out.is_null() {
        set_error("NULL out-pointer");
        return CkStatus::NullArgument;
    }
    unsafe { *out = s.0.rank() };
    CkStatus::Ok
}

/// Release a space handle.
///
/// # Safety
/// `space` must have been created by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn ck_space_free(space: *mut CkSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Build an element from `2 * total_dim` interleaved re/im coordinates.
#[no_mangle]
pub extern "C" fn ck_element_from_coords(
    space: *const CkSpace,
    coords: *const f64,
    len: usize,
    out: *mut *mut CkElement,
) -> CkStatus {
    guard(|| {
        let s = nonnull!(space);
        if coords.is_null() {
            set_error("NULL coordinate buffer");
            return CkStatus::NullArgument;
        }
        if len != 2 * s.0.total_dim() {
            set_error("coordinate buffer must hold 2 * total_dim numbers");
            return CkStatus::InvalidArgument;
        }
        let raw = unsafe { std::slice::from_raw_parts(coords, len) };
        let v = cartankit::linalg::CVec::from_iterator(
            s.0.total_dim(),
            raw.chunks_exact(2)
                .map(|p| cartankit::linalg::C64::new(p[0], p[1])),
        );
        match Element::from_coords(&s.0, v) {
            Ok(e) => give(out, CkElement(e)),
            Err(e) => fail(e),
        }
    })
}

/// Parse an element from its JSON form.
#[no_mangle]
pub extern "C" fn ck_element_from_json(json: *const c_char, out: *mut *mut CkElement) -> CkStatus {
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Element::from_json(text) {
            Ok(e) => give(out, CkElement(e)),
            Err(e) => fail(e),
        }
    })
}

/// Serialize an element to JSON; release the result with `ck_string_free`.
/// Returns NULL when `element` is NULL.
#[no_mangle]
pub extern "C" fn ck_element_to_json(element: *const CkElement) -> *mut c_char {
    let Some(e) = (unsafe { element.as_ref() }) else {
        return std::ptr::null_mut();
    };
    CString::new(e.0.to_json())
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

/// Copy the interleaved re/im coordinates into `buf` (`len ≥ 2 * total_dim`).
#[no_mangle]
pub extern "C" fn ck_element_coords(
    element: *const CkElement,
    buf: *mut f64,
    len: usize,
) -> CkStatus {
    let e = nonnull!(element);
    let need = 2 * e.0.coords().len();
    if buf.is_null() || len < need {
        set_error("coordinate buffer too small");
        return CkStatus::NullArgument;
    }
    for (k, c) in e.0.coords().iter().enumerate() {
        unsafe {
            *buf.add(2 * k) = c.re;
            *buf.add(2 * k + 1) = c.im;
        }
    }
    CkStatus::Ok
}

/// The triple (spectral) norm of the element.
#[no_mangle]
pub extern "C" fn ck_element_jb_norm(element: *const CkElement, out: *mut f64) -> CkStatus {
    guard(|| {
        let e = nonnull!(element);
        write_f64(out, e.0.jb_norm())
    })
}

/// Release an element handle.
///
/// # Safety
/// `element` must have been created by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn ck_element_free(element: *mut CkElement) {
    if !element.is_null() {
        drop(Box::from_raw(element));
    }
}

/// `{a, b, c}`.
#[no_mangle]
pub extern "C" fn ck_triple_product(
    a: *const CkElement,
    b: *const CkElement,
    c: *const CkElement,
    out: *mut *mut CkElement,
) -> CkStatus {
    guard(|| {
        let (a, b, c) = (nonnull!(a), nonnull!(b), nonnull!(c));
        match triple_product(&a.0, &b.0, &c.0) {
            Ok(t) => give(out, CkElement(t)),
            Err(e) => fail(e),
        }
    })
}

/// Kobayashi distance `tanh⁻¹‖g₋ₓ(y)‖` between two interior points.
#[no_mangle]
pub extern "C" fn ck_kobayashi_distance(
    x: *const CkElement,
    y: *const CkElement,
    out: *mut f64,
) -> CkStatus {
    guard(|| {
        let (x, y) = (nonnull!(x), nonnull!(y));
        match kobayashi_distance(&x.0, &y.0) {
            Ok(d) => write_f64(out, d),
            Err(e) => fail(e),
        }
    })
}

/// The Möbius transformation `g_a(z)`.
#[no_mangle]
pub extern "C" fn ck_mobius_apply(
    a: *const CkElement,
    z: *const CkElement,
    out: *mut *mut CkElement,
) -> CkStatus {
    guard(|| {
        let (a, z) = (nonnull!(a), nonnull!(z));
        match mobius_apply(&a.0, &z.0) {
            Ok(g) => give(out, CkElement(g)),
            Err(e) => fail(e),
        }
    })
}

/// Spectral coefficients of `z`, descending. Writes up to `cap` values into
/// `buf` and stores the full count in `written`.
#[no_mangle]
pub extern "C" fn ck_spectral_coefficients(
    z: *const CkElement,
    buf: *mut f64,
    cap: usize,
    written: *mut usize,
) -> CkStatus {
    guard(|| {
        let z = nonnull!(z);
        if written.is_null() {
            set_error("NULL out-pointer");
            return CkStatus::NullArgument;
        }
        match spectral_decompose(&z.0) {
            Ok(d) => {
                let coeffs = d.coefficients();
                unsafe { *written = coeffs.len() };
                if !buf.is_null() {
                    for (k, v) in coeffs.iter().take(cap).enumerate() {
                        unsafe { *buf.add(k) = *v };
                    }
                }
                CkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Run the Wolff construction for the holomorphic self-map described by
/// `map_json` on the given space; fails when the map has an interior fixed
/// point. The expression format matches the CLI:
/// `{"type":"mobius","a":<element>}`, `{"type":"scalar_scale","alpha":0.9}`,
/// `{"type":"compose","outer":…,"inner":…}`, `{"type":"direct_sum","parts":[…]}`,
/// `{"type":"constant","c":<element>}`, `{"type":"linear_isometry","matrix":[…]}`.
#[no_mangle]
pub extern "C" fn ck_wolff_run(
    map_json: *const c_char,
    space: *const CkSpace,
    out: *mut *mut CkWolff,
) -> CkStatus {
    guard(|| {
        let s = nonnull!(space);
        let text = match read_str(map_json) {
            Ok(t) => t,
            Err(st) => return st,
        };
        let expr = match MapExpr::from_json(text) {
            Ok(m) => m,
            Err(e) => return fail(e),
        };
        match wolff_construction(&expr, &s.0, &WolffSchedule::default()) {
            Ok(data) => give(out, CkWolff { data }),
            Err(e) => fail(e),
        }
    })
}

/// The Wolff point ξ on the boundary.
#[no_mangle]
pub extern "C" fn ck_wolff_xi(w: *const CkWolff, out: *mut *mut CkElement) -> CkStatus {
    guard(|| {
        let w = nonnull!(w);
        give(out, CkElement(w.data.xi().clone()))
    })
}

/// Number of boundary frame members (and σ values).
#[no_mangle]
pub extern "C" fn ck_wolff_frame_len(w: *const CkWolff, out: *mut usize) -> CkStatus {
    let w = nonnull!(w);
    if out.is_null() {
        set_error("NULL out-pointer");
        return CkStatus::NullArgument;
    }
    unsafe { *out = w.data.sigmas.sigmas.len() };
    CkStatus::Ok
}

/// Copy the σ values (their maximum is 1 by normalization).
#[no_mangle]
pub extern "C" fn ck_wolff_sigmas(w: *const CkWolff, buf: *mut f64, len: usize) -> CkStatus {
    let w = nonnull!(w);
    let sig = &w.data.sigmas.sigmas;
    if buf.is_null() || len < sig.len() {
        set_error("σ buffer too small");
        return CkStatus::NullArgument;
    }
    for (k, v) in sig.iter().enumerate() {
        unsafe { *buf.add(k) = *v };
    }
    CkStatus::Ok
}

/// Strict membership of `x` in the horoball `S₀(ξ, λ)` of the construction:
/// writes 1 when `‖B^{-1/2}(x − c(λ))‖ < 1 − tol`, else 0.
#[no_mangle]
pub extern "C" fn ck_wolff_horoball_contains(
    w: *const CkWolff,
    lambda: f64,
    x: *const CkElement,
    tol: f64,
    out: *mut c_int,
) -> CkStatus {
    guard(|| {
        let w = nonnull!(w);
        let x = nonnull!(x);
        if out.is_null() {
            set_error("NULL out-pointer");
            return CkStatus::NullArgument;
        }
        let run = || -> cartankit::Result<bool> {
            let hb = HoroballParams::new(
                w.data.sigmas.frame.clone(),
                w.data.sigmas.sigmas.clone(),
                lambda,
            )?;
            hb.contains(&x.0, tol)
        };
        match run() {
            Ok(v) => {
                unsafe { *out = v as c_int };
                CkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Release a Wolff handle.
///
/// # Safety
/// `w` must have been created by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn ck_wolff_free(w: *mut CkWolff) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}
