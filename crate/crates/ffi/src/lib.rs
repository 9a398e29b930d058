//! C ABI over `wkb_cech`.
//!
//! Conventions:
//! * every fallible call returns an `int` status, `WKB_OK` on success;
//! * results come back through out-pointers, objects as opaque handles
//!   released with the matching `*_free`, strings as `char *` released
//!   with [`wkb_string_free`];
//! * on failure the calling thread's last error holds a kind (the library
//!   error name, e.g. `NotInvertible`) and a message, readable until the
//!   next failing call on that thread;
//! * panics never cross the boundary; they surface as `WKB_ERR_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wkb_cech::cech::{self, CechError};
use wkb_cech::crossed::CrossedModule;
use wkb_cech::descent::{self, DescentJson, WkbDescentDatum};
use wkb_cech::group::FiniteGroup;
use wkb_cech::nerve::Nerve;
use wkb_cech::WkbSymbol;

pub const WKB_OK: c_int = 0;
/// A required pointer argument was null.
pub const WKB_ERR_NULL: c_int = 1;
/// Input text was not UTF-8, not valid JSON, or not a valid object.
pub const WKB_ERR_PARSE: c_int = 2;
/// The computation rejected its input (e.g. `NotInvertible`).
pub const WKB_ERR_DOMAIN: c_int = 3;
/// An enumeration hit its candidate budget.
pub const WKB_ERR_BUDGET: c_int = 4;
/// Internal failure; the message carries the panic payload.
pub const WKB_ERR_PANIC: c_int = 5;

struct Failure {
    code: c_int,
    kind: String,
    message: String,
}

impl Failure {
    fn new(code: c_int, kind: impl Into<String>, message: impl Into<String>) -> Self {
        Failure { code, kind: kind.into(), message: message.into() }
    }

    fn parse(message: impl Into<String>) -> Self {
        Self::new(WKB_ERR_PARSE, "ParseError", message)
    }

    fn domain<E: std::fmt::Debug + std::fmt::Display>(e: E) -> Self {
        Self::new(WKB_ERR_DOMAIN, wkb_cech::cli::error_kind(&e), e.to_string())
    }
}

fn cech_failure(e: CechError) -> Failure {
    match e {
        CechError::BudgetExceeded { .. } => Failure::new(WKB_ERR_BUDGET, "BudgetExceeded", e.to_string()),
        other => Failure::domain(other),
    }
}

struct LastError {
    kind: CString,
    message: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn c_string(s: String) -> CString {
    CString::new(s.replace('\0', "\u{fffd}")).expect("interior nul removed")
}

fn set_last(f: Failure) -> c_int {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(LastError { kind: c_string(f.kind), message: c_string(f.message) });
    });
    f.code
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> c_int {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => WKB_OK,
        Ok(Err(f)) => set_last(f),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last(Failure::new(WKB_ERR_PANIC, "Panic", msg))
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(WKB_ERR_NULL, "NullPointer", "string argument is null"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::parse("argument is not UTF-8"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(WKB_ERR_NULL, "NullPointer", "handle is null"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(WKB_ERR_NULL, "NullPointer", "output pointer is null"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_box<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(WKB_ERR_NULL, "NullPointer", "output pointer is null"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(WKB_ERR_NULL, "NullPointer", "output pointer is null"));
    }
    out.write(c_string(s).into_raw());
    Ok(())
}

fn json<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::parse(e.to_string()))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Kind of the calling thread's last error, or null if none.
#[no_mangle]
pub extern "C" fn wkb_last_error_kind() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |e| e.kind.as_ptr()))
}

/// Message of the calling thread's last error, or null if none.
#[no_mangle]
pub extern "C" fn wkb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |e| e.message.as_ptr()))
}

#[no_mangle]
pub extern "C" fn wkb_clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn wkb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wkb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- symbols

/// A total symbol `sum_j p_j(x, u) tau^j` with its known window.
pub struct WkbSymbolHandle(WkbSymbol);

/// Parses the symbol JSON wire form.
///
/// # Safety
/// `json_text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_symbol_from_json(json_text: *const c_char, out: *mut *mut WkbSymbolHandle) -> c_int {
    guard(|| {
        let s: WkbSymbol = json(text(json_text)?)?;
        put_box(out, WkbSymbolHandle(s))
    })
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_symbol_to_json(s: *const WkbSymbolHandle, out: *mut *mut c_char) -> c_int {
    guard(|| put_string(out, to_json(&handle(s)?.0)))
}

/// Human-readable form, e.g. `[x0*u0]τ^1 + [1]τ^0 + O(τ^-5)`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_symbol_display(s: *const WkbSymbolHandle, out: *mut *mut c_char) -> c_int {
    guard(|| put_string(out, handle(s)?.0.to_string()))
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wkb_symbol_free(s: *mut WkbSymbolHandle) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Star product `a ★ b`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_symbol_star(
    a: *const WkbSymbolHandle,
    b: *const WkbSymbolHandle,
    out: *mut *mut WkbSymbolHandle,
) -> c_int {
    guard(|| {
        let r = handle(a)?.0.star(&handle(b)?.0).map_err(Failure::domain)?;
        put_box(out, WkbSymbolHandle(r))
    })
}

/// Two-sided inverse; `NotInvertible` when the principal symbol is not a
/// unit.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_symbol_invert(a: *const WkbSymbolHandle, out: *mut *mut WkbSymbolHandle) -> c_int {
    guard(|| {
        let r = handle(a)?.0.invert().map_err(Failure::domain)?;
        put_box(out, WkbSymbolHandle(r))
    })
}

/// Formal adjoint with respect to `dx`.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_symbol_adjoint(a: *const WkbSymbolHandle, out: *mut *mut WkbSymbolHandle) -> c_int {
    guard(|| put_box(out, WkbSymbolHandle(handle(a)?.0.adjoint_flat())))
}

/// Writes 1 when `a` and `b` agree on their common window, else 0.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_symbol_equal(
    a: *const WkbSymbolHandle,
    b: *const WkbSymbolHandle,
    out: *mut c_int,
) -> c_int {
    guard(|| put(out, c_int::from(handle(a)?.0.eq_on_window(&handle(b)?.0))))
}

// ---- crossed modules and nerves

pub struct WkbCrossedModuleHandle(CrossedModule);

pub struct WkbNerveHandle(Nerve);

/// Crossed module fixture: `kind` is one of `g0`, `g1`, `central`,
/// `collapse`; `group` a group name such as `S3`, `Q8`, `Z4`.
///
/// # Safety
/// `kind`, `group` must be nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_crossed_fixture(
    kind: *const c_char,
    group: *const c_char,
    out: *mut *mut WkbCrossedModuleHandle,
) -> c_int {
    guard(|| {
        let g = FiniteGroup::by_name(text(group)?).map_err(|e| Failure::parse(e.to_string()))?;
        let cm = match text(kind)? {
            "g0" => CrossedModule::make_g0(&g),
            "g1" => CrossedModule::make_g1(&g).map_err(Failure::domain)?,
            "central" => CrossedModule::make_central(&g),
            "collapse" => CrossedModule::collapse(&g),
            other => return Err(Failure::parse(format!("unknown fixture kind {other:?}"))),
        };
        put_box(out, WkbCrossedModuleHandle(cm))
    })
}

/// # Safety
/// `json_text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_crossed_from_json(
    json_text: *const c_char,
    out: *mut *mut WkbCrossedModuleHandle,
) -> c_int {
    guard(|| {
        let cm: CrossedModule = json(text(json_text)?)?;
        put_box(out, WkbCrossedModuleHandle(cm))
    })
}

/// Number of violated crossed-module axioms (0 for a valid module).
///
/// # Safety
/// `cm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_crossed_violations(cm: *const WkbCrossedModuleHandle, out: *mut usize) -> c_int {
    guard(|| put(out, handle(cm)?.0.validate().len()))
}

/// # Safety
/// `cm` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wkb_crossed_free(cm: *mut WkbCrossedModuleHandle) {
    if !cm.is_null() {
        drop(Box::from_raw(cm));
    }
}

/// Nerve fixture: `point`, `interval`, `circle`, `sphere`, `ball`.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_nerve_by_name(name: *const c_char, out: *mut *mut WkbNerveHandle) -> c_int {
    guard(|| {
        let n = Nerve::by_name(text(name)?).map_err(|e| Failure::parse(e.to_string()))?;
        put_box(out, WkbNerveHandle(n))
    })
}

/// # Safety
/// `json_text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_nerve_from_json(json_text: *const c_char, out: *mut *mut WkbNerveHandle) -> c_int {
    guard(|| {
        let n: Nerve = json(text(json_text)?)?;
        put_box(out, WkbNerveHandle(n))
    })
}

/// # Safety
/// `n` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wkb_nerve_free(n: *mut WkbNerveHandle) {
    if !n.is_null() {
        drop(Box::from_raw(n));
    }
}

/// Number of classes of `H^degree(nerve; cm)` for degree 0 or 1, within
/// `budget` candidates (0 selects the default).
///
/// # Safety
/// `cm`, `nerve` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_cohomology_classes(
    cm: *const WkbCrossedModuleHandle,
    nerve: *const WkbNerveHandle,
    degree: u32,
    budget: u64,
    out: *mut usize,
) -> c_int {
    guard(|| {
        let (cm, nerve) = (&handle(cm)?.0, &handle(nerve)?.0);
        let budget = if budget == 0 { cech::DEFAULT_BUDGET } else { budget };
        let n = match degree {
            0 => cech::h0(cm, nerve, budget).map_err(cech_failure)?.len(),
            1 => cech::h1(cm, nerve, budget).map_err(cech_failure)?.len(),
            d => return Err(Failure::parse(format!("degree {d} is not 0 or 1"))),
        };
        put(out, n)
    })
}

/// Outcome of [`wkb_bridge_verify`].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct WkbBridgeSummary {
    pub group_order: usize,
    pub center_order: usize,
    pub crossed_classes: usize,
    pub classical_classes: usize,
    /// 1 when both maps are mutually inverse bijections.
    pub verified: c_int,
}

/// Compares `H^1` of the central crossed module of `group` with classical
/// `H^2` of its center.
///
/// # Safety
/// `group` must be a nul-terminated string, `nerve` a live handle, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_bridge_verify(
    group: *const c_char,
    nerve: *const WkbNerveHandle,
    budget: u64,
    out: *mut WkbBridgeSummary,
) -> c_int {
    guard(|| {
        let g = FiniteGroup::by_name(text(group)?).map_err(|e| Failure::parse(e.to_string()))?;
        let budget = if budget == 0 { cech::DEFAULT_BUDGET } else { budget };
        let r = descent::bridge_verify(&g, &handle(nerve)?.0, budget).map_err(|e| match e {
            descent::BridgeError::Cech(c) => cech_failure(c),
            other => Failure::domain(other),
        })?;
        put(
            out,
            WkbBridgeSummary {
                group_order: r.group_order,
                center_order: r.center_order,
                crossed_classes: r.crossed_classes,
                classical_classes: r.classical_classes,
                verified: c_int::from(r.verified),
            },
        )
    })
}

// ---- descent

pub struct WkbDescentHandle(WkbDescentDatum);

/// Parses the descent-datum JSON (nerve plus `"i,j"` / `"i,j,k"` keyed
/// operators).
///
/// # Safety
/// `json_text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_descent_from_json(json_text: *const c_char, out: *mut *mut WkbDescentHandle) -> c_int {
    guard(|| {
        let j: DescentJson = json(text(json_text)?)?;
        let d = WkbDescentDatum::try_from(j).map_err(Failure::domain)?;
        put_box(out, WkbDescentHandle(d))
    })
}

/// # Safety
/// `d` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wkb_descent_free(d: *mut WkbDescentHandle) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Checks the descent relations to `depth`; writes 1 if all hold. The
/// full per-simplex report goes to `report_json` when it is not null.
///
/// # Safety
/// `d` must be a live handle; `valid` writable; `report_json` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_descent_validate(
    d: *const WkbDescentHandle,
    depth: usize,
    valid: *mut c_int,
    report_json: *mut *mut c_char,
) -> c_int {
    guard(|| {
        let report = descent::validate_descent(&handle(d)?.0, depth).map_err(Failure::domain)?;
        put(valid, c_int::from(report.valid))?;
        if !report_json.is_null() {
            put_string(report_json, to_json(&report))?;
        }
        Ok(())
    })
}

/// Characteristic class as a JSON array of τ-series, one per triangle in
/// nerve order.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_descent_extract_class(
    d: *const WkbDescentHandle,
    depth: usize,
    out: *mut *mut c_char,
) -> c_int {
    guard(|| {
        let c = descent::extract_class(&handle(d)?.0, depth).map_err(Failure::domain)?;
        put_string(out, to_json(&c))
    })
}

// ---- batch front end

/// Runs the command-line front end on `argv` (without the program name)
/// and returns its exit status (0, 1 domain error, 2 malformed input), or
/// a negated `WKB_ERR_*` code when the arguments cannot be read. The JSON
/// report is stored in `report` when it is not null.
///
/// # Safety
/// `argv` must hold `argc` nul-terminated strings; `report` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn wkb_run(argc: usize, argv: *const *const c_char, report: *mut *mut c_char) -> c_int {
    let mut status = 2;
    let code = guard(|| {
        if argc > 0 && argv.is_null() {
            return Err(Failure::new(WKB_ERR_NULL, "NullPointer", "argv is null"));
        }
        let mut args = vec!["wkb-cech".to_string()];
        for i in 0..argc {
            args.push(text(*argv.add(i))?.to_string());
        }
        let (mut out, mut err) = (Vec::new(), Vec::new());
        status = wkb_cech::cli::run_with(args, &mut out, &mut err);
        if !report.is_null() {
            put_string(report, String::from_utf8_lossy(&out).into_owned())?;
        }
        Ok(())
    });
    if code == WKB_OK {
        status
    } else {
        -code
    }
}
