//! C interface. Every function returns a `CmhkStatus`; on failure the message
//! is available from `cmhk_last_error` until the next call on the same thread.
//! Strings returned through `char **` belong to the caller and are released
//! with `cmhk_string_free`; handles with their matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cmhk_core::cli;
use cmhk_core::json::{envelope, parse_document, parse_qform};
use cmhk_core::kernel::rat::parse_rat;
use cmhk_core::lubin_tate::{build_d_pi, structure_checks, verify_polygons};
use cmhk_core::padic::tower::{random_eisenstein, random_rng};
use cmhk_core::padic::PadicTower;
use cmhk_core::pipeline::{run_pipeline, PipelineRequest};
use cmhk_core::qform::{epsilon, hilbert_symbol, invariants, Place, QuadraticFormQ};
use cmhk_core::Error;

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmhkStatus {
    Ok = 0,
    /// A mathematical check did not hold.
    CheckFailed = 1,
    /// Malformed or out-of-domain input.
    InvalidInput = 2,
    NullPointer = 3,
    /// Internal panic; the library state is unaffected.
    Internal = 4,
}

/// Opaque rational quadratic form.
pub struct CmhkForm {
    form: QuadraticFormQ,
}

/// Opaque p-adic tower.
pub struct CmhkTower {
    tower: PadicTower,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(s).unwrap()));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> CmhkStatus {
    match cli::exit_code(e) {
        1 => CmhkStatus::CheckFailed,
        _ => CmhkStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), CmhkStatus>) -> CmhkStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CmhkStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            CmhkStatus::Internal
        }
    }
}

fn fail(e: Error) -> CmhkStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, CmhkStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(CmhkStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        CmhkStatus::InvalidInput
    })
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), CmhkStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(CmhkStatus::NullPointer);
    }
    *out = v;
    Ok(())
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap().into_raw()
}

fn place_of(p: u64) -> Result<Place, CmhkStatus> {
    if p == 0 {
        Ok(Place::Real)
    } else {
        Place::prime(p).map_err(fail)
    }
}

/// Message of the last failure on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn cmhk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Version string of the library (static).
#[no_mangle]
pub extern "C" fn cmhk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cmhk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Hilbert symbol `(a, b)_p` of two rationals given as "a/b" strings;
/// `p = 0` is the real place.
///
/// # Safety
/// `a`, `b` must be NUL-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cmhk_hilbert(a: *const c_char, b: *const c_char, p: u64, out: *mut i32) -> CmhkStatus {
    guard(|| {
        let x = parse_rat(read_str(a)?).map_err(fail)?;
        let y = parse_rat(read_str(b)?).map_err(fail)?;
        let s = hilbert_symbol(&x, &y, place_of(p)?).map_err(fail)?;
        write_out(out, s)
    })
}

/// Form from a JSON document `{"diagonal": [..]}` or `{"gram": [[..]]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cmhk_form_from_json(json: *const c_char, out: *mut *mut CmhkForm) -> CmhkStatus {
    guard(|| {
        let v = parse_document(read_str(json)?).map_err(fail)?;
        let form = parse_qform(&v).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(CmhkForm { form })))
    })
}

/// # Safety
/// `form` must come from `cmhk_form_from_json` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cmhk_form_free(form: *mut CmhkForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// # Safety
/// `form` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cmhk_form_dim(form: *const CmhkForm) -> usize {
    form.as_ref().map_or(0, |f| f.form.dim())
}

/// Local invariant `epsilon_p` (`p = 0`: real place).
///
/// # Safety
/// `form` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cmhk_form_epsilon(form: *const CmhkForm, p: u64, out: *mut i32) -> CmhkStatus {
    guard(|| {
        let f = form.as_ref().ok_or_else(|| {
            set_error("null form");
            CmhkStatus::NullPointer
        })?;
        let e = epsilon(&f.form, place_of(p)?).map_err(fail)?;
        write_out(out, e)
    })
}

/// Squarefree discriminant class as a decimal string, and the negative index.
///
/// # Safety
/// `form` must be a live handle; `disc` and `s_minus` writable.
#[no_mangle]
pub unsafe extern "C" fn cmhk_form_invariants(
    form: *const CmhkForm,
    disc: *mut *mut c_char,
    s_minus: *mut usize,
) -> CmhkStatus {
    guard(|| {
        let f = form.as_ref().ok_or_else(|| {
            set_error("null form");
            CmhkStatus::NullPointer
        })?;
        let inv = invariants(&f.form).map_err(fail)?;
        write_out(s_minus, inv.s_minus)?;
        write_out(disc, to_c(inv.discriminant.to_string()))
    })
}

/// Tower `Q_p(zeta_{p^f - 1})[y]/(E)`; `E = y^e - p` when `seed = 0`,
/// otherwise a random Eisenstein polynomial drawn from `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmhk_tower_new(
    p: u64,
    f: usize,
    e: usize,
    precision: u32,
    seed: u64,
    out: *mut *mut CmhkTower,
) -> CmhkStatus {
    guard(|| {
        let tower = if seed == 0 {
            PadicTower::standard(p, f, e, precision).map_err(fail)?
        } else {
            let base = PadicTower::standard(p, f, 1, precision).map_err(fail)?;
            let layer = base.layer().clone();
            let mut rng = random_rng(seed);
            let coeffs = random_eisenstein(&layer, e, &mut rng);
            PadicTower::with_layer(layer, coeffs).map_err(fail)?
        };
        write_out(out, Box::into_raw(Box::new(CmhkTower { tower })))
    })
}

/// # Safety
/// `t` must come from `cmhk_tower_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cmhk_tower_free(t: *mut CmhkTower) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Degree of the tower over `Q_p`.
///
/// # Safety
/// `t` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cmhk_tower_degree(t: *const CmhkTower) -> usize {
    t.as_ref().map_or(0, |t| t.tower.d())
}

/// Builds the Lubin-Tate module of the tower and runs the structure and
/// polygon checks. `CMHK_STATUS_CHECK_FAILED` when any check fails.
///
/// # Safety
/// `t` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cmhk_lt_verify(t: *const CmhkTower, seed: u64) -> CmhkStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| {
            set_error("null tower");
            CmhkStatus::NullPointer
        })?;
        let lt = build_d_pi(&t.tower).map_err(fail)?;
        let mut bad: Vec<String> = structure_checks(&lt, seed)
            .into_iter()
            .filter(|i| !i.pass)
            .map(|i| i.name)
            .collect();
        let poly = verify_polygons(&lt).map_err(fail)?;
        bad.extend(poly.items.into_iter().filter(|i| !i.pass).map(|i| i.name));
        if bad.is_empty() {
            Ok(())
        } else {
            set_error(format!("failed: {}", bad.join(", ")));
            Err(CmhkStatus::CheckFailed)
        }
    })
}

/// Runs the pipeline on a JSON request and writes the JSON report. The report
/// is written whenever the request was valid, also when the verdict fails.
///
/// # Safety
/// `request` must be a NUL-terminated string and `report` writable.
#[no_mangle]
pub unsafe extern "C" fn cmhk_pipeline_json(request: *const c_char, seed: u64, report: *mut *mut c_char) -> CmhkStatus {
    guard(|| {
        if report.is_null() {
            set_error("null output pointer");
            return Err(CmhkStatus::NullPointer);
        }
        let v = parse_document(read_str(request)?).map_err(fail)?;
        let req = PipelineRequest::from_json(&v).map_err(fail)?;
        let r = run_pipeline(&req).map_err(fail)?;
        let text = serde_json::to_string(&envelope("pipeline", seed, r.pass, cli::pipeline_json(&r))).unwrap();
        *report = to_c(text);
        if r.pass {
            Ok(())
        } else {
            set_error(match r.failing_block() {
                Some(k) => format!("pipeline verdict fails at block {k}"),
                None => "pipeline verdict fails".to_string(),
            });
            Err(CmhkStatus::CheckFailed)
        }
    })
}

/// Runs the command-line tool on `argv` (without the program name) and
/// returns its exit code; stdout goes to `out` when non-NULL.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn cmhk_run(argc: usize, argv: *const *const c_char, out: *mut *mut c_char) -> i32 {
    clear_error();
    let res = catch_unwind(AssertUnwindSafe(|| {
        let mut args = vec!["cmhk".to_string()];
        for i in 0..argc {
            match read_str(*argv.add(i)) {
                Ok(s) => args.push(s.to_string()),
                Err(_) => return None,
            }
        }
        Some(cli::run(args))
    }));
    match res {
        Ok(Some(o)) => {
            if !o.stderr.is_empty() {
                set_error(o.stderr.trim_end());
            }
            if !out.is_null() {
                *out = to_c(o.stdout);
            }
            o.code
        }
        Ok(None) => 2,
        Err(_) => {
            set_error("internal panic");
            2
        }
    }
}
