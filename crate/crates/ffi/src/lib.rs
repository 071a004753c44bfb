//! C ABI over `icdual`.
//!
//! Functions are handed out through opaque handles and exchange plain
//! `int64_t` arrays. Box bounds use `INT64_MIN` / `INT64_MAX` for minus and
//! plus infinity. Every entry point returns an [`IcdualStatus`]; on failure
//! `icdual_last_error` describes the problem. Results that do not fit in
//! `int64_t` give `ICDUAL_STATUS_OVERFLOW`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use icdual::cli::{execute_with_code, parse_cli};
use icdual::fenchel::{fenchel_certificate, minimize_difference};
use icdual::integral_convexity::{is_integrally_convex_function, IcMode};
use icdual::io::{parse_separable, Instance};
use icdual::subdifferential::integral_subgradient_in_box;
use icdual::{Error, ExtInt, IntegralBox, LatticePoint, Orientation, SeparableFunction, TableFunction};
use num_bigint::BigInt;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IcdualStatus {
    Ok = 0,
    NullPointer = 1,
    Precondition = 2,
    Parse = 3,
    Internal = 4,
    Overflow = 5,
    InvalidUtf8 = 6,
}

/// Finite-domain integer-valued function.
pub struct IcdualTable {
    dim: usize,
    entries: std::collections::BTreeMap<LatticePoint, BigInt>,
}

/// Separable function built from its JSON description.
pub struct IcdualSeparable {
    inner: SeparableFunction,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> IcdualStatus {
    match icdual::cli::exit_code(e) {
        3 => IcdualStatus::Parse,
        4 => IcdualStatus::Internal,
        _ => IcdualStatus::Precondition,
    }
}

fn fail(status: IcdualStatus, msg: impl Into<String>) -> IcdualStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> IcdualStatus {
    let s = status_of(&e);
    fail(s, e.to_string())
}

fn guard(body: impl FnOnce() -> IcdualStatus) -> IcdualStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => fail(IcdualStatus::Internal, "panic inside icdual"),
    }
}

fn to_i64(v: &BigInt) -> Result<i64, IcdualStatus> {
    i64::try_from(v).map_err(|_| fail(IcdualStatus::Overflow, format!("{v} does not fit in int64_t")))
}

unsafe fn point_from(ptr: *const i64, n: usize) -> LatticePoint {
    LatticePoint::new(
        std::slice::from_raw_parts(ptr, n)
            .iter()
            .map(|&c| BigInt::from(c))
            .collect(),
    )
}

unsafe fn write_point(out: *mut i64, p: &LatticePoint) -> Result<(), IcdualStatus> {
    let vals = p.coords().iter().map(to_i64).collect::<Result<Vec<_>, _>>()?;
    ptr::copy_nonoverlapping(vals.as_ptr(), out, vals.len());
    Ok(())
}

fn ext_from(v: i64) -> ExtInt {
    match v {
        i64::MIN => ExtInt::NegInf,
        i64::MAX => ExtInt::PosInf,
        v => ExtInt::from(v),
    }
}

unsafe fn cstr<'a>(s: *const c_char) -> Result<&'a str, IcdualStatus> {
    if s.is_null() {
        return Err(fail(IcdualStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(IcdualStatus::InvalidUtf8, "string is not UTF-8"))
}

impl IcdualTable {
    fn build(&self) -> Result<TableFunction, IcdualStatus> {
        TableFunction::new(self.dim, self.entries.clone()).map_err(from_error)
    }
}

/// Last error message on this thread, or NULL. Valid until the next call
/// into the library from the same thread.
#[no_mangle]
pub extern "C" fn icdual_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Empty table in dimension `dim`. Free with `icdual_table_free`.
#[no_mangle]
pub extern "C" fn icdual_table_new(dim: usize) -> *mut IcdualTable {
    Box::into_raw(Box::new(IcdualTable {
        dim,
        entries: Default::default(),
    }))
}

/// Sets `f(x) = value`; `x` has `dim` entries.
///
/// # Safety
/// `table` must come from `icdual_table_new`; `x` must point to `dim` values.
#[no_mangle]
pub unsafe extern "C" fn icdual_table_set(table: *mut IcdualTable, x: *const i64, value: i64) -> IcdualStatus {
    guard(|| {
        if table.is_null() || x.is_null() {
            return fail(IcdualStatus::NullPointer, "null argument");
        }
        let t = &mut *table;
        t.entries.insert(point_from(x, t.dim), BigInt::from(value));
        IcdualStatus::Ok
    })
}

/// # Safety
/// `table` must come from `icdual_table_new` or be NULL.
#[no_mangle]
pub unsafe extern "C" fn icdual_table_free(table: *mut IcdualTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Parses a separable function from JSON (`{"orientation", "pieces"}`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icdual_separable_from_json(
    json: *const c_char,
    out: *mut *mut IcdualSeparable,
) -> IcdualStatus {
    guard(|| {
        if out.is_null() {
            return fail(IcdualStatus::NullPointer, "null output pointer");
        }
        let text = match cstr(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let value: serde_json::Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => return fail(IcdualStatus::Parse, e.to_string()),
        };
        match parse_separable(&value) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(IcdualSeparable { inner }));
                IcdualStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `psi` must come from `icdual_separable_from_json` or be NULL.
#[no_mangle]
pub unsafe extern "C" fn icdual_separable_free(psi: *mut IcdualSeparable) {
    if !psi.is_null() {
        drop(Box::from_raw(psi));
    }
}

/// Integral convexity test. `mode` 0 checks the domain and pairs at
/// distance two; any other value checks all pairs at distance two or more.
///
/// # Safety
/// `table` must be a live handle and `out_holds` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icdual_check_ic(table: *const IcdualTable, mode: i32, out_holds: *mut i32) -> IcdualStatus {
    guard(|| {
        if table.is_null() || out_holds.is_null() {
            return fail(IcdualStatus::NullPointer, "null argument");
        }
        let f = match (*table).build() {
            Ok(f) => f,
            Err(s) => return s,
        };
        let mode = if mode == 0 {
            IcMode::DomainAndDistanceTwo
        } else {
            IcMode::AllFarPairs
        };
        *out_holds = is_integrally_convex_function(&f, mode).holds as i32;
        IcdualStatus::Ok
    })
}

/// Minimizer of `f - psi` (of `f` when `psi` is NULL). Writes `dim` values
/// to `out_point`.
///
/// # Safety
/// Handles must be live; `out_point` must hold `dim` values.
#[no_mangle]
pub unsafe extern "C" fn icdual_minimize(
    table: *const IcdualTable,
    psi: *const IcdualSeparable,
    out_point: *mut i64,
    out_value: *mut i64,
) -> IcdualStatus {
    guard(|| {
        if table.is_null() || out_point.is_null() || out_value.is_null() {
            return fail(IcdualStatus::NullPointer, "null argument");
        }
        let run = || -> Result<(), IcdualStatus> {
            let f = (*table).build()?;
            let zero;
            let psi = if psi.is_null() {
                zero = SeparableFunction::zero(f.dim(), Orientation::Concave);
                &zero
            } else {
                &(*psi).inner
            };
            let (x, v) = minimize_difference(&f, psi).map_err(from_error)?;
            write_point(out_point, &x)?;
            *out_value = to_i64(&v)?;
            Ok(())
        };
        run().err().unwrap_or(IcdualStatus::Ok)
    })
}

/// Integral subgradient of `f` at `x` inside the box `[lower, upper]`
/// (NULL bounds mean unbounded). Sets `*out_found` to 0 when the
/// subdifferential misses the box.
///
/// # Safety
/// Arrays must hold `dim` values; handles must be live.
#[no_mangle]
pub unsafe extern "C" fn icdual_integral_subgradient(
    table: *const IcdualTable,
    x: *const i64,
    lower: *const i64,
    upper: *const i64,
    out_p: *mut i64,
    out_found: *mut i32,
) -> IcdualStatus {
    guard(|| {
        if table.is_null() || x.is_null() || out_p.is_null() || out_found.is_null() {
            return fail(IcdualStatus::NullPointer, "null argument");
        }
        let run = || -> Result<(), IcdualStatus> {
            let f = (*table).build()?;
            let n = f.dim();
            let side = |p: *const i64, inf: ExtInt| -> Vec<ExtInt> {
                if p.is_null() {
                    vec![inf; n]
                } else {
                    std::slice::from_raw_parts(p, n).iter().map(|&v| ext_from(v)).collect()
                }
            };
            let bx = IntegralBox::new(side(lower, ExtInt::NegInf), side(upper, ExtInt::PosInf)).map_err(from_error)?;
            match integral_subgradient_in_box(&f, &point_from(x, n), &bx).map_err(from_error)? {
                Some(p) => {
                    write_point(out_p, &p)?;
                    *out_found = 1;
                }
                None => *out_found = 0,
            }
            Ok(())
        };
        run().err().unwrap_or(IcdualStatus::Ok)
    })
}

/// Duality certificate for `min f - psi`: writes the primal point, the
/// integral dual point and the common optimal value.
///
/// # Safety
/// Handles must be live; output arrays must hold `dim` values.
#[no_mangle]
pub unsafe extern "C" fn icdual_fenchel_certificate(
    table: *const IcdualTable,
    psi: *const IcdualSeparable,
    out_x: *mut i64,
    out_p: *mut i64,
    out_value: *mut i64,
) -> IcdualStatus {
    guard(|| {
        if table.is_null() || psi.is_null() || out_x.is_null() || out_p.is_null() || out_value.is_null() {
            return fail(IcdualStatus::NullPointer, "null argument");
        }
        let run = || -> Result<(), IcdualStatus> {
            let f = (*table).build()?;
            let c = fenchel_certificate(&f, &(*psi).inner).map_err(from_error)?;
            write_point(out_x, &c.primal_point)?;
            write_point(out_p, &c.dual_point)?;
            *out_value = to_i64(&c.primal_value)?;
            Ok(())
        };
        run().err().unwrap_or(IcdualStatus::Ok)
    })
}

/// Runs a CLI command. `args_json` is a JSON list of arguments after the
/// program name (e.g. `["check-ic", "--mode", "all-pairs"]`), and
/// `instance_json` an instance document or NULL. The JSON report is
/// returned in `*out_report` (free with `icdual_string_free`) and the CLI
/// exit code in `*out_code`.
///
/// # Safety
/// Strings must be NUL-terminated; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn icdual_run_json(
    args_json: *const c_char,
    instance_json: *const c_char,
    out_report: *mut *mut c_char,
    out_code: *mut i32,
) -> IcdualStatus {
    guard(|| {
        if out_report.is_null() || out_code.is_null() {
            return fail(IcdualStatus::NullPointer, "null output pointer");
        }
        let run = || -> Result<(), IcdualStatus> {
            let args: Vec<String> =
                serde_json::from_str(cstr(args_json)?).map_err(|e| fail(IcdualStatus::Parse, e.to_string()))?;
            let cli = parse_cli(std::iter::once("icdual".to_string()).chain(args))
                .map_err(|e| fail(IcdualStatus::Parse, e.to_string()))?;
            let inst = if instance_json.is_null() {
                cli.seed.map(icdual::cli::generated_instance)
            } else {
                Some(Instance::parse(cstr(instance_json)?).map_err(from_error)?)
            };
            let (report, code) = execute_with_code(&cli.command, inst.as_ref());
            let text = serde_json::to_string(&report.to_json()).expect("reports serialize");
            *out_report = CString::new(text).expect("JSON has no NUL").into_raw();
            *out_code = code;
            Ok(())
        };
        run().err().unwrap_or(IcdualStatus::Ok)
    })
}

/// Frees a string returned by the library.
///
/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn icdual_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
