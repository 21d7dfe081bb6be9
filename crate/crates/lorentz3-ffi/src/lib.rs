//! C ABI for the curvature-operator pipeline.
//!
//! The surface follows a handle-plus-JSON style: opaque handles own parsed
//! algebras and computed operators, every structured payload crosses the
//! boundary as a UTF-8 JSON string in the same formats the CLI uses, and
//! every function returns an [`Lz3Status`] code. Strings returned through
//! `char**` out-parameters are owned by the library and must be released
//! with [`lz3_string_free`]; a human-readable message for the last failure
//! on the current thread is available from [`lz3_last_error_message`].
//!
//! Rational payloads (JSON strings like `"3/4"`) run on the exact backend;
//! any bare JSON float switches that call to the floating backend, exactly
//! like the CLI.

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};

use lorentz3::curvature::{CurvatureOperator, LAMBDA2_BASIS_LABELS, operator_of};
use lorentz3::error::ExistenceError;
use lorentz3::existence::{RealizeOptions, admissible, realize};
use lorentz3::jsonio::{JsonScalar, contains_float, mat3_to_json};
use lorentz3::kernel::{Fl, Rat};
use lorentz3::liealg::{Family, FamilyParams, MetricLieAlgebra, build};
use lorentz3::segre::{SegreData, classify};
use lorentz3::sweep::{SweepConfig, region_summary, run_sweep};
use lorentz3::symspace::{SymmetricSpaceSpec, symmetric_operator};
use serde_json::{Value, json};

/// Result codes of every `lz3_*` call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Lz3Status {
    /// Success.
    Ok = 0,
    /// The query ran but the data is not admissible.
    NotAdmissible = 1,
    /// Malformed input (details via `lz3_last_error_message`).
    InvalidInput = 2,
    /// A sweep raised a discrepancy flag.
    Discrepancy = 3,
    /// A search exhausted its budget without a witness.
    Inconclusive = 4,
    /// A required pointer argument was null.
    NullPointer = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let cleaned = msg.replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(cleaned).expect("nul-free");
    });
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing `lz3_*` call on the same thread.
#[unsafe(no_mangle)]
pub extern "C" fn lz3_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// ABI version of this header/library pair.
#[unsafe(no_mangle)]
pub extern "C" fn lz3_abi_version() -> u32 {
    1
}

fn out_string(out: *mut *mut c_char, v: &Value) -> Lz3Status {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    let c = CString::new(text).expect("JSON has no interior nul");
    unsafe {
        *out = c.into_raw();
    }
    Lz3Status::Ok
}

/// Release a string returned by this library.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn lz3_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe {
            drop(CString::from_raw(s));
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, Lz3Status> {
    if ptr.is_null() {
        set_error("null pointer argument");
        return Err(Lz3Status::NullPointer);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        Lz3Status::InvalidInput
    })
}

fn parse_json(text: &str) -> Result<Value, Lz3Status> {
    serde_json::from_str(text).map_err(|e| {
        set_error(&format!("invalid JSON: {e}"));
        Lz3Status::InvalidInput
    })
}

// ---------------------------------------------------------------------------
// Opaque handles
// ---------------------------------------------------------------------------

enum AlgebraInner {
    Exact(MetricLieAlgebra<Rat>),
    Approx(MetricLieAlgebra<Fl>),
}

/// Opaque handle to a metric Lie algebra.
pub struct Lz3Algebra {
    inner: AlgebraInner,
}

enum OperatorInner {
    Exact(CurvatureOperator<Rat>),
    Approx(CurvatureOperator<Fl>),
}

/// Opaque handle to a computed curvature operator.
pub struct Lz3Operator {
    inner: OperatorInner,
}

fn operator_json<S: JsonScalar>(op: &CurvatureOperator<S>) -> Value {
    json!({
        "K": mat3_to_json(&op.k),
        "gram2": mat3_to_json(&op.gram2),
        "basis": LAMBDA2_BASIS_LABELS,
    })
}

/// Parse a metric Lie algebra from its JSON form (`family` + `params`, or
/// `family = "free"` with explicit brackets and gram matrix).
#[unsafe(no_mangle)]
pub unsafe extern "C" fn lz3_algebra_from_json(
    algebra_json: *const c_char,
    out: *mut *mut Lz3Algebra,
) -> Lz3Status {
    if out.is_null() {
        set_error("null out-parameter");
        return Lz3Status::NullPointer;
    }
    let text = match unsafe { read_str(algebra_json) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    let v = match parse_json(text) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let inner = if contains_float(&v) {
        MetricLieAlgebra::<Fl>::from_json(&v).map(AlgebraInner::Approx)
    } else {
        MetricLieAlgebra::<Rat>::from_json(&v).map(AlgebraInner::Exact)
    };
    match inner {
        Ok(inner) => {
            unsafe {
                *out = Box::into_raw(Box::new(Lz3Algebra { inner }));
            }
            Lz3Status::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            Lz3Status::InvalidInput
        }
    }
}

/// Build a catalog algebra from a family tag ("A1".."A4", "NA", "NB",
/// "NC1", "NC2") and comma-separated parameters (rationals like "1/2", or
/// decimals to select the floating backend).
#[unsafe(no_mangle)]
pub unsafe extern "C" fn lz3_algebra_family(
    family: *const c_char,
    params_csv: *const c_char,
    out: *mut *mut Lz3Algebra,
) -> Lz3Status {
    if out.is_null() {
        set_error("null out-parameter");
        return Lz3Status::NullPointer;
    }
    let name = match unsafe { read_str(family) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    let raw = match unsafe { read_str(params_csv) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    let Some(fam) = Family::parse(name) else {
        set_error(&format!("unknown family `{name}`"));
        return Lz3Status::InvalidInput;
    };
    let tokens: Vec<&str> = raw.split(',').map(str::trim).collect();
    let approx = tokens
        .iter()
        .any(|t| t.contains('.') || t.contains('e') || t.contains('E'));
    let built = if approx {
        let vals: Option<Vec<Fl>> = tokens
            .iter()
            .map(|t| t.parse::<f64>().ok().map(Fl::new))
            .collect();
        vals.ok_or_else(|| "params: expected numbers".to_string())
            .and_then(|vals| FamilyParams::from_values(fam, &vals).map_err(|e| e.to_string()))
            .and_then(|p| build(p).map_err(|e| e.to_string()))
            .map(AlgebraInner::Approx)
    } else {
        let vals: Option<Vec<Rat>> = tokens.iter().map(|t| Rat::parse(t)).collect();
        vals.ok_or_else(|| "params: expected rationals".to_string())
            .and_then(|vals| FamilyParams::from_values(fam, &vals).map_err(|e| e.to_string()))
            .and_then(|p| build(p).map_err(|e| e.to_string()))
            .map(AlgebraInner::Exact)
    };
    match built {
        Ok(inner) => {
            unsafe {
                *out = Box::into_raw(Box::new(Lz3Algebra { inner }));
            }
            Lz3Status::Ok
        }
        Err(e) => {
            set_error(&e);
            Lz3Status::InvalidInput
        }
    }
}

/// JSON form of the algebra behind a handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn lz3_algebra_to_json(
    alg: *const Lz3Algebra,
    out_json: *mut *mut c_char,
) -> Lz3Status {
    if alg.is_null() || out_json.is_null() {
        set_error("null pointer argument");
        return Lz3Status::NullPointer;
    }
    let alg = unsafe { &*alg };
    let v = match &alg.inner {
        AlgebraInner::Exact(a) => a.to_json(),
        AlgebraInner::Approx(a) => a.to_json(),
    };
    out_string(out_json, &v)
}

#[unsafe(no_mangle)]
pub unsafe extern "C" fn lz3_algebra_free(alg: *mut Lz3Algebra) {
    if !alg.is_null() {
        unsafe {
            drop(Box::from_raw(alg));
        }
    }
}

/// Compute the curvature operator of an algebra handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn lz3_operator_compute(
    alg: *const Lz3Algebra,
    out: *mut *mut Lz3Operator,
) -> Lz3Status {
    if alg.is_null() || out.is_null() {
        set_error("null pointer argument");
        return Lz3Status::NullPointer;
    }
    let alg = unsafe { &*alg };
    let inner = match &alg.inner {
        AlgebraInner::Exact(a) => operator_of(a)
            .map(OperatorInner::Exact)
            .map_err(|e| e.to_string()),
        AlgebraInner::Approx(a) => operator_of(a)
            .map(OperatorInner::Approx)
            .map_err(|e| e.to_string()),
    };
    match inner {
        Ok(inner) => {
            unsafe {
                *out = Box::into_raw(Box::new(Lz3Operator { inner }));
            }
            Lz3Status::Ok
        }
        Err(e) => {
            set_error(&e);
            Lz3Status::InvalidInput
        }
    }
}

/// Operator matrix, bivector gram and basis labels as JSON.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn lz3_operator_to_json(
    op: *const Lz3Operator,
    out_json: *mut *mut c_char,
) -> Lz3Status {
    if op.is_null() || out_json.is_null() {
        set_error("null pointer argument");
        return Lz3Status::NullPointer;
    }
    let op = unsafe { &*op };
    let v = match &op.inner {
        OperatorInner::Exact(o) => operator_json(o),
        OperatorInner::Approx(o) => operator_json(o),
    };
    out_string(out_json, &v)
}

/// Segre classification of the operator behind a handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn lz3_operator_segre_json(
    op: *const Lz3Operator,
    out_json: *mut *mut c_char,
) -> Lz3Status {
    if op.is_null() || out_json.is_null() {
        set_error("null pointer argument");
        return Lz3Status::NullPointer;
    }
    let op = unsafe { &*op };
    let v = match &op.inner {
        OperatorInner::Exact(o) => classify(&o.k).to_json(),
        OperatorInner::Approx(o) => classify(&o.k).to_json(),
    };
    out_string(out_json, &v)
}

#[unsafe(no_mangle)]
pub unsafe extern "C" fn lz3_operator_free(op: *mut Lz3Operator) {
    if !op.is_null() {
        unsafe {
            drop(Box::from_raw(op));
        }
    }
}

// ---------------------------------------------------------------------------
// One-shot helpers
// ---------------------------------------------------------------------------

/// Operator and Segre data of a locally symmetric catalog entry.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn lz3_symmetric_operator_json(
    spec_json: *const c_char,
    out_json: *mut *mut c_char,
) -> Lz3Status {
    if out_json.is_null() {
        set_error("null out-parameter");
        return Lz3Status::NullPointer;
    }
    let text = match unsafe { read_str(spec_json) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    let v = match parse_json(text) {
        Ok(v) => v,
        Err(s) => return s,
    };
    fn go<S: JsonScalar>(v: &Value) -> Result<Value, String> {
        let spec = SymmetricSpaceSpec::<S>::from_json(v).map_err(|e| e.to_string())?;
        let op = symmetric_operator(&spec);
        Ok(json!({
            "spec": spec.to_json(),
            "operator": operator_json(&op),
            "segre": classify(&op.k).to_json(),
        }))
    }
    let result = if contains_float(&v) {
        go::<Fl>(&v)
    } else {
        go::<Rat>(&v)
    };
    match result {
        Ok(v) => out_string(out_json, &v),
        Err(e) => {
            set_error(&e);
            Lz3Status::InvalidInput
        }
    }
}

/// Admissibility verdict for prescribed Segre data. Returns
/// `LZ3_NOT_ADMISSIBLE` (with the verdict still written) when no condition
/// matches.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn lz3_admissible_json(
    segre_json: *const c_char,
    out_verdict_json: *mut *mut c_char,
) -> Lz3Status {
    if out_verdict_json.is_null() {
        set_error("null out-parameter");
        return Lz3Status::NullPointer;
    }
    let text = match unsafe { read_str(segre_json) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    let v = match parse_json(text) {
        Ok(v) => v,
        Err(s) => return s,
    };
    fn go<S: JsonScalar>(v: &Value) -> Result<(Value, bool), String> {
        let d = SegreData::<S>::from_json(v).map_err(|e| e.to_string())?;
        let verdict = admissible(&d);
        Ok((verdict.to_json(), verdict.admissible))
    }
    let result = if contains_float(&v) {
        go::<Fl>(&v)
    } else {
        go::<Rat>(&v)
    };
    match result {
        Ok((v, ok)) => {
            let status = out_string(out_verdict_json, &v);
            if status != Lz3Status::Ok {
                return status;
            }
            if ok {
                Lz3Status::Ok
            } else {
                Lz3Status::NotAdmissible
            }
        }
        Err(e) => {
            set_error(&e);
            Lz3Status::InvalidInput
        }
    }
}

/// Search for a realizing catalog entry for admissible Segre data.
/// `family` may be null (search every family in a type-suited order).
#[unsafe(no_mangle)]
pub unsafe extern "C" fn lz3_realize_json(
    segre_json: *const c_char,
    family: *const c_char,
    seed: u64,
    out_json: *mut *mut c_char,
) -> Lz3Status {
    if out_json.is_null() {
        set_error("null out-parameter");
        return Lz3Status::NullPointer;
    }
    let text = match unsafe { read_str(segre_json) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    let v = match parse_json(text) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let d = match SegreData::<Rat>::from_json(&v) {
        Ok(d) => d,
        Err(e) => {
            set_error(&e.to_string());
            return Lz3Status::InvalidInput;
        }
    };
    let fam = if family.is_null() {
        None
    } else {
        let name = match unsafe { read_str(family) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Family::parse(name) {
            Some(f) => Some(f),
            None => {
                set_error(&format!("unknown family `{name}`"));
                return Lz3Status::InvalidInput;
            }
        }
    };
    let opts = RealizeOptions {
        seed,
        ..RealizeOptions::default()
    };
    match realize(&d, fam, &opts) {
        Ok(res) => out_string(
            out_json,
            &json!({
                "admissible": true,
                "conditions": res.conditions,
                "witness": res.witness.to_json(),
                "residual": res.residual,
                "status": "realized",
            }),
        ),
        Err(ExistenceError::SearchFailed) => {
            let verdict = admissible(&d);
            let status = out_string(
                out_json,
                &json!({
                    "admissible": true,
                    "conditions": verdict.matched_conditions,
                    "witness": Value::Null,
                    "residual": Value::Null,
                    "status": "inconclusive",
                }),
            );
            if status != Lz3Status::Ok {
                return status;
            }
            Lz3Status::Inconclusive
        }
        Err(ExistenceError::Invalid(_)) => {
            let verdict = admissible(&d);
            let status = out_string(out_json, &verdict.to_json());
            if status != Lz3Status::Ok {
                return status;
            }
            Lz3Status::NotAdmissible
        }
        Err(e) => {
            set_error(&e.to_string());
            Lz3Status::InvalidInput
        }
    }
}

/// Run a sweep from a JSON config; the region summary is written to
/// `out_summary_json`. Returns `LZ3_DISCREPANCY` when any row was flagged.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn lz3_sweep_json(
    config_json: *const c_char,
    out_summary_json: *mut *mut c_char,
) -> Lz3Status {
    if out_summary_json.is_null() {
        set_error("null out-parameter");
        return Lz3Status::NullPointer;
    }
    let text = match unsafe { read_str(config_json) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    let v = match parse_json(text) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let cfg = match SweepConfig::from_json(&v) {
        Ok(c) => c,
        Err(e) => {
            set_error(&e.to_string());
            return Lz3Status::InvalidInput;
        }
    };
    match run_sweep(&cfg) {
        Ok(report) => {
            let status = out_string(out_summary_json, &region_summary(&report));
            if status != Lz3Status::Ok {
                return status;
            }
            if report.discrepancies() > 0 {
                Lz3Status::Discrepancy
            } else {
                Lz3Status::Ok
            }
        }
        Err(e) => {
            set_error(&e.to_string());
            Lz3Status::InvalidInput
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(ptr: *mut c_char) -> String {
        let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
        unsafe { lz3_string_free(ptr) };
        s
    }

    #[test]
    fn classify_round_trip_through_handles() {
        unsafe {
            let mut alg: *mut Lz3Algebra = ptr::null_mut();
            let st = lz3_algebra_family(cstr("A2").as_ptr(), cstr("2,0").as_ptr(), &mut alg);
            assert_eq!(st, Lz3Status::Ok);

            let mut op: *mut Lz3Operator = ptr::null_mut();
            assert_eq!(lz3_operator_compute(alg, &mut op), Lz3Status::Ok);

            let mut segre: *mut c_char = ptr::null_mut();
            assert_eq!(lz3_operator_segre_json(op, &mut segre), Lz3Status::Ok);
            let segre: Value = serde_json::from_str(&take_string(segre)).unwrap();
            assert_eq!(segre["type"], "{21}");
            assert_eq!(segre["eigenvalues"][0], "3");
            assert_eq!(segre["eigenvalues"][1], "-1");

            // Serialized algebra parses back through the JSON entry point.
            let mut alg_json: *mut c_char = ptr::null_mut();
            assert_eq!(lz3_algebra_to_json(alg, &mut alg_json), Lz3Status::Ok);
            let text = take_string(alg_json);
            let mut alg2: *mut Lz3Algebra = ptr::null_mut();
            assert_eq!(
                lz3_algebra_from_json(cstr(&text).as_ptr(), &mut alg2),
                Lz3Status::Ok
            );
            lz3_algebra_free(alg2);
            lz3_operator_free(op);
            lz3_algebra_free(alg);
        }
    }

    #[test]
    fn admissible_status_codes() {
        unsafe {
            let mut out: *mut c_char = ptr::null_mut();
            let st = lz3_admissible_json(
                cstr(r#"{"type":"{3}","eigenvalues":["-2"]}"#).as_ptr(),
                &mut out,
            );
            assert_eq!(st, Lz3Status::Ok);
            let v: Value = serde_json::from_str(&take_string(out)).unwrap();
            assert_eq!(v["conditions"][0], "T6.2");

            let mut out: *mut c_char = ptr::null_mut();
            let st = lz3_admissible_json(
                cstr(r#"{"type":"{3}","eigenvalues":["1"]}"#).as_ptr(),
                &mut out,
            );
            assert_eq!(st, Lz3Status::NotAdmissible);
            lz3_string_free(out);

            let st = lz3_admissible_json(cstr("{nope").as_ptr(), &mut out);
            assert_eq!(st, Lz3Status::InvalidInput);
            let msg = CStr::from_ptr(lz3_last_error_message()).to_str().unwrap();
            assert!(msg.contains("JSON"));
        }
    }

    #[test]
    fn realize_statuses() {
        unsafe {
            let mut out: *mut c_char = ptr::null_mut();
            let st = lz3_realize_json(
                cstr(r#"{"type":"{21}","eigenvalues":["3","-1"]}"#).as_ptr(),
                cstr("A2").as_ptr(),
                0,
                &mut out,
            );
            assert_eq!(st, Lz3Status::Ok);
            let v: Value = serde_json::from_str(&take_string(out)).unwrap();
            assert_eq!(v["status"], "realized");
            assert_eq!(v["witness"]["family"], "A2");

            let mut out: *mut c_char = ptr::null_mut();
            let st = lz3_realize_json(
                cstr(r#"{"type":"{111}","eigenvalues":["1","1","2"]}"#).as_ptr(),
                ptr::null(),
                0,
                &mut out,
            );
            assert_eq!(st, Lz3Status::NotAdmissible);
            lz3_string_free(out);
        }
    }

    #[test]
    fn symmetric_and_sweep() {
        unsafe {
            let mut out: *mut c_char = ptr::null_mut();
            let st = lz3_symmetric_operator_json(
                cstr(r#"{"kind":"plane_wave","epsilon":-1,"alpha":"1"}"#).as_ptr(),
                &mut out,
            );
            assert_eq!(st, Lz3Status::Ok);
            let v: Value = serde_json::from_str(&take_string(out)).unwrap();
            assert_eq!(v["operator"]["K"][0][2], "-1");

            let mut out: *mut c_char = ptr::null_mut();
            let st = lz3_sweep_json(
                cstr(r#"{"family":"A2","samples":25,"seed":4,"backend":"exact"}"#).as_ptr(),
                &mut out,
            );
            assert_eq!(st, Lz3Status::Ok);
            let v: Value = serde_json::from_str(&take_string(out)).unwrap();
            assert_eq!(v["discrepancies"], 0);
        }
    }

    #[test]
    fn null_pointer_discipline() {
        unsafe {
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                lz3_admissible_json(ptr::null(), &mut out),
                Lz3Status::NullPointer
            );
            let mut alg: *mut Lz3Algebra = ptr::null_mut();
            assert_eq!(
                lz3_algebra_family(ptr::null(), ptr::null(), &mut alg),
                Lz3Status::NullPointer
            );
            lz3_algebra_free(ptr::null_mut());
            lz3_operator_free(ptr::null_mut());
            lz3_string_free(ptr::null_mut());
        }
    }
}
