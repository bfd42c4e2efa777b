//! C interface to `mmgw-core`.
//!
//! Every function returns an [`MmgwStatus`]; results go through out-pointers.
//! On failure the out-pointers are left untouched and
//! [`mmgw_last_error_message`] describes the problem. Ellipse states are
//! `double[5]` in the order `m_x, m_y, alpha, l, w`; covariances are
//! `double[25]` in row-major order. Handles returned through `**out`
//! parameters are owned by the caller and released with the matching
//! `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mmgw_core::fusion::{fuse, FusionOptions, HeuristicCriterion};
use mmgw_core::harness::{serialize_report, ReportFormat};
use mmgw_core::rng::SampleSeeds;
use mmgw_core::{
    gw_approx, gw_exact, inverse_transform, jacobian, transform, EllipseState, Error, FusionInput, FusionResult,
    GaussianEstimate, Matrix5, Method, RunReport, ScenarioConfig, TransformedState, Vector5,
};

/// Outcome of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmgwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Domain = 3,
    Singular = 4,
    Numerical = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmgwMethod {
    Naive = 0,
    ShapeMean = 1,
    MmgwLin = 2,
    MmgwMc = 3,
    Heuristic = 4,
}

impl From<MmgwMethod> for Method {
    fn from(m: MmgwMethod) -> Self {
        match m {
            MmgwMethod::Naive => Method::Naive,
            MmgwMethod::ShapeMean => Method::ShapeMean,
            MmgwMethod::MmgwLin => Method::MmgwLin,
            MmgwMethod::MmgwMc => Method::MmgwMc,
            MmgwMethod::Heuristic => Method::Heuristic,
        }
    }
}

/// A fusion result.
pub struct MmgwFusion {
    inner: FusionResult,
}

/// An experiment definition.
pub struct MmgwScenario {
    inner: ScenarioConfig,
}

/// The outcome of an experiment.
pub struct MmgwReport {
    inner: RunReport,
}

struct Failure {
    status: MmgwStatus,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidInput(_) => MmgwStatus::InvalidInput,
            Error::Domain(_) => MmgwStatus::Domain,
            Error::Singular(_) => MmgwStatus::Singular,
            Error::Numerical(_) => MmgwStatus::Numerical,
        };
        Self { status, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { status: MmgwStatus::InvalidInput, message: message.into() }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MmgwStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            MmgwStatus::Ok
        }
        Ok(Err(f)) => {
            set_last_error(&f.message);
            f.status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {message}"));
            MmgwStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure { status: MmgwStatus::NullPointer, message: format!("`{what}` is null") }
}

unsafe fn read<const N: usize>(p: *const f64, what: &str) -> Result<[f64; N], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    let mut out = [0.0; N];
    ptr::copy_nonoverlapping(p, out.as_mut_ptr(), N);
    Ok(out)
}

unsafe fn write<const N: usize>(p: *mut f64, values: &[f64; N]) {
    ptr::copy_nonoverlapping(values.as_ptr(), p, N);
}

unsafe fn state(p: *const f64, what: &str) -> Result<EllipseState, Failure> {
    read::<5>(p, what).map(EllipseState::from_array)
}

unsafe fn covariance(p: *const f64, what: &str) -> Result<Matrix5, Failure> {
    read::<25>(p, what).map(|v| Matrix5::from_row_slice(&v))
}

fn row_major(m: &Matrix5) -> [f64; 25] {
    let mut out = [0.0; 25];
    for (i, v) in out.iter_mut().enumerate() {
        *v = m[(i / 5, i % 5)];
    }
    out
}

fn ensure_out<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(null(what))
    } else {
        Ok(())
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message describing the last failure on this thread, or an empty string
/// after a successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mmgw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mmgw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Square-root transform of an ellipse state: `m_x, m_y, s11, s12, s22`.
///
/// # Safety
/// `state_in` must point to 5 readable doubles and `out` to 5 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mmgw_transform(state_in: *const f64, out: *mut f64) -> MmgwStatus {
    guard(|| {
        let x = state(state_in, "state")?;
        ensure_out(out, "out")?;
        write(out, &transform(&x)?.to_vector().into());
        Ok(())
    })
}

/// Canonical ellipse state (`alpha` in `[0, π)`, `l ≥ w`) of a transformed state.
///
/// # Safety
/// `transformed` must point to 5 readable doubles and `out` to 5 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mmgw_inverse_transform(transformed: *const f64, out: *mut f64) -> MmgwStatus {
    guard(|| {
        let y = TransformedState::from_vector(&Vector5::from(read::<5>(transformed, "transformed")?));
        ensure_out(out, "out")?;
        write(out, &inverse_transform(&y)?.to_array());
        Ok(())
    })
}

/// Jacobian of the transform, row-major.
///
/// # Safety
/// `state_in` must point to 5 readable doubles and `out` to 25 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mmgw_jacobian(state_in: *const f64, out: *mut f64) -> MmgwStatus {
    guard(|| {
        let x = state(state_in, "state")?;
        ensure_out(out, "out")?;
        write(out, &row_major(&jacobian(&x)?));
        Ok(())
    })
}

/// Exact squared Gaussian Wasserstein distance.
///
/// # Safety
/// `a` and `b` must point to 5 readable doubles each; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mmgw_gw_exact(a: *const f64, b: *const f64, out: *mut f64) -> MmgwStatus {
    guard(|| {
        let (a, b) = (state(a, "a")?, state(b, "b")?);
        ensure_out(out, "out")?;
        *out = gw_exact(&a, &b)?.value();
        Ok(())
    })
}

/// Squared distance between the transforms of two ellipses.
///
/// # Safety
/// `a` and `b` must point to 5 readable doubles each; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mmgw_gw_approx(a: *const f64, b: *const f64, out: *mut f64) -> MmgwStatus {
    guard(|| {
        let (a, b) = (state(a, "a")?, state(b, "b")?);
        ensure_out(out, "out")?;
        *out = gw_approx(&a, &b)?.value();
        Ok(())
    })
}

/// Fuses two estimates. `samples` and `seed` are used by `MmgwMc` only;
/// `method` must be one of the `MmgwMethod` constants.
///
/// # Safety
/// `mean1`/`mean2` must point to 5 readable doubles, `cov1`/`cov2` to 25, and
/// `out` to a writable handle pointer. Free the result with [`mmgw_fusion_free`].
#[no_mangle]
pub unsafe extern "C" fn mmgw_fuse(
    mean1: *const f64,
    cov1: *const f64,
    mean2: *const f64,
    cov2: *const f64,
    method: MmgwMethod,
    samples: usize,
    seed: u64,
    out: *mut *mut MmgwFusion,
) -> MmgwStatus {
    guard(|| {
        let input = FusionInput::new(
            GaussianEstimate::new(state(mean1, "mean1")?, covariance(cov1, "cov1")?),
            GaussianEstimate::new(state(mean2, "mean2")?, covariance(cov2, "cov2")?),
        );
        ensure_out(out, "out")?;
        let options =
            FusionOptions { samples, seeds: SampleSeeds::from_seed(seed), criterion: HeuristicCriterion::Likelihood };
        let inner = fuse(&input, method.into(), &options)?;
        *out = Box::into_raw(Box::new(MmgwFusion { inner }));
        Ok(())
    })
}

/// Fused ellipse state in canonical form.
///
/// # Safety
/// `fusion` must be a live handle and `out` must point to 5 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mmgw_fusion_state(fusion: *const MmgwFusion, out: *mut f64) -> MmgwStatus {
    guard(|| {
        let f = handle(fusion, "fusion")?;
        ensure_out(out, "out")?;
        write(out, &f.inner.fused.to_array());
        Ok(())
    })
}

/// Fused transformed mean and covariance. Fails with `InvalidInput` for
/// methods that do not work in the transformed space.
///
/// # Safety
/// `fusion` must be a live handle; `mean` must point to 5 and `cov` to 25 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mmgw_fusion_transformed(
    fusion: *const MmgwFusion,
    mean: *mut f64,
    cov: *mut f64,
) -> MmgwStatus {
    guard(|| {
        let f = handle(fusion, "fusion")?;
        ensure_out(mean, "mean")?;
        ensure_out(cov, "cov")?;
        let t = f
            .inner
            .fused_transformed
            .as_ref()
            .ok_or_else(|| invalid(format!("{} has no transformed result", f.inner.method)))?;
        write(mean, &t.mean.to_vector().into());
        write(cov, &row_major(&t.cov));
        Ok(())
    })
}

/// Variant index chosen by the heuristic, or -1 for other methods.
///
/// # Safety
/// `fusion` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mmgw_fusion_k_opt(fusion: *const MmgwFusion, out: *mut i32) -> MmgwStatus {
    guard(|| {
        let f = handle(fusion, "fusion")?;
        ensure_out(out, "out")?;
        *out = f.inner.diagnostics.k_opt.map_or(-1, |k| k as i32);
        Ok(())
    })
}

/// # Safety
/// `fusion` must be null or a handle from [`mmgw_fuse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mmgw_fusion_free(fusion: *mut MmgwFusion) {
    if !fusion.is_null() {
        drop(Box::from_raw(fusion));
    }
}

/// The built-in two-sensor scenario. Never fails.
#[no_mangle]
pub extern "C" fn mmgw_scenario_paper() -> *mut MmgwScenario {
    Box::into_raw(Box::new(MmgwScenario { inner: ScenarioConfig::paper() }))
}

/// Parses a scenario from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable handle pointer.
#[no_mangle]
pub unsafe extern "C" fn mmgw_scenario_from_json(json: *const c_char, out: *mut *mut MmgwScenario) -> MmgwStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        ensure_out(out, "out")?;
        let text = CStr::from_ptr(json).to_str().map_err(|e| invalid(format!("json is not UTF-8: {e}")))?;
        let inner: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| invalid(format!("invalid scenario: {e}")))?;
        inner.validate()?;
        *out = Box::into_raw(Box::new(MmgwScenario { inner }));
        Ok(())
    })
}

/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mmgw_scenario_set_seed(scenario: *mut MmgwScenario, seed: u64) -> MmgwStatus {
    guard(|| {
        scenario.as_mut().ok_or_else(|| null("scenario"))?.inner.seed = seed;
        Ok(())
    })
}

/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mmgw_scenario_set_runs(scenario: *mut MmgwScenario, runs: usize) -> MmgwStatus {
    guard(|| {
        scenario.as_mut().ok_or_else(|| null("scenario"))?.inner.runs = runs;
        Ok(())
    })
}

/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mmgw_scenario_set_samples(scenario: *mut MmgwScenario, samples: usize) -> MmgwStatus {
    guard(|| {
        scenario.as_mut().ok_or_else(|| null("scenario"))?.inner.mc_samples = samples;
        Ok(())
    })
}

/// # Safety
/// `scenario` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mmgw_scenario_free(scenario: *mut MmgwScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Runs the experiment. Configuration errors fail with `InvalidInput`.
///
/// # Safety
/// `scenario` must be a live handle and `out` a writable handle pointer.
/// Free the result with [`mmgw_report_free`].
#[no_mangle]
pub unsafe extern "C" fn mmgw_run_experiment(scenario: *const MmgwScenario, out: *mut *mut MmgwReport) -> MmgwStatus {
    guard(|| {
        let s = handle(scenario, "scenario")?;
        ensure_out(out, "out")?;
        let inner = mmgw_core::run_experiment(&s.inner)?;
        *out = Box::into_raw(Box::new(MmgwReport { inner }));
        Ok(())
    })
}

/// Aggregate error of one method. `Numerical` if the method failed on every
/// run, `InvalidInput` if it was not part of the experiment.
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mmgw_report_rmgw(report: *const MmgwReport, method: MmgwMethod, out: *mut f64) -> MmgwStatus {
    guard(|| {
        let r = handle(report, "report")?;
        ensure_out(out, "out")?;
        let method = Method::from(method);
        let m = r.inner.methods.get(&method).ok_or_else(|| invalid(format!("{method} was not run")))?;
        *out = m.rmgw.ok_or_else(|| Failure {
            status: MmgwStatus::Numerical,
            message: format!("{method} failed on every run"),
        })?;
        Ok(())
    })
}

/// Number of runs on which a method failed.
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mmgw_report_failed_runs(
    report: *const MmgwReport,
    method: MmgwMethod,
    out: *mut usize,
) -> MmgwStatus {
    guard(|| {
        let r = handle(report, "report")?;
        ensure_out(out, "out")?;
        let method = Method::from(method);
        *out = r.inner.methods.get(&method).ok_or_else(|| invalid(format!("{method} was not run")))?.failed_runs.len();
        Ok(())
    })
}

/// The full report as JSON. Free the string with [`mmgw_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` a writable string pointer.
#[no_mangle]
pub unsafe extern "C" fn mmgw_report_to_json(report: *const MmgwReport, out: *mut *mut c_char) -> MmgwStatus {
    guard(|| {
        let r = handle(report, "report")?;
        ensure_out(out, "out")?;
        let mut buf = Vec::new();
        serialize_report(&r.inner, ReportFormat::Json, &mut buf).map_err(|e| invalid(e.to_string()))?;
        *out = CString::new(buf).map_err(|e| invalid(e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mmgw_report_free(report: *mut MmgwReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mmgw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
