//! C ABI over `ptdephase`.
//!
//! Every fallible function returns a [`PtdStatus`]; on failure a message is
//! available from [`ptd_last_error_message`] on the same thread. Handles are
//! created by `*_new` functions and released with the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use ptdephase::decoherence::{self, Mode};
use ptdephase::fock::{self, ResidualReport};
use ptdephase::{
    EnvConfig, EnvParams, Error, QuadratureConfig, QuadratureResult, QubitState, SystemConfig,
    Temperature, ZetaForm,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    PtBroken = 3,
    Dimension = 4,
    NonConvergence = 5,
    NonFinite = 6,
    SingularSimilarity = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtdZetaForm {
    Quadratic = 0,
    Quartic = 1,
    Sextic = 2,
}

impl From<PtdZetaForm> for ZetaForm {
    fn from(f: PtdZetaForm) -> Self {
        match f {
            PtdZetaForm::Quadratic => ZetaForm::Quadratic,
            PtdZetaForm::Quartic => ZetaForm::Quartic,
            PtdZetaForm::Sextic => ZetaForm::Sextic,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtdComplex {
    pub re: f64,
    pub im: f64,
}

impl From<PtdComplex> for Complex64 {
    fn from(c: PtdComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl From<Complex64> for PtdComplex {
    fn from(c: Complex64) -> Self {
        PtdComplex { re: c.re, im: c.im }
    }
}

/// Bath temperature; `zero` selects T = 0 and ignores `value`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtdTemperature {
    pub value: f64,
    pub zero: bool,
}

impl From<PtdTemperature> for Temperature {
    fn from(t: PtdTemperature) -> Self {
        if t.zero {
            Temperature::Zero
        } else {
            Temperature::Finite(t.value)
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtdEnvParams {
    pub tau: f64,
    pub zeta_form: PtdZetaForm,
    pub delta: f64,
    pub amp: f64,
    pub cutoff: f64,
    pub temperature: PtdTemperature,
    pub theta: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtdQuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub truncation_factor: f64,
}

impl From<PtdQuadConfig> for QuadratureConfig {
    fn from(c: PtdQuadConfig) -> Self {
        QuadratureConfig {
            rel_tol: c.rel_tol,
            abs_tol: c.abs_tol,
            max_subdivisions: c.max_subdivisions,
            truncation_factor: c.truncation_factor,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PtdQuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

impl From<QuadratureResult> for PtdQuadResult {
    fn from(r: QuadratureResult) -> Self {
        PtdQuadResult {
            value: r.value,
            abs_error_estimate: r.abs_error_estimate,
            evaluations: r.evaluations,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PtdResidualReport {
    pub dim: usize,
    pub tau: f64,
    pub zeta: f64,
    pub delta: f64,
    pub block_size: usize,
    pub residual: f64,
}

impl From<ResidualReport> for PtdResidualReport {
    fn from(r: ResidualReport) -> Self {
        PtdResidualReport {
            dim: r.dim,
            tau: r.tau,
            zeta: r.zeta,
            delta: r.delta,
            block_size: r.block_size,
            residual: r.residual,
        }
    }
}

/// Qubit density matrix `[[rho00, rho01], [conj(rho01), rho11]]`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtdQubitState {
    pub rho00: f64,
    pub rho01: PtdComplex,
    pub rho11: f64,
}

impl From<QubitState> for PtdQubitState {
    fn from(s: QubitState) -> Self {
        PtdQubitState {
            rho00: s.rho00(),
            rho01: s.rho01().into(),
            rho11: s.rho11(),
        }
    }
}

/// Opaque qubit configuration.
pub struct PtdSystem {
    inner: SystemConfig,
}

/// Opaque bath configuration.
pub struct PtdEnv {
    inner: EnvConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

struct Failure(PtdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::PtBroken { .. } => PtdStatus::PtBroken,
            Error::Domain { .. } => PtdStatus::InvalidArgument,
            Error::Dimension { .. } => PtdStatus::Dimension,
            Error::SingularSimilarity { .. } => PtdStatus::SingularSimilarity,
            Error::NonConvergence { .. } => PtdStatus::NonConvergence,
            Error::NonFinite { .. } => PtdStatus::NonFinite,
        };
        Failure(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(PtdStatus::NullPointer, format!("{name} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PtdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            PtdStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            PtdStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or point to a valid `T`.
unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

/// # Safety
/// `p` must be null or point to writable memory for a `T`.
unsafe fn write<T>(p: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    p.write(value);
    Ok(())
}

/// # Safety
/// `out` must be null or writable.
unsafe fn write_handle<T>(out: *mut *mut T, handle: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(handle)));
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ptd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn ptd_quad_config_default() -> PtdQuadConfig {
    let c = QuadratureConfig::default();
    PtdQuadConfig {
        rel_tol: c.rel_tol,
        abs_tol: c.abs_tol,
        max_subdivisions: c.max_subdivisions,
        truncation_factor: c.truncation_factor,
    }
}

/// 𝒜 = 1, Ω = 0.1, T = 300, δ = 1, θ = π/2, τ = 0, quadratic ζ.
#[no_mangle]
pub extern "C" fn ptd_env_params_default() -> PtdEnvParams {
    let p = EnvParams::default();
    PtdEnvParams {
        tau: p.tau,
        zeta_form: PtdZetaForm::Quadratic,
        delta: p.delta,
        amp: p.amp,
        cutoff: p.cutoff,
        temperature: match p.temperature {
            Temperature::Finite(value) => PtdTemperature { value, zero: false },
            Temperature::Zero => PtdTemperature {
                value: 0.0,
                zero: true,
            },
        },
        theta: p.theta,
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ptd_system_new(alpha_s: f64, out: *mut *mut PtdSystem) -> PtdStatus {
    guard(|| {
        write_handle(
            out,
            PtdSystem {
                inner: SystemConfig::new(alpha_s)?,
            },
        )
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ptd_system_from_e1(e1: f64, out: *mut *mut PtdSystem) -> PtdStatus {
    guard(|| {
        write_handle(
            out,
            PtdSystem {
                inner: SystemConfig::from_e1(e1)?,
            },
        )
    })
}

/// `E₁`, or NaN for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptd_system_e1(sys: *const PtdSystem) -> f64 {
    sys.as_ref().map_or(f64::NAN, |s| s.inner.e1())
}

/// # Safety
/// `sys` must be null or a handle from `ptd_system_new`, not freed before.
#[no_mangle]
pub unsafe extern "C" fn ptd_system_free(sys: *mut PtdSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// # Safety
/// `params` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ptd_env_new(
    params: *const PtdEnvParams,
    out: *mut *mut PtdEnv,
) -> PtdStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let inner = EnvConfig::new(EnvParams {
            tau: p.tau,
            zeta_form: p.zeta_form.into(),
            delta: p.delta,
            amp: p.amp,
            cutoff: p.cutoff,
            temperature: p.temperature.into(),
            theta: p.theta,
        })?;
        write_handle(out, PtdEnv { inner })
    })
}

/// ζ(τ), or NaN for a null handle.
///
/// # Safety
/// `env` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptd_env_zeta(env: *const PtdEnv) -> f64 {
    env.as_ref().map_or(f64::NAN, |e| e.inner.zeta())
}

/// # Safety
/// `env` must be null or a handle from `ptd_env_new`, not freed before.
#[no_mangle]
pub unsafe extern "C" fn ptd_env_free(env: *mut PtdEnv) {
    if !env.is_null() {
        drop(Box::from_raw(env));
    }
}

unsafe fn quad_config(cfg: *const PtdQuadConfig) -> QuadratureConfig {
    cfg.as_ref()
        .map_or_else(QuadratureConfig::default, |c| (*c).into())
}

/// Continuum Λ(t). A null `cfg` selects the defaults.
///
/// # Safety
/// Handles must be live, `cfg` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ptd_lambda_continuum(
    t: f64,
    sys: *const PtdSystem,
    env: *const PtdEnv,
    cfg: *const PtdQuadConfig,
    out: *mut PtdQuadResult,
) -> PtdStatus {
    guard(|| {
        let sys = deref(sys, "sys")?;
        let env = deref(env, "env")?;
        let r = decoherence::lambda_continuum(t, &sys.inner, &env.inner, &quad_config(cfg))?;
        write(out, r.into(), "out")
    })
}

/// Hermitian reference λ(t).
///
/// # Safety
/// `cfg` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ptd_lambda_hermitian(
    t: f64,
    amp: f64,
    cutoff: f64,
    temperature: PtdTemperature,
    cfg: *const PtdQuadConfig,
    out: *mut PtdQuadResult,
) -> PtdStatus {
    guard(|| {
        let r =
            decoherence::lambda_hermitian(t, amp, cutoff, temperature.into(), &quad_config(cfg))?;
        write(out, r.into(), "out")
    })
}

/// Λ on `n` times. `error_out` may be null.
///
/// # Safety
/// `times` readable and `lambda_out` writable for `n` values; `error_out`
/// null or writable for `n` values.
#[no_mangle]
pub unsafe extern "C" fn ptd_lambda_series(
    times: *const f64,
    n: usize,
    sys: *const PtdSystem,
    env: *const PtdEnv,
    cfg: *const PtdQuadConfig,
    lambda_out: *mut f64,
    error_out: *mut f64,
) -> PtdStatus {
    guard(|| {
        let sys = deref(sys, "sys")?;
        let env = deref(env, "env")?;
        if n == 0 {
            return Ok(());
        }
        if times.is_null() {
            return Err(null("times"));
        }
        if lambda_out.is_null() {
            return Err(null("lambda_out"));
        }
        let times = std::slice::from_raw_parts(times, n);
        let series = decoherence::lambda_series(times, &sys.inner, &env.inner, &quad_config(cfg))?;
        ptr::copy_nonoverlapping(series.lambda.as_ptr(), lambda_out, n);
        if !error_out.is_null() {
            ptr::copy_nonoverlapping(series.error_estimates.as_ptr(), error_out, n);
        }
        Ok(())
    })
}

/// Λ(t) for explicit modes `(omegas[i], couplings[i])`.
///
/// # Safety
/// `omegas` and `couplings` readable for `n` values, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ptd_lambda_discrete(
    t: f64,
    omegas: *const f64,
    couplings: *const PtdComplex,
    n: usize,
    e1: f64,
    zeta: f64,
    delta: f64,
    temperature: PtdTemperature,
    out: *mut f64,
) -> PtdStatus {
    guard(|| {
        let modes = if n == 0 {
            Vec::new()
        } else {
            if omegas.is_null() {
                return Err(null("omegas"));
            }
            if couplings.is_null() {
                return Err(null("couplings"));
            }
            let omegas = std::slice::from_raw_parts(omegas, n);
            let couplings = std::slice::from_raw_parts(couplings, n);
            omegas
                .iter()
                .zip(couplings)
                .map(|(&w, &c)| Mode::new(w, c.into()))
                .collect::<ptdephase::Result<Vec<_>>>()?
        };
        let v = decoherence::lambda_discrete(t, &modes, e1, zeta, delta, temperature.into())?;
        write(out, v, "out")
    })
}

/// Discrete Λ(t) from `n_modes` midpoint samples of the bath's spectral
/// density on `[0, omega_max]`.
///
/// # Safety
/// Handles must be live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ptd_lambda_discretized(
    t: f64,
    sys: *const PtdSystem,
    env: *const PtdEnv,
    n_modes: usize,
    omega_max: f64,
    out: *mut f64,
) -> PtdStatus {
    guard(|| {
        let sys = deref(sys, "sys")?;
        let env = &deref(env, "env")?.inner;
        let modes = decoherence::discretize_spectral_density(
            env.amp(),
            env.cutoff(),
            env.theta(),
            n_modes,
            omega_max,
        )?;
        let v = decoherence::lambda_discrete(
            t,
            &modes,
            sys.inner.e1(),
            env.zeta(),
            env.delta(),
            env.temperature(),
        )?;
        write(out, v, "out")
    })
}

/// Bath similarity residual in a Fock space of size `dim`.
///
/// # Safety
/// `env` must be live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ptd_similarity_residual(
    dim: usize,
    env: *const PtdEnv,
    m: f64,
    k: f64,
    out: *mut PtdResidualReport,
) -> PtdStatus {
    guard(|| {
        let env = deref(env, "env")?;
        let r = fock::similarity_residual(dim, &env.inner, m, k)?;
        write(out, r.into(), "out")
    })
}

/// Composite (qubit ⊗ single bath mode) similarity residual.
///
/// # Safety
/// Handles must be live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ptd_composite_residual(
    dim: usize,
    sys: *const PtdSystem,
    env: *const PtdEnv,
    coupling: PtdComplex,
    m: f64,
    k: f64,
    out: *mut PtdResidualReport,
) -> PtdStatus {
    guard(|| {
        let sys = deref(sys, "sys")?;
        let env = deref(env, "env")?;
        let r = fock::composite_residual(dim, &sys.inner, &env.inner, &[coupling.into()], m, k)?;
        write(out, r.into(), "out")
    })
}

unsafe fn qubit_state(rho: *const PtdQubitState) -> Result<QubitState, Failure> {
    let r = deref(rho, "rho")?;
    Ok(QubitState::from_parts(r.rho00, r.rho01.into(), r.rho11)?)
}

/// `rho01 → rho01·exp(−lambda)`.
///
/// # Safety
/// `rho` readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ptd_evolve_qubit(
    rho: *const PtdQubitState,
    lambda: f64,
    out: *mut PtdQubitState,
) -> PtdStatus {
    guard(|| {
        let s = decoherence::evolve_qubit(&qubit_state(rho)?, lambda)?;
        write(out, s.into(), "out")
    })
}

/// Phase-damping channel with flip probability `p`.
///
/// # Safety
/// `rho` readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ptd_dephasing_channel(
    rho: *const PtdQubitState,
    p: f64,
    out: *mut PtdQubitState,
) -> PtdStatus {
    guard(|| {
        let s = decoherence::dephasing_channel(&qubit_state(rho)?, p)?;
        write(out, s.into(), "out")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    fn last_error() -> String {
        unsafe { CStr::from_ptr(ptd_last_error_message()) }
            .to_string_lossy()
            .into_owned()
    }

    #[test]
    fn system_lifecycle_and_errors() {
        let mut sys = ptr::null_mut();
        assert_eq!(unsafe { ptd_system_new(0.6, &mut sys) }, PtdStatus::Ok);
        assert!((unsafe { ptd_system_e1(sys) } - 0.8).abs() < 1e-15);
        unsafe { ptd_system_free(sys) };

        let mut bad = ptr::null_mut();
        assert_eq!(
            unsafe { ptd_system_new(1.5, &mut bad) },
            PtdStatus::PtBroken
        );
        assert!(bad.is_null());
        assert!(last_error().contains("alpha_s"));
        assert_eq!(
            unsafe { ptd_system_new(0.0, ptr::null_mut()) },
            PtdStatus::NullPointer
        );
        assert!(unsafe { ptd_system_e1(ptr::null()) }.is_nan());
        unsafe { ptd_system_free(ptr::null_mut()) };
    }

    #[test]
    fn env_validation() {
        let mut params = ptd_env_params_default();
        params.cutoff = -1.0;
        let mut env = ptr::null_mut();
        assert_eq!(
            unsafe { ptd_env_new(&params, &mut env) },
            PtdStatus::InvalidArgument
        );
        assert!(last_error().contains("cutoff"));
        assert_eq!(
            unsafe { ptd_env_new(ptr::null(), &mut env) },
            PtdStatus::NullPointer
        );
    }

    #[test]
    fn quad_default_matches_core() {
        let c: QuadratureConfig = ptd_quad_config_default().into();
        assert_eq!(c, QuadratureConfig::default());
    }
}
