//! Decoherence factor Λ(t) of the qubit in the Hermitian-counterpart picture.
//!
//! Each bath mode contributes through its displacement amplitude `μ_i(t)`.
//! The qubit couples through `σx`, so the two `σx` eigenstates see
//! displacements `±μ_i` and their coherence decays with the thermal average
//! of `D(2μ_i)`. In the continuum limit the couplings become the spectral
//! density `𝒥(ω) = 𝒜·ω·exp(−ω/Ω)` with a uniform phase θ.

mod channel;

pub use channel::{dephasing_channel, evolve_qubit, kraus_operators, QubitState};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::model::{EnvConfig, SystemConfig, Temperature};
use crate::quadrature::{integrate_cutoff, Envelope, QuadratureConfig, QuadratureResult};
use crate::special::sinc;

/// One discrete bath mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    omega: f64,
    coupling: Complex64,
}

impl Mode {
    pub fn new(omega: f64, coupling: Complex64) -> Result<Self> {
        require_positive("omega", omega)?;
        if !coupling.is_finite() {
            return Err(Error::domain("coupling", coupling.norm(), "must be finite"));
        }
        Ok(Mode { omega, coupling })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn coupling(&self) -> Complex64 {
        self.coupling
    }
}

/// Λ sampled on a time grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DecoherenceSeries {
    pub times: Vec<f64>,
    pub lambda: Vec<f64>,
    pub error_estimates: Vec<f64>,
}

impl DecoherenceSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, f64)> {
        Some((*self.times.last()?, *self.lambda.last()?))
    }

    /// Coherence `|ρ01(t)/ρ01(0)| = exp(−Λ(t))`.
    pub fn coherence(&self) -> Vec<f64> {
        self.lambda.iter().map(|l| (-l).exp()).collect()
    }
}

/// `Γ = sqrt(ζδ)·ω`.
pub fn gamma_of(omega: f64, zeta: f64, delta: f64) -> Result<f64> {
    require_positive("omega", omega)?;
    require_positive("zeta", zeta)?;
    require_positive("delta", delta)?;
    Ok((zeta * delta).sqrt() * omega)
}

/// Displacement amplitude `μ_i(t)` of a single mode.
pub fn mu(t: f64, mode: &Mode, e1: f64, zeta: f64, delta: f64) -> Result<Complex64> {
    require_non_negative("t", t)?;
    if !e1.is_finite() {
        return Err(Error::domain("e1", e1, "must be finite"));
    }
    let gamma = gamma_of(mode.omega, zeta, delta)?;
    let c = mode.coupling;
    let half_sin = (0.5 * gamma * t).sin();
    let bracket = c.conj() * (delta - zeta) - c * (zeta + delta);
    let first = bracket * (e1 * mode.omega / (gamma * gamma) * half_sin * half_sin);
    let second = Complex64::i() * c * (e1 / gamma * (gamma * t).sin());
    Ok(first - second)
}

/// Exponent of the thermal Wigner characteristic function,
/// `⟨D(μ)⟩ = exp(−|μ|²/2·coth(ω/2T))`.
pub fn wigner_exponent(mu: Complex64, omega: f64, temperature: Temperature) -> f64 {
    0.5 * mu.norm_sqr() * temperature.coth_half(omega)
}

/// Λ(t) for a finite set of modes: `Σ_i 2|μ_i(t)|²·coth(ω_i/2T)`, i.e. the
/// Wigner exponent of the relative displacement `2μ_i` summed over modes.
pub fn lambda_discrete(
    t: f64,
    modes: &[Mode],
    e1: f64,
    zeta: f64,
    delta: f64,
    temperature: Temperature,
) -> Result<f64> {
    if let Temperature::Finite(temp) = temperature {
        require_positive("temperature", temp)?;
    }
    modes.iter().try_fold(0.0, |acc, mode| {
        let m = mu(t, mode, e1, zeta, delta)?;
        Ok(acc + wigner_exponent(2.0 * m, mode.omega, temperature))
    })
}

/// θ-dependent coefficients of the continuum integrand, arranged so the
/// bracket is a sum of squares: `k1·(s + κ·r)² + ρ·r²`.
#[derive(Debug, Clone, Copy)]
struct BracketCoefficients {
    k1: f64,
    kappa: f64,
    rho: f64,
}

impl BracketCoefficients {
    fn new(zeta: f64, delta: f64, theta: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        let sin2 = sin * sin;
        // ζ²cos²θ + δ²sin²θ and ζcos²θ + δsin²θ, written so they are exact when ζ = δ
        let k1 = zeta * zeta + (delta * delta - zeta * zeta) * sin2;
        let mixed = zeta + (delta - zeta) * sin2;
        BracketCoefficients {
            k1,
            kappa: (delta - zeta) * cos * sin / k1,
            rho: mixed * mixed / k1,
        }
    }

    /// `M` with `bracket ≤ M/ω²` for every ω, t.
    fn large_omega_bound(&self, zeta_delta: f64) -> f64 {
        let s_max = 2.0 / zeta_delta;
        let r_max = 1.0 / zeta_delta.sqrt();
        let lead = s_max + self.kappa.abs() * r_max;
        self.k1 * lead * lead + self.rho * r_max * r_max
    }
}

/// Time-dependent bracket of the integrand divided by Γ⁴, as a function of
/// ω. With `x = Γt/2`, `s = (ωt²/2)·sinc²(x)` and `r = t·sinc(2x)`.
fn bracket(omega: f64, t: f64, gamma_scale: f64, coeffs: &BracketCoefficients) -> f64 {
    let x = 0.5 * gamma_scale * omega * t;
    let sx = sinc(x);
    let s = 0.5 * omega * t * t * sx * sx;
    let r = t * sinc(2.0 * x);
    let shifted = s + coeffs.kappa * r;
    coeffs.k1 * shifted * shifted + coeffs.rho * r * r
}

/// Integrand of the continuum Λ(t) at frequency ω:
///
/// `(2E₁²/Γ⁴)·𝒜ω·e^{−ω/Ω}·[(ζ²cos²θ + δ²sin²θ)·4ω²sin⁴(Γt/2) + Γ²sin²(Γt)
///  + 4Γω(δ−ζ)cosθ·sinθ·sin²(Γt/2)·sin(Γt)]·coth(ω/2T)`.
///
/// Evaluated through `sinc` and `x·coth(x)` so it is finite at ω = 0, where
/// it equals `4E₁²𝒜T·t²`.
pub fn lambda_integrand(omega: f64, t: f64, sys: &SystemConfig, env: &EnvConfig) -> f64 {
    let coeffs = BracketCoefficients::new(env.zeta(), env.delta(), env.theta());
    integrand_with(omega, t, sys.e1(), env, &coeffs)
}

fn integrand_with(
    omega: f64,
    t: f64,
    e1: f64,
    env: &EnvConfig,
    coeffs: &BracketCoefficients,
) -> f64 {
    let envelope = env.amp() * (-omega / env.cutoff()).exp();
    let thermal = env.temperature().omega_coth_half(omega);
    2.0 * e1 * e1 * envelope * thermal * bracket(omega, t, env.gamma_scale(), coeffs)
}

fn thermal_envelope(prefactor: f64, temperature: Temperature) -> Envelope {
    // ω·coth(ω/2T) ≤ ω + 2T
    let env = Envelope::default().with_term(-1, prefactor);
    match temperature {
        Temperature::Finite(temp) => env.with_term(-2, 2.0 * temp * prefactor),
        Temperature::Zero => env,
    }
}

fn oscillation_panel_cap(cutoff: f64, gamma_scale: f64, t: f64) -> f64 {
    let period_scale = if t > 0.0 {
        std::f64::consts::PI / (gamma_scale * t)
    } else {
        f64::INFINITY
    };
    cutoff.min(period_scale) / 4.0
}

/// Λ(t) from the continuum spectral density.
pub fn lambda_continuum(
    t: f64,
    sys: &SystemConfig,
    env: &EnvConfig,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    require_non_negative("t", t)?;
    let coeffs = BracketCoefficients::new(env.zeta(), env.delta(), env.theta());
    let e1 = sys.e1();
    let zeta_delta = env.zeta() * env.delta();
    let prefactor = 2.0 * e1 * e1 * env.amp() * coeffs.large_omega_bound(zeta_delta);
    let envelope = thermal_envelope(prefactor, env.temperature())
        .with_max_panel_width(oscillation_panel_cap(env.cutoff(), env.gamma_scale(), t));
    integrate_cutoff(
        |omega| integrand_with(omega, t, e1, env, &coeffs),
        env.cutoff(),
        &envelope,
        cfg,
    )
}

/// Integrand of the Hermitian reference λ(t):
/// `4𝒜·e^{−ω/Ω}·(1 − cos ωt)/ω·coth(ω/2T)`.
pub fn hermitian_integrand(
    omega: f64,
    t: f64,
    amp: f64,
    cutoff: f64,
    temperature: Temperature,
) -> f64 {
    // (1 − cos ωt)/ω² = (t²/2)·sinc²(ωt/2)
    let sx = sinc(0.5 * omega * t);
    let one_minus_cos_over_omega2 = 0.5 * t * t * sx * sx;
    4.0 * amp
        * (-omega / cutoff).exp()
        * one_minus_cos_over_omega2
        * temperature.omega_coth_half(omega)
}

/// λ(t) for the standard Hermitian spin-boson model (ζ = δ = E₁ = 1).
pub fn lambda_hermitian(
    t: f64,
    amp: f64,
    cutoff: f64,
    temperature: Temperature,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    require_non_negative("t", t)?;
    require_positive("amp", amp)?;
    require_positive("cutoff", cutoff)?;
    if let Temperature::Finite(temp) = temperature {
        require_positive("temperature", temp)?;
    }
    // 4𝒜(1 − cos ωt)/ω² ≤ 8𝒜/ω²
    let envelope = thermal_envelope(8.0 * amp, temperature)
        .with_max_panel_width(oscillation_panel_cap(cutoff, 1.0, t));
    integrate_cutoff(
        |omega| hermitian_integrand(omega, t, amp, cutoff, temperature),
        cutoff,
        &envelope,
        cfg,
    )
}

/// Midpoint discretisation of `𝒥(ω) = 𝒜ω·e^{−ω/Ω}` into modes with
/// `|c_i|² = 𝒥(ω_i)·Δω` and phase θ.
pub fn discretize_spectral_density(
    amp: f64,
    cutoff: f64,
    theta: f64,
    n_modes: usize,
    omega_max: f64,
) -> Result<Vec<Mode>> {
    require_positive("amp", amp)?;
    require_positive("cutoff", cutoff)?;
    require_positive("omega_max", omega_max)?;
    if !theta.is_finite() {
        return Err(Error::domain("theta", theta, "must be finite"));
    }
    if n_modes == 0 {
        return Err(Error::domain("n_modes", 0.0, "must be at least 1"));
    }
    let step = omega_max / n_modes as f64;
    (0..n_modes)
        .map(|i| {
            let omega = (i as f64 + 0.5) * step;
            let weight = amp * omega * (-omega / cutoff).exp() * step;
            Mode::new(omega, Complex64::from_polar(weight.sqrt(), theta))
        })
        .collect()
}

/// Λ on a time grid, evaluated in parallel; output order follows `times`.
pub fn lambda_series(
    times: &[f64],
    sys: &SystemConfig,
    env: &EnvConfig,
    cfg: &QuadratureConfig,
) -> Result<DecoherenceSeries> {
    let results: Vec<QuadratureResult> = times
        .par_iter()
        .map(|&t| lambda_continuum(t, sys, env, cfg))
        .collect::<Result<_>>()?;
    Ok(DecoherenceSeries {
        times: times.to_vec(),
        lambda: results.iter().map(|r| r.value).collect(),
        error_estimates: results.iter().map(|r| r.abs_error_estimate).collect(),
    })
}
