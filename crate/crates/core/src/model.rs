//! Parameter algebra for the PT-symmetric qubit and bath.
//!
//! The qubit Hamiltonian is `σx + i·alpha_s·σz` (γ = 1, α purely imaginary).
//! Its spectrum `±sqrt(1 − alpha_s²)` is real for `|alpha_s| ≤ 1`, and the
//! map `η_S = exp(ϑ σy)` with `ϑ = atanh(alpha_s)/2` takes it to `E₁·σx`.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{require_positive, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

impl Matrix2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Matrix2([[a, b], [c, d]])
    }

    pub const fn zero() -> Self {
        Matrix2::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Matrix2::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn pauli_x() -> Self {
        Matrix2::new(ZERO, ONE, ONE, ZERO)
    }

    pub fn pauli_y() -> Self {
        Matrix2::new(ZERO, -I, I, ZERO)
    }

    pub fn pauli_z() -> Self {
        Matrix2::new(ONE, ZERO, ZERO, -ONE)
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Matrix2::new(a, ZERO, ZERO, d)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Matrix2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Matrix2::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Inverse by the adjugate formula; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 || !det.is_finite() {
            return None;
        }
        let m = &self.0;
        let inv = det.inv();
        Some(Matrix2::new(
            m[1][1] * inv,
            -m[0][1] * inv,
            -m[1][0] * inv,
            m[0][0] * inv,
        ))
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Matrix2) -> f64 {
        (*self - *other).max_abs()
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, rhs: Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &rhs.0);
        Matrix2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, rhs: Matrix2) -> Matrix2 {
        self + rhs.scale(-ONE)
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &rhs.0);
        let e = |r: usize, c: usize| a[r][0] * b[0][c] + a[r][1] * b[1][c];
        Matrix2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

/// Qubit non-Hermiticity together with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    alpha_s: f64,
    e1: f64,
    vartheta: Option<f64>,
}

impl SystemConfig {
    pub fn new(alpha_s: f64) -> Result<Self> {
        let (e1, _) = system_eigenvalues(alpha_s)?;
        let vartheta = (alpha_s.abs() < 1.0).then(|| 0.5 * alpha_s.atanh());
        Ok(SystemConfig {
            alpha_s,
            e1,
            vartheta,
        })
    }

    /// Builds the configuration with the given positive eigenvalue, choosing
    /// `alpha_s = sqrt(1 − e1²) ≥ 0`.
    pub fn from_e1(e1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&e1) {
            return Err(Error::domain("e1", e1, "must lie in [0, 1]"));
        }
        let alpha_s = (1.0 - e1 * e1).max(0.0).sqrt();
        let vartheta = (alpha_s < 1.0).then(|| 0.5 * alpha_s.atanh());
        Ok(SystemConfig {
            alpha_s,
            e1,
            vartheta,
        })
    }

    pub fn hermitian() -> Self {
        SystemConfig {
            alpha_s: 0.0,
            e1: 1.0,
            vartheta: Some(0.0),
        }
    }

    pub fn alpha_s(&self) -> f64 {
        self.alpha_s
    }

    pub fn e1(&self) -> f64 {
        self.e1
    }

    /// `None` at the exceptional point, where ϑ diverges.
    pub fn vartheta(&self) -> Option<f64> {
        self.vartheta
    }

    pub fn is_exceptional_point(&self) -> bool {
        self.vartheta.is_none()
    }
}

/// `(E₁, E₂) = (+sqrt(1 − alpha_s²), −sqrt(1 − alpha_s²))`.
pub fn system_eigenvalues(alpha_s: f64) -> Result<(f64, f64)> {
    if !alpha_s.is_finite() || alpha_s.abs() > 1.0 {
        return Err(Error::PtBroken {
            alpha_s,
            requirement: "|alpha_s| <= 1",
        });
    }
    let e1 = ((1.0 - alpha_s) * (1.0 + alpha_s)).max(0.0).sqrt();
    Ok((e1, -e1))
}

/// Non-Hermitian qubit Hamiltonian `σx + i·alpha_s·σz`.
pub fn system_hamiltonian_nh(alpha_s: f64) -> Matrix2 {
    Matrix2::pauli_x() + Matrix2::pauli_z().scale(Complex64::new(0.0, alpha_s))
}

fn check_similarity_domain(alpha_s: f64) -> Result<f64> {
    if !alpha_s.is_finite() || alpha_s.abs() >= 1.0 {
        return Err(Error::PtBroken {
            alpha_s,
            requirement: "|alpha_s| < 1 for the similarity transform",
        });
    }
    Ok(0.5 * alpha_s.atanh())
}

/// `η_S = cosh(ϑ)·I + sinh(ϑ)·σy`.
pub fn system_similarity(alpha_s: f64) -> Result<Matrix2> {
    let vartheta = check_similarity_domain(alpha_s)?;
    Ok(similarity_from_vartheta(vartheta))
}

/// `η_S⁻¹ = cosh(ϑ)·I − sinh(ϑ)·σy`.
pub fn system_similarity_inverse(alpha_s: f64) -> Result<Matrix2> {
    let vartheta = check_similarity_domain(alpha_s)?;
    Ok(similarity_from_vartheta(-vartheta))
}

fn similarity_from_vartheta(vartheta: f64) -> Matrix2 {
    Matrix2::identity().scale(vartheta.cosh().into())
        + Matrix2::pauli_y().scale(vartheta.sinh().into())
}

/// Computes `η_S·H_S^NH·η_S⁻¹` by direct matrix products. The result should
/// equal `E₁·σx`.
pub fn hermitize_system(alpha_s: f64) -> Result<Matrix2> {
    let eta = system_similarity(alpha_s)?;
    let eta_inv = eta.inverse().ok_or(Error::SingularSimilarity {
        residual: f64::INFINITY,
    })?;
    Ok(eta * system_hamiltonian_nh(alpha_s) * eta_inv)
}

/// Functional dependence of the bath parameter ζ on τ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ZetaForm {
    /// `1 + 4τ²`
    #[default]
    Quadratic,
    /// `1 + 4τ⁴`
    Quartic,
    /// `1 + 4τ⁶`
    Sextic,
}

impl ZetaForm {
    pub const ALL: [ZetaForm; 3] = [ZetaForm::Quadratic, ZetaForm::Quartic, ZetaForm::Sextic];

    pub fn eval(self, tau: f64) -> f64 {
        zeta_of_tau(self, tau)
    }

    pub fn name(self) -> &'static str {
        match self {
            ZetaForm::Quadratic => "quadratic",
            ZetaForm::Quartic => "quartic",
            ZetaForm::Sextic => "sextic",
        }
    }
}

impl fmt::Display for ZetaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ZetaForm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "quadratic" => Ok(ZetaForm::Quadratic),
            "quartic" => Ok(ZetaForm::Quartic),
            "sextic" => Ok(ZetaForm::Sextic),
            other => Err(format!(
                "unknown zeta form `{other}` (expected quadratic, quartic or sextic)"
            )),
        }
    }
}

pub fn zeta_of_tau(form: ZetaForm, tau: f64) -> f64 {
    let t2 = tau * tau;
    match form {
        ZetaForm::Quadratic => 1.0 + 4.0 * t2,
        ZetaForm::Quartic => 1.0 + 4.0 * t2 * t2,
        ZetaForm::Sextic => 1.0 + 4.0 * t2 * t2 * t2,
    }
}

/// Bath temperature in natural units (ħ = K = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Finite(f64),
    /// `coth(ω/2T)` replaced by 1.
    Zero,
}

impl Temperature {
    pub fn finite(value: f64) -> Result<Self> {
        require_positive("temperature", value).map(Temperature::Finite)
    }

    /// `coth(ω / 2T)`; diverges at ω = 0 for finite T.
    pub fn coth_half(&self, omega: f64) -> f64 {
        match *self {
            Temperature::Finite(t) => crate::special::coth(omega / (2.0 * t)),
            Temperature::Zero => 1.0,
        }
    }

    /// `ω·coth(ω / 2T)`, finite at ω = 0 where it equals 2T.
    pub fn omega_coth_half(&self, omega: f64) -> f64 {
        match *self {
            Temperature::Finite(t) => 2.0 * t * crate::special::x_coth(omega / (2.0 * t)),
            Temperature::Zero => omega,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Temperature::Finite(t) => format!("{t}"),
            Temperature::Zero => "0".to_owned(),
        }
    }
}

/// Raw bath parameters before validation. Defaults follow the reference
/// setting used for every figure: 𝒜 = 1, Ω = 0.1, T = 300, δ = 1, θ = π/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvParams {
    pub tau: f64,
    pub zeta_form: ZetaForm,
    pub delta: f64,
    pub amp: f64,
    pub cutoff: f64,
    pub temperature: Temperature,
    pub theta: f64,
}

impl Default for EnvParams {
    fn default() -> Self {
        EnvParams {
            tau: 0.0,
            zeta_form: ZetaForm::Quadratic,
            delta: 1.0,
            amp: 1.0,
            cutoff: 0.1,
            temperature: Temperature::Finite(300.0),
            theta: FRAC_PI_2,
        }
    }
}

impl EnvParams {
    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_zeta_form(mut self, form: ZetaForm) -> Self {
        self.zeta_form = form;
        self
    }

    pub fn build(self) -> Result<EnvConfig> {
        EnvConfig::new(self)
    }
}

/// Validated bath configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvConfig {
    params: EnvParams,
    zeta: f64,
}

impl EnvConfig {
    pub fn new(mut params: EnvParams) -> Result<Self> {
        if !params.tau.is_finite() {
            return Err(Error::domain("tau", params.tau, "must be finite"));
        }
        require_positive("delta", params.delta)?;
        require_positive("amp", params.amp)?;
        require_positive("cutoff", params.cutoff)?;
        if let Temperature::Finite(t) = params.temperature {
            require_positive("temperature", t)?;
        }
        if !params.theta.is_finite() {
            return Err(Error::domain("theta", params.theta, "must be finite"));
        }
        // Angles are reduced into [0, 2π).
        params.theta = params.theta.rem_euclid(TAU);
        if params.theta >= TAU {
            params.theta = 0.0;
        }
        let zeta = zeta_of_tau(params.zeta_form, params.tau);
        if !(zeta.is_finite() && zeta * params.delta > 0.0) {
            return Err(Error::domain(
                "tau",
                params.tau,
                "zeta*delta must be finite and > 0",
            ));
        }
        Ok(EnvConfig { params, zeta })
    }

    pub fn hermitian() -> Self {
        EnvConfig::new(EnvParams::default()).expect("default bath parameters are valid")
    }

    pub fn params(&self) -> &EnvParams {
        &self.params
    }
    pub fn tau(&self) -> f64 {
        self.params.tau
    }
    pub fn zeta_form(&self) -> ZetaForm {
        self.params.zeta_form
    }
    pub fn zeta(&self) -> f64 {
        self.zeta
    }
    pub fn delta(&self) -> f64 {
        self.params.delta
    }
    pub fn amp(&self) -> f64 {
        self.params.amp
    }
    pub fn cutoff(&self) -> f64 {
        self.params.cutoff
    }
    pub fn temperature(&self) -> Temperature {
        self.params.temperature
    }
    pub fn theta(&self) -> f64 {
        self.params.theta
    }

    /// `sqrt(ζδ)`, the factor relating Γ to ω.
    pub fn gamma_scale(&self) -> f64 {
        (self.zeta * self.params.delta).sqrt()
    }
}
