//! Pure-dephasing channels on the reduced qubit state.

use num_complex::Complex64;

use crate::error::{require_non_negative, Error, Result};
use crate::model::Matrix2;

const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-12;

/// Reduced 2×2 density matrix of the qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    rho00: f64,
    rho01: Complex64,
    rho11: f64,
}

impl QubitState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(
        rho00: Complex64,
        rho01: Complex64,
        rho10: Complex64,
        rho11: Complex64,
    ) -> Result<Self> {
        let hermitian = rho00.im.abs() <= TRACE_TOL
            && rho11.im.abs() <= TRACE_TOL
            && (rho10 - rho01.conj()).norm() <= TRACE_TOL;
        if !hermitian {
            return Err(Error::domain(
                "rho",
                (rho10 - rho01.conj()).norm(),
                "density matrix must be Hermitian",
            ));
        }
        Self::from_parts(rho00.re, rho01, rho11.re)
    }

    /// Builds the state from its populations and upper coherence.
    pub fn from_parts(rho00: f64, rho01: Complex64, rho11: f64) -> Result<Self> {
        if !(rho00.is_finite() && rho11.is_finite() && rho01.is_finite()) {
            return Err(Error::domain("rho", f64::NAN, "entries must be finite"));
        }
        let trace = rho00 + rho11;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::domain("rho", trace, "trace must equal 1"));
        }
        if rho00 < -PSD_TOL || rho11 < -PSD_TOL || rho00 * rho11 - rho01.norm_sqr() < -PSD_TOL {
            return Err(Error::domain(
                "rho",
                rho00 * rho11 - rho01.norm_sqr(),
                "must be positive semidefinite",
            ));
        }
        Ok(QubitState {
            rho00,
            rho01,
            rho11,
        })
    }

    /// `|ψ⟩ = cos(a/2)|0⟩ + e^{iφ} sin(a/2)|1⟩`.
    pub fn pure(polar: f64, phase: f64) -> Self {
        let (s, c) = (0.5 * polar).sin_cos();
        QubitState {
            rho00: c * c,
            rho01: Complex64::from_polar(c * s, -phase),
            rho11: s * s,
        }
    }

    /// `|+⟩⟨+|`, maximal coherence.
    pub fn plus() -> Self {
        QubitState::pure(std::f64::consts::FRAC_PI_2, 0.0)
    }

    pub fn rho00(&self) -> f64 {
        self.rho00
    }
    pub fn rho01(&self) -> Complex64 {
        self.rho01
    }
    pub fn rho10(&self) -> Complex64 {
        self.rho01.conj()
    }
    pub fn rho11(&self) -> f64 {
        self.rho11
    }

    pub fn to_matrix(&self) -> Matrix2 {
        Matrix2::new(
            self.rho00.into(),
            self.rho01,
            self.rho10(),
            self.rho11.into(),
        )
    }

    fn from_matrix_unchecked(m: &Matrix2) -> Self {
        QubitState {
            rho00: m.get(0, 0).re,
            rho01: m.get(0, 1),
            rho11: m.get(1, 1).re,
        }
    }

    /// `Tr(ρ²)`
    pub fn purity(&self) -> f64 {
        self.rho00 * self.rho00 + self.rho11 * self.rho11 + 2.0 * self.rho01.norm_sqr()
    }

    pub fn max_abs_diff(&self, other: &QubitState) -> f64 {
        self.to_matrix().max_abs_diff(&other.to_matrix())
    }
}

/// `ρ01 → ρ01·e^{−Λ}`; populations are untouched.
pub fn evolve_qubit(rho0: &QubitState, lambda_value: f64) -> Result<QubitState> {
    require_non_negative("lambda", lambda_value)?;
    Ok(QubitState {
        rho01: rho0.rho01 * (-lambda_value).exp(),
        ..*rho0
    })
}

/// `K₀ = √(1−p)·I`, `K₁ = diag(√p, 0)`, `K₂ = diag(0, √p)`.
pub fn kraus_operators(p: f64) -> Result<[Matrix2; 3]> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("p", p, "must lie in [0, 1]"));
    }
    let keep = Complex64::from((1.0 - p).sqrt());
    let flip = Complex64::from(p.sqrt());
    let zero = Complex64::new(0.0, 0.0);
    Ok([
        Matrix2::identity().scale(keep),
        Matrix2::diag(flip, zero),
        Matrix2::diag(zero, flip),
    ])
}

/// `Σ_i K_i ρ K_i†` for the phase-damping Kraus set.
pub fn dephasing_channel(rho0: &QubitState, p: f64) -> Result<QubitState> {
    let rho = rho0.to_matrix();
    let out = kraus_operators(p)?
        .iter()
        .fold(Matrix2::zero(), |acc, k| acc + *k * rho * k.dagger());
    Ok(QubitState::from_matrix_unchecked(&out))
}
