use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// |alpha_s| beyond the unbroken regime (or at the exceptional point
    /// where the similarity transform degenerates).
    #[error("alpha_s = {alpha_s} is outside the PT-unbroken regime ({requirement})")]
    PtBroken {
        alpha_s: f64,
        requirement: &'static str,
    },

    #[error("invalid {param} = {value}: {reason}")]
    Domain {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("Fock truncation dim = {dim} is too small (need at least {min})")]
    Dimension { dim: usize, min: usize },

    #[error("similarity transform is numerically singular (inverse residual {residual:e})")]
    SingularSimilarity { residual: f64 },

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (error estimate {abs_error:e}, target {target:e})"
    )]
    NonConvergence {
        subdivisions: usize,
        abs_error: f64,
        target: f64,
    },

    #[error("integrand returned a non-finite value at omega = {omega}")]
    NonFinite { omega: f64 },
}

impl Error {
    pub(crate) fn domain(param: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            param,
            value,
            reason,
        }
    }

    /// Name of the offending parameter, when the error is tied to one.
    pub fn param(&self) -> Option<&'static str> {
        match self {
            Error::PtBroken { .. } => Some("alpha_s"),
            Error::Domain { param, .. } => Some(param),
            Error::Dimension { .. } => Some("dim"),
            _ => None,
        }
    }

    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::NonFinite { .. }
                | Error::SingularSimilarity { .. }
        )
    }
}

pub(crate) fn require_positive(param: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(param, value, "must be finite and > 0"))
    }
}

pub(crate) fn require_non_negative(param: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(param, value, "must be finite and >= 0"))
    }
}
