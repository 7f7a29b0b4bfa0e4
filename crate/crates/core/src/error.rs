use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("argument {0} is outside the domain of the principal Lambert W branch (z >= -1/e)")]
    LambertDomain(f64),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("no characteristic root survived refinement ({failed} candidates dropped)")]
    NoRoots { failed: usize },

    #[error("(omega, tau) = ({omega}, {tau}) is not a crossing pair: |Delta(i omega, tau)| = {residual:e}")]
    NotACrossing { omega: f64, tau: f64, residual: f64 },

    #[error("bilinear-form normalizer is degenerate (|denominator| = {0:e})")]
    DegenerateNormalizer(f64),

    #[error("singular {what} system (|det| = {det:e}, condition estimate {condition:e})")]
    Singular {
        what: &'static str,
        det: f64,
        condition: f64,
    },

    #[error("invalid step configuration: {0}")]
    InvalidStep(String),

    #[error("non-finite state at t = {t} (x = {x:e}, y = {y:e})")]
    NonFinite { t: f64, x: f64, y: f64 },

    #[error("analysis window holds {len} samples, at least {min} are required")]
    WindowTooShort { len: usize, min: usize },
}

impl Error {
    /// Validation errors come from bad inputs; everything else is a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::LambertDomain(_)
                | Error::InvalidStep(_)
                | Error::WindowTooShort { .. }
        )
    }

    /// Short stable identifier, used as the reason code in scan failure records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::LambertDomain(_) => "lambert_domain",
            Error::NoConvergence { .. } => "no_convergence",
            Error::NoRoots { .. } => "no_roots",
            Error::NotACrossing { .. } => "not_a_crossing",
            Error::DegenerateNormalizer(_) => "degenerate_normalizer",
            Error::Singular { .. } => "singular",
            Error::InvalidStep(_) => "invalid_step",
            Error::NonFinite { .. } => "non_finite",
            Error::WindowTooShort { .. } => "window_too_short",
        }
    }
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}
