use thiserror::Error;

/// Failures raised by the tunneling calculators.
///
/// Variant names double as the machine-readable error tags printed by the CLI,
/// see [`Error::name`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside its domain: {0}")]
    Domain(String),
    #[error("potential has no interior maximum on its domain")]
    NoPeak,
    #[error("energy {energy} is not below the barrier maximum {v_max}")]
    OverBarrier { energy: f64, v_max: f64 },
    #[error("turning-point iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("no sign change of V(x) - E on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("quadrature did not reach the requested tolerance within {panels} panels (error estimate {error:e})")]
    QuadratureFailure { panels: usize, error: f64 },
    #[error("integrand is unbounded at interior point x = {x}")]
    Singularity { x: f64 },
    #[error("lead kinetic energy is not positive (left {left}, right {right})")]
    EvanescentLead { left: f64, right: f64 },
    #[error("parameters outside the regime where the formula holds: {0}")]
    Regime(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::NoPeak => "NoPeak",
            Error::OverBarrier { .. } => "OverBarrier",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::BracketFailure { .. } => "BracketFailure",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::Singularity { .. } => "SingularityError",
            Error::EvanescentLead { .. } => "EvanescentLead",
            Error::Regime(_) => "RegimeError",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
