use thiserror::Error;

pub type Result<T, E = CfarError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CfarError {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A scenario, window layout or configuration is inconsistent.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// The window carries no clutter information (k-th order statistic is zero).
    #[error("degenerate window: order statistic {k} of {n} samples is zero")]
    DegenerateWindow { n: usize, k: usize },

    #[error("non-finite value {value} encountered while evaluating {context}")]
    NonFinite { context: &'static str, value: f64 },

    /// Adaptive quadrature did not meet its tolerance. Carries the best estimate.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error {error:e})"
    )]
    Convergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("root bracket not found after {iterations} expansions")]
    NoRoot { iterations: usize },

    #[error("target {target} unreachable: f(0) = {at_zero} is below it")]
    TargetUnreachable { target: f64, at_zero: f64 },

    #[error("posterior integrates to {integral}, not 1")]
    PosteriorNotNormalized { integral: f64 },
}

impl CfarError {
    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            CfarError::NonFinite { .. }
                | CfarError::Convergence { .. }
                | CfarError::NoRoot { .. }
                | CfarError::PosteriorNotNormalized { .. }
        )
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> CfarError {
    CfarError::Domain(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> CfarError {
    CfarError::Configuration(msg.into())
}
