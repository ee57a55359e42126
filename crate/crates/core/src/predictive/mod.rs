//! Bayesian predictive distributions of the cell under test and the false
//! alarm probabilities obtained by integrating them.

mod generic;
mod os;

pub use generic::{
    AxisHint, ParameterDimension, PredictiveModel, PredictiveModelBuilder, NORMALIZATION_TOLERANCE,
};
pub use os::{
    CrossCheck, Evaluation, EvaluationMethod, OsPredictive, CANCELLATION_LIMIT, OS_QUADRATURE,
};

/// Exceedance probability of the cell-averaging predictive, `(1 + tau/sum)^-n`.
pub fn cell_averaging_pfa(n: usize, sum: f64, tau: f64) -> f64 {
    (-(n as f64) * (tau / sum).ln_1p()).exp()
}

/// Predictive density of the cell-averaging model, `(n/sum) (1 + z/sum)^-(n+1)`.
pub fn cell_averaging_density(n: usize, sum: f64, z0: f64) -> f64 {
    n as f64 / sum * (-((n + 1) as f64) * (z0 / sum).ln_1p()).exp()
}
