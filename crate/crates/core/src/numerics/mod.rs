//! Numerical building blocks shared by the detectors: exact and log-domain
//! binomial coefficients, compensated alternating binomial sums, adaptive
//! Gauss-Kronrod quadrature over the positive half line, and a bracketing
//! root finder for monotone decreasing functions.

mod binomial;
mod quadrature;
mod root;
mod summation;

pub use binomial::{binom, ln_factorial, Binomial, EXACT_BINOMIAL_LIMIT};
pub use quadrature::{
    integrate_interval, integrate_semi_infinite, integrate_semi_infinite_scaled, integrate_tail,
    Integral, QuadratureSettings,
};
pub use root::{solve_monotone_decreasing, RootSettings};
pub use summation::{
    alternating_binomial_sum, alternating_binomial_sum_split, two_prod, two_sum, AlternatingSum,
    CompensatedSum,
};
