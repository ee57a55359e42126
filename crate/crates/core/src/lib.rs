//! Bayesian sliding-window CFAR detection.
//!
//! The crate covers three layers:
//!
//! * [`predictive`]: Bayesian predictive densities of the cell under test
//!   given the clutter range profile, and the false alarm probabilities they
//!   induce. The exponential clutter / order-statistic case has a closed form
//!   ([`OsPredictive`]); arbitrary one- and two-parameter models go through
//!   nested quadrature ([`PredictiveModel`]).
//! * [`detectors`]: decision rules built on top (Bayesian OS, minimum-based,
//!   cell-averaging and user supplied `g`).
//! * [`simulate`]: a deterministic, parallel Monte Carlo harness that
//!   measures false alarm and detection probabilities.
//!
//! ```
//! use bayescfar::{DetectorSpec, DetectorFamily, CrpWindow, detectors};
//!
//! let spec = DetectorSpec::new(DetectorFamily::BayesOs, 4, 1, 0.1).unwrap();
//! let window = CrpWindow::new(vec![1.0, 3.0, 2.0, 5.0]).unwrap();
//! let decision = detectors::bayes_os_decide(40.0, &window, &spec).unwrap();
//! assert!(decision.verdict.is_target());
//! ```

// `!(x > 0.0)` is the idiom for rejecting NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clutter;
pub mod detectors;
mod error;
pub mod numerics;
pub mod predictive;
pub mod rng;
pub mod simulate;

pub use clutter::{ClutterModel, CrpWindow, ExponentialClutter, OsStatistic, ParetoClutter};
pub use detectors::{Decision, DecisionPath, DetectorFamily, DetectorSpec, Verdict};
pub use error::{CfarError, Result};
pub use numerics::{QuadratureSettings, RootSettings};
pub use predictive::{OsPredictive, PredictiveModel};
pub use simulate::{Runner, Scenario, SimReport, TargetModel};
