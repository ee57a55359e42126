//! Sliding-window decision rules of the form `Z0 > tau * g(Z1..ZN)`.
//!
//! * `bayes_os`: Bayesian order-statistic rule. Rather than inverting the
//!   predictive exceedance probability for a threshold, it evaluates that
//!   probability at the observed cell and declares a target when it falls
//!   strictly below the design value. Both forms are equivalent because the
//!   probability is strictly decreasing.
//! * `min_cfar`: `Z0 > N (1/Pfa - 1) min(Z)`, the `k = 1` case of the above.
//! * `ca_cfar`: `Z0 > (Pfa^(-1/N) - 1) sum(Z)`, exact in exponential clutter.
//! * `custom_g`: any caller supplied `g` with an explicit multiplier.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clutter::{kth_smallest_in_place, window_sum, CrpWindow};
use crate::error::{config, domain, CfarError, Result};
use crate::numerics::{solve_monotone_decreasing, RootSettings};
use crate::predictive::OsPredictive;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorFamily {
    BayesOs,
    MinCfar,
    CaCfar,
    CustomG,
}

impl DetectorFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            DetectorFamily::BayesOs => "bayes_os",
            DetectorFamily::MinCfar => "min_cfar",
            DetectorFamily::CaCfar => "ca_cfar",
            DetectorFamily::CustomG => "custom_g",
        }
    }
}

impl fmt::Display for DetectorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DetectorFamily {
    type Err = CfarError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bayes_os" => Ok(DetectorFamily::BayesOs),
            "min_cfar" => Ok(DetectorFamily::MinCfar),
            "ca_cfar" => Ok(DetectorFamily::CaCfar),
            "custom_g" => Ok(DetectorFamily::CustomG),
            other => Err(config(format!(
                "unknown detector family '{other}' (expected bayes_os, min_cfar, ca_cfar or custom_g)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    family: DetectorFamily,
    n: usize,
    k: usize,
    design_pfa: f64,
}

impl DetectorSpec {
    /// `k` only matters for `bayes_os`; the other families store `k = 1`.
    pub fn new(family: DetectorFamily, n: usize, k: usize, design_pfa: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("window size N must be at least 1"));
        }
        if !(design_pfa > 0.0 && design_pfa < 1.0) {
            return Err(domain(format!(
                "design Pfa must lie in (0, 1), got {design_pfa}"
            )));
        }
        let k = match family {
            DetectorFamily::BayesOs => {
                if k == 0 || k > n {
                    return Err(domain(format!(
                        "order statistic index k = {k} outside 1..={n}"
                    )));
                }
                k
            }
            _ => 1,
        };
        Ok(Self {
            family,
            n,
            k,
            design_pfa,
        })
    }

    pub fn family(&self) -> DetectorFamily {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn design_pfa(&self) -> f64 {
        self.design_pfa
    }

    pub fn with_design_pfa(&self, design_pfa: f64) -> Result<Self> {
        DetectorSpec::new(self.family, self.n, self.k, design_pfa)
    }

    /// Clutter statistic `g` this family compares against: the k-th smallest
    /// sample, the minimum or the sum. Reorders `samples`.
    pub fn statistic(&self, samples: &mut [f64]) -> Result<f64> {
        match self.family {
            DetectorFamily::BayesOs | DetectorFamily::MinCfar => {
                Ok(kth_smallest_in_place(samples, self.k))
            }
            DetectorFamily::CaCfar => Ok(window_sum(samples)),
            DetectorFamily::CustomG => Err(config("custom_g has no built-in statistic")),
        }
    }

    fn expect(&self, family: DetectorFamily) -> Result<()> {
        if self.family == family {
            Ok(())
        } else {
            Err(config(format!(
                "detector is {}, expected {family}",
                self.family
            )))
        }
    }

    fn check_window(&self, window: &CrpWindow) -> Result<()> {
        if window.len() == self.n {
            Ok(())
        } else {
            Err(config(format!(
                "window holds {} samples but the detector expects N = {}",
                window.len(),
                self.n
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    H0,
    H1,
}

impl Verdict {
    pub fn is_target(&self) -> bool {
        matches!(self, Verdict::H1)
    }

    fn from_bool(target: bool) -> Self {
        if target {
            Verdict::H1
        } else {
            Verdict::H0
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::H0 => "H0",
            Verdict::H1 => "H1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionPath {
    /// `comparison_value` is the threshold on `z0`; H1 iff `z0 > threshold`.
    Threshold,
    /// `comparison_value` is the exceedance probability at `z0`; H1 iff it is
    /// below the design Pfa.
    PfaComparison,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub statistic_z0: f64,
    pub comparison_value: f64,
    pub path: DecisionPath,
}

fn check_cut(z0: f64) -> Result<()> {
    if z0 >= 0.0 && z0.is_finite() {
        Ok(())
    } else {
        Err(domain(format!(
            "cell under test must be nonnegative and finite, got {z0}"
        )))
    }
}

fn threshold_decision(z0: f64, threshold: f64) -> Decision {
    Decision {
        verdict: Verdict::from_bool(z0 > threshold),
        statistic_z0: z0,
        comparison_value: threshold,
        path: DecisionPath::Threshold,
    }
}

/// `N (1/Pfa - 1)`.
pub fn min_cfar_multiplier(n: usize, design_pfa: f64) -> f64 {
    n as f64 * (1.0 / design_pfa - 1.0)
}

/// `Pfa^(-1/N) - 1`.
pub fn ca_cfar_multiplier(n: usize, design_pfa: f64) -> f64 {
    (-design_pfa.ln() / n as f64).exp_m1()
}

/// Bayesian OS decision given the already extracted k-th order statistic.
pub fn bayes_os_decide_with_statistic(z0: f64, t: f64, spec: &DetectorSpec) -> Result<Decision> {
    spec.expect(DetectorFamily::BayesOs)?;
    check_cut(z0)?;
    if t == 0.0 {
        return Err(CfarError::DegenerateWindow {
            n: spec.n,
            k: spec.k,
        });
    }
    let pfa = OsPredictive::new(spec.n, spec.k, t)?.pfa(z0)?;
    Ok(Decision {
        verdict: Verdict::from_bool(pfa < spec.design_pfa),
        statistic_z0: z0,
        comparison_value: pfa,
        path: DecisionPath::PfaComparison,
    })
}

pub fn bayes_os_decide(z0: f64, window: &CrpWindow, spec: &DetectorSpec) -> Result<Decision> {
    spec.expect(DetectorFamily::BayesOs)?;
    spec.check_window(window)?;
    let t = window.kth_order_statistic(spec.k)?.value;
    bayes_os_decide_with_statistic(z0, t, spec)
}

/// Explicit threshold `tau` with `Pfa(tau) = design Pfa` given the observed
/// order statistic `t`. Closed form for `k = 1`, bisection otherwise.
pub fn bayes_os_threshold(spec: &DetectorSpec, t: f64) -> Result<f64> {
    spec.expect(DetectorFamily::BayesOs)?;
    if spec.k == 1 {
        if !(t > 0.0) || !t.is_finite() {
            return Err(domain(format!("order statistic must be positive, got {t}")));
        }
        return Ok(t * min_cfar_multiplier(spec.n, spec.design_pfa));
    }
    bayes_os_threshold_by_root(spec, t, &RootSettings::default())
}

/// Threshold by root finding for every `k`, including `k = 1`.
pub fn bayes_os_threshold_by_root(
    spec: &DetectorSpec,
    t: f64,
    settings: &RootSettings,
) -> Result<f64> {
    spec.expect(DetectorFamily::BayesOs)?;
    let os = OsPredictive::new(spec.n, spec.k, t)?;
    solve_monotone_decreasing(|tau| os.pfa(tau), spec.design_pfa, settings)
}

pub fn min_cfar_decide(z0: f64, window: &CrpWindow, spec: &DetectorSpec) -> Result<Decision> {
    spec.expect(DetectorFamily::MinCfar)?;
    spec.check_window(window)?;
    check_cut(z0)?;
    Ok(threshold_decision(
        z0,
        min_cfar_multiplier(spec.n, spec.design_pfa) * window.min(),
    ))
}

pub fn ca_cfar_decide(z0: f64, window: &CrpWindow, spec: &DetectorSpec) -> Result<Decision> {
    spec.expect(DetectorFamily::CaCfar)?;
    spec.check_window(window)?;
    check_cut(z0)?;
    Ok(threshold_decision(
        z0,
        ca_cfar_multiplier(spec.n, spec.design_pfa) * window.sum(),
    ))
}

/// `H1` iff `z0 > tau * g(window)`.
pub fn custom_g_decide<G>(z0: f64, window: &CrpWindow, tau: f64, g: G) -> Result<Decision>
where
    G: FnOnce(&CrpWindow) -> Result<f64>,
{
    check_cut(z0)?;
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(domain(format!("multiplier must be nonnegative, got {tau}")));
    }
    let level = g(window)?;
    if !(level >= 0.0) || !level.is_finite() {
        return Err(CfarError::NonFinite {
            context: "clutter statistic g",
            value: level,
        });
    }
    Ok(threshold_decision(z0, tau * level))
}

/// Decision for any built-in family given its clutter statistic.
pub fn decide_with_statistic(z0: f64, statistic: f64, spec: &DetectorSpec) -> Result<Decision> {
    match spec.family {
        DetectorFamily::BayesOs => bayes_os_decide_with_statistic(z0, statistic, spec),
        DetectorFamily::MinCfar => {
            check_cut(z0)?;
            Ok(threshold_decision(
                z0,
                min_cfar_multiplier(spec.n, spec.design_pfa) * statistic,
            ))
        }
        DetectorFamily::CaCfar => {
            check_cut(z0)?;
            Ok(threshold_decision(
                z0,
                ca_cfar_multiplier(spec.n, spec.design_pfa) * statistic,
            ))
        }
        DetectorFamily::CustomG => Err(config("custom_g decisions need a g function")),
    }
}

/// Decision for any built-in family.
pub fn decide(z0: f64, window: &CrpWindow, spec: &DetectorSpec) -> Result<Decision> {
    match spec.family {
        DetectorFamily::BayesOs => bayes_os_decide(z0, window, spec),
        DetectorFamily::MinCfar => min_cfar_decide(z0, window, spec),
        DetectorFamily::CaCfar => ca_cfar_decide(z0, window, spec),
        DetectorFamily::CustomG => Err(config("custom_g decisions need a g function")),
    }
}

/// Threshold on `z0` for an observed clutter statistic (order statistic for
/// the OS families, window sum for `ca_cfar`).
pub fn threshold(spec: &DetectorSpec, statistic: f64) -> Result<f64> {
    if !(statistic >= 0.0) || !statistic.is_finite() {
        return Err(domain(format!(
            "statistic must be nonnegative, got {statistic}"
        )));
    }
    match spec.family {
        DetectorFamily::BayesOs => bayes_os_threshold(spec, statistic),
        DetectorFamily::MinCfar => Ok(min_cfar_multiplier(spec.n, spec.design_pfa) * statistic),
        DetectorFamily::CaCfar => Ok(ca_cfar_multiplier(spec.n, spec.design_pfa) * statistic),
        DetectorFamily::CustomG => Err(config("custom_g has no built-in threshold")),
    }
}
