//! Exponential clutter with a Jeffreys prior, conditioned on one order
//! statistic of the reference window.
//!
//! With `x = z / t + N - k + 1` and `w = k C(N, k)` the predictive density and
//! exceedance probability of the cell under test are
//!
//! ```text
//! f(z)   = (w / t) * sum_i (-1)^i C(k-1, i) (x + i)^-2
//! Pfa(z) =  w      * sum_i (-1)^i C(k-1, i) (x + i)^-1
//! ```
//!
//! Both depend on `z` and `t` only through `z / t`. The alternating sums lose
//! digits as `k` grows, so every closed-form evaluation reports its
//! cancellation ratio and defers to quadrature of the positive integrand
//!
//! ```text
//! Pfa(tau) = w * int_0^inf (1 - e^-m)^(k-1) e^(-m x) dm,   m = lambda t
//! ```
//!
//! once that ratio passes [`CANCELLATION_LIMIT`].

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numerics::{
    alternating_binomial_sum_split, binom, integrate_semi_infinite_scaled, two_prod, two_sum,
    AlternatingSum, QuadratureSettings,
};

/// Closed forms whose largest term exceeds the result by more than this
/// factor are replaced by quadrature.
pub const CANCELLATION_LIMIT: f64 = 1e8;

/// Settings used for the quadrature route unless overridden.
pub const OS_QUADRATURE: QuadratureSettings = QuadratureSettings {
    relative_tolerance: 1e-13,
    absolute_tolerance: 1e-300,
    max_subdivisions: 400,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvaluationMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub method: EvaluationMethod,
    /// Cancellation ratio of the closed form (1 when it has a single term).
    pub cancellation: f64,
}

/// Closed form against quadrature at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheck {
    pub closed_form: f64,
    pub quadrature: f64,
    pub cancellation: f64,
    pub relative_difference: f64,
}

/// Predictive distribution of the cell under test given that the k-th
/// smallest of `N` reference cells equals `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OsPredictive {
    n: usize,
    k: usize,
    t: f64,
    /// `k C(N, k)`, and its logarithm for the quadrature integrands.
    weight: f64,
    ln_weight: f64,
    quadrature: QuadratureSettings,
}

impl OsPredictive {
    pub fn new(n: usize, k: usize, t: f64) -> Result<Self> {
        if n == 0 || k == 0 || k > n {
            return Err(domain(format!("need 1 <= k <= N, got N = {n}, k = {k}")));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(domain(format!(
                "order statistic must be positive and finite, got {t}"
            )));
        }
        let c = binom(n as u64, k as u64)?;
        let ln_weight = (k as f64).ln() + c.ln();
        Ok(Self {
            n,
            k,
            t,
            weight: k as f64 * c.to_f64(),
            ln_weight,
            quadrature: OS_QUADRATURE,
        })
    }

    pub fn with_quadrature(mut self, settings: QuadratureSettings) -> Result<Self> {
        settings.validate()?;
        self.quadrature = settings;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    fn offset(&self) -> f64 {
        (self.n - self.k + 1) as f64
    }

    /// `(z / t + N - k + 1)` as an unevaluated pair.
    fn shifted(&self, z: f64) -> (f64, f64) {
        two_sum(z / self.t, self.offset())
    }

    /// Posterior density of the clutter rate given the order statistic,
    /// `t k C(N,k) (1 - e^{-lambda t})^{k-1} e^{-lambda t (N-k+1)}`.
    ///
    /// This is the order statistic density times the `1/lambda` prior,
    /// normalized; the normalizer is `1/t`.
    pub fn posterior(&self, lambda: f64) -> Result<f64> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(domain(format!("rate must be positive, got {lambda}")));
        }
        let m = lambda * self.t;
        let ln = self.t.ln() + self.ln_weight - m * self.offset();
        if self.k == 1 {
            return Ok(ln.exp());
        }
        Ok((ln + (self.k - 1) as f64 * (-(-m).exp_m1()).ln()).exp())
    }

    /// Predictive density of the cell under test at `z0`.
    pub fn density(&self, z0: f64) -> Result<f64> {
        self.density_evaluation(z0).map(|e| e.value)
    }

    pub fn density_evaluation(&self, z0: f64) -> Result<Evaluation> {
        check_point(z0, "z0")?;
        let (x_hi, x_lo) = self.shifted(z0);
        if self.k == 1 {
            let x = x_hi + x_lo;
            return Ok(Evaluation {
                value: self.n as f64 / (self.t * x * x),
                method: EvaluationMethod::ClosedForm,
                cancellation: 1.0,
            });
        }
        let sum = alternating_binomial_sum_split(self.k, |i| {
            let (q_hi, q_lo) = reciprocal(x_hi, x_lo, i);
            let (s_hi, s_lo) = two_prod(q_hi, q_hi);
            (s_hi, s_lo + 2.0 * q_hi * q_lo)
        })?;
        if sum.cancellation <= CANCELLATION_LIMIT {
            Ok(closed(self.weight / self.t * sum.value, sum))
        } else {
            Ok(Evaluation {
                value: self.density_quadrature(z0)?,
                method: EvaluationMethod::Quadrature,
                cancellation: sum.cancellation,
            })
        }
    }

    /// Predictive density by quadrature over the clutter rate.
    pub fn density_quadrature(&self, z0: f64) -> Result<f64> {
        check_point(z0, "z0")?;
        let x = z0 / self.t + self.offset();
        let km1 = (self.k - 1) as f64;
        let ln_w = self.ln_weight;
        let integrand = move |m: f64| {
            let mut ln = ln_w + m.ln() - m * x;
            if km1 > 0.0 {
                ln += km1 * (-(-m).exp_m1()).ln();
            }
            ln.exp()
        };
        let r = integrate_semi_infinite_scaled(integrand, rate_scale(self.k, x), &self.quadrature)?;
        Ok(r.value / self.t)
    }

    /// Probability that the cell under test exceeds `tau` under clutter only.
    pub fn pfa(&self, tau: f64) -> Result<f64> {
        self.pfa_evaluation(tau).map(|e| e.value)
    }

    pub fn pfa_evaluation(&self, tau: f64) -> Result<Evaluation> {
        check_point(tau, "tau")?;
        let (x_hi, x_lo) = self.shifted(tau);
        if self.k == 1 {
            return Ok(Evaluation {
                value: (self.n as f64 / (x_hi + x_lo)).min(1.0),
                method: EvaluationMethod::ClosedForm,
                cancellation: 1.0,
            });
        }
        let sum = alternating_binomial_sum_split(self.k, |i| reciprocal(x_hi, x_lo, i))?;
        if sum.cancellation <= CANCELLATION_LIMIT {
            let v = self.weight * sum.value;
            Ok(closed(v.clamp(0.0, 1.0), sum))
        } else {
            Ok(Evaluation {
                value: self.pfa_quadrature(tau)?,
                method: EvaluationMethod::Quadrature,
                cancellation: sum.cancellation,
            })
        }
    }

    /// Exceedance probability from the positive-integrand form. Serves as the
    /// independent check on [`OsPredictive::pfa`].
    pub fn pfa_quadrature(&self, tau: f64) -> Result<f64> {
        check_point(tau, "tau")?;
        let x = tau / self.t + self.offset();
        let km1 = (self.k - 1) as f64;
        let ln_w = self.ln_weight;
        let integrand = move |m: f64| {
            let mut ln = ln_w - m * x;
            if km1 > 0.0 {
                ln += km1 * (-(-m).exp_m1()).ln();
            }
            ln.exp()
        };
        let r = integrate_semi_infinite_scaled(integrand, rate_scale(self.k, x), &self.quadrature)?;
        Ok(r.value.clamp(0.0, 1.0))
    }

    /// Evaluates both routes regardless of the cancellation ratio.
    pub fn cross_check(&self, tau: f64) -> Result<CrossCheck> {
        check_point(tau, "tau")?;
        let (x_hi, x_lo) = self.shifted(tau);
        let sum = alternating_binomial_sum_split(self.k, |i| reciprocal(x_hi, x_lo, i))?;
        let closed_form = self.weight * sum.value;
        let quadrature = self.pfa_quadrature(tau)?;
        Ok(CrossCheck {
            closed_form,
            quadrature,
            cancellation: sum.cancellation,
            relative_difference: ((closed_form - quadrature) / quadrature).abs(),
        })
    }
}

fn closed(value: f64, sum: AlternatingSum) -> Evaluation {
    Evaluation {
        value,
        method: EvaluationMethod::ClosedForm,
        cancellation: sum.cancellation,
    }
}

fn check_point(v: f64, name: &str) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!(
            "{name} must be nonnegative and finite, got {v}"
        )))
    }
}

/// `1 / (x + i)` as an unevaluated pair, with `x = x_hi + x_lo`.
fn reciprocal(x_hi: f64, x_lo: f64, i: usize) -> (f64, f64) {
    let (d_hi, d_lo) = two_sum(x_hi, i as f64);
    let d_lo = d_lo + x_lo;
    let q = 1.0 / d_hi;
    // residual 1 - q d_hi is exact under fma
    let r = (-q).mul_add(d_hi, 1.0) - q * d_lo;
    (q, r / d_hi)
}

/// Location of the mass of `(1 - e^-m)^(k-1) e^(-m x)`.
fn rate_scale(k: usize, x: f64) -> f64 {
    let mode = ((k - 1) as f64 / x).ln_1p();
    mode.max(1.0 / x)
}
