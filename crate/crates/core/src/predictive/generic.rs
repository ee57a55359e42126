//! Predictive densities by numerical integration over the clutter parameters.
//!
//! A [`PredictiveModel`] pairs a likelihood `f(z | theta)` for the cell under
//! test with a normalized posterior `p(theta | data)` (the prior already folded
//! in), for one or two positive parameters. The predictive density is
//! `int f(z | theta) p(theta | data) dtheta` and its exceedance probability is
//! the tail integral of that density. Conditioning on a statistic of the
//! window instead of the whole window only changes which posterior is
//! supplied.

use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, CfarError, Result};
use crate::numerics::{
    integrate_interval, integrate_semi_infinite_scaled, integrate_tail, ln_factorial, Integral,
    QuadratureSettings,
};

use super::os::OsPredictive;

type Likelihood = dyn Fn(f64, &[f64]) -> f64 + Send + Sync;
type Posterior = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// Posterior mass that construction tolerates as a normalization error.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Where the posterior mass lies along one parameter axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisHint {
    /// Mass spread over roughly `(0, several * scale)`.
    Scale(f64),
    /// Mass concentrated within a few `width` of `center`. Needed for sharply
    /// peaked posteriors, which a blind subdivision of the half line can miss.
    Peak { center: f64, width: f64 },
}

impl AxisHint {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            AxisHint::Scale(s) => s > 0.0 && s.is_finite(),
            AxisHint::Peak { center, width } => {
                center > 0.0 && center.is_finite() && width > 0.0 && width.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("invalid axis hint {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParameterDimension {
    One,
    Two,
}

#[derive(Clone)]
pub struct PredictiveModel {
    likelihood: Arc<Likelihood>,
    survival: Option<Arc<Likelihood>>,
    posterior: Arc<Posterior>,
    axes: Vec<AxisHint>,
    observation_scale: f64,
    integration: QuadratureSettings,
    posterior_mass: f64,
}

impl fmt::Debug for PredictiveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PredictiveModel")
            .field("dimension", &self.dimension())
            .field("axes", &self.axes)
            .field("has_survival", &self.survival.is_some())
            .field("observation_scale", &self.observation_scale)
            .field("integration", &self.integration)
            .field("posterior_mass", &self.posterior_mass)
            .finish()
    }
}

pub struct PredictiveModelBuilder {
    likelihood: Arc<Likelihood>,
    survival: Option<Arc<Likelihood>>,
    posterior: Arc<Posterior>,
    axes: Vec<AxisHint>,
    observation_scale: f64,
    integration: QuadratureSettings,
}

impl PredictiveModel {
    /// Model with a single parameter: `likelihood(z, theta)`, `posterior(theta)`.
    pub fn one_parameter<L, P>(likelihood: L, posterior: P) -> PredictiveModelBuilder
    where
        L: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        P: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        PredictiveModelBuilder {
            likelihood: Arc::new(move |z, th: &[f64]| likelihood(z, th[0])),
            survival: None,
            posterior: Arc::new(move |th: &[f64]| posterior(th[0])),
            axes: vec![AxisHint::Scale(1.0)],
            observation_scale: 1.0,
            integration: QuadratureSettings::default(),
        }
    }

    /// Model with two parameters: `likelihood(z, a, b)`, `posterior(a, b)`.
    pub fn two_parameter<L, P>(likelihood: L, posterior: P) -> PredictiveModelBuilder
    where
        L: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        P: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        PredictiveModelBuilder {
            likelihood: Arc::new(move |z, th: &[f64]| likelihood(z, th[0], th[1])),
            survival: None,
            posterior: Arc::new(move |th: &[f64]| posterior(th[0], th[1])),
            axes: vec![AxisHint::Scale(1.0); 2],
            observation_scale: 1.0,
            integration: QuadratureSettings::default(),
        }
    }

    /// Exponential clutter, Jeffreys prior, whole window observed through its
    /// sum: the posterior of the rate is Gamma(`n`, `sum`).
    pub fn cell_averaging(n: usize, sum: f64) -> Result<PredictiveModel> {
        if n == 0 {
            return Err(domain("window size must be at least 1"));
        }
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(domain(format!("window sum must be positive, got {sum}")));
        }
        let shape = n as f64;
        let ln_norm = shape * sum.ln() - ln_factorial(n as u64 - 1);
        PredictiveModel::one_parameter(
            |z, rate| rate * (-rate * z).exp(),
            move |rate| (ln_norm + (shape - 1.0) * rate.ln() - rate * sum).exp(),
        )
        .survival(|tau, rate| (-rate * tau).exp())
        .axis_hint(0, AxisHint::Scale(shape / sum))
        .observation_scale(sum / shape)
        .build()
    }

    /// Exponential clutter conditioned on one order statistic, routed through
    /// the generic integrator.
    pub fn order_statistic(os: &OsPredictive) -> Result<PredictiveModel> {
        let os = *os;
        let offset = (os.n() - os.k() + 1) as f64;
        let scale = ((os.k() - 1) as f64 / offset).ln_1p().max(1.0 / offset) / os.t();
        PredictiveModel::one_parameter(
            |z, rate| rate * (-rate * z).exp(),
            move |rate| os.posterior(rate).unwrap_or(f64::NAN),
        )
        .survival(|tau, rate| (-rate * tau).exp())
        .axis_hint(0, AxisHint::Scale(scale))
        .observation_scale(os.t())
        .build()
    }

    pub fn dimension(&self) -> ParameterDimension {
        if self.axes.len() == 1 {
            ParameterDimension::One
        } else {
            ParameterDimension::Two
        }
    }

    /// Integral of the posterior found at construction.
    pub fn posterior_mass(&self) -> f64 {
        self.posterior_mass
    }

    pub fn integration(&self) -> &QuadratureSettings {
        &self.integration
    }

    pub fn has_survival(&self) -> bool {
        self.survival.is_some()
    }

    /// Predictive density of the cell under test at `z0`.
    pub fn density(&self, z0: f64) -> Result<f64> {
        check_point(z0, "z0")?;
        let lik = &self.likelihood;
        let post = &self.posterior;
        let v = integrate_posterior(
            &|th: &[f64]| lik(z0, th) * post(th),
            &self.axes,
            &self.integration,
        )?;
        Ok(v.value.max(0.0))
    }

    /// Exceedance probability `int_tau^inf density(z) dz`.
    ///
    /// With a survival function attached the order of integration is swapped
    /// and the outer integral over `z` disappears.
    pub fn pfa(&self, tau: f64) -> Result<f64> {
        check_point(tau, "tau")?;
        let value = match &self.survival {
            Some(surv) => {
                let post = &self.posterior;
                integrate_posterior(
                    &|th: &[f64]| surv(tau, th) * post(th),
                    &self.axes,
                    &self.integration,
                )?
                .value
            }
            None => {
                let inner = tighter(&self.integration);
                let failure = RefCell::new(None);
                let lik = &self.likelihood;
                let post = &self.posterior;
                let density = |z: f64| match integrate_posterior(
                    &|th: &[f64]| lik(z, th) * post(th),
                    &self.axes,
                    &inner,
                ) {
                    Ok(r) => r.value,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                };
                let r = integrate_tail(density, tau, self.observation_scale, &self.integration);
                if let Some(e) = failure.into_inner() {
                    return Err(e);
                }
                r?.value
            }
        };
        Ok(value.clamp(0.0, 1.0))
    }
}

impl PredictiveModelBuilder {
    /// Survival function `P(Z > tau | theta)` of the likelihood, one
    /// parameter.
    pub fn survival<S>(mut self, survival: S) -> Self
    where
        S: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        self.survival = Some(Arc::new(move |tau, th: &[f64]| survival(tau, th[0])));
        self
    }

    /// Survival function of a two-parameter likelihood.
    pub fn survival2<S>(mut self, survival: S) -> Self
    where
        S: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    {
        self.survival = Some(Arc::new(move |tau, th: &[f64]| survival(tau, th[0], th[1])));
        self
    }

    pub fn axis_hint(mut self, axis: usize, hint: AxisHint) -> Self {
        if let Some(slot) = self.axes.get_mut(axis) {
            *slot = hint;
        }
        self
    }

    /// Typical size of the cell under test, used to map `(tau, inf)`.
    pub fn observation_scale(mut self, scale: f64) -> Self {
        self.observation_scale = scale;
        self
    }

    pub fn integration(mut self, settings: QuadratureSettings) -> Self {
        self.integration = settings;
        self
    }

    /// Validates the settings and checks that the posterior integrates to one.
    pub fn build(self) -> Result<PredictiveModel> {
        self.integration.validate()?;
        for h in &self.axes {
            h.validate()?;
        }
        if !(self.observation_scale > 0.0) || !self.observation_scale.is_finite() {
            return Err(domain("observation scale must be positive"));
        }
        let post = &self.posterior;
        let mass =
            integrate_posterior(&|th: &[f64]| post(th), &self.axes, &self.integration)?.value;
        if !((mass - 1.0).abs() <= NORMALIZATION_TOLERANCE) {
            return Err(CfarError::PosteriorNotNormalized { integral: mass });
        }
        Ok(PredictiveModel {
            likelihood: self.likelihood,
            survival: self.survival,
            posterior: self.posterior,
            axes: self.axes,
            observation_scale: self.observation_scale,
            integration: self.integration,
            posterior_mass: mass,
        })
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

/// Settings for an inner integral, so its error stays below the outer
/// tolerance.
fn tighter(s: &QuadratureSettings) -> QuadratureSettings {
    QuadratureSettings {
        relative_tolerance: s.relative_tolerance * 0.1,
        absolute_tolerance: s.absolute_tolerance * 0.1,
        max_subdivisions: s.max_subdivisions,
    }
}

fn integrate_axis<F: Fn(f64) -> f64>(
    f: F,
    hint: AxisHint,
    settings: &QuadratureSettings,
) -> Result<Integral> {
    match hint {
        AxisHint::Scale(s) => integrate_semi_infinite_scaled(f, s, settings),
        AxisHint::Peak { center, width } => {
            let lo = (center - 10.0 * width).max(0.0);
            let hi = center + 10.0 * width;
            let mut parts = vec![integrate_interval(&f, lo, hi, settings)?];
            if lo > 0.0 {
                parts.push(integrate_interval(&f, 0.0, lo, settings)?);
            }
            parts.push(integrate_tail(&f, hi, hi, settings)?);
            Ok(Integral {
                value: parts.iter().map(|p| p.value).sum(),
                error: parts.iter().map(|p| p.error).sum(),
                subdivisions: parts.iter().map(|p| p.subdivisions).sum(),
            })
        }
    }
}

/// Integrates `g(theta)` over the positive orthant, nesting one-dimensional
/// rules with the innermost axis last.
fn integrate_posterior(
    g: &dyn Fn(&[f64]) -> f64,
    axes: &[AxisHint],
    settings: &QuadratureSettings,
) -> Result<Integral> {
    match axes {
        [a] => integrate_axis(|x| g(&[x]), *a, settings),
        [a, b] => {
            let inner = tighter(settings);
            let failure = RefCell::new(None);
            let outer = integrate_axis(
                |x| match integrate_axis(|y| g(&[x, y]), *b, &inner) {
                    Ok(r) => r.value,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                },
                *a,
                settings,
            );
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            outer
        }
        _ => Err(domain("parameter dimension must be 1 or 2")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unnormalized_posterior_is_rejected() {
        let err =
            PredictiveModel::one_parameter(|z, l| l * (-l * z).exp(), |l| 2.0 * (-l).exp()).build();
        assert!(matches!(err, Err(CfarError::PosteriorNotNormalized { .. })));
    }

    #[test]
    fn nonnegative_inputs_only() {
        let m = PredictiveModel::cell_averaging(4, 3.0).unwrap();
        assert!(m.density(-1.0).is_err());
        assert!(m.pfa(f64::NAN).is_err());
        assert!(PredictiveModel::cell_averaging(4, 0.0).is_err());
    }

    #[test]
    fn pfa_at_zero_is_one() {
        let m = PredictiveModel::cell_averaging(5, 2.0).unwrap();
        assert_relative_eq!(m.pfa(0.0).unwrap(), 1.0, max_relative = 1e-10);
    }

    #[test]
    fn bad_hints_are_rejected() {
        let b = PredictiveModel::one_parameter(|z, l| l * (-l * z).exp(), |l| (-l).exp())
            .axis_hint(0, AxisHint::Scale(-1.0));
        assert!(b.build().is_err());
    }
}
