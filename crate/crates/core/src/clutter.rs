//! Clutter intensity models, clutter range profile windows and order
//! statistics.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numerics::binom;

/// Draw from `(0, 1]`, so that `-ln(u)` and `u^(-1/a)` stay finite.
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Exponentially distributed intensity with rate `lambda` (mean `1/lambda`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialClutter {
    rate: f64,
}

impl ExponentialClutter {
    pub fn new(rate: f64) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(domain(format!(
                "exponential rate must be positive, got {rate}"
            )));
        }
        Ok(Self { rate })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn pdf(&self, z: f64) -> f64 {
        if z < 0.0 {
            0.0
        } else {
            self.rate * (-self.rate * z).exp()
        }
    }

    pub fn cdf(&self, z: f64) -> f64 {
        if z <= 0.0 {
            0.0
        } else {
            -(-self.rate * z).exp_m1()
        }
    }

    /// Inverse-CDF transform of a uniform draw on `(0, 1]`.
    pub fn from_uniform(&self, u: f64) -> f64 {
        -u.ln() / self.rate
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.from_uniform(open_unit(rng))
    }
}

/// Pareto Type II (Lomax) intensity with survival `(1 + z/scale)^(-shape)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParetoClutter {
    shape: f64,
    scale: f64,
}

impl ParetoClutter {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0) || !shape.is_finite() || !(scale > 0.0) || !scale.is_finite() {
            return Err(domain(format!(
                "Pareto shape and scale must be positive, got ({shape}, {scale})"
            )));
        }
        Ok(Self { shape, scale })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn pdf(&self, z: f64) -> f64 {
        if z < 0.0 {
            0.0
        } else {
            self.shape / self.scale * (1.0 + z / self.scale).powf(-self.shape - 1.0)
        }
    }

    pub fn cdf(&self, z: f64) -> f64 {
        if z <= 0.0 {
            0.0
        } else {
            -(-self.shape * (z / self.scale).ln_1p()).exp_m1()
        }
    }

    /// Mean `scale / (shape - 1)`; infinite for `shape <= 1`.
    pub fn mean(&self) -> f64 {
        if self.shape > 1.0 {
            self.scale / (self.shape - 1.0)
        } else {
            f64::INFINITY
        }
    }

    pub fn from_uniform(&self, u: f64) -> f64 {
        self.scale * (-u.ln() / self.shape).exp_m1()
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.from_uniform(open_unit(rng))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClutterModel {
    Exponential(ExponentialClutter),
    Pareto(ParetoClutter),
}

impl ClutterModel {
    pub fn exponential(rate: f64) -> Result<Self> {
        ExponentialClutter::new(rate).map(ClutterModel::Exponential)
    }

    pub fn pareto(shape: f64, scale: f64) -> Result<Self> {
        ParetoClutter::new(shape, scale).map(ClutterModel::Pareto)
    }

    pub fn pdf(&self, z: f64) -> f64 {
        match self {
            ClutterModel::Exponential(m) => m.pdf(z),
            ClutterModel::Pareto(m) => m.pdf(z),
        }
    }

    pub fn cdf(&self, z: f64) -> f64 {
        match self {
            ClutterModel::Exponential(m) => m.cdf(z),
            ClutterModel::Pareto(m) => m.cdf(z),
        }
    }

    pub fn from_uniform(&self, u: f64) -> f64 {
        match self {
            ClutterModel::Exponential(m) => m.from_uniform(u),
            ClutterModel::Pareto(m) => m.from_uniform(u),
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.from_uniform(open_unit(rng))
    }

    /// `count` i.i.d. draws.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(domain("sample count must be at least 1"));
        }
        Ok((0..count).map(|_| self.draw(rng)).collect())
    }

    pub fn fill<R: Rng + ?Sized>(&self, out: &mut [f64], rng: &mut R) {
        for x in out {
            *x = self.draw(rng);
        }
    }

    pub(crate) fn describe(&self) -> String {
        match self {
            ClutterModel::Exponential(m) => format!("exponential(rate={})", m.rate),
            ClutterModel::Pareto(m) => format!("pareto(shape={},scale={})", m.shape, m.scale),
        }
    }
}

/// The `N` reference cells surrounding the cell under test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrpWindow {
    samples: Vec<f64>,
}

impl CrpWindow {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(domain("window must hold at least one sample"));
        }
        if let Some((i, x)) = samples
            .iter()
            .enumerate()
            .find(|(_, x)| !(x.is_finite() && **x >= 0.0))
        {
            return Err(domain(format!(
                "window sample {i} is {x}; samples must be finite and nonnegative"
            )));
        }
        Ok(Self { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn kth_order_statistic(&self, k: usize) -> Result<OsStatistic> {
        let n = self.len();
        if k == 0 || k > n {
            return Err(domain(format!("order statistic index {k} outside 1..={n}")));
        }
        let mut scratch = self.samples.clone();
        Ok(OsStatistic {
            value: kth_smallest_in_place(&mut scratch, k),
            index: k,
            window_size: n,
        })
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sum(&self) -> f64 {
        window_sum(&self.samples)
    }
}

/// Sum of the window samples.
pub fn window_sum(samples: &[f64]) -> f64 {
    samples.iter().sum()
}

/// k-th smallest element (1-based), reordering `samples`. Duplicates count
/// separately.
pub fn kth_smallest_in_place(samples: &mut [f64], k: usize) -> f64 {
    debug_assert!(k >= 1 && k <= samples.len());
    *samples.select_nth_unstable_by(k - 1, f64::total_cmp).1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OsStatistic {
    pub value: f64,
    pub index: usize,
    pub window_size: usize,
}

/// Density of the k-th order statistic of `n` i.i.d. exponential(`rate`)
/// samples, evaluated at `t`.
pub fn os_density(t: f64, n: usize, k: usize, rate: f64) -> Result<f64> {
    if k == 0 || k > n {
        return Err(domain(format!("order statistic index {k} outside 1..={n}")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!(
            "order statistic value must be nonnegative, got {t}"
        )));
    }
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(domain(format!(
            "exponential rate must be positive, got {rate}"
        )));
    }
    let lt = rate * t;
    let tail = -lt * (n - k + 1) as f64;
    if k == 1 {
        return Ok(rate * n as f64 * tail.exp());
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let c = binom(n as u64, k as u64)?;
    let ln = rate.ln() + (k as f64).ln() + c.ln() + (k - 1) as f64 * (-(-lt).exp_m1()).ln() + tail;
    Ok(ln.exp())
}
