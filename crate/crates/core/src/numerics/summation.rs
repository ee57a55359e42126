use crate::error::{CfarError, Result};

use super::{binom, Binomial};

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternatingSum {
    pub value: f64,
    /// `max_i |C(k-1,i) term(i)| / |value|`, floored at 1. Infinite when the
    /// sum cancels to exactly zero.
    pub cancellation: f64,
}

/// `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `a * b = p + e` exactly (barring underflow).
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// `C(n, r)` as an unevaluated sum `hi + lo`, exact while `n <= 62`.
fn split_binomial(n: u64, r: u64) -> Result<(f64, f64)> {
    Ok(match binom(n, r)? {
        Binomial::Exact(c) => {
            let hi = c as f64;
            // hi is within half an ulp of c, so the difference fits an i64.
            let lo = (c as i128 - hi as i128) as f64;
            (hi, lo)
        }
        b @ Binomial::LogDomain(_) => (b.to_f64(), 0.0),
    })
}

/// `sum_{i=0}^{k-1} (-1)^i C(k-1, i) term(i)` with compensated summation.
pub fn alternating_binomial_sum<F>(k: usize, term: F) -> Result<AlternatingSum>
where
    F: Fn(usize) -> f64,
{
    alternating_binomial_sum_split(k, |i| (term(i), 0.0))
}

/// As [`alternating_binomial_sum`], for terms given as unevaluated pairs
/// `hi + lo`. Each product `C(k-1, i) * term(i)` is formed with error-free
/// transformations, so the only rounding left is in the final compensated
/// sum; the relative error stays near `cancellation * 1e-32`.
pub fn alternating_binomial_sum_split<F>(k: usize, term: F) -> Result<AlternatingSum>
where
    F: Fn(usize) -> (f64, f64),
{
    if k == 0 {
        return Err(crate::error::domain(
            "alternating binomial sum needs k >= 1",
        ));
    }
    let m = (k - 1) as u64;
    let mut acc = CompensatedSum::new();
    let mut largest = 0.0f64;
    for i in 0..k {
        let (t_hi, t_lo) = term(i);
        if !t_hi.is_finite() || !t_lo.is_finite() {
            return Err(CfarError::NonFinite {
                context: "alternating sum term",
                value: t_hi + t_lo,
            });
        }
        let (c_hi, c_lo) = split_binomial(m, i as u64)?;
        let (p, e) = two_prod(c_hi, t_hi);
        let e = e + c_hi * t_lo + c_lo * t_hi;
        largest = largest.max(p.abs());
        if i % 2 == 0 {
            acc.add(p);
            acc.compensation += e;
        } else {
            acc.add(-p);
            acc.compensation -= e;
        }
    }
    let value = acc.value();
    let cancellation = if value == 0.0 {
        if largest == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        (largest / value.abs()).max(1.0)
    };
    Ok(AlternatingSum {
        value,
        cancellation,
    })
}
