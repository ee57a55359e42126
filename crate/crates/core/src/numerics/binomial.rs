use crate::error::{domain, Result};

/// Largest `n` for which every `C(n, r)` fits in a `u64`.
pub const EXACT_BINOMIAL_LIMIT: u64 = 62;

/// A binomial coefficient, exact while it fits in 64 bits and stored as its
/// natural logarithm beyond that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Binomial {
    Exact(u64),
    /// Natural logarithm of the coefficient.
    LogDomain(f64),
}

impl Binomial {
    pub fn is_exact(&self) -> bool {
        matches!(self, Binomial::Exact(_))
    }

    /// Value as a float. Overflows to `inf` for coefficients beyond `f64::MAX`.
    pub fn to_f64(self) -> f64 {
        match self {
            Binomial::Exact(v) => v as f64,
            Binomial::LogDomain(l) => l.exp(),
        }
    }

    pub fn ln(self) -> f64 {
        match self {
            Binomial::Exact(v) => (v as f64).ln(),
            Binomial::LogDomain(l) => l,
        }
    }
}

/// `C(n, r)`: exact for `n <= 62`, log-domain above.
pub fn binom(n: u64, r: u64) -> Result<Binomial> {
    if r > n {
        return Err(domain(format!("binomial C({n}, {r}) requires r <= n")));
    }
    let r = r.min(n - r);
    if n <= EXACT_BINOMIAL_LIMIT {
        // c * (n - r + i) is always divisible by i: it is i * C(n - r + i, i).
        let mut c: u128 = 1;
        for i in 1..=r as u128 {
            c = c * (n as u128 - r as u128 + i) / i;
        }
        Ok(Binomial::Exact(c as u64))
    } else {
        let ln = (1..=r)
            .map(|i| ((n - r + i) as f64 / i as f64).ln())
            .sum::<f64>();
        Ok(Binomial::LogDomain(ln))
    }
}

/// `ln(n!)` by direct summation. Used for integer-shape Gamma normalizers.
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}
