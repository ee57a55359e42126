use serde::{Deserialize, Serialize};

use crate::error::{domain, CfarError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootSettings {
    /// Relative width of the final bracket.
    pub tolerance_on_tau: f64,
    /// Cap on bracket doublings, and separately on bisection steps.
    pub max_iterations: usize,
}

impl Default for RootSettings {
    fn default() -> Self {
        Self {
            tolerance_on_tau: 1e-12,
            max_iterations: 200,
        }
    }
}

fn checked(value: f64) -> Result<f64> {
    if value.is_nan() {
        Err(CfarError::NonFinite {
            context: "root-finder objective",
            value,
        })
    } else {
        Ok(value)
    }
}

/// Finds `tau >= 0` with `f(tau) = target` for a strictly decreasing `f`.
///
/// The bracket starts at `[0, 1]` and the upper end doubles until `f` drops
/// to or below `target`; bisection then shrinks it to the relative tolerance.
pub fn solve_monotone_decreasing<F>(mut f: F, target: f64, settings: &RootSettings) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(settings.tolerance_on_tau > 0.0) {
        return Err(domain("root tolerance must be positive"));
    }
    if !target.is_finite() {
        return Err(domain(format!("root target must be finite, got {target}")));
    }
    let at_zero = checked(f(0.0)?)?;
    if at_zero < target {
        return Err(CfarError::TargetUnreachable { target, at_zero });
    }
    if at_zero == target {
        return Ok(0.0);
    }

    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut expansions = 0;
    loop {
        let v = checked(f(hi)?)?;
        if v == target {
            return Ok(hi);
        }
        if v < target {
            break;
        }
        expansions += 1;
        if expansions > settings.max_iterations || !hi.is_finite() {
            return Err(CfarError::NoRoot {
                iterations: expansions,
            });
        }
        lo = hi;
        hi *= 2.0;
    }

    for _ in 0..settings.max_iterations {
        if hi - lo <= settings.tolerance_on_tau * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = checked(f(mid)?)?;
        if v > target {
            lo = mid;
        } else if v < target {
            hi = mid;
        } else {
            return Ok(mid);
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reciprocal() {
        let tau = solve_monotone_decreasing(|x| Ok(1.0 / (1.0 + x)), 0.5, &RootSettings::default())
            .unwrap();
        assert_relative_eq!(tau, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn exponential() {
        let tau =
            solve_monotone_decreasing(|x| Ok((-x).exp()), 0.1, &RootSettings::default()).unwrap();
        assert_relative_eq!(tau, 10f64.ln(), max_relative = 1e-11);
    }

    #[test]
    fn os_pfa_n2_k2() {
        let pfa = |x: f64| Ok(2.0 * (1.0 / (x + 1.0) - 1.0 / (x + 2.0)));
        let tau = solve_monotone_decreasing(pfa, 1.0 / 3.0, &RootSettings::default()).unwrap();
        assert_relative_eq!(tau, 1.0, max_relative = 1e-11);
    }

    #[test]
    fn unreachable_target() {
        let err = solve_monotone_decreasing(|x| Ok(1.0 / (1.0 + x)), 2.0, &RootSettings::default());
        assert!(matches!(err, Err(CfarError::TargetUnreachable { .. })));
    }

    #[test]
    fn bracket_expansion_limit() {
        let settings = RootSettings {
            max_iterations: 5,
            ..Default::default()
        };
        // reaches 1e-6 only near x = 1e6, beyond 2^5
        let err = solve_monotone_decreasing(|x| Ok(1.0 / (1.0 + x)), 1e-6, &settings);
        assert!(matches!(err, Err(CfarError::NoRoot { .. })));
    }

    #[test]
    fn target_at_zero() {
        let tau = solve_monotone_decreasing(|x| Ok(1.0 / (1.0 + x)), 1.0, &RootSettings::default())
            .unwrap();
        assert_eq!(tau, 0.0);
    }

    #[test]
    fn tiny_root_below_initial_bracket() {
        let tau = solve_monotone_decreasing(
            |x| Ok(1.0 / (1.0 + x)),
            1.0 / (1.0 + 1e-9),
            &RootSettings::default(),
        )
        .unwrap();
        assert_relative_eq!(tau, 1e-9, max_relative = 1e-6);
    }
}
