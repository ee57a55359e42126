use bayescfar::numerics::{alternating_binomial_sum, solve_monotone_decreasing, RootSettings};
use bayescfar::OsPredictive;
use proptest::prelude::*;

/// Minimal exact rational for hand-checkable sums.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Frac(i128, i128);

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Frac {
    fn new(n: i128, d: i128) -> Self {
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Frac(s * n / g, s * d / g)
    }
    fn add(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }
    fn to_f64(self) -> f64 {
        self.0 as f64 / self.1 as f64
    }
}

fn choose(n: i128, r: i128) -> i128 {
    (0..r).fold(1, |c, i| c * (n - i) / (i + 1))
}

#[test]
fn alternating_sum_matches_exact_rationals() {
    for k in 1..=6usize {
        for a in 1..=12i128 {
            let exact = (0..k as i128).fold(Frac(0, 1), |acc, i| {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                acc.add(Frac::new(sign * choose(k as i128 - 1, i), a + i))
            });
            let s = alternating_binomial_sum(k, |i| 1.0 / (a as f64 + i as f64)).unwrap();
            let want = exact.to_f64();
            // inputs are rounded, so the error bound grows with the cancellation
            let bound = 4.0 * f64::EPSILON * s.cancellation;
            assert!(
                ((s.value - want) / want).abs() < bound,
                "k={k} a={a}: {} vs {want}",
                s.value
            );
            assert!(s.cancellation >= 1.0);

            let exact_sq = (0..k as i128).fold(Frac(0, 1), |acc, i| {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                acc.add(Frac::new(
                    sign * choose(k as i128 - 1, i),
                    (a + i) * (a + i),
                ))
            });
            let s = alternating_binomial_sum(k, |i| (a as f64 + i as f64).powi(-2)).unwrap();
            let want = exact_sq.to_f64();
            let bound = 4.0 * f64::EPSILON * s.cancellation;
            assert!(
                ((s.value - want) / want).abs() < bound,
                "k={k} a={a} squared"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cancellation_estimate_at_least_one(
        k in 1usize..40,
        coeffs in proptest::collection::vec(-10.0f64..10.0, 40),
    ) {
        let s = alternating_binomial_sum(k, |i| coeffs[i]).unwrap();
        prop_assert!(s.cancellation >= 1.0);
    }

    #[test]
    fn root_recovers_pfa_target(
        n in 2usize..=32,
        k_frac in 0.0f64..1.0,
        t in 0.01f64..100.0,
        log_p in -6.0f64..-0.05,
    ) {
        let k = 1 + ((n as f64 * k_frac) as usize).min(n - 1);
        let os = OsPredictive::new(n, k, t).unwrap();
        let target = 10f64.powf(log_p);
        let tau = solve_monotone_decreasing(|x| os.pfa(x), target, &RootSettings::default()).unwrap();
        let back = os.pfa(tau).unwrap();
        prop_assert!(((back - target) / target).abs() < 1e-9, "N={} k={} t={} tau={} back={}", n, k, t, tau, back);
    }
}
