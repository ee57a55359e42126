use bayescfar::numerics::{integrate_semi_infinite_scaled, QuadratureSettings};
use bayescfar::predictive::{cell_averaging_pfa, AxisHint, EvaluationMethod, CANCELLATION_LIMIT};
use bayescfar::{OsPredictive, PredictiveModel};
use proptest::prelude::*;
use statrs::distribution::{Continuous, Gamma};

fn os(n: usize, k: usize, t: f64) -> OsPredictive {
    OsPredictive::new(n, k, t).unwrap()
}

#[test]
fn predictive_density_normalizes() {
    let settings = QuadratureSettings::default();
    for n in 1..=32 {
        for k in 1..=n {
            for t in [0.1, 1.0, 10.0] {
                let p = os(n, k, t);
                let r = integrate_semi_infinite_scaled(|z| p.density(z).unwrap(), t, &settings)
                    .unwrap();
                assert!(
                    (r.value - 1.0).abs() < 1e-9,
                    "N={n} k={k} t={t}: {}",
                    r.value
                );
            }
        }
    }
}

#[test]
fn density_quadrature_agrees_with_closed_form() {
    for (n, k, t, z) in [
        (2, 2, 1.0, 1.0),
        (8, 5, 0.7, 2.0),
        (16, 12, 3.0, 0.4),
        (24, 6, 1.0, 10.0),
    ] {
        let p = os(n, k, t);
        let a = p.density_evaluation(z).unwrap();
        assert_eq!(a.method, EvaluationMethod::ClosedForm);
        let b = p.density_quadrature(z).unwrap();
        assert!(((a.value - b) / b).abs() < 1e-10, "N={n} k={k}");
    }
}

#[test]
fn pfa_strictly_decreasing_on_grid() {
    for (n, k) in [(4, 1), (8, 4), (16, 12), (32, 28), (32, 32)] {
        let p = os(n, k, 1.5);
        let mut prev = p.pfa(0.0).unwrap();
        for i in 1..200 {
            let tau = 0.05 * i as f64 * (1.0 + i as f64 / 20.0);
            let v = p.pfa(tau).unwrap();
            assert!(v < prev, "N={n} k={k} tau={tau}: {v} !< {prev}");
            prev = v;
        }
        for z in [0.0, 0.5, 5.0, 50.0] {
            assert!(p.density(z).unwrap() > 0.0);
        }
    }
}

#[test]
fn pfa_scale_invariance_is_exact_for_powers_of_two() {
    for (n, k, t, tau) in [(16, 12, 1.3, 7.1), (5, 2, 0.2, 0.9), (32, 9, 4.0, 33.0)] {
        let base = os(n, k, t).pfa(tau).unwrap();
        for c in [0.125, 2.0, 1024.0] {
            assert_eq!(os(n, k, c * t).pfa(c * tau).unwrap(), base);
        }
    }
}

#[test]
fn generic_narrow_posterior_recovers_plugin_density() {
    let shape = 1e6;
    let rate = shape / 2.0; // mean 2
    let gamma = Gamma::new(shape, rate).unwrap();
    let model = PredictiveModel::one_parameter(|z, l| l * (-l * z).exp(), move |l| gamma.pdf(l))
        .axis_hint(
            0,
            AxisHint::Peak {
                center: 2.0,
                width: 2.0 / 1000.0,
            },
        )
        .build()
        .unwrap();
    for z in [0.1, 1.0] {
        let want = 2.0 * (-2.0f64 * z).exp();
        assert!((model.density(z).unwrap() - want).abs() < 1e-3);
    }
}

#[test]
fn generic_two_parameter_degenerate_posterior() {
    // Pareto type II likelihood, posterior a product of two narrow Gammas.
    let (alpha, beta) = (3.0, 2.0);
    let ga = Gamma::new(1e6, 1e6 / alpha).unwrap();
    let gb = Gamma::new(1e6, 1e6 / beta).unwrap();
    let lik = |z: f64, a: f64, b: f64| a / b * (1.0 + z / b).powf(-a - 1.0);
    let model = PredictiveModel::two_parameter(lik, move |a, b| ga.pdf(a) * gb.pdf(b))
        .axis_hint(
            0,
            AxisHint::Peak {
                center: alpha,
                width: alpha / 1000.0,
            },
        )
        .axis_hint(
            1,
            AxisHint::Peak {
                center: beta,
                width: beta / 1000.0,
            },
        )
        .observation_scale(beta)
        // shape 1e6 Gamma densities carry ~1e-9 relative noise
        .integration(QuadratureSettings {
            relative_tolerance: 1e-7,
            ..QuadratureSettings::default()
        })
        .build()
        .unwrap();
    for z in [0.1, 1.0, 4.0] {
        assert!(
            (model.density(z).unwrap() - lik(z, alpha, beta)).abs() < 1e-3,
            "z={z}"
        );
    }
    let want = (1.0f64 + 1.5 / beta).powf(-alpha);
    assert!((model.pfa(1.5).unwrap() - want).abs() < 1e-3);
}

#[test]
fn generic_cell_averaging_density_matches_conjugate_form() {
    for (n, s) in [(1usize, 0.7), (4, 3.0), (16, 20.0)] {
        let model = PredictiveModel::cell_averaging(n, s).unwrap();
        for z in [0.0, 0.3, 2.0, 15.0] {
            // N S^N (z + S)^-(N+1)
            let want = n as f64 * s.powi(n as i32) * (z + s).powi(-(n as i32) - 1);
            let got = model.density(z).unwrap();
            assert!(((got - want) / want).abs() < 1e-9, "n={n} s={s} z={z}");
        }
    }
}

#[test]
fn generic_pfa_without_survival_uses_nested_quadrature() {
    let (n, s) = (6usize, 4.5f64);
    let shape = n as f64;
    let ln_norm = shape * s.ln() - (1..n).map(|i| (i as f64).ln()).sum::<f64>();
    let model = PredictiveModel::one_parameter(
        |z, l| l * (-l * z).exp(),
        move |l| (ln_norm + (shape - 1.0) * l.ln() - l * s).exp(),
    )
    .axis_hint(0, AxisHint::Scale(shape / s))
    .observation_scale(s / shape)
    .build()
    .unwrap();
    assert!(!model.has_survival());
    for tau in [0.0, 0.5, 3.0, 12.0] {
        let want = (1.0 + tau / s).powi(-(n as i32));
        let got = model.pfa(tau).unwrap();
        assert!(
            ((got - want) / want).abs() < 1e-8,
            "tau={tau}: {got} vs {want}"
        );
    }
}

#[test]
fn generic_order_statistic_model_matches_closed_form() {
    for (n, k, t) in [(4, 1, 1.0), (8, 3, 0.5), (16, 12, 2.0), (32, 20, 1.0)] {
        let p = os(n, k, t);
        let model = PredictiveModel::order_statistic(&p).unwrap();
        for tau in [0.0, 0.7, 4.0, 25.0] {
            let a = model.pfa(tau).unwrap();
            let b = p.pfa(tau).unwrap();
            assert!(
                ((a - b) / b).abs() < 1e-8,
                "N={n} k={k} tau={tau}: {a} vs {b}"
            );
        }
        for z in [0.2, 3.0] {
            let a = model.density(z).unwrap();
            let b = p.density(z).unwrap();
            assert!(((a - b) / b).abs() < 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn oracle_equivalence(n in 1usize..=32, kf in 0.0f64..1.0, t in 0.05f64..20.0, r in 0.0f64..30.0) {
        let k = 1 + ((n as f64 * kf) as usize).min(n - 1);
        let p = os(n, k, t);
        let tau = r * t;
        let e = p.pfa_evaluation(tau).unwrap();
        let q = p.pfa_quadrature(tau).unwrap();
        prop_assert!(((e.value - q) / q).abs() < 1e-8);
        if e.method == EvaluationMethod::Quadrature {
            prop_assert!(e.cancellation > CANCELLATION_LIMIT);
        }
    }

    #[test]
    fn scale_invariance(n in 1usize..=32, kf in 0.0f64..1.0, t in 0.05f64..20.0, r in 0.0f64..30.0, log_c in -3.0f64..3.0) {
        let k = 1 + ((n as f64 * kf) as usize).min(n - 1);
        let c = 10f64.powf(log_c);
        let tau = r * t;
        let a = os(n, k, t).pfa(tau).unwrap();
        let b = os(n, k, c * t).pfa(c * tau).unwrap();
        prop_assert!(((a - b) / a).abs() < 1e-12);
    }

    #[test]
    fn cell_averaging_generic_equals_closed_form(n in 1usize..=16, s in 0.1f64..50.0, r in 0.0f64..5.0) {
        let model = PredictiveModel::cell_averaging(n, s).unwrap();
        let tau = r * s;
        let want = cell_averaging_pfa(n, s, tau);
        prop_assert!((model.pfa(tau).unwrap() - want).abs() < 1e-8);
    }
}
