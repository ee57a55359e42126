use bayescfar::detectors::{
    bayes_os_decide, bayes_os_threshold, ca_cfar_decide, decide, min_cfar_decide, threshold,
};
use bayescfar::{CrpWindow, DetectorFamily, DetectorSpec, Verdict};
use proptest::prelude::*;

fn arb_case() -> impl Strategy<Value = (Vec<f64>, f64, usize, f64)> {
    (1usize..=32)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(0.01f64..10.0, n),
                0.0f64..200.0,
                1usize..=n,
                -5.0f64..-0.1,
            )
        })
        .prop_map(|(w, z0, k, lp)| (w, z0, k, 10f64.powf(lp)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn pfa_comparison_equals_threshold_comparison((w, z0, k, pfa) in arb_case()) {
        let n = w.len();
        let spec = DetectorSpec::new(DetectorFamily::BayesOs, n, k, pfa).unwrap();
        let window = CrpWindow::new(w).unwrap();
        let t = window.kth_order_statistic(k).unwrap().value;
        let tau = bayes_os_threshold(&spec, t).unwrap();
        let by_pfa = bayes_os_decide(z0, &window, &spec).unwrap().verdict;
        let by_threshold = if z0 > tau { Verdict::H1 } else { Verdict::H0 };
        // a disagreement can only sit inside the root tolerance
        if by_pfa != by_threshold {
            prop_assert!((z0 - tau).abs() <= 1e-10 * tau, "z0={} tau={}", z0, tau);
        }
    }

    #[test]
    fn k1_bayes_os_is_min_cfar((w, z0, _k, pfa) in arb_case()) {
        let n = w.len();
        let window = CrpWindow::new(w).unwrap();
        let bayes = DetectorSpec::new(DetectorFamily::BayesOs, n, 1, pfa).unwrap();
        let min = DetectorSpec::new(DetectorFamily::MinCfar, n, 1, pfa).unwrap();
        prop_assert_eq!(
            bayes_os_decide(z0, &window, &bayes).unwrap().verdict,
            min_cfar_decide(z0, &window, &min).unwrap().verdict
        );
    }

    #[test]
    fn verdicts_are_scale_equivariant((w, z0, k, pfa) in arb_case(), log_c in -3.0f64..3.0) {
        let c = 10f64.powf(log_c);
        let n = w.len();
        let window = CrpWindow::new(w.clone()).unwrap();
        let scaled = CrpWindow::new(w.iter().map(|x| x * c).collect()).unwrap();
        for spec in [
            DetectorSpec::new(DetectorFamily::BayesOs, n, k, pfa).unwrap(),
            DetectorSpec::new(DetectorFamily::MinCfar, n, 1, pfa).unwrap(),
            DetectorSpec::new(DetectorFamily::CaCfar, n, 1, pfa).unwrap(),
        ] {
            prop_assert_eq!(
                decide(z0, &window, &spec).unwrap().verdict,
                decide(z0 * c, &scaled, &spec).unwrap().verdict,
                "{}", spec.family()
            );
        }
        let g = |w: &CrpWindow| Ok(w.kth_order_statistic(1 + w.len() / 2)?.value);
        prop_assert_eq!(
            bayescfar::detectors::custom_g_decide(z0, &window, 3.0, g).unwrap().verdict,
            bayescfar::detectors::custom_g_decide(z0 * c, &scaled, 3.0, g).unwrap().verdict
        );
    }

    #[test]
    fn ca_cfar_threshold_is_multiplier_times_sum((w, z0, _k, pfa) in arb_case()) {
        let n = w.len();
        let spec = DetectorSpec::new(DetectorFamily::CaCfar, n, 1, pfa).unwrap();
        let window = CrpWindow::new(w).unwrap();
        let d = ca_cfar_decide(z0, &window, &spec).unwrap();
        prop_assert_eq!(d.comparison_value, threshold(&spec, window.sum()).unwrap());
    }
}
