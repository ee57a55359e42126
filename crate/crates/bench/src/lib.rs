//! Shared fixtures for the benchmarks.

use bayescfar::{ClutterModel, DetectorFamily, DetectorSpec, Scenario};

/// `(N, k)` pairs spanning the cheap and heavily cancelling ends of the
/// alternating sum.
pub const OS_CASES: [(usize, usize); 4] = [(8, 1), (16, 12), (32, 24), (32, 32)];

/// Thresholds over the order statistic, as multiples of `t`.
pub const TAU_RATIOS: [f64; 3] = [1.0, 10.0, 40.0];

pub fn scenario(family: DetectorFamily, n: usize, k: usize, trials: u64) -> Scenario {
    let spec = DetectorSpec::new(family, n, k, 0.01).expect("valid detector");
    Scenario::new(
        ClutterModel::exponential(1.0).expect("valid rate"),
        spec,
        trials,
        1,
    )
    .expect("valid scenario")
}
