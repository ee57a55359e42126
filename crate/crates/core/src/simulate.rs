//! Monte Carlo estimation of false alarm and detection probabilities.
//!
//! Trials are cut into blocks of [`BLOCK_TRIALS`]. Block `b` draws from
//! ChaCha stream `b` of the scenario seed and the per-block detection counts
//! are summed, so a report depends on the seed only, never on how many
//! workers ran the blocks or in which order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clutter::{ClutterModel, CrpWindow};
use crate::detectors::{
    decide_with_statistic, Decision, DecisionPath, DetectorFamily, DetectorSpec, Verdict,
};
use crate::error::{config, domain, CfarError, Result};
use crate::rng::StreamSeed;

pub const BLOCK_TRIALS: u64 = 4096;

/// Width of the reported Wilson interval in standard errors (99.7 %).
pub const WILSON_Z: f64 = 3.0;

/// Consecutive degenerate draws tolerated before a trial is abandoned.
const MAX_REDRAWS: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    /// Exponentially distributed target-plus-clutter power.
    Swerling1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetModel {
    pub kind: TargetKind,
    /// Mean target-plus-clutter power over mean clutter power, minus one.
    pub snr_linear: f64,
}

impl TargetModel {
    pub fn swerling1(snr_linear: f64) -> Result<Self> {
        if !(snr_linear > 0.0) || !snr_linear.is_finite() {
            return Err(domain(format!("SNR must be positive, got {snr_linear}")));
        }
        Ok(Self {
            kind: TargetKind::Swerling1,
            snr_linear,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub clutter: ClutterModel,
    pub detector: DetectorSpec,
    pub trials: u64,
    pub seed: u64,
    pub target: Option<TargetModel>,
}

impl Scenario {
    pub fn new(
        clutter: ClutterModel,
        detector: DetectorSpec,
        trials: u64,
        seed: u64,
    ) -> Result<Self> {
        let s = Self {
            clutter,
            detector,
            trials,
            seed,
            target: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_target(mut self, target: TargetModel) -> Result<Self> {
        self.target = Some(target);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(config("trials must be at least 1"));
        }
        if self.detector.family() == DetectorFamily::CustomG {
            return Err(config("custom_g detectors cannot be simulated"));
        }
        if let Some(t) = self.target {
            TargetModel::swerling1(t.snr_linear)?;
            if !matches!(self.clutter, ClutterModel::Exponential(_)) {
                return Err(config(
                    "Swerling I targets are only supported in exponential clutter",
                ));
            }
        }
        Ok(())
    }

    /// Canonical one-line description, stable across runs.
    pub fn digest(&self) -> String {
        let target = match self.target {
            None => "none".to_string(),
            Some(t) => format!("swerling1(snr={})", t.snr_linear),
        };
        format!(
            "detector={};n={};k={};design_pfa={};clutter={};target={};trials={};seed={}",
            self.detector.family(),
            self.detector.n(),
            self.detector.k(),
            self.detector.design_pfa(),
            self.clutter.describe(),
            target,
            self.trials,
            self.seed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub estimate: f64,
    pub trials: u64,
    pub detections: u64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub seed: u64,
    pub scenario_digest: String,
    /// Trials redrawn because the window carried no clutter information.
    pub degenerate_redraws: u64,
}

impl SimReport {
    /// Binomial standard error at the estimate.
    pub fn standard_error(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.trials as f64).sqrt()
    }

    /// Whether `p` lies inside the reported interval.
    pub fn covers(&self, p: f64) -> bool {
        self.wilson_low <= p && p <= self.wilson_high
    }
}

/// Wilson score interval for `successes` out of `trials` at `z` standard
/// errors.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = (center - half).max(0.0).min(p);
    let hi = (center + half).min(1.0).max(p);
    (lo, hi)
}

/// One simulated cell: the reference window and the cell under test.
#[derive(Debug, Clone, Copy)]
pub struct Trial<'a> {
    pub index: u64,
    pub window: &'a [f64],
    pub z0: f64,
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    detections: u64,
    redraws: u64,
}

/// Thread pool size for the trial blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Runner {
    workers: usize,
}

impl Default for Runner {
    /// One worker per available core.
    fn default() -> Self {
        let workers = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1);
        Self { workers }
    }
}

impl Runner {
    pub fn new(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(config("worker count must be at least 1"));
        }
        Ok(Self { workers })
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    fn tally(&self, scenario: &Scenario) -> Result<Tally> {
        scenario.validate()?;
        let blocks = scenario.trials.div_ceil(BLOCK_TRIALS);
        let seed = StreamSeed(scenario.seed);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| config(format!("cannot start worker pool: {e}")))?;
        let tallies: Vec<Tally> = pool.install(|| {
            (0..blocks)
                .into_par_iter()
                .map(|b| {
                    let count = BLOCK_TRIALS.min(scenario.trials - b * BLOCK_TRIALS);
                    run_block(scenario, seed, b, count, &mut |_, _| {})
                })
                .collect::<Result<Vec<_>>>()
        })?;
        Ok(tallies.iter().fold(Tally::default(), |acc, t| Tally {
            detections: acc.detections + t.detections,
            redraws: acc.redraws + t.redraws,
        }))
    }

    fn report(&self, scenario: &Scenario) -> Result<SimReport> {
        let tally = self.tally(scenario)?;
        let (wilson_low, wilson_high) =
            wilson_interval(tally.detections, scenario.trials, WILSON_Z);
        Ok(SimReport {
            estimate: tally.detections as f64 / scenario.trials as f64,
            trials: scenario.trials,
            detections: tally.detections,
            wilson_low,
            wilson_high,
            seed: scenario.seed,
            scenario_digest: scenario.digest(),
            degenerate_redraws: tally.redraws,
        })
    }

    /// Fraction of clutter-only trials declared a target.
    pub fn estimate_pfa(&self, scenario: &Scenario) -> Result<SimReport> {
        if scenario.target.is_some() {
            return Err(config(
                "false alarm estimation takes a scenario without a target",
            ));
        }
        self.report(scenario)
    }

    /// Fraction of target-bearing trials declared a target.
    pub fn estimate_pd(&self, scenario: &Scenario) -> Result<SimReport> {
        if scenario.target.is_none() {
            return Err(config("detection estimation needs a target model"));
        }
        self.report(scenario)
    }

    /// False alarm estimates across exponential clutter rates, each on an
    /// independent sub-stream of the scenario seed.
    pub fn cfar_sweep(&self, scenario: &Scenario, rates: &[f64]) -> Result<SweepReport> {
        if !matches!(scenario.clutter, ClutterModel::Exponential(_)) {
            return Err(config("CFAR sweeps vary the rate of exponential clutter"));
        }
        if rates.is_empty() {
            return Err(config("rate grid is empty"));
        }
        let root = StreamSeed(scenario.seed);
        let mut points = Vec::with_capacity(rates.len());
        for (i, &rate) in rates.iter().enumerate() {
            let point = Scenario {
                clutter: ClutterModel::exponential(rate)?,
                seed: root.child(i as u64).0,
                ..*scenario
            };
            points.push(SweepPoint {
                rate,
                report: self.estimate_pfa(&point)?,
            });
        }
        let max_pairwise_deviation = max_pairwise_deviation(&points);
        Ok(SweepReport {
            points,
            max_pairwise_deviation,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub rate: f64,
    pub report: SimReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub points: Vec<SweepPoint>,
    /// Largest `|p_a - p_b|` over pairs, in pooled binomial standard errors.
    pub max_pairwise_deviation: f64,
}

fn max_pairwise_deviation(points: &[SweepPoint]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let (a, b) = (&a.report, &b.report);
            let pooled = (a.detections + b.detections) as f64 / (a.trials + b.trials) as f64;
            let se =
                (pooled * (1.0 - pooled) * (1.0 / a.trials as f64 + 1.0 / b.trials as f64)).sqrt();
            if se > 0.0 {
                worst = worst.max((a.estimate - b.estimate).abs() / se);
            }
        }
    }
    worst
}

pub fn estimate_pfa(scenario: &Scenario) -> Result<SimReport> {
    Runner::default().estimate_pfa(scenario)
}

pub fn estimate_pd(scenario: &Scenario) -> Result<SimReport> {
    Runner::default().estimate_pd(scenario)
}

pub fn cfar_sweep(scenario: &Scenario, rates: &[f64]) -> Result<SweepReport> {
    Runner::default().cfar_sweep(scenario, rates)
}

/// Visits every trial of `scenario` in order, with exactly the draws the
/// estimators use.
pub fn replay<F>(scenario: &Scenario, mut visit: F) -> Result<()>
where
    F: FnMut(&Trial<'_>),
{
    scenario.validate()?;
    let seed = StreamSeed(scenario.seed);
    let blocks = scenario.trials.div_ceil(BLOCK_TRIALS);
    for b in 0..blocks {
        let count = BLOCK_TRIALS.min(scenario.trials - b * BLOCK_TRIALS);
        run_block(scenario, seed, b, count, &mut |i, (window, z0)| {
            visit(&Trial {
                index: b * BLOCK_TRIALS + i,
                window,
                z0,
            })
        })?;
    }
    Ok(())
}

/// Per-trial callback: trial index, then the window and cell under test.
type Visitor<'a> = dyn FnMut(u64, (&[f64], f64)) + 'a;

fn run_block(
    scenario: &Scenario,
    seed: StreamSeed,
    block: u64,
    count: u64,
    visit: &mut Visitor,
) -> Result<Tally> {
    use rand::Rng;

    let spec = &scenario.detector;
    let mut rng = seed.block(block);
    let mut window = vec![0.0; spec.n()];
    let mut scratch = vec![0.0; spec.n()];
    let mut tally = Tally::default();
    let cut_mean_factor = scenario.target.map(|t| 1.0 + t.snr_linear);

    for i in 0..count {
        let mut redraws = 0;
        loop {
            scenario.clutter.fill(&mut window, &mut rng);
            let u = 1.0 - rng.random::<f64>();
            let z0 = match (cut_mean_factor, &scenario.clutter) {
                (None, clutter) => clutter.from_uniform(u),
                (Some(f), ClutterModel::Exponential(c)) => c.from_uniform(u) * f,
                (Some(_), _) => return Err(config("unsupported target and clutter pairing")),
            };
            scratch.copy_from_slice(&window);
            let stat = spec.statistic(&mut scratch)?;
            match decide_with_statistic(z0, stat, spec) {
                Ok(d) => {
                    visit(i, (&window, z0));
                    if d.verdict.is_target() {
                        tally.detections += 1;
                    }
                    break;
                }
                Err(CfarError::DegenerateWindow { .. }) => {
                    redraws += 1;
                    tally.redraws += 1;
                    if redraws >= MAX_REDRAWS {
                        return Err(config("clutter keeps producing degenerate windows"));
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(tally)
}

/// Reference cells on either side of the cell under test. No guard cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowLayout {
    pub leading: usize,
    pub trailing: usize,
}

impl WindowLayout {
    pub fn size(&self) -> usize {
        self.leading + self.trailing
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellDecision {
    pub cell_index: usize,
    pub decision: Decision,
}

/// Slides the detector along a range profile. Cells too close to either end
/// for a full window are skipped.
///
/// A Bayesian OS window whose order statistic is zero yields `H0` with an
/// exceedance probability of 1 rather than an error.
pub fn scan_profile(
    profile: &[f64],
    spec: &DetectorSpec,
    layout: WindowLayout,
) -> Result<Vec<CellDecision>> {
    if let Some((i, v)) = profile
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
    {
        return Err(domain(format!(
            "profile cell {i} is {v}; cells must be finite and nonnegative"
        )));
    }
    if layout.size() != spec.n() {
        return Err(config(format!(
            "layout has {} reference cells but the detector expects N = {}",
            layout.size(),
            spec.n()
        )));
    }
    if profile.is_empty() {
        return Ok(Vec::new());
    }
    if profile.len() <= layout.size() {
        return Err(config(format!(
            "profile of {} cells is too short for {} reference cells",
            profile.len(),
            layout.size()
        )));
    }
    let mut out = Vec::with_capacity(profile.len() - layout.size());
    let mut scratch = Vec::with_capacity(spec.n());
    for cut in layout.leading..profile.len() - layout.trailing {
        scratch.clear();
        scratch.extend_from_slice(&profile[cut - layout.leading..cut]);
        scratch.extend_from_slice(&profile[cut + 1..=cut + layout.trailing]);
        let z0 = profile[cut];
        let stat = spec.statistic(&mut scratch)?;
        let decision = match decide_with_statistic(z0, stat, spec) {
            Err(CfarError::DegenerateWindow { .. }) => Decision {
                verdict: Verdict::H0,
                statistic_z0: z0,
                comparison_value: 1.0,
                path: DecisionPath::PfaComparison,
            },
            other => other?,
        };
        out.push(CellDecision {
            cell_index: cut,
            decision,
        });
    }
    Ok(out)
}

/// Window around `cut` as a [`CrpWindow`], for callers that want to rerun a
/// single cell through the detectors.
pub fn window_at(profile: &[f64], cut: usize, layout: WindowLayout) -> Result<CrpWindow> {
    if cut < layout.leading || cut + layout.trailing >= profile.len() {
        return Err(config(format!("cell {cut} has no full window")));
    }
    let mut v = profile[cut - layout.leading..cut].to_vec();
    v.extend_from_slice(&profile[cut + 1..=cut + layout.trailing]);
    CrpWindow::new(v)
}
