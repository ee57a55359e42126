use std::env;
use std::fs::{self, OpenOptions};
use std::io::Write;

use bayescfar::detectors::threshold;
use bayescfar::predictive::{cell_averaging_density, cell_averaging_pfa};
use bayescfar::simulate::{scan_profile, WindowLayout};
use bayescfar::{
    ClutterModel, DetectorFamily, DetectorSpec, OsPredictive, Runner, Scenario, SimReport,
    TargetModel,
};
use serde::{Deserialize, Serialize};

use crate::args::{
    ClutterArgs, ClutterKind, CurveArgs, DensityArgs, DetectorArgs, Mode, PfaArgs, RunArgs,
    ScanArgs, SimulateArgs, SweepArgs, ThresholdArgs,
};
use crate::config::RunConfig;
use crate::error::{io_error, usage, CliError};
use crate::format::{num, parse_profile, parse_rates, Grid};

/// Environment variable holding the simulation worker count.
pub const WORKERS_VAR: &str = "BAYESCFAR_WORKERS";

const DEFAULT_TRIALS: u64 = 100_000;
const DEFAULT_SEED: u64 = 0;

/// Machine-readable output of `threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRecord {
    pub family: DetectorFamily,
    pub n: usize,
    pub k: usize,
    pub pfa: f64,
    pub t: f64,
    pub tau: f64,
}

pub struct Streams<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

impl Streams<'_> {
    fn line(&mut self, s: &str) -> Result<(), CliError> {
        writeln!(self.out, "{s}").map_err(io_error("writing output"))
    }

    fn note(&mut self, s: &str) -> Result<(), CliError> {
        writeln!(self.err, "{s}").map_err(io_error("writing diagnostics"))
    }
}

fn need<T>(value: Option<T>, flag: &str, key: &str) -> Result<T, CliError> {
    value.ok_or_else(|| usage(format!("missing {flag} (or {key} in the config file)")))
}

fn family(flag: Option<DetectorFamily>, cfg: &RunConfig) -> Result<DetectorFamily, CliError> {
    let f = need(flag.or(cfg.detector.family), "--family", "detector.family")?;
    if f == DetectorFamily::CustomG {
        return Err(usage(
            "custom_g takes a user-supplied statistic and is only available through the library",
        ));
    }
    Ok(f)
}

fn observed(flag: Option<f64>, cfg: &RunConfig) -> Result<f64, CliError> {
    let t = need(flag.or(cfg.detector.t), "--t", "detector.t")?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(usage(format!(
            "observed statistic t must be positive and finite, got {t}"
        )));
    }
    Ok(t)
}

/// Detector spec with `n` fixed by the caller when it is implied elsewhere.
fn detector_spec(
    args: &DetectorArgs,
    n: Option<usize>,
    cfg: &RunConfig,
) -> Result<DetectorSpec, CliError> {
    let family = family(args.family, cfg)?;
    let n = match n {
        Some(n) => n,
        None => need(args.n.or(cfg.detector.n), "--n", "detector.n")?,
    };
    let k = match family {
        DetectorFamily::BayesOs => need(args.k.or(cfg.detector.k), "--k", "detector.k")?,
        _ => 1,
    };
    let pfa = need(args.pfa.or(cfg.detector.pfa), "--pfa", "detector.pfa")?;
    Ok(DetectorSpec::new(family, n, k, pfa)?)
}

fn clutter_model(args: &ClutterArgs, cfg: &RunConfig) -> Result<ClutterModel, CliError> {
    let c = &cfg.clutter;
    Ok(
        match args.clutter.or(c.kind).unwrap_or(ClutterKind::Exponential) {
            ClutterKind::Exponential => {
                ClutterModel::exponential(args.lambda.or(c.lambda).unwrap_or(1.0))?
            }
            ClutterKind::Pareto => ClutterModel::pareto(
                need(args.alpha.or(c.alpha), "--alpha", "clutter.alpha")?,
                need(args.beta.or(c.beta), "--beta", "clutter.beta")?,
            )?,
        },
    )
}

fn trials_and_seed(args: &RunArgs, cfg: &RunConfig) -> (u64, u64) {
    let s = &cfg.simulation;
    (
        args.trials.or(s.trials).unwrap_or(DEFAULT_TRIALS),
        args.seed.or(s.seed).unwrap_or(DEFAULT_SEED),
    )
}

/// Worker pool from the environment; one worker per core when unset.
pub fn runner_from_env() -> Result<Runner, CliError> {
    match env::var(WORKERS_VAR) {
        Err(env::VarError::NotPresent) => Ok(Runner::default()),
        Err(env::VarError::NotUnicode(_)) => Err(usage(format!("{WORKERS_VAR} is not valid text"))),
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| usage(format!("{WORKERS_VAR}='{v}' is not a positive integer")))?;
            Ok(Runner::new(n)?)
        }
    }
}

pub fn threshold_cmd(
    args: &ThresholdArgs,
    cfg: &RunConfig,
    io: &mut Streams,
) -> Result<(), CliError> {
    let spec = detector_spec(&args.detector, None, cfg)?;
    let t = observed(args.t, cfg)?;
    let tau = threshold(&spec, t)?;
    let record = ThresholdRecord {
        family: spec.family(),
        n: spec.n(),
        k: spec.k(),
        pfa: spec.design_pfa(),
        t,
        tau,
    };
    let json = serde_json::to_string(&record).expect("threshold record serializes");
    io.line(&json)?;
    io.note(&format!(
        "tau = {} for {} N={} k={} Pfa={} t={}",
        num(tau),
        spec.family(),
        spec.n(),
        spec.k(),
        num(spec.design_pfa()),
        num(t)
    ))
}

enum Curve {
    Os(OsPredictive),
    CellAveraging { n: usize, sum: f64 },
}

impl Curve {
    fn resolve(args: &CurveArgs, cfg: &RunConfig) -> Result<Self, CliError> {
        let family = family(args.family, cfg)?;
        let n = need(args.n.or(cfg.detector.n), "--n", "detector.n")?;
        if n == 0 {
            return Err(usage("--n must be at least 1"));
        }
        let t = observed(args.t, cfg)?;
        Ok(match family {
            DetectorFamily::BayesOs => Curve::Os(OsPredictive::new(
                n,
                need(args.k.or(cfg.detector.k), "--k", "detector.k")?,
                t,
            )?),
            DetectorFamily::MinCfar => Curve::Os(OsPredictive::new(n, 1, t)?),
            DetectorFamily::CaCfar => Curve::CellAveraging { n, sum: t },
            DetectorFamily::CustomG => unreachable!("rejected by family()"),
        })
    }

    fn pfa(&self, tau: f64) -> Result<f64, CliError> {
        Ok(match self {
            Curve::Os(p) => p.pfa(tau)?,
            Curve::CellAveraging { n, sum } => cell_averaging_pfa(*n, *sum, tau),
        })
    }

    fn density(&self, z0: f64) -> Result<f64, CliError> {
        Ok(match self {
            Curve::Os(p) => p.density(z0)?,
            Curve::CellAveraging { n, sum } => cell_averaging_density(*n, *sum, z0),
        })
    }
}

fn grid(flag: &Option<String>, key: &Option<String>, name: &str) -> Result<Grid, CliError> {
    let text = need(
        flag.as_ref().or(key.as_ref()),
        &format!("--{name}-grid"),
        &format!("grid.{name}"),
    )?;
    text.parse().map_err(|e: String| usage(e))
}

pub fn pfa_cmd(args: &PfaArgs, cfg: &RunConfig, io: &mut Streams) -> Result<(), CliError> {
    let curve = Curve::resolve(&args.curve, cfg)?;
    let grid = grid(&args.tau_grid, &cfg.grid.tau, "tau")?;
    let mut rows = vec!["tau,pfa".to_string()];
    for tau in grid.points() {
        rows.push(format!("{},{}", num(tau), num(curve.pfa(tau)?)));
    }
    io.line(&rows.join("\n"))
}

pub fn density_cmd(args: &DensityArgs, cfg: &RunConfig, io: &mut Streams) -> Result<(), CliError> {
    let curve = Curve::resolve(&args.curve, cfg)?;
    let grid = grid(&args.z0_grid, &cfg.grid.z0, "z0")?;
    let mut rows = vec!["z0,density".to_string()];
    for z0 in grid.points() {
        rows.push(format!("{},{}", num(z0), num(curve.density(z0)?)));
    }
    io.line(&rows.join("\n"))
}

const SIM_CSV_HEADER: &str =
    "mode,seed,trials,detections,estimate,wilson_low,wilson_high,degenerate_redraws";

pub fn simulate_cmd(
    args: &SimulateArgs,
    cfg: &RunConfig,
    io: &mut Streams,
) -> Result<(), CliError> {
    let spec = detector_spec(&args.detector, None, cfg)?;
    let clutter = clutter_model(&args.clutter, cfg)?;
    let (trials, seed) = trials_and_seed(&args.run, cfg);
    let mode = args.mode.or(cfg.simulation.mode).unwrap_or(Mode::Pfa);
    let snr = args.snr.or(cfg.simulation.snr);
    let out = args.out.as_ref().or(cfg.simulation.out.as_ref());
    let scenario = Scenario::new(clutter, spec, trials, seed)?;
    let runner = runner_from_env()?;
    let report = match mode {
        Mode::Pfa => {
            if snr.is_some() {
                return Err(usage("--snr only applies to --mode pd"));
            }
            runner.estimate_pfa(&scenario)?
        }
        Mode::Pd => {
            let target = TargetModel::swerling1(need(snr, "--snr", "simulation.snr")?)?;
            runner.estimate_pd(&scenario.with_target(target)?)?
        }
    };
    if let Some(path) = out {
        append_report(path, mode, &report)?;
    }
    io.line(&serde_json::to_string(&report).expect("report serializes"))
}

fn append_report(path: &std::path::Path, mode: Mode, r: &SimReport) -> Result<(), CliError> {
    let context = format!("appending to {}", path.display());
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_error(context.clone()))?;
    let fresh = f.metadata().map_err(io_error(context.clone()))?.len() == 0;
    let mut text = String::new();
    if fresh {
        text.push_str(SIM_CSV_HEADER);
        text.push('\n');
    }
    text.push_str(&format!(
        "{},{},{},{},{},{},{},{}\n",
        mode.as_str(),
        r.seed,
        r.trials,
        r.detections,
        num(r.estimate),
        num(r.wilson_low),
        num(r.wilson_high),
        r.degenerate_redraws
    ));
    f.write_all(text.as_bytes()).map_err(io_error(context))
}

pub fn sweep_cmd(args: &SweepArgs, cfg: &RunConfig, io: &mut Streams) -> Result<(), CliError> {
    let spec = detector_spec(&args.detector, None, cfg)?;
    let rates = match (&args.lambda_grid, &cfg.grid.lambda) {
        (Some(text), _) => parse_rates(text).map_err(usage)?,
        (None, Some(list)) => list.clone(),
        (None, None) => {
            return Err(usage(
                "missing --lambda-grid (or grid.lambda in the config file)",
            ))
        }
    };
    let (trials, seed) = trials_and_seed(&args.run, cfg);
    let scenario = Scenario::new(ClutterModel::exponential(1.0)?, spec, trials, seed)?;
    let sweep = runner_from_env()?.cfar_sweep(&scenario, &rates)?;

    let mut rows = vec!["lambda,estimate,wilson_low,wilson_high,trials".to_string()];
    let mut worst_from_design = 0.0f64;
    let design = spec.design_pfa();
    let design_se = (design * (1.0 - design) / trials as f64).sqrt();
    for p in &sweep.points {
        let r = &p.report;
        rows.push(format!(
            "{},{},{},{},{}",
            num(p.rate),
            num(r.estimate),
            num(r.wilson_low),
            num(r.wilson_high),
            r.trials
        ));
        worst_from_design = worst_from_design.max((r.estimate - design).abs() / design_se);
    }
    io.line(&rows.join("\n"))?;
    io.note(&format!(
        "max deviation from design Pfa: {:.3} SE; max pairwise deviation: {:.3} SE over {} rates",
        worst_from_design,
        sweep.max_pairwise_deviation,
        sweep.points.len()
    ))
}

pub fn scan_cmd(args: &ScanArgs, cfg: &RunConfig, io: &mut Streams) -> Result<(), CliError> {
    let sc = &cfg.scan;
    let n = args.detector.n.or(cfg.detector.n);
    let (leading, trailing) = match (
        args.leading.or(sc.leading),
        args.trailing.or(sc.trailing),
        n,
    ) {
        (Some(l), Some(t), _) => (l, t),
        (Some(l), None, Some(n)) if n >= l => (l, n - l),
        (None, Some(t), Some(n)) if n >= t => (n - t, t),
        (None, None, Some(n)) => (n / 2, n - n / 2),
        _ => {
            return Err(usage(
                "give --leading and --trailing, or --n to split the window evenly",
            ))
        }
    };
    let layout = WindowLayout { leading, trailing };
    if layout.size() == 0 {
        return Err(usage("the window needs at least one reference cell"));
    }
    if let Some(n) = n {
        if n != layout.size() {
            return Err(usage(format!(
                "--leading + --trailing = {} but --n = {n}",
                layout.size()
            )));
        }
    }
    let spec = detector_spec(&args.detector, Some(layout.size()), cfg)?;
    let path = need(
        args.profile.as_ref().or(sc.profile.as_ref()),
        "--profile",
        "scan.profile",
    )?;
    let text = fs::read_to_string(path).map_err(io_error(format!("reading {}", path.display())))?;
    let header = args.header || sc.header.unwrap_or(false);
    let profile =
        parse_profile(&text, header).map_err(|e| usage(format!("{}: {e}", path.display())))?;

    let decisions = scan_profile(&profile, &spec, layout)?;
    let mut rows = vec!["cell_index,z0,comparison_value,verdict".to_string()];
    for c in &decisions {
        rows.push(format!(
            "{},{},{},{}",
            c.cell_index,
            num(c.decision.statistic_z0),
            num(c.decision.comparison_value),
            c.decision.verdict
        ));
    }
    io.line(&rows.join("\n"))
}
