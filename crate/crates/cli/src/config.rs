//! TOML run configuration.
//!
//! ```toml
//! [detector]
//! family = "bayes_os"
//! n = 16
//! k = 12
//! pfa = 0.01
//!
//! [clutter]
//! kind = "exponential"
//! lambda = 1.0
//!
//! [simulation]
//! mode = "pfa"
//! trials = 1000000
//! seed = 7
//!
//! [grid]
//! tau = "0:50:101"
//! lambda = [0.5, 1.0, 2.0, 10.0]
//!
//! [scan]
//! profile = "profile.csv"
//! leading = 8
//! trailing = 8
//! ```
//!
//! Every key is optional. A loaded file is checked in full before any
//! command runs, whether or not the command reads the offending key.

use std::fs;
use std::path::{Path, PathBuf};

use bayescfar::{DetectorFamily, DetectorSpec, ExponentialClutter, ParetoClutter, TargetModel};
use serde::Deserialize;

use crate::args::{ClutterKind, Mode};
use crate::error::{io_error, usage, CliError};
use crate::format::{parse_rates, Grid};

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub detector: DetectorSection,
    pub clutter: ClutterSection,
    pub simulation: SimulationSection,
    pub grid: GridSection,
    pub scan: ScanSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorSection {
    pub family: Option<DetectorFamily>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub pfa: Option<f64>,
    /// Observed statistic for `threshold`, `pfa` and `density`.
    pub t: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClutterSection {
    pub kind: Option<ClutterKind>,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSection {
    pub mode: Option<Mode>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub snr: Option<f64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub tau: Option<String>,
    pub z0: Option<String>,
    pub lambda: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSection {
    pub profile: Option<PathBuf>,
    pub leading: Option<usize>,
    pub trailing: Option<usize>,
    pub header: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            fs::read_to_string(path).map_err(io_error(format!("reading {}", path.display())))?;
        let cfg = Self::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies the in-memory type invariants to whatever keys are present.
    pub fn validate(&self) -> Result<(), String> {
        let d = &self.detector;
        if d.family == Some(DetectorFamily::CustomG) {
            return Err("detector.family custom_g is only available through the library".into());
        }
        if let Some(n) = d.n {
            if n == 0 {
                return Err("detector.n must be at least 1".into());
            }
        }
        if let Some(k) = d.k {
            if k == 0 || d.n.is_some_and(|n| k > n) {
                return Err(format!("detector.k = {k} is outside 1..=n"));
            }
        }
        if let Some(p) = d.pfa {
            DetectorSpec::new(DetectorFamily::MinCfar, 1, 1, p)
                .map_err(|e| format!("detector.pfa: {e}"))?;
        }
        if let Some(t) = d.t {
            if !(t > 0.0 && t.is_finite()) {
                return Err(format!("detector.t must be positive and finite, got {t}"));
            }
        }

        let c = &self.clutter;
        if let Some(l) = c.lambda {
            ExponentialClutter::new(l).map_err(|e| format!("clutter.lambda: {e}"))?;
        }
        if let Some(a) = c.alpha {
            ParetoClutter::new(a, 1.0).map_err(|e| format!("clutter.alpha: {e}"))?;
        }
        if let Some(b) = c.beta {
            ParetoClutter::new(1.0, b).map_err(|e| format!("clutter.beta: {e}"))?;
        }

        let s = &self.simulation;
        if s.trials == Some(0) {
            return Err("simulation.trials must be at least 1".into());
        }
        if let Some(snr) = s.snr {
            TargetModel::swerling1(snr).map_err(|e| format!("simulation.snr: {e}"))?;
        }

        let g = &self.grid;
        if let Some(tau) = &g.tau {
            tau.parse::<Grid>().map_err(|e| format!("grid.tau: {e}"))?;
        }
        if let Some(z0) = &g.z0 {
            z0.parse::<Grid>().map_err(|e| format!("grid.z0: {e}"))?;
        }
        if let Some(rates) = &g.lambda {
            let joined: Vec<String> = rates.iter().map(f64::to_string).collect();
            parse_rates(&joined.join(",")).map_err(|e| format!("grid.lambda: {e}"))?;
        }

        let sc = &self.scan;
        if let (Some(l), Some(t)) = (sc.leading, sc.trailing) {
            if l + t == 0 {
                return Err("scan.leading + scan.trailing must be at least 1".into());
            }
            if let Some(n) = d.n {
                if n != l + t {
                    return Err(format!(
                        "scan.leading + scan.trailing = {} but detector.n = {n}",
                        l + t
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_file_parses() {
        let cfg = RunConfig::parse(
            r#"
            [detector]
            family = "bayes_os"
            n = 16
            k = 12
            pfa = 0.01
            [clutter]
            kind = "pareto"
            alpha = 3.0
            beta = 2.0
            [simulation]
            mode = "pd"
            trials = 1000
            seed = 9
            snr = 4.0
            [grid]
            tau = "0:10:11"
            lambda = [0.5, 1.0]
            [scan]
            leading = 8
            trailing = 8
            header = true
            "#,
        )
        .unwrap();
        assert_eq!(cfg.detector.family, Some(DetectorFamily::BayesOs));
        assert_eq!(cfg.clutter.kind, Some(ClutterKind::Pareto));
        assert_eq!(cfg.simulation.mode, Some(Mode::Pd));
        assert_eq!(cfg.grid.lambda.as_deref(), Some(&[0.5, 1.0][..]));
    }

    #[test]
    fn empty_file_is_fine() {
        let cfg = RunConfig::parse("").unwrap();
        assert!(cfg.detector.n.is_none());
    }

    #[test]
    fn invariants_are_enforced() {
        for bad in [
            "[detector]\npfa = 1.5",
            "[detector]\nn = 0",
            "[detector]\nn = 4\nk = 5",
            "[detector]\nfamily = \"custom_g\"",
            "[detector]\nfamily = \"os_cfar\"",
            "[clutter]\nlambda = -1.0",
            "[clutter]\nalpha = 0.0",
            "[simulation]\ntrials = 0",
            "[simulation]\nsnr = -3.0",
            "[grid]\ntau = \"3:1:4\"",
            "[grid]\nlambda = []",
            "[scan]\nleading = 2\ntrailing = 2\n[detector]\nn = 5",
            "[detector]\nwindow = 3",
            "[nonsense]\nx = 1",
        ] {
            assert!(RunConfig::parse(bad).is_err(), "{bad}");
        }
    }
}
