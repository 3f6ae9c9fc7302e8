//! Run configuration: `key = value` config files merged with command-line
//! flags (flags win), then parsed into typed values.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::fit::SnrWindow;
use crate::model::{AntennaProfile, Scenario, ScenarioKind, Topology, Weights};
use crate::sim::MonteCarloPlan;

use super::CliError;

/// Keys accepted in config files; each matches a long flag name.
pub const KEYS: &[&str] = &[
    "scenario", "m", "k", "nt", "profile", "weights", "r", "snr-db", "samples", "seed", "shards", "out",
    "format", "input", "window", "tol",
];

pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SHARDS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Raw string settings keyed by flag name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_config(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("config line {}: expected key = value", lineno + 1)))?;
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(invalid(format!(
                    "config line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            map.insert(key, value.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_config(&text)
    }

    pub fn set(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.0.insert(key.to_string(), v);
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key).ok_or_else(|| invalid(format!("missing --{key}")))
    }

    fn parse_opt<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| invalid(format!("invalid --{key} '{v}'")))
            })
            .transpose()
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        let kind: ScenarioKind = self.require("scenario")?.parse().map_err(invalid)?;
        let weights = Weights::new(parse_number_list(self.require("weights")?, "weights")?)
            .map_err(|e| invalid(format!("--weights: {e}")))?;
        let k: Option<usize> = self.parse_opt("k")?;
        if let Some(k) = k {
            if k != weights.len() {
                return Err(invalid(format!("--k {k} but {} weights given", weights.len())));
            }
        }
        let topology = match kind {
            ScenarioKind::ParallelIdentical => Topology::ParallelIdentical {
                nt: self.parse_opt("nt")?.ok_or_else(|| invalid("missing --nt"))?,
            },
            ScenarioKind::ParallelDifferent => {
                let n = parse_profile(self.require("profile")?)?;
                Topology::ParallelDifferent {
                    profile: AntennaProfile::new(n).map_err(|e| invalid(format!("--profile: {e}")))?,
                }
            }
            ScenarioKind::BcZf => Topology::BcZf {
                m: self.parse_opt("m")?.ok_or_else(|| invalid("missing --m"))?,
            },
            ScenarioKind::BcDpc => Topology::BcDpc {
                m: self.parse_opt("m")?.ok_or_else(|| invalid("missing --m"))?,
            },
        };
        Scenario::new(topology, weights).map_err(|e| invalid(e.to_string()))
    }

    pub fn rates(&self) -> Result<Vec<f64>, CliError> {
        parse_number_list(self.require("r")?, "r")
    }

    pub fn snr_grid(&self) -> Result<Vec<f64>, CliError> {
        parse_snr_grid(self.require("snr-db")?)
    }

    pub fn plan(&self) -> Result<MonteCarloPlan, CliError> {
        let plan = MonteCarloPlan::new(
            self.parse_opt("samples")?.unwrap_or(DEFAULT_SAMPLES),
            self.parse_opt("seed")?.unwrap_or(DEFAULT_SEED),
            self.parse_opt("shards")?.unwrap_or(DEFAULT_SHARDS),
        );
        if plan.n_samples == 0 || plan.shards == 0 {
            return Err(invalid("--samples and --shards must be positive"));
        }
        Ok(plan)
    }

    pub fn format(&self) -> Result<Format, CliError> {
        match self.get("format").unwrap_or("csv") {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(invalid(format!("unknown --format '{other}' (csv or json)"))),
        }
    }

    pub fn out(&self) -> Option<PathBuf> {
        self.get("out").map(PathBuf::from)
    }

    pub fn input(&self) -> Result<PathBuf, CliError> {
        self.require("input").map(PathBuf::from)
    }

    pub fn window(&self) -> Result<SnrWindow, CliError> {
        match self.get("window") {
            None => Ok(SnrWindow::all()),
            Some(v) => {
                let (lo, hi) = v
                    .split_once(':')
                    .ok_or_else(|| invalid(format!("--window '{v}': expected lo:hi")))?;
                let lo = parse_number(lo, "window")?;
                let hi = parse_number(hi, "window")?;
                SnrWindow::new(lo, hi).map_err(|e| invalid(e.to_string()))
            }
        }
    }

    pub fn tolerance(&self) -> Result<f64, CliError> {
        let tol = self.parse_opt("tol")?.unwrap_or(crate::fit::DEFAULT_TOLERANCE);
        if !(tol >= 0.0) {
            return Err(invalid("--tol must be non-negative"));
        }
        Ok(tol)
    }
}

/// Parses a decimal or a fraction such as `3/5`. The fraction is evaluated
/// with a single division.
pub fn parse_number(s: &str, what: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let bad = || invalid(format!("invalid --{what} entry '{s}'"));
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0.0 {
                return Err(bad());
            }
            num / den
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

pub fn parse_number_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(|t| parse_number(t, what)).collect()
}

fn parse_profile(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| invalid(format!("invalid --profile entry '{t}'")))
        })
        .collect()
}

/// `start:stop:step` (inclusive), or a comma-separated list of values.
pub fn parse_snr_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let start = parse_number(start, "snr-db")?;
            let stop = parse_number(stop, "snr-db")?;
            let step = parse_number(step, "snr-db")?;
            if !(step > 0.0) {
                return Err(invalid("--snr-db step must be positive"));
            }
            if stop < start {
                return Err(invalid("--snr-db stop is below start"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| start + i as f64 * step).collect())
        }
        [_] => parse_number_list(s, "snr-db"),
        _ => Err(invalid(format!(
            "invalid --snr-db '{s}': expected start:stop:step"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_and_decimals() {
        assert_eq!(parse_number_list("3/5, 2/5", "weights").unwrap(), vec![0.6, 0.4]);
        assert_eq!(
            parse_number_list("0.25,0.75", "weights").unwrap(),
            vec![0.25, 0.75]
        );
        assert!(parse_number("1/0", "weights").is_err());
        assert!(parse_number("abc", "weights").is_err());
    }

    #[test]
    fn snr_grids() {
        assert_eq!(
            parse_snr_grid("15:30:2.5").unwrap(),
            vec![15.0, 17.5, 20.0, 22.5, 25.0, 27.5, 30.0]
        );
        assert_eq!(parse_snr_grid("10").unwrap(), vec![10.0]);
        assert_eq!(parse_snr_grid("10,20").unwrap(), vec![10.0, 20.0]);
        assert_eq!(parse_snr_grid("0:1:0.3").unwrap().len(), 4);
        assert!(parse_snr_grid("0:10:0").is_err());
        assert!(parse_snr_grid("10:0:1").is_err());
        assert!(parse_snr_grid("1:2").is_err());
    }

    #[test]
    fn config_file_parsing_and_override() {
        let mut s = Settings::parse_config(
            "# broadcast example\nscenario = bc-dpc\nm = 3\nweights = 3/5, 2/5\nsnr_db = 10:20:5\n",
        )
        .unwrap();
        assert_eq!(s.get("snr-db"), Some("10:20:5"));
        s.set("m", Some("4".into()));
        s.set("seed", None);
        assert_eq!(s.get("m"), Some("4"));
        let sc = s.scenario().unwrap();
        assert_eq!(sc.transmit_antennas(), Some(4));
        assert!(Settings::parse_config("bogus = 1").is_err());
        assert!(Settings::parse_config("no equals sign").is_err());
    }

    #[test]
    fn scenario_requirements() {
        let mut s = Settings::default();
        assert!(s.scenario().is_err());
        s.set("scenario", Some("parallel-identical".into()));
        s.set("weights", Some("0.5,0.5".into()));
        assert!(s.scenario().is_err(), "nt missing");
        s.set("nt", Some("2".into()));
        assert_eq!(s.scenario().unwrap().k(), 2);
        s.set("k", Some("3".into()));
        assert!(s.scenario().is_err(), "k inconsistent with weights");
    }

    #[test]
    fn plan_defaults() {
        let p = Settings::default().plan().unwrap();
        assert_eq!(
            (p.n_samples, p.seed, p.shards),
            (DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_SHARDS)
        );
    }
}
