//! File formats of the command-line tool.
//!
//! Simulation tables use the fixed column order of [`SIM_HEADER`]. Inputs
//! are written with Rust's shortest round-trip float formatting and
//! computed probabilities with 17 significant digits, so reading a table
//! back loses nothing.

use serde::{Deserialize, Serialize};

use crate::curve::{Corner, DmtCurve};
use crate::model::{AntennaProfile, Scenario, ScenarioKind, Topology, Weights};
use crate::sim::{MonteCarloPlan, OutageEstimate};

use super::CliError;

pub const SIM_HEADER: &str =
    "scenario,K,M,weights,r,rho_db,n_samples,n_outages,p_hat,ci_low,ci_high,seed,shards";

/// One row of a simulation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRow {
    pub scenario: String,
    #[serde(rename = "K")]
    pub k: usize,
    /// Transmit antennas for broadcast scenarios, `nt` for identical
    /// parallel channels, `;`-joined antenna profile for different ones.
    #[serde(rename = "M")]
    pub m: String,
    /// `;`-joined weights.
    pub weights: String,
    pub r: f64,
    pub rho_db: f64,
    pub n_samples: u64,
    pub n_outages: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub shards: u32,
}

fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

/// Value of the `M` column for a scenario.
pub fn antenna_column(scenario: &Scenario) -> String {
    match scenario.topology() {
        Topology::ParallelIdentical { nt } => nt.to_string(),
        Topology::ParallelDifferent { profile } => join(profile.as_slice()),
        Topology::BcZf { m } | Topology::BcDpc { m } => m.to_string(),
    }
}

impl SimRow {
    pub fn new(scenario: &Scenario, est: &OutageEstimate, plan: MonteCarloPlan) -> Self {
        Self {
            scenario: scenario.kind().to_string(),
            k: scenario.k(),
            m: antenna_column(scenario),
            weights: join(scenario.weights().as_slice()),
            r: est.r,
            rho_db: est.rho_db,
            n_samples: est.n_samples,
            n_outages: est.n_outages,
            p_hat: est.p_hat,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            seed: plan.seed,
            shards: plan.shards,
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.16e},{:.16e},{:.16e},{},{}",
            self.scenario,
            self.k,
            self.m,
            self.weights,
            self.r,
            self.rho_db,
            self.n_samples,
            self.n_outages,
            self.p_hat,
            self.ci_low,
            self.ci_high,
            self.seed,
            self.shards
        )
    }

    fn from_csv(line: &str, lineno: usize) -> Result<Self, CliError> {
        let bad = |what: &str| CliError::Invalid(format!("line {lineno}: invalid {what}"));
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 13 {
            return Err(CliError::Invalid(format!(
                "line {lineno}: expected 13 columns, found {}",
                f.len()
            )));
        }
        macro_rules! num {
            ($i:expr, $name:expr) => {
                f[$i].parse().map_err(|_| bad($name))?
            };
        }
        Ok(Self {
            scenario: f[0].to_string(),
            k: num!(1, "K"),
            m: f[2].to_string(),
            weights: f[3].to_string(),
            r: num!(4, "r"),
            rho_db: num!(5, "rho_db"),
            n_samples: num!(6, "n_samples"),
            n_outages: num!(7, "n_outages"),
            p_hat: num!(8, "p_hat"),
            ci_low: num!(9, "ci_low"),
            ci_high: num!(10, "ci_high"),
            seed: num!(11, "seed"),
            shards: num!(12, "shards"),
        })
    }

    pub fn estimate(&self) -> OutageEstimate {
        OutageEstimate {
            r: self.r,
            rho_db: self.rho_db,
            n_samples: self.n_samples,
            n_outages: self.n_outages,
            n_discarded: 0,
            p_hat: self.p_hat,
            ci_low: self.ci_low,
            ci_high: self.ci_high,
        }
    }

    /// Rebuilds the scenario recorded in this row.
    pub fn scenario(&self) -> Result<Scenario, CliError> {
        let bad = |e: String| CliError::Invalid(format!("row scenario: {e}"));
        let kind: ScenarioKind = self.scenario.parse().map_err(bad)?;
        let weights: Vec<f64> = self
            .weights
            .split(';')
            .map(|w| w.parse::<f64>().map_err(|_| bad(format!("weight '{w}'"))))
            .collect::<Result<_, _>>()?;
        let weights = Weights::new(weights).map_err(|e| bad(e.to_string()))?;
        let antennas: Vec<u32> = self
            .m
            .split(';')
            .map(|v| v.parse::<u32>().map_err(|_| bad(format!("antenna count '{v}'"))))
            .collect::<Result<_, _>>()?;
        let single = || {
            if antennas.len() == 1 {
                Ok(antennas[0])
            } else {
                Err(bad(format!("expected one antenna count, found '{}'", self.m)))
            }
        };
        let topology = match kind {
            ScenarioKind::ParallelIdentical => Topology::ParallelIdentical { nt: single()? },
            ScenarioKind::ParallelDifferent => Topology::ParallelDifferent {
                profile: AntennaProfile::new(antennas.clone()).map_err(|e| bad(e.to_string()))?,
            },
            ScenarioKind::BcZf => Topology::BcZf { m: single()? },
            ScenarioKind::BcDpc => Topology::BcDpc { m: single()? },
        };
        let scenario = Scenario::new(topology, weights).map_err(|e| bad(e.to_string()))?;
        if scenario.k() != self.k {
            return Err(bad(format!("K = {} but {} weights", self.k, scenario.k())));
        }
        Ok(scenario)
    }
}

pub fn write_sim_csv(rows: &[SimRow]) -> String {
    let mut out = String::from(SIM_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

/// Reads a simulation table written as CSV or JSON.
pub fn read_sim_table(text: &str) -> Result<Vec<SimRow>, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed)
            .map_err(|e| CliError::Invalid(format!("JSON schema mismatch: {e}")));
    }
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::Invalid("input is empty".into()))?;
    if header.trim() != SIM_HEADER {
        return Err(CliError::Invalid(format!(
            "unexpected header '{}', expected '{SIM_HEADER}'",
            header.trim()
        )));
    }
    lines.map(|(i, l)| SimRow::from_csv(l, i + 1)).collect()
}

#[derive(Serialize)]
struct CurveDoc<'a> {
    scenario: ScenarioKind,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "M")]
    m: String,
    weights: &'a Weights,
    corners: &'a [Corner],
    samples: Vec<Corner>,
}

/// Resolution of the dense curve sampling.
pub const CURVE_STEP: f64 = 0.01;

pub fn write_curve(scenario: &Scenario, curve: &DmtCurve, json: bool) -> String {
    let samples = curve.sample(CURVE_STEP);
    if json {
        let doc = CurveDoc {
            scenario: scenario.kind(),
            k: scenario.k(),
            m: antenna_column(scenario),
            weights: scenario.weights(),
            corners: curve.corners(),
            samples,
        };
        return serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
    }
    let mut out = String::from("kind,r,d\n");
    for (kind, points) in [("corner", curve.corners()), ("sample", samples.as_slice())] {
        for c in points {
            out.push_str(&format!("{kind},{},{}\n", c.r, c.d));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_weights;

    fn row(scenario: &Scenario) -> SimRow {
        let est = OutageEstimate::from_counts(0.5, 17.5, 1_000_000, 1234, 0);
        SimRow::new(scenario, &est, MonteCarloPlan::new(1_000_000, 7, 4))
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let s = Scenario::bc_dpc(3, validate_weights(&[2.0 / 3.0, 1.0 / 3.0]).unwrap()).unwrap();
        let r = row(&s);
        let table = write_sim_csv(&[r.clone(), r.clone()]);
        let back = read_sim_table(&table).unwrap();
        assert_eq!(back, vec![r.clone(), r.clone()]);
        assert_eq!(back[0].scenario().unwrap(), s);
        assert_eq!(back[0].estimate().p_hat.to_bits(), r.p_hat.to_bits());
    }

    #[test]
    fn json_table_is_accepted() {
        let profile = AntennaProfile::new(vec![2, 1]).unwrap();
        let s = Scenario::parallel_different(profile, validate_weights(&[0.5, 0.5]).unwrap()).unwrap();
        let r = row(&s);
        assert_eq!(r.m, "2;1");
        let text = serde_json::to_string(&vec![r.clone()]).unwrap();
        let back = read_sim_table(&text).unwrap();
        assert_eq!(back, vec![r]);
        assert_eq!(back[0].scenario().unwrap(), s);
    }

    #[test]
    fn schema_errors() {
        assert!(read_sim_table("").is_err());
        assert!(read_sim_table("a,b,c\n1,2,3\n").is_err());
        let bad = format!("{SIM_HEADER}\nbc-zf,2,3,0.5;0.5,1,10,100,x,0.1,0,1,1,1\n");
        assert!(read_sim_table(&bad).is_err());
        let short = format!("{SIM_HEADER}\nbc-zf,2,3\n");
        assert!(read_sim_table(&short).is_err());
    }

    #[test]
    fn curve_csv_layout() {
        let s = Scenario::parallel_identical(2, validate_weights(&[0.5, 0.5]).unwrap()).unwrap();
        let text = write_curve(&s, &s.dmt_curve().unwrap(), false);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            &lines[..4],
            &["kind,r,d", "corner,0,4", "corner,1,2", "corner,2,0"]
        );
        assert_eq!(lines.len(), 1 + 3 + 201);
        assert_eq!(lines[4 + 50], "sample,0.5,3");
    }
}
