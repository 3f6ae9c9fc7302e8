//! The `wdmt` command-line tool.
//!
//! Exit codes: 0 success, 2 invalid input, 3 statistical or acceptance
//! failure.

pub mod config;
pub mod io;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::fit::{compare, fit_slope, Verdict};
use crate::sim::{outage_sweep, validate_gains, OperatingPoint};
use config::{Format, Settings};
use io::{read_sim_table, write_curve, write_sim_csv, SimRow};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Failed(_) => 3,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "wdmt",
    version,
    about = "Diversity-multiplexing tradeoff of weighted parallel and broadcast channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the analytic tradeoff curve (corners plus a dense sampling).
    Curve(CommonArgs),
    /// Monte Carlo outage probabilities over an r x SNR grid.
    Simulate(CommonArgs),
    /// Fit diversity slopes to a simulation table and compare with the curve.
    Fit(FitArgs),
    /// Check simulated effective gains against their Gamma law.
    Validate(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// `key = value` file providing defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// parallel-identical, parallel-different, bc-zf or bc-dpc.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Transmit antennas (broadcast scenarios).
    #[arg(long)]
    pub m: Option<String>,
    /// Number of channels/users; must match the weight count.
    #[arg(long)]
    pub k: Option<String>,
    /// Antennas per channel (parallel-identical).
    #[arg(long)]
    pub nt: Option<String>,
    /// Comma-separated antenna counts (parallel-different).
    #[arg(long)]
    pub profile: Option<String>,
    /// Comma-separated weights; decimals or fractions such as 3/5.
    #[arg(long)]
    pub weights: Option<String>,
    /// Comma-separated multiplexing gains.
    #[arg(long)]
    pub r: Option<String>,
    /// SNR grid in dB as start:stop:step, or a comma-separated list.
    #[arg(long = "snr-db")]
    pub snr_db: Option<String>,
    #[arg(long)]
    pub samples: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub shards: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Table written by `simulate`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// SNR window lo:hi in dB.
    #[arg(long)]
    pub window: Option<String>,
    /// Relative tolerance on the fitted exponent.
    #[arg(long)]
    pub tol: Option<String>,
}

impl CommonArgs {
    fn settings(&self) -> Result<Settings, CliError> {
        let mut s = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        s.set("scenario", self.scenario.clone());
        s.set("m", self.m.clone());
        s.set("k", self.k.clone());
        s.set("nt", self.nt.clone());
        s.set("profile", self.profile.clone());
        s.set("weights", self.weights.clone());
        s.set("r", self.r.clone());
        s.set("snr-db", self.snr_db.clone());
        s.set("samples", self.samples.clone());
        s.set("seed", self.seed.clone());
        s.set("shards", self.shards.clone());
        s.set("out", path(&self.out));
        s.set("format", self.format.clone());
        Ok(s)
    }
}

fn emit(settings: &Settings, text: &str) -> Result<(), CliError> {
    match settings.out() {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Invalid(format!("cannot write output: {e}"))),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

pub fn cmd_curve(settings: &Settings) -> Result<(), CliError> {
    let scenario = settings.scenario()?;
    let curve = scenario.dmt_curve()?;
    let text = write_curve(&scenario, &curve, settings.format()? == Format::Json);
    emit(settings, &text)
}

pub fn cmd_simulate(settings: &Settings) -> Result<(), CliError> {
    let scenario = settings.scenario()?;
    let rates = settings.rates()?;
    let snrs = settings.snr_grid()?;
    let plan = settings.plan()?;
    let format = settings.format()?;
    let points: Vec<OperatingPoint> = rates
        .iter()
        .flat_map(|&r| snrs.iter().map(move |&db| OperatingPoint::new(r, db)))
        .collect();
    let rows: Vec<SimRow> = outage_sweep(&scenario, &points, plan)?
        .iter()
        .map(|e| SimRow::new(&scenario, e, plan))
        .collect();
    let text = match format {
        Format::Csv => write_sim_csv(&rows),
        Format::Json => to_json(&rows),
    };
    emit(settings, &text)
}

#[derive(Debug, Serialize)]
struct FitLine {
    r: f64,
    points_used: usize,
    dropped_db: Vec<f64>,
    verdict: Option<Verdict>,
    status: String,
}

pub fn cmd_fit(settings: &Settings) -> Result<(), CliError> {
    let input = settings.input()?;
    let text = std::fs::read_to_string(&input)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", input.display())))?;
    let rows = read_sim_table(&text)?;
    if rows.is_empty() {
        return Err(CliError::Invalid(format!("{} has no data rows", input.display())));
    }
    let scenario = if settings.get("scenario").is_some() {
        settings.scenario()?
    } else {
        rows[0].scenario()?
    };
    let curve = scenario.dmt_curve()?;
    let window = settings.window()?;
    let tol = settings.tolerance()?;
    let format = settings.format()?;

    let mut rates: Vec<f64> = Vec::new();
    for row in &rows {
        if !rates.contains(&row.r) {
            rates.push(row.r);
        }
    }
    let mut lines = Vec::new();
    for r in rates {
        let estimates: Vec<_> = rows
            .iter()
            .filter(|row| row.r == r)
            .map(SimRow::estimate)
            .collect();
        let line = match fit_slope(&estimates, window) {
            Ok(fit) => {
                let verdict = compare(&fit, &curve, r, tol)?;
                let status = if verdict.pass { "pass" } else { "fail" }.to_string();
                FitLine {
                    r,
                    points_used: fit.points_used,
                    dropped_db: fit.dropped_db,
                    verdict: Some(verdict),
                    status,
                }
            }
            Err(e) => FitLine {
                r,
                points_used: 0,
                dropped_db: match &e {
                    crate::Error::InsufficientEvents { dropped_db, .. } => dropped_db.clone(),
                    _ => Vec::new(),
                },
                verdict: None,
                status: format!("insufficient: {e}"),
            },
        };
        lines.push(line);
    }

    let out = match format {
        Format::Json => to_json(&lines),
        Format::Csv => {
            let mut out =
                String::from("r,points_used,dropped_db,d_hat,stderr,d_analytic,rel_error,tolerance,status\n");
            for l in &lines {
                let dropped = l
                    .dropped_db
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(";");
                match &l.verdict {
                    Some(v) => out.push_str(&format!(
                        "{},{},{},{:.6},{:.6},{},{:.6},{},{}\n",
                        l.r,
                        l.points_used,
                        dropped,
                        v.d_hat,
                        v.stderr,
                        v.d_analytic,
                        v.rel_error,
                        v.tolerance,
                        l.status
                    )),
                    None => out.push_str(&format!(
                        "{},{},{},,,{},,{},\"{}\"\n",
                        l.r,
                        l.points_used,
                        dropped,
                        curve.eval(l.r).map(|d| d.to_string()).unwrap_or_default(),
                        tol,
                        l.status
                    )),
                }
            }
            out
        }
    };
    emit(settings, &out)?;
    if lines.iter().all(|l| l.status == "pass") {
        Ok(())
    } else {
        Err(CliError::Failed(
            "one or more slopes failed the comparison".into(),
        ))
    }
}

pub fn cmd_validate(settings: &Settings) -> Result<(), CliError> {
    let scenario = settings.scenario()?;
    let plan = settings.plan()?;
    let reports = validate_gains(&scenario, plan)?;
    let text = match settings.format()? {
        Format::Json => to_json(&reports),
        Format::Csv => {
            let mut out = String::from(
                "user,shape,n_samples,mean,variance,mean_rel_err,var_rel_err,ks_statistic,ks_critical,status\n",
            );
            for r in &reports {
                out.push_str(&format!(
                    "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{}\n",
                    r.user + 1,
                    r.shape,
                    r.n_samples,
                    r.mean,
                    r.variance,
                    r.mean_rel_err,
                    r.var_rel_err,
                    r.ks_statistic,
                    r.ks_critical,
                    if r.pass { "pass" } else { "fail" }
                ));
            }
            out
        }
    };
    emit(settings, &text)?;
    if reports.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(CliError::Failed("gain distribution check failed".into()))
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Curve(a) => cmd_curve(&a.settings()?),
        Command::Simulate(a) => cmd_simulate(&a.settings()?),
        Command::Validate(a) => cmd_validate(&a.settings()?),
        Command::Fit(a) => {
            let mut s = a.common.settings()?;
            s.set("input", a.input.as_ref().map(|p| p.display().to_string()));
            s.set("window", a.window.clone());
            s.set("tol", a.tol.clone());
            cmd_fit(&s)
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
