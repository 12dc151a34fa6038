//! Config-driven experiment runner. Each scenario writes CSV tables, SVG
//! plots and a `report.json` into the output directory.

mod config;
mod output;
mod scenarios;
pub mod svg;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;

pub use config::{
    ConvergenceTrendScenario, EnergyIdentitySpec, ExperimentConfig, GpRunScenario, GridSpec, InitialState,
    LatticeInitial, LemmaSuiteScenario, ProtocolDemoScenario, RabiScenario, ScatteringSweepScenario, Scenario,
    SCHEMA_VERSION,
};
pub use output::{Findings, Sink, Table};

use crate::counting::suites::Check;
use crate::error::Result;

/// `git describe` of the source tree at build time, or the crate version.
pub const BUILD_ID: &str = env!("SPINOR_GP_BUILD_ID");

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub build_id: String,
    pub scenario: String,
    pub seed: u64,
    /// `ok`, `checks_failed` or `error`.
    pub status: String,
    pub error: Option<String>,
    pub checks: Vec<Check>,
    pub metrics: BTreeMap<String, f64>,
    pub constants: BTreeMap<String, f64>,
    pub labels: BTreeMap<String, String>,
    pub files: Vec<String>,
    /// The scenario as run; the output directory is left out so reruns elsewhere compare equal.
    pub parameters: Scenario,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.status == "ok"
    }
}

/// Runs the configured scenario. The report is always written; on failure it
/// carries the error and whatever was measured before it, and the error is
/// returned tagged with the scenario name.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    let kind = cfg.scenario.kind();
    cfg.validate().map_err(|e| e.in_scenario(kind))?;
    let start = Instant::now();
    let mut sink = Sink::create(&cfg.output_dir).map_err(|e| e.in_scenario(kind))?;
    let mut found = Findings::default();
    let outcome = scenarios::dispatch(cfg, &mut sink, &mut found);
    let status = match &outcome {
        Err(_) => "error",
        Ok(()) if found.checks.iter().all(|c| c.passed) => "ok",
        Ok(()) => "checks_failed",
    };
    let mut report = RunReport {
        schema_version: SCHEMA_VERSION,
        build_id: BUILD_ID.to_string(),
        scenario: kind.to_string(),
        seed: cfg.seed,
        status: status.to_string(),
        error: outcome.as_ref().err().map(|e| e.to_string()),
        checks: found.checks,
        metrics: found.metrics,
        constants: found.constants,
        labels: found.labels,
        files: sink.files().to_vec(),
        parameters: cfg.scenario.clone(),
        elapsed: start.elapsed(),
    };
    report.files.push("report.json".into());
    sink.json("report.json", &report).map_err(|e| e.in_scenario(kind))?;
    outcome.map_err(|e| e.in_scenario(kind))?;
    Ok(report)
}
