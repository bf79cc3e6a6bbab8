//! Reproducible experiment runner: scenarios, reports, artifacts and the
//! witness re-verification pass behind `widthlab verify`.

pub mod config;
pub mod scenarios;
pub mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use config::{ExperimentConfig, Scenario};

use crate::error::RunnerError;

/// One table cell value with its provenance tag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaggedValue {
    pub value: f64,
    pub provenance: crate::widths::Provenance,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<serde_json::Value>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match v {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Full scenario outcome: assertions, human-readable tables, and the
/// typed witnesses the verifier replays.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub config: ExperimentConfig,
    pub assertions: Vec<Assertion>,
    pub tables: Vec<Table>,
    pub witnesses: serde_json::Value,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

pub(crate) fn assert_into(
    assertions: &mut Vec<Assertion>,
    name: &str,
    passed: bool,
    detail: String,
) {
    assertions.push(Assertion {
        name: name.to_string(),
        passed,
        detail,
    });
}

/// Run the configured scenario and write artifacts (JSON report, CSV
/// tables, plot data) under `out_dir`.
pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<Report, RunnerError> {
    config.validate()?;
    if let Some(jobs) = config.jobs {
        // ignore failure: the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let report = match &config.scenario {
        Scenario::WidthScan { .. } => scenarios::width_scan::run(config)?,
        Scenario::S3Targets { .. } => scenarios::s3_targets::run(config)?,
        Scenario::DetectionSuite { .. } => scenarios::detection_suite::run(config)?,
        Scenario::FlatnormOracle { .. } => scenarios::flatnorm_oracle::run(config)?,
        Scenario::PackingBound { .. } => scenarios::packing_bound::run(config)?,
    };
    write_artifacts(&report, out_dir)?;
    Ok(report)
}

fn write_artifacts(report: &Report, out_dir: &Path) -> Result<PathBuf, RunnerError> {
    std::fs::create_dir_all(out_dir)?;
    let report_path = out_dir.join(format!("{}-report.json", report.scenario));
    let mut f = std::fs::File::create(&report_path)?;
    f.write_all(serde_json::to_string_pretty(report)?.as_bytes())?;
    for table in &report.tables {
        let path = out_dir.join(format!("{}-{}.csv", report.scenario, table.name));
        std::fs::write(path, table.to_csv())?;
    }
    Ok(report_path)
}
