use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::config::ScenarioConfig;
use crate::diagnostics::{CheckRecord, DiagnosticsReport, SeriesRow};
use crate::Result;

/// Columns of `series.csv`, fixed for every scenario.
pub const SERIES_COLUMNS: [&str; 11] =
    ["t", "I1", "I2", "H2", "Hs_target", "weighted_r", "lambda1", "lambda2", "lambda3", "lambda4", "lambda5"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    SolverFailure,
}

impl Status {
    /// Process exit code for this outcome.
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::SolverFailure => 3,
        }
    }
}

/// A CSV file: name, header and preformatted cells.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn series(name: &str, rows: &[SeriesRow]) -> Self {
        let mut table = Table::new(name, &SERIES_COLUMNS);
        for row in rows {
            let mut cells: Vec<String> =
                [row.t, row.i1, row.i2, row.h2, row.hs_target, row.weighted_r].iter().map(|v| num(*v)).collect();
            for j in 0..5 {
                cells.push(row.lambdas.get(j).map(|v| num(*v)).unwrap_or_default());
            }
            table.rows.push(cells);
        }
        table
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Shortest round-trip scientific notation.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

/// Everything a scenario produces.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub config: ScenarioConfig,
    pub status: Status,
    pub report: DiagnosticsReport,
    pub metrics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    /// `series.csv` first, then scenario-specific tables.
    pub tables: Vec<Table>,
    /// Solver failure description.
    pub message: Option<String>,
}

impl RunOutput {
    pub fn summary(&self) -> Summary<'_> {
        Summary {
            scenario: self.config.scenario.name(),
            status: self.status,
            passed: self.status == Status::Pass,
            seed: self.config.seed,
            config: &self.config,
            checks: &self.report.checks,
            metrics: &self.metrics,
            notes: &self.notes,
            message: self.message.as_deref(),
        }
    }

    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.summary())? + "\n")
    }
}

#[derive(Serialize)]
pub struct Summary<'a> {
    pub scenario: &'a str,
    pub status: Status,
    pub passed: bool,
    pub seed: u64,
    pub config: &'a ScenarioConfig,
    pub checks: &'a [CheckRecord],
    pub metrics: &'a BTreeMap<String, f64>,
    pub notes: &'a [String],
    pub message: Option<&'a str>,
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Writes every table and `summary.json` into `dir`.
pub fn emit(output: &RunOutput, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    for table in &output.tables {
        write_atomic(&dir.join(&table.name), &table.to_csv())?;
    }
    write_atomic(&dir.join("summary.json"), &output.summary_json()?)
}
