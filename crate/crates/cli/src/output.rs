//! Run directory layout: `report.json`, `data.csv`, `config.toml`, plus command extras.
//! Every file carries the tool version and the hash of the effective config.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::CliError;

pub const TOOL: &str = "billiard-lab";

/// Rows of plot-ready numbers.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table { header: header.iter().map(|h| h.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }
}

pub struct Output {
    pub report: Value,
    pub table: Table,
    /// Extra JSON files, written inside the same envelope as the report.
    pub files: Vec<(&'static str, &'static str, Value)>,
    /// Reported after the files are written, for runs that finished with a dynamics stop.
    pub failure: Option<CliError>,
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// Hex SHA-256 of the canonical JSON of the effective config.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let canonical = serde_json::to_string(cfg).expect("config serializes");
    Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn envelope(hash: &str, command: &str, key: &str, body: Value) -> Value {
    let mut v = json!({ "tool": TOOL, "version": billiard_lab::VERSION, "config_hash": hash, "command": command });
    v[key] = body;
    v
}

pub fn write_run(dir: &Path, cfg: &ExperimentConfig, command: &str, out: Output) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let hash = config_hash(cfg);
    let stamp = format!("# {TOOL} {} config {hash}\n", billiard_lab::VERSION);

    let toml_text = toml::to_string(cfg).map_err(|e| CliError::Config(e.to_string()))?;
    fs::write(dir.join("config.toml"), format!("{stamp}{toml_text}"))?;

    let mut report = envelope(&hash, command, "report", out.report);
    report["config"] = to_value(cfg);
    fs::write(dir.join("report.json"), pretty(&report) + "\n")?;

    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(&out.table.header).map_err(csv_err)?;
    for r in &out.table.rows {
        w.write_record(r).map_err(csv_err)?;
    }
    let body = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    fs::write(dir.join("data.csv"), [stamp.as_bytes(), &body].concat())?;

    for (name, key, value) in out.files {
        fs::write(dir.join(name), pretty(&envelope(&hash, command, key, value)) + "\n")?;
    }
    out.failure.map_or(Ok(()), Err)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes")
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e.to_string()))
}
