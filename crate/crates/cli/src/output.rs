use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, Format};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(u64),
    Num(f64),
    Text(String),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// A named table written as `<name>.csv` or `<name>.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    #[serde(skip)]
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_columns(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self { name: name.into(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Int(v) => write!(out, "{v}").unwrap(),
                    Cell::Num(v) => write!(out, "{v}").unwrap(),
                    Cell::Text(s) => out.push_str(s),
                }
            }
            out.push('\n');
        }
        out
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => serde_json::to_string(self).expect("tables serialize") + "\n",
        }
    }
}

/// Everything an experiment produced.
#[derive(Debug, Default)]
pub struct Report {
    pub tables: Vec<Table>,
    pub summary: serde_json::Map<String, serde_json::Value>,
    /// Set when a built-in check failed; the data are still written.
    pub failure: Option<String>,
}

impl Report {
    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.to_string(), serde_json::to_value(value).expect("summary value"));
    }
}

#[derive(Debug, Serialize)]
struct FileEntry {
    path: String,
    bytes: usize,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    experiment: &'a str,
    seed: u64,
    config: &'a ExperimentConfig,
    summary: &'a serde_json::Map<String, serde_json::Value>,
    files: Vec<FileEntry>,
}

/// Writes every table plus `manifest.json` into `dir`.
pub fn write_report(dir: &Path, experiment: &str, cfg: &ExperimentConfig, report: &Report) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let format = cfg.format();
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut files = Vec::with_capacity(report.tables.len());
    for table in &report.tables {
        let name = format!("{}.{ext}", table.name);
        let body = table.render(format);
        fs::write(dir.join(&name), &body)?;
        files.push(FileEntry { path: name, bytes: body.len(), sha256: hex::encode(Sha256::digest(body.as_bytes())) });
    }
    let manifest = Manifest {
        schema_version: crate::config::SCHEMA_VERSION,
        tool: "alphadiv",
        version: env!("CARGO_PKG_VERSION"),
        experiment,
        seed: cfg.seed(),
        config: cfg,
        summary: &report.summary,
        files,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    fs::write(dir.join("manifest.json"), text)?;
    Ok(())
}
