//! Result tables, JSON payloads and run manifests.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::{ExperimentConfig, Format};
use crate::CliError;

/// Rows with a header; every row has one cell per header entry.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(&self.headers).map_err(io_err)?;
        for row in &self.rows {
            wtr.write_record(row).map_err(io_err)?;
        }
        wtr.flush().map_err(|e| CliError::Failure(format!("write: {e}")))
    }
}

/// Formats an optional cell as empty when absent.
pub fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn io_err(e: csv::Error) -> CliError {
    CliError::Failure(format!("write: {e}"))
}

/// The data produced by one command.
pub struct Artifact {
    pub json: Value,
    pub table: Table,
    pub warnings: Vec<String>,
}

impl Artifact {
    pub fn new<T: Serialize>(data: &T, table: Table) -> Self {
        Artifact {
            json: serde_json::to_value(data).expect("results serialize"),
            table,
            warnings: Vec::new(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub config_echo: &'a ExperimentConfig,
    pub tool_version: &'static str,
    pub wall_time: f64,
    pub warnings: &'a [String],
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes the payload to `output` (or stdout) and, for files, the manifest.
pub fn emit(artifact: &Artifact, format: Format, config: &ExperimentConfig, wall_time: f64) -> Result<(), CliError> {
    let write_failure = |p: &Path, e: std::io::Error| CliError::Failure(format!("write {}: {e}", p.display()));
    match &config.output {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| write_failure(path, e))?;
            write_payload(artifact, format, std::io::BufWriter::new(file))?;
            let manifest = RunManifest {
                config_echo: config,
                tool_version: env!("CARGO_PKG_VERSION"),
                wall_time,
                warnings: &artifact.warnings,
            };
            let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
            let mpath = manifest_path(path);
            std::fs::write(&mpath, text + "\n").map_err(|e| write_failure(&mpath, e))?;
        }
        None => {
            write_payload(artifact, format, std::io::stdout().lock())?;
            for w in &artifact.warnings {
                eprintln!("warning: {w}");
            }
        }
    }
    Ok(())
}

fn write_payload<W: Write>(artifact: &Artifact, format: Format, mut w: W) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(&artifact.json).expect("payload serializes");
            writeln!(w, "{text}").map_err(|e| CliError::Failure(format!("write: {e}")))?;
            w.flush().map_err(|e| CliError::Failure(format!("write: {e}")))
        }
        Format::Csv => artifact.table.write_csv(w),
    }
}
