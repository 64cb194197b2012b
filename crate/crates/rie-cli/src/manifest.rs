//! Output directory handling and the run manifest.

use crate::error::CliError;
use rie::model::{PhysicalConstants, CONSTANTS};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

#[derive(Debug, Serialize)]
pub struct ConstantSet {
    pub id: &'static str,
    pub values: PhysicalConstants,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub constants: ConstantSet,
    pub config: BTreeMap<String, String>,
    pub derived: serde_json::Value,
    pub started_at: String,
    pub finished_at: String,
    pub runtime_seconds: f64,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
    pub strategy_histogram: BTreeMap<String, usize>,
}

/// Collects outputs of one run and writes them, then the manifest, into the
/// output directory. Every file is written through a temporary file and an
/// atomic rename.
pub struct Run {
    subcommand: String,
    out: Option<PathBuf>,
    started: OffsetDateTime,
    clock: Instant,
    outputs: Vec<String>,
    pub warnings: Vec<String>,
    pub histogram: BTreeMap<String, usize>,
    pub derived: serde_json::Value,
}

fn timestamp(t: OffsetDateTime) -> String {
    t.format(&Rfc3339).unwrap_or_else(|_| t.unix_timestamp().to_string())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

impl Run {
    pub fn start(subcommand: &str, out: Option<PathBuf>) -> Result<Self, CliError> {
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        Ok(Run {
            subcommand: subcommand.to_string(),
            out,
            started: OffsetDateTime::now_utc(),
            clock: Instant::now(),
            outputs: Vec::new(),
            warnings: Vec::new(),
            histogram: BTreeMap::new(),
            derived: serde_json::Value::Null,
        })
    }

    pub fn has_out(&self) -> bool {
        self.out.is_some()
    }

    /// Write `bytes` to `name` inside the output directory, if there is one.
    pub fn output(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        if let Some(dir) = &self.out {
            write_atomic(&dir.join(name), bytes)?;
            self.outputs.push(name.to_string());
        }
        Ok(())
    }

    pub fn finish(mut self, config: &crate::config::ConfigMap) -> Result<(), CliError> {
        let Some(dir) = self.out.clone() else {
            return Ok(());
        };
        self.output("run.cfg", config.to_text().as_bytes())?;
        let finished = OffsetDateTime::now_utc();
        let manifest = RunManifest {
            tool: "rie",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: self.subcommand,
            constants: ConstantSet {
                id: PhysicalConstants::IDENTIFIER,
                values: CONSTANTS,
            },
            config: config.echo(),
            derived: self.derived,
            started_at: timestamp(self.started),
            finished_at: timestamp(finished),
            runtime_seconds: self.clock.elapsed().as_secs_f64(),
            outputs: self.outputs,
            warnings: self.warnings,
            strategy_histogram: self.histogram,
        };
        let json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
        write_atomic(&dir.join("manifest.json"), &json)
    }
}
