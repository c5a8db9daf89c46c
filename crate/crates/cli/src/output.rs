//! CSV tables, JSON documents and their provenance sidecars.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, Result};

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Trailing `# {json}` line.
    pub footer: Option<Value>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
            footer: None,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let mut bytes = w
            .into_inner()
            .map_err(|e| CliError::io("csv buffer", e.into_error()))?;
        if let Some(footer) = &self.footer {
            writeln!(bytes, "# {}", serde_json::to_string(footer)?)
                .map_err(|e| CliError::io("csv buffer", e))?;
        }
        Ok(bytes)
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Table(Table),
    Json(Value),
}

impl Payload {
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        match self {
            Payload::Table(t) => t.to_bytes(),
            Payload::Json(v) => {
                let mut s = serde_json::to_vec_pretty(v)?;
                s.push(b'\n');
                Ok(s)
            }
        }
    }
}

/// Full record of an invocation, written next to the output file.
#[derive(Debug, Clone, Serialize)]
pub struct Sidecar {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub argv: Vec<String>,
    /// Every parameter after defaults and config were applied.
    pub parameters: Value,
    /// Extra facts about the result (flags, counts).
    pub notes: Value,
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Writes the payload to `out` (plus sidecar) or to stdout.
pub fn emit(payload: &Payload, out: Option<&Path>, sidecar: &Sidecar) -> Result<()> {
    let bytes = payload.to_bytes()?;
    match out.filter(|p| *p != Path::new("-")) {
        Some(path) => {
            fs::write(path, &bytes)
                .map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
            let side = sidecar_path(path);
            let mut json = serde_json::to_vec_pretty(sidecar)?;
            json.push(b'\n');
            fs::write(&side, json)
                .map_err(|e| CliError::io(format!("writing {}", side.display()), e))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(&bytes)
                .and_then(|_| lock.flush())
                .map_err(|e| CliError::io("writing stdout", e))?;
        }
    }
    Ok(())
}
