//! CSV and JSON experiment reports.
//!
//! CSV is the canonical bit-exact artifact: UTF-8, comma separators, one
//! header row, reals at 17 significant digits. Every CSV written to a
//! file gets a JSON mirror (same stem, `.json`) carrying the run
//! metadata: command, config digest, seed, artifact version and wall
//! time. Estimates never travel without their standard error; an absent
//! error is an explicit empty cell, not a zero.

use std::io::Write;

use crate::error::Result;
use crate::rng::SeedSpec;

/// One table cell.
#[derive(Clone, Debug)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
    /// Explicit SE-absent / not-applicable marker (empty cell).
    Absent,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Real(x) => fmt_real(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Absent => String::new(),
        }
    }
}

/// 17 significant digits, scientific notation; canonical across runs.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// A finished experiment: rectangular rows plus run metadata.
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub command: String,
    pub config_digest: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub wall_ms: u64,
    pub seed: SeedSpec,
    pub artifact_version: String,
}

impl ExperimentReport {
    pub fn new(command: &str, digest: String, columns: &[&str], seed: SeedSpec) -> Self {
        ExperimentReport {
            command: command.to_string(),
            config_digest: digest,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            wall_ms: 0,
            seed,
            artifact_version: crate::ARTIFACT_VERSION.to_string(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::render).collect())
            .collect();
        let value = serde_json::json!({
            "command": self.command,
            "config_digest": self.config_digest,
            "artifact_version": self.artifact_version,
            "seed": { "master_seed": self.seed.master_seed, "stream_index": self.seed.stream_index },
            "wall_ms": self.wall_ms,
            "columns": self.columns,
            "rows": rows,
        });
        serde_json::to_string_pretty(&value).expect("report serialization")
    }

    /// Writes the CSV to `path` (or stdout when `None`) and, for file
    /// output, the JSON mirror next to it.
    pub fn write(&self, path: Option<&str>) -> Result<()> {
        match path {
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(self.to_csv().as_bytes())?;
                Ok(())
            }
            Some(p) => {
                std::fs::write(p, self.to_csv())?;
                let json_path = match p.rsplit_once('.') {
                    Some((stem, _)) => format!("{stem}.json"),
                    None => format!("{p}.json"),
                };
                std::fs::write(json_path, self.to_json())?;
                Ok(())
            }
        }
    }
}

/// FNV-1a 64 over the canonical configuration string; stable across runs
/// with identical configuration.
pub fn config_digest(parts: &[&str]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for part in parts {
        for byte in part.as_bytes() {
            hash ^= *byte as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
        hash ^= 0x1f;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}
