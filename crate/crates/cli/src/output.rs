//! CSV rows and run manifests.

use std::io::Write;
use std::path::{Path, PathBuf};

use cpa_gmac::optimizer::SweepRow;
use serde::Serialize;

use crate::error::CliError;

pub const HEADER: [&str; 11] = [
    "scheme",
    "constellation",
    "snr_db",
    "p2_ratio",
    "alpha",
    "theta_deg",
    "capacity_bits",
    "stderr_bits",
    "objective",
    "samples",
    "seed",
];

/// Six decimals; negative zero prints as zero.
pub fn fmt_f64(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.6}")
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn opt_u64(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn record(row: &SweepRow) -> [String; 11] {
    [
        row.scheme.to_string(),
        row.constellation.clone(),
        fmt_f64(row.snr_db),
        fmt_f64(row.p2_ratio),
        opt_f64(row.alpha),
        opt_f64(row.theta_deg),
        opt_f64(row.capacity_bits),
        opt_f64(row.stderr_bits),
        opt_f64(row.objective),
        opt_u64(row.samples),
        opt_u64(row.seed),
    ]
}

pub fn write_csv<W: Write>(w: W, rows: &[SweepRow]) -> Result<(), CliError> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    wtr.write_record(HEADER).map_err(CliError::io)?;
    for row in rows {
        wtr.write_record(record(row)).map_err(CliError::io)?;
    }
    wtr.flush().map_err(CliError::io)?;
    Ok(())
}

pub fn csv_string(rows: &[SweepRow]) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("CSV is ASCII"))
}

/// Everything needed to regenerate a CSV.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub params: serde_json::Value,
}

impl RunManifest {
    pub fn new(command: Vec<String>, params: serde_json::Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            params,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// `out.csv` → `out.manifest.json`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.json")
}

/// Writes the CSV to `out` (or stdout) and, for files, the manifest next to it.
pub fn emit(rows: &[SweepRow], manifest: &RunManifest, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let csv = csv_string(rows)?;
            std::fs::write(path, csv).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mp = manifest_path(path);
            std::fs::write(&mp, manifest.to_json()).map_err(|e| CliError::Io(format!("{}: {e}", mp.display())))?;
        }
        None => {
            let stdout = std::io::stdout();
            write_csv(stdout.lock(), rows)?;
        }
    }
    Ok(())
}
