//! Deterministic result files: JSON with a metadata block (timestamp isolated
//! there) and CSV with 17-significant-digit numbers.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use mcmcb_core::error::Result;

pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt17).unwrap_or_else(|| "nan".into())
}

#[derive(Serialize)]
pub struct Meta {
    pub command: String,
    pub seed: Option<u64>,
    pub timestamp_unix: u64,
}

impl Meta {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Meta {
            command: command.into(),
            seed,
            timestamp_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

pub fn write_json<S: Serialize>(path: &Path, meta: &Meta, body: &S) -> Result<()> {
    let doc = json!({
        "meta": meta,
        "result": serde_json::to_value(body)?,
    });
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "{}", header.join(","))?;
    for row in rows {
        writeln!(f, "{}", row.join(","))?;
    }
    Ok(())
}

/// Plot-data rows (label, y, yerr) for external renderers.
pub fn write_plot_data(path: &Path, rows: &[(String, f64, f64)]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "label,y,yerr")?;
    for (label, y, yerr) in rows {
        writeln!(f, "{},{},{}", label, fmt17(*y), fmt17(*yerr))?;
    }
    Ok(())
}

pub fn out_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}
