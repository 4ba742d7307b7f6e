//! Shot-log export: CSV of per-shot outcomes plus a JSON metadata sidecar.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::sim::circuit::{CircuitSpec, ShotRecord};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatchMeta {
    pub seed: u64,
    pub shots: usize,
    pub spec_hash: String,
}

impl BatchMeta {
    pub fn new(seed: u64, shots: usize, spec: &CircuitSpec) -> Self {
        BatchMeta {
            seed,
            shots,
            spec_hash: spec.content_hash(),
        }
    }
}

/// One row per shot: columns m_1..m_l as bit strings, then r.
pub fn write_shot_csv<W: Write>(mut w: W, depth: usize, records: &[ShotRecord]) -> Result<()> {
    let mut header: Vec<String> = (1..=depth).map(|i| format!("m_{i}")).collect();
    header.push("r".into());
    writeln!(w, "{}", header.join(","))?;
    for rec in records {
        let mut row: Vec<String> = rec.mcm_outcomes.iter().map(|b| b.to_string()).collect();
        row.push(rec.terminating.to_string());
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
