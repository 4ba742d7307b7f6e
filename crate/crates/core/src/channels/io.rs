//! JSON instrument interchange format.
//!
//! { "n": 1, "m": 1, "kind": "usi", "rates": { "<a>|<b>|<Pauli>": rate, ... } }
//!
//! Omitted entries are zero. Measure-and-prepare instruments use kind "map"
//! with authoritative "measure_rates"/"prepare_rates" tables keyed
//! "<a>|<Pauli>"; their induced rate table is included for convenience.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{CoreError, Result};
use crate::pauli::PauliOp;

use super::{FidelityTable, MeasureAndPrepareInstrument, UniformStochasticInstrument};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstrumentFile {
    pub n: usize,
    pub m: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rates: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure_rates: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prepare_rates: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone)]
pub enum InstrumentData {
    Usi(UniformStochasticInstrument),
    Map(MeasureAndPrepareInstrument),
}

impl InstrumentData {
    /// The rate table driving the simulator, induced by convolution for
    /// measure-and-prepare instruments.
    pub fn usi(&self) -> UniformStochasticInstrument {
        match self {
            InstrumentData::Usi(u) => u.clone(),
            InstrumentData::Map(m) => m.induced_usi(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            InstrumentData::Usi(u) => u.n(),
            InstrumentData::Map(m) => m.n(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            InstrumentData::Usi(u) => u.m(),
            InstrumentData::Map(m) => m.m(),
        }
    }
}

fn usi_key(a: &Bits, b: &Bits, p: &PauliOp) -> String {
    format!("{a}|{b}|{p}")
}

fn half_key(a: &Bits, p: &PauliOp) -> String {
    format!("{a}|{p}")
}

fn parse_usi_key(key: &str, n: usize, m: usize) -> Result<(Bits, Bits, PauliOp)> {
    let parts: Vec<&str> = key.split('|').collect();
    if parts.len() != 3 {
        return Err(CoreError::Parse(format!("rate key {key:?} is not a|b|P")));
    }
    let a: Bits = parts[0].parse()?;
    let b: Bits = parts[1].parse()?;
    let p: PauliOp = parts[2].parse()?;
    if a.len() != n || b.len() != n || p.n_qubits() != m {
        return Err(CoreError::Parse(format!(
            "rate key {key:?} does not match n={n}, m={m}"
        )));
    }
    Ok((a, b, p))
}

fn parse_half_key(key: &str, n: usize, m: usize) -> Result<(Bits, PauliOp)> {
    let parts: Vec<&str> = key.split('|').collect();
    if parts.len() != 2 {
        return Err(CoreError::Parse(format!("rate key {key:?} is not a|P")));
    }
    let a: Bits = parts[0].parse()?;
    let p: PauliOp = parts[1].parse()?;
    if a.len() != n || p.n_qubits() != m {
        return Err(CoreError::Parse(format!(
            "rate key {key:?} does not match n={n}, m={m}"
        )));
    }
    Ok((a, p))
}

pub fn instrument_to_json(data: &InstrumentData) -> InstrumentFile {
    let usi = data.usi();
    let (n, m) = (usi.n(), usi.m());
    let mut rates = BTreeMap::new();
    for (idx, r) in usi.rates().iter().enumerate() {
        if *r != 0.0 {
            let (a, b, p) = usi.decode_index(idx);
            rates.insert(usi_key(&a, &b, &p), *r);
        }
    }
    match data {
        InstrumentData::Usi(_) => InstrumentFile {
            n,
            m,
            kind: "usi".into(),
            rates,
            measure_rates: None,
            prepare_rates: None,
        },
        InstrumentData::Map(map) => {
            let half = |table: &[f64]| {
                let mut out = BTreeMap::new();
                for (idx, r) in table.iter().enumerate() {
                    if *r != 0.0 {
                        let p = PauliOp::from_index(m, idx & ((1 << (2 * m)) - 1));
                        let a = Bits::new(n, idx >> (2 * m));
                        out.insert(half_key(&a, &p), *r);
                    }
                }
                out
            };
            InstrumentFile {
                n,
                m,
                kind: "map".into(),
                rates,
                measure_rates: Some(half(map.measure_rates())),
                prepare_rates: Some(half(map.prepare_rates())),
            }
        }
    }
}

pub fn instrument_from_json(file: &InstrumentFile) -> Result<InstrumentData> {
    let (n, m) = (file.n, file.m);
    match file.kind.as_str() {
        "usi" => {
            let mut rates = vec![0.0; UniformStochasticInstrument::table_len(n, m)];
            let probe = UniformStochasticInstrument::ideal(n, m);
            for (key, r) in &file.rates {
                let (a, b, p) = parse_usi_key(key, n, m)?;
                rates[probe.index(&a, &b, &p)] = *r;
            }
            Ok(InstrumentData::Usi(UniformStochasticInstrument::new(
                n, m, rates,
            )?))
        }
        "map" => {
            let read_half = |table: &Option<BTreeMap<String, f64>>, name: &str| -> Result<Vec<f64>> {
                let table = table.as_ref().ok_or_else(|| {
                    CoreError::Parse(format!("kind \"map\" requires {name}"))
                })?;
                let mut out = vec![0.0; MeasureAndPrepareInstrument::half_table_len(n, m)];
                for (key, r) in table {
                    let (a, p) = parse_half_key(key, n, m)?;
                    out[(a.value() << (2 * m)) | p.index()] = *r;
                }
                Ok(out)
            };
            let q = read_half(&file.measure_rates, "measure_rates")?;
            let r = read_half(&file.prepare_rates, "prepare_rates")?;
            Ok(InstrumentData::Map(MeasureAndPrepareInstrument::new(
                n, m, q, r,
            )?))
        }
        other => Err(CoreError::Parse(format!("unknown instrument kind {other:?}"))),
    }
}

/// Fidelity tables export in the same keyed form, "x|y|Q" -> lambda.
pub fn fidelity_table_to_keyed(f: &FidelityTable) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for (idx, v) in f.values().iter().enumerate() {
        if *v != 0.0 {
            let (x, y, q) = f.decode_index(idx);
            out.insert(usi_key(&x, &y, &q), *v);
        }
    }
    out
}
