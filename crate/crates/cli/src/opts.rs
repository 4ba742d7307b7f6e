//! Shared option groups: gate selection, instrument sources, shot budgets.

use std::path::PathBuf;

use clap::Args;

use mcmcb_core::channels::{
    instrument_from_json, random_instrument, random_measure_and_prepare, InstrumentData,
    InstrumentFile,
};
use mcmcb_core::clifford::{CliffordGen, CliffordTableau};
use mcmcb_core::error::{CoreError, Result};
use mcmcb_core::graph::build_syndrome_circuit;
use mcmcb_core::model::CliffordGate;
use mcmcb_core::pauli::PauliOp;
use mcmcb_core::protocol::ShotBudget;
use mcmcb_core::rng::derive_seed;
use mcmcb_core::sim::spam::SpamModel;

#[derive(Args, Debug, Clone)]
pub struct GateOpts {
    /// Named gate: identity | cnot | cnot-reversed. The wires are system
    /// qubits first, then ancillas; cnot uses wire 0 as control.
    #[arg(long, conflicts_with_all = ["stabilizers", "tableau_file"])]
    pub gate: Option<String>,
    /// Comma-separated stabilizers (e.g. ZZ,XX); builds the syndrome circuit
    /// with one ancilla per stabilizer.
    #[arg(long, conflicts_with = "tableau_file")]
    pub stabilizers: Option<String>,
    /// JSON tableau file (generator images with signs).
    #[arg(long)]
    pub tableau_file: Option<PathBuf>,
    /// Ancilla count; implied by --stabilizers.
    #[arg(long)]
    pub n: Option<usize>,
    /// System qubit count; implied by --stabilizers.
    #[arg(long)]
    pub m: Option<usize>,
}

pub struct ResolvedGate {
    pub n: usize,
    pub m: usize,
    pub gate: CliffordGate,
    pub stabilizers: Option<Vec<PauliOp>>,
}

impl GateOpts {
    pub fn resolve(&self) -> Result<ResolvedGate> {
        if let Some(stabs) = &self.stabilizers {
            let stabilizers: Vec<PauliOp> = stabs
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_>>()?;
            let (n, m, gens) = build_syndrome_circuit(&stabilizers)?;
            return Ok(ResolvedGate {
                n,
                m,
                gate: CliffordGate::from_circuit(n + m, &gens)?,
                stabilizers: Some(stabilizers),
            });
        }
        if let Some(path) = &self.tableau_file {
            let (n, m) = self.require_nm()?;
            let text = std::fs::read_to_string(path)?;
            let tableau: CliffordTableau = serde_json::from_str(&text)?;
            if tableau.n_qubits() != n + m {
                return Err(CoreError::InvalidConfig(format!(
                    "tableau acts on {} qubits but n + m = {}",
                    tableau.n_qubits(),
                    n + m
                )));
            }
            if !tableau.is_symplectic() {
                return Err(CoreError::InvalidConfig(
                    "tableau fails the symplectic check".into(),
                ));
            }
            return Ok(ResolvedGate {
                n,
                m,
                gate: CliffordGate::from_tableau(tableau),
                stabilizers: None,
            });
        }
        let name = self.gate.as_deref().unwrap_or("identity");
        let (n, m) = self.require_nm()?;
        let gate = match name {
            "identity" => CliffordGate::identity(n + m),
            "cnot" | "cnot-reversed" => {
                if n + m != 2 {
                    return Err(CoreError::InvalidConfig(
                        "cnot acts on exactly two wires".into(),
                    ));
                }
                let (c, t) = if name == "cnot" { (0, 1) } else { (1, 0) };
                CliffordGate::from_circuit(2, &[CliffordGen::Cnot(c, t)])?
            }
            other => {
                return Err(CoreError::InvalidConfig(format!(
                    "unknown gate {other:?}; use identity, cnot, cnot-reversed, \
                     --stabilizers or --tableau-file"
                )))
            }
        };
        Ok(ResolvedGate {
            n,
            m,
            gate,
            stabilizers: None,
        })
    }

    fn require_nm(&self) -> Result<(usize, usize)> {
        match (self.n, self.m) {
            (Some(n), Some(m)) => Ok((n, m)),
            _ => Err(CoreError::InvalidConfig(
                "--n and --m are required unless --stabilizers implies them".into(),
            )),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct InstrumentOpts {
    /// Instrument JSON file; alternatively generate one with --eps.
    #[arg(long)]
    pub instrument: Option<PathBuf>,
    /// Noise scale for a generated instrument.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Generated instrument kind: usi | map.
    #[arg(long, default_value = "usi")]
    pub kind: String,
    /// SPAM noise strength for the simulated backend.
    #[arg(long, default_value_t = 0.01)]
    pub spam_strength: f64,
}

const GEN_SALT: u64 = 0x67656e;
const SPAM_SALT: u64 = 0x7370616d;

impl InstrumentOpts {
    pub fn load(&self, n: usize, m: usize, seed: u64) -> Result<InstrumentData> {
        if let Some(path) = &self.instrument {
            let text = std::fs::read_to_string(path)?;
            let file: InstrumentFile = serde_json::from_str(&text)?;
            let data = instrument_from_json(&file)?;
            if data.n() != n || data.m() != m {
                return Err(CoreError::InvalidConfig(format!(
                    "instrument is ({}, {}) but the gate expects ({n}, {m})",
                    data.n(),
                    data.m()
                )));
            }
            return Ok(data);
        }
        let eps = self.eps.ok_or_else(|| {
            CoreError::InvalidConfig("provide --instrument FILE or --eps for a generated one".into())
        })?;
        match self.kind.as_str() {
            "usi" => Ok(InstrumentData::Usi(random_instrument(
                n,
                m,
                eps,
                derive_seed(seed, GEN_SALT, 0),
            )?)),
            "map" => Ok(InstrumentData::Map(random_measure_and_prepare(
                n,
                m,
                eps,
                derive_seed(seed, GEN_SALT, 1),
            )?)),
            other => Err(CoreError::InvalidConfig(format!(
                "unknown instrument kind {other:?}"
            ))),
        }
    }

    pub fn spam(&self, n_qubits: usize, seed: u64) -> Result<SpamModel> {
        if self.spam_strength == 0.0 {
            Ok(SpamModel::ideal(n_qubits))
        } else {
            SpamModel::random(n_qubits, self.spam_strength, derive_seed(seed, SPAM_SALT, 0))
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct BudgetOpts {
    #[arg(long, default_value_t = 100)]
    pub circuits: usize,
    #[arg(long, default_value_t = 100)]
    pub shots_per_circuit: usize,
    /// Auxiliary circuits; defaults to the main count.
    #[arg(long)]
    pub aux_circuits: Option<usize>,
    /// Auxiliary shots per circuit; defaults to the main count.
    #[arg(long)]
    pub aux_shots: Option<usize>,
    #[arg(long, default_value_t = 200)]
    pub bootstrap_resamples: usize,
}

impl BudgetOpts {
    pub fn to_budget(&self) -> ShotBudget {
        ShotBudget {
            circuits: self.circuits,
            shots_per_circuit: self.shots_per_circuit,
            aux_circuits: self.aux_circuits.unwrap_or(self.circuits),
            aux_shots_per_circuit: self.aux_shots.unwrap_or(self.shots_per_circuit),
            bootstrap_resamples: self.bootstrap_resamples,
        }
    }
}
