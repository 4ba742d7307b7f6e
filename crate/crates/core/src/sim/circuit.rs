//! Circuit specifications for protocol runs and the per-shot record format.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bits::Bits;
use crate::clifford::LocalLayer;
use crate::error::{CoreError, Result};
use crate::pauli::PauliOp;

/// A phase-free Pauli observable together with the sign it is measured with.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedPauli {
    pub op: PauliOp,
    pub sign: i8,
}

impl SignedPauli {
    pub fn positive(op: PauliOp) -> Self {
        SignedPauli { op, sign: 1 }
    }
}

/// One compiled MCM layer: the Fourier mask (x_i + y_i) used in
/// post-processing and the interleaver applied after the measurement
/// (absent on the final layer).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McmLayer {
    pub fourier_mask: Bits,
    pub interleaver: Option<LocalLayer>,
}

/// A full protocol circuit: state preparation (the model's fixed state,
/// optionally realigned by a noiseless single-qubit rotation), a sequence of
/// MCM layers, and a terminating Pauli observable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub n: usize,
    pub m: usize,
    pub init_rotation: Option<LocalLayer>,
    pub layers: Vec<McmLayer>,
    pub terminating: SignedPauli,
}

impl CircuitSpec {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.n + self.m
    }

    pub fn validate(&self) -> Result<()> {
        let nq = self.n_qubits();
        if self.terminating.op.n_qubits() != nq {
            return Err(CoreError::InvalidCircuit(format!(
                "terminating observable on {} qubits, circuit has {nq}",
                self.terminating.op.n_qubits()
            )));
        }
        if let Some(w) = &self.init_rotation {
            if w.n_qubits() != nq {
                return Err(CoreError::InvalidCircuit("init rotation size mismatch".into()));
            }
        }
        for (i, layer) in self.layers.iter().enumerate() {
            if layer.fourier_mask.len() != self.n {
                return Err(CoreError::InvalidCircuit(format!(
                    "layer {i} mask has {} bits, expected {}",
                    layer.fourier_mask.len(),
                    self.n
                )));
            }
            if let Some(h) = &layer.interleaver {
                if h.n_qubits() != nq {
                    return Err(CoreError::InvalidCircuit(format!(
                        "layer {i} interleaver size mismatch"
                    )));
                }
            }
            if i + 1 == self.layers.len() && layer.interleaver.is_some() {
                return Err(CoreError::InvalidCircuit(
                    "no interleaver is applied after the final MCM".into(),
                ));
            }
        }
        Ok(())
    }

    /// Stable content hash for batch sidecars.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("spec serializes");
        let mut hasher = Sha256::new();
        hasher.update(json.as_bytes());
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Outcomes of one shot: the MCM results m_1..m_l and the terminating +-1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub mcm_outcomes: Vec<Bits>,
    pub terminating: i8,
}

impl ShotRecord {
    /// (-1)^{sum_i m_i . mask_i} r, the Fourier-weighted observable.
    pub fn fourier_weighted(&self, spec: &CircuitSpec) -> f64 {
        let mut parity = false;
        for (m, layer) in self.mcm_outcomes.iter().zip(spec.layers.iter()) {
            parity ^= m.dot(&layer.fourier_mask);
        }
        let s = if parity { -1.0 } else { 1.0 };
        s * self.terminating as f64
    }
}
