//! The full noise model handed to the simulator and the estimators: the ideal
//! Clifford gate, the compiled instrument noise, and the SPAM model.

use crate::channels::{
    fidelities_from_rates, DualChannel, FidelityTable, UniformStochasticInstrument,
};
use crate::clifford::{CliffordGen, CliffordTableau};
use crate::error::{CoreError, Result};
use crate::pauli::PauliOp;
use crate::sim::spam::SpamModel;
use crate::unitary::{circuit_matrix, unitary_from_tableau, CMat};

/// An ideal Clifford gate with its conjugation tableau, the inverse tableau,
/// and the dense unitary used by the density-matrix simulator.
#[derive(Clone, Debug)]
pub struct CliffordGate {
    tableau: CliffordTableau,
    inverse: CliffordTableau,
    unitary: CMat,
}

impl CliffordGate {
    pub fn from_tableau(tableau: CliffordTableau) -> Self {
        let unitary = unitary_from_tableau(&tableau);
        let inverse = tableau.inverse();
        CliffordGate {
            tableau,
            inverse,
            unitary,
        }
    }

    pub fn from_circuit(n_qubits: usize, gens: &[CliffordGen]) -> Result<Self> {
        let tableau = CliffordTableau::from_circuit(n_qubits, gens)?;
        let inverse = tableau.inverse();
        let unitary = circuit_matrix(n_qubits, gens);
        Ok(CliffordGate {
            tableau,
            inverse,
            unitary,
        })
    }

    pub fn identity(n_qubits: usize) -> Self {
        CliffordGate::from_circuit(n_qubits, &[]).expect("empty circuit")
    }

    pub fn n_qubits(&self) -> usize {
        self.tableau.n_qubits()
    }

    pub fn tableau(&self) -> &CliffordTableau {
        &self.tableau
    }

    pub fn inverse_tableau(&self) -> &CliffordTableau {
        &self.inverse
    }

    pub fn unitary(&self) -> &CMat {
        &self.unitary
    }

    /// G^dag (Q (x) Z^x) G with its sign; the operator behind the dual bras.
    pub fn dagger_conjugate(&self, p: &PauliOp) -> Result<(PauliOp, i8)> {
        self.inverse.conjugate(p)
    }
}

/// Instrument, gate and SPAM bundled for simulation and estimation.
#[derive(Clone, Debug)]
pub struct NoiseModel {
    n: usize,
    m: usize,
    gate: CliffordGate,
    usi: UniformStochasticInstrument,
    fidelities: FidelityTable,
    dual: DualChannel,
    spam: SpamModel,
    cumulative: Vec<f64>,
}

impl NoiseModel {
    pub fn new(
        gate: CliffordGate,
        usi: UniformStochasticInstrument,
        spam: SpamModel,
    ) -> Result<Self> {
        let (n, m) = (usi.n(), usi.m());
        if gate.n_qubits() != n + m {
            return Err(CoreError::SizeMismatch(format!(
                "gate on {} qubits, instrument expects {}",
                gate.n_qubits(),
                n + m
            )));
        }
        if spam.n_qubits() != n + m {
            return Err(CoreError::SizeMismatch(format!(
                "SPAM on {} qubits, instrument expects {}",
                spam.n_qubits(),
                n + m
            )));
        }
        usi.validate(crate::channels::NEGATIVE_RATE_TOL)?;
        let fidelities = fidelities_from_rates(&usi);
        let dual = DualChannel::new(fidelities.clone(), gate.tableau())?;
        let mut cumulative = Vec::with_capacity(usi.rates().len());
        let mut acc = 0.0;
        for r in usi.rates() {
            acc += r.max(0.0);
            cumulative.push(acc);
        }
        Ok(NoiseModel {
            n,
            m,
            gate,
            usi,
            fidelities,
            dual,
            spam,
            cumulative,
        })
    }

    /// Convenience constructor for the common simulated setup.
    pub fn with_default_spam(
        gate: CliffordGate,
        usi: UniformStochasticInstrument,
        spam_strength: f64,
        seed: u64,
    ) -> Result<Self> {
        let spam = SpamModel::random(usi.n() + usi.m(), spam_strength, seed)?;
        NoiseModel::new(gate, usi, spam)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn gate(&self) -> &CliffordGate {
        &self.gate
    }

    pub fn usi(&self) -> &UniformStochasticInstrument {
        &self.usi
    }

    pub fn fidelities(&self) -> &FidelityTable {
        &self.fidelities
    }

    pub fn dual_channel(&self) -> &DualChannel {
        &self.dual
    }

    pub fn spam(&self) -> &SpamModel {
        &self.spam
    }

    /// Draws (a, b, P) from the rate table. Rates clipped at 0 for sampling;
    /// construction rejects anything below the physicality tolerance.
    pub fn sample_error(&self, rng: &mut impl rand::Rng) -> (usize, usize, PauliOp) {
        let total = *self.cumulative.last().expect("non-empty table");
        let r = rng.gen::<f64>() * total;
        let idx = self.cumulative.partition_point(|c| *c < r);
        let idx = idx.min(self.cumulative.len() - 1);
        let (a, b, p) = self.usi.decode_index(idx);
        (a.value(), b.value(), p)
    }
}
