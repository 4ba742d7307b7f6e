//! State-preparation and terminating-measurement noise. The preparation is a
//! fixed unknown state; the terminating measurement noise is a symmetric
//! Pauli channel whose fidelities depend only on weight patterns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::sim::density::DensityMatrix;

#[derive(Clone, Debug)]
pub struct SpamModel {
    prep_state: DensityMatrix,
    /// Terminating-measurement fidelity per weight pattern value; entry 0 is 1.
    term_fidelities: Vec<f64>,
}

impl SpamModel {
    pub fn new(prep_state: DensityMatrix, term_fidelities: Vec<f64>) -> Result<Self> {
        if term_fidelities.len() != 1 << prep_state.n_qubits() {
            return Err(CoreError::SizeMismatch(format!(
                "expected {} terminating fidelities, got {}",
                1 << prep_state.n_qubits(),
                term_fidelities.len()
            )));
        }
        if (term_fidelities[0] - 1.0).abs() > 1e-12 {
            return Err(CoreError::NonPhysical(format!(
                "terminating fidelity of the zero pattern is {}, expected 1",
                term_fidelities[0]
            )));
        }
        Ok(SpamModel {
            prep_state,
            term_fidelities,
        })
    }

    pub fn ideal(n_qubits: usize) -> Self {
        SpamModel {
            prep_state: DensityMatrix::all_zeros(n_qubits),
            term_fidelities: vec![1.0; 1 << n_qubits],
        }
    }

    /// Product-form SPAM: preparation (I + c_i Z)/2 per qubit and terminating
    /// fidelities multiplying one factor d_i per supported qubit.
    pub fn product(prep_z: &[f64], meas: &[f64]) -> Result<Self> {
        let n = prep_z.len();
        if meas.len() != n {
            return Err(CoreError::SizeMismatch(
                "prep and measurement factor counts differ".into(),
            ));
        }
        let mut term = vec![1.0; 1 << n];
        for (t, v) in term.iter_mut().enumerate() {
            for (i, d) in meas.iter().enumerate() {
                if (t >> i) & 1 == 1 {
                    *v *= d;
                }
            }
        }
        SpamModel::new(DensityMatrix::z_product(prep_z), term)
    }

    /// Seeded product-form SPAM with per-qubit infidelities around `strength`.
    pub fn random(n_qubits: usize, strength: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| 1.0 - strength * (0.5 + rng.gen::<f64>());
        let prep: Vec<f64> = (0..n_qubits).map(|_| draw(&mut rng)).collect();
        let meas: Vec<f64> = (0..n_qubits).map(|_| draw(&mut rng)).collect();
        SpamModel::product(&prep, &meas)
    }

    pub fn n_qubits(&self) -> usize {
        self.prep_state.n_qubits()
    }

    pub fn prep_state(&self) -> &DensityMatrix {
        &self.prep_state
    }

    pub fn term_fidelity(&self, pattern_value: usize) -> f64 {
        self.term_fidelities[pattern_value]
    }

    pub fn term_fidelities(&self) -> &[f64] {
        &self.term_fidelities
    }

    /// The terminating-noise Pauli channel Lambda_M applied to a state.
    pub fn apply_terminating_noise(&self, rho: &DensityMatrix) -> DensityMatrix {
        let mut out = rho.clone();
        out.scale_by_pattern(|t| self.term_fidelities[t]);
        out
    }

    /// Gauge-companion constructor: fields already transformed, zero-pattern
    /// fidelity still 1 but other entries may leave (0, 1] for eta != 1.
    pub(crate) fn from_raw(prep_state: DensityMatrix, term_fidelities: Vec<f64>) -> Self {
        SpamModel {
            prep_state,
            term_fidelities,
        }
    }
}
