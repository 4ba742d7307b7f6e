//! Exact density-matrix simulation of protocol circuits: SPAM-noisy state
//! preparation, compiled MCM layers with outcome sampling, interleaved
//! single-qubit Clifford layers, and twirled terminating Pauli measurements.

pub mod circuit;
pub mod density;
pub mod enumerate;
pub mod log;
pub mod run;
pub mod spam;

pub use circuit::{CircuitSpec, McmLayer, ShotRecord, SignedPauli};
pub use density::{DensityMatrix, PauliCoefficients};
pub use enumerate::enumerate_expectation;
pub use run::{measure_pauli_twirled, run_circuit, sample_mcm, RunOptions};
pub use spam::SpamModel;
