//! Simulation and SPAM-robust characterization of noisy mid-circuit
//! measurements: uniform stochastic instruments, exact density-matrix
//! simulation, pattern transfer graphs, and the cycle-benchmarking estimator.

pub mod analysis;
pub mod bits;
pub mod channels;
pub mod clifford;
pub mod error;
pub mod graph;
pub mod model;
pub mod pauli;
pub mod protocol;
pub mod rng;
pub mod sim;
pub mod unitary;

pub use bits::Bits;
pub use clifford::{CliffordGen, CliffordTableau, LocalLayer, Sign};
pub use error::{CoreError, Result};
pub use model::{CliffordGate, NoiseModel};
pub use pauli::{pattern, symplectic_inner, PauliOp, WeightPattern};
