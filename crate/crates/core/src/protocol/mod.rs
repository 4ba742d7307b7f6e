//! The generalized cycle-benchmarking estimator: compile a pattern-transfer
//! walk into a circuit, run main and auxiliary experiments, Fourier-transform
//! the outcomes, and report log-fidelity sums with bootstrap uncertainty.

mod compile;
mod estimate;
mod variance;

pub use compile::{compile_path, CompiledExperiment};
pub use estimate::{
    decompose_into_walks, estimate_chain, estimate_cycle_concatenated, estimate_path,
    estimate_path_exact, theorem1_rhs, ChainEstimate, CycleReport, ExperimentBackend, WalkPlan,
};
pub use variance::predict_variance;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::graph::{EdgeLabel, PatternTransferGraph};

/// An ordered edge walk on the pattern transfer graph. Consecutive edges must
/// be compatible: dst(e_i) = src(e_{i+1}).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub edges: Vec<EdgeLabel>,
}

impl PathSpec {
    pub fn new(edges: Vec<EdgeLabel>) -> Self {
        PathSpec { edges }
    }

    pub fn from_edge_indices(g: &PatternTransferGraph, indices: &[usize]) -> Self {
        PathSpec {
            edges: indices.iter().map(|&e| g.edge(e).label).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The implied vertex sequence v_0..v_l; errors if the path condition
    /// fails.
    pub fn vertices(&self, g: &PatternTransferGraph) -> Result<Vec<usize>> {
        if self.edges.is_empty() {
            return Err(CoreError::PathCondition {
                step: 0,
                detail: "empty path".into(),
            });
        }
        let mut verts = Vec::with_capacity(self.edges.len() + 1);
        let first = g.edge(g.edge_index(&self.edges[0])?);
        verts.push(first.src);
        let mut at = first.src;
        for (i, label) in self.edges.iter().enumerate() {
            let info = g.edge(g.edge_index(label)?);
            if info.src != at {
                return Err(CoreError::PathCondition {
                    step: i,
                    detail: format!(
                        "edge {} starts at {} but the walk is at {}",
                        label,
                        g.vertex_name(info.src),
                        g.vertex_name(at)
                    ),
                });
            }
            at = info.dst;
            verts.push(at);
        }
        Ok(verts)
    }

    pub fn is_cycle(&self, g: &PatternTransferGraph) -> Result<bool> {
        let verts = self.vertices(g)?;
        Ok(verts.first() == verts.last())
    }

    /// The L-fold concatenation of a closed walk.
    pub fn repeat(&self, times: usize) -> PathSpec {
        let mut edges = Vec::with_capacity(self.edges.len() * times);
        for _ in 0..times {
            edges.extend_from_slice(&self.edges);
        }
        PathSpec { edges }
    }
}

/// Shots and circuit counts for one estimation. The auxiliary experiment
/// mirrors the main one by default.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ShotBudget {
    pub circuits: usize,
    pub shots_per_circuit: usize,
    pub aux_circuits: usize,
    pub aux_shots_per_circuit: usize,
    pub bootstrap_resamples: usize,
}

impl ShotBudget {
    /// Equal main and aux allocation, the convention of the numerical
    /// experiments (100 circuits x 100 shots each way).
    pub fn symmetric(circuits: usize, shots_per_circuit: usize) -> Self {
        ShotBudget {
            circuits,
            shots_per_circuit,
            aux_circuits: circuits,
            aux_shots_per_circuit: shots_per_circuit,
            bootstrap_resamples: 200,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.circuits == 0 || self.shots_per_circuit == 0 {
            return Err(CoreError::InvalidConfig(
                "budget needs at least one circuit and one shot".into(),
            ));
        }
        if self.aux_circuits == 0 || self.aux_shots_per_circuit == 0 {
            return Err(CoreError::InvalidConfig(
                "auxiliary budget needs at least one circuit and one shot".into(),
            ));
        }
        Ok(())
    }

    pub fn shots_main(&self) -> usize {
        self.circuits * self.shots_per_circuit
    }

    pub fn shots_aux(&self) -> usize {
        self.aux_circuits * self.aux_shots_per_circuit
    }
}

/// A random directed walk of the requested length obtained by following
/// out-edges; None when the walk dead-ends early.
pub fn random_walk(
    g: &PatternTransferGraph,
    len: usize,
    rng: &mut impl rand::Rng,
) -> Option<PathSpec> {
    let start = rng.gen_range(0..g.n_vertices());
    let mut at = start;
    let mut edges = Vec::with_capacity(len);
    for _ in 0..len {
        let options: Vec<usize> = (0..g.n_edges()).filter(|&e| g.edge(e).src == at).collect();
        if options.is_empty() {
            return None;
        }
        let e = options[rng.gen_range(0..options.len())];
        edges.push(g.edge(e).label);
        at = g.edge(e).dst;
    }
    Some(PathSpec::new(edges))
}

/// Protocol output: the estimate of -log lambda_M^{v_0} + sum log lambda
/// + log lambda_M^{v_l}, its bootstrap deviation, raw means and accounting.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EstimationReport {
    pub value: Option<f64>,
    pub std: f64,
    pub s_hat: f64,
    pub t_hat: f64,
    pub shots_main: usize,
    pub shots_aux: usize,
    pub circuits: usize,
    pub failed: bool,
}

impl EstimationReport {
    pub fn value_or_err(&self) -> Result<f64> {
        self.value.ok_or_else(|| {
            CoreError::EstimationFailed(format!(
                "s/t = {}/{} is not positive",
                self.s_hat, self.t_hat
            ))
        })
    }
}
