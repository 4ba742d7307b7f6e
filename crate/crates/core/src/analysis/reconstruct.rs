//! Error-rate reconstruction: estimates the cycle-space chain behind a Pauli
//! error rate and recombines with the low-noise linearization, which holds up
//! to second order in the total error.

use serde::Serialize;

use crate::bits::Bits;
use crate::error::{CoreError, Result};
use crate::graph::{error_rate_chain, PatternTransferGraph, SpaceDecomposition};
use crate::pauli::PauliOp;
use crate::protocol::{estimate_chain, ExperimentBackend, ShotBudget};
use crate::rng::derive_seed;

const RATE_SALT: u64 = 0x7261_7465;

#[derive(Clone, Debug, Serialize)]
pub struct RateEstimate {
    pub a: Bits,
    pub b: Bits,
    pub p: PauliOp,
    pub value: Option<f64>,
    pub std: f64,
    pub repetitions: usize,
    pub failed: bool,
}

/// Estimates p_{a,b}^P by running its chain and adding the Kronecker-delta
/// offset of the linearization. Refuses non-learnable chains, reporting the
/// offending cut-part norm. With `repetitions > 1` the whole experiment is
/// repeated and the deviation comes from the repetition scatter.
#[allow(clippy::too_many_arguments)]
pub fn reconstruct_error_rate<B: ExperimentBackend>(
    a: &Bits,
    b: &Bits,
    p: &PauliOp,
    backend: &B,
    g: &PatternTransferGraph,
    per_walk_budget: &ShotBudget,
    seed: u64,
    exact: bool,
    repetitions: usize,
) -> Result<RateEstimate> {
    if repetitions == 0 {
        return Err(CoreError::InvalidConfig("repetitions must be positive".into()));
    }
    let chain = error_rate_chain(a, b, p, g);
    let decomposition = SpaceDecomposition::new(g);
    let cut_norm = decomposition.cut_norm(&chain);
    if cut_norm > crate::graph::LEARNABLE_TOL {
        return Err(CoreError::NotLearnable(cut_norm));
    }
    let offset = if a.is_zero() && b.is_zero() && p.is_identity() {
        1.0
    } else {
        0.0
    };
    let mut values = Vec::with_capacity(repetitions);
    let mut single_std = 0.0;
    for rep in 0..repetitions {
        let est = estimate_chain(
            &chain,
            g,
            backend,
            per_walk_budget,
            derive_seed(seed, RATE_SALT, rep as u64),
            exact,
        )?;
        match est.value {
            Some(v) => values.push(v + offset),
            None => {
                return Ok(RateEstimate {
                    a: *a,
                    b: *b,
                    p: *p,
                    value: None,
                    std: 0.0,
                    repetitions,
                    failed: true,
                })
            }
        }
        single_std = est.std;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let std = if values.len() > 1 {
        let var =
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (values.len() - 1) as f64;
        (var / values.len() as f64).sqrt()
    } else {
        single_std
    };
    Ok(RateEstimate {
        a: *a,
        b: *b,
        p: *p,
        value: Some(mean),
        std,
        repetitions,
        failed: false,
    })
}
