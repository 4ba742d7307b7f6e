//! Measure-and-prepare independence testing: estimates the correlations
//! c^Q_{x1,x2,y1,y2}, which vanish exactly iff the instrument's fidelities
//! factorize into measurement and preparation parts.

use serde::Serialize;

use super::CorrelationQuery;
use crate::bits::Bits;
use crate::error::Result;
use crate::graph::{EdgeLabel, PatternTransferGraph};
use crate::pauli::PauliOp;
use crate::protocol::{
    compile_path, estimate_path, estimate_path_exact, ExperimentBackend, PathSpec, ShotBudget,
};
use crate::rng::derive_seed;
use rayon::prelude::*;

const INDEP_SALT: u64 = 0x696e_6470;

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceRow {
    pub query: CorrelationQuery,
    pub value: Option<f64>,
    pub std: f64,
    /// |value| <= 3 std; None when any component estimate failed.
    pub consistent_with_zero: Option<bool>,
}

/// Estimates each query as four single-edge walk estimates whose end points
/// cancel in the combination. Verdict threshold is 3 sigma; the raw value and
/// deviation are reported alongside so callers can apply their own.
pub fn independence_test<B: ExperimentBackend + Sync>(
    backend: &B,
    g: &PatternTransferGraph,
    queries: &[CorrelationQuery],
    budget_per_edge: &ShotBudget,
    seed: u64,
    exact: bool,
) -> Result<Vec<IndependenceRow>> {
    queries
        .par_iter()
        .enumerate()
        .map(|(qi, query)| {
            let combo = estimate_correlation(
                backend,
                g,
                query.q,
                (query.x1, query.x2, query.y1, query.y2),
                budget_per_edge,
                derive_seed(seed, INDEP_SALT, qi as u64),
                exact,
            )?;
            // Absolute floor guards the exact mode, where the deviation is
            // identically zero and only float roundoff remains.
            let consistent = combo.0.map(|v| v.abs() <= 3.0 * combo.1 + 1e-12);
            Ok(IndependenceRow {
                query: *query,
                value: combo.0,
                std: combo.1,
                consistent_with_zero: consistent,
            })
        })
        .collect()
}

/// (value, std) of log l_{x1,y1} + log l_{x2,y2} - log l_{x2,y1} - log l_{x1,y2}.
pub fn estimate_correlation<B: ExperimentBackend>(
    backend: &B,
    g: &PatternTransferGraph,
    q: PauliOp,
    (x1, x2, y1, y2): (Bits, Bits, Bits, Bits),
    budget_per_edge: &ShotBudget,
    seed: u64,
    exact: bool,
) -> Result<(Option<f64>, f64)> {
    let terms: [(f64, Bits, Bits); 4] = [
        (1.0, x1, y1),
        (1.0, x2, y2),
        (-1.0, x2, y1),
        (-1.0, x1, y2),
    ];
    let mut value = Some(0.0);
    let mut variance = 0.0;
    for (i, (sign, x, y)) in terms.iter().enumerate() {
        let path = PathSpec::new(vec![EdgeLabel { x: *x, y: *y, q }]);
        let exp = compile_path(&path, backend.gate())?;
        let report = if exact {
            estimate_path_exact(&exp, backend)?
        } else {
            estimate_path(&exp, backend, budget_per_edge, derive_seed(seed, 0x6564, i as u64))?
        };
        match (value, report.value) {
            (Some(acc), Some(v)) => value = Some(acc + sign * v),
            _ => value = None,
        }
        variance += report.std * report.std;
    }
    let _ = g;
    Ok((value, variance.sqrt()))
}
