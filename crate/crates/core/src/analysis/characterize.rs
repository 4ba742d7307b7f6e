//! Estimates every learnable degree of freedom of one MCM gadget: one
//! geometric-mean fidelity per basis cycle of the pattern transfer graph.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::graph::{cycle_basis, directed_cycle_basis, OneChain, PatternTransferGraph};
use crate::protocol::{
    estimate_chain, estimate_cycle_concatenated, ExperimentBackend, PathSpec, ShotBudget,
};
use crate::rng::derive_seed;
use rayon::prelude::*;

const CYCLE_SALT: u64 = 0x6379_636c;

/// One characterized basis cycle.
#[derive(Clone, Debug, Serialize)]
pub struct CycleQuantity {
    /// Signed edge labels of the basis element.
    pub edges: Vec<(f64, String)>,
    /// Number of edges counted with multiplicity.
    pub length: usize,
    /// Whether the element was run as one concatenated directed cycle.
    pub directed: bool,
    /// The trivial all-identity self-loop whose fidelity is 1 by trace
    /// preservation; reported but flagged so plots can omit it.
    pub trivial: bool,
    pub geo_mean: Option<f64>,
    pub geo_std: f64,
    pub log_sum: Option<f64>,
    pub log_std: f64,
    pub failed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterizationResult {
    pub cycles: Vec<CycleQuantity>,
    /// True when every basis element ran as a directed concatenated cycle.
    pub all_directed: bool,
}

impl CharacterizationResult {
    pub fn by_key(&self) -> BTreeMap<String, &CycleQuantity> {
        self.cycles
            .iter()
            .map(|c| (cycle_key(&c.edges), c))
            .collect()
    }
}

pub fn cycle_key(edges: &[(f64, String)]) -> String {
    edges
        .iter()
        .map(|(c, e)| {
            if *c == 1.0 {
                format!("+{e}")
            } else if *c == -1.0 {
                format!("-{e}")
            } else {
                format!("{c:+}*{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Characterizes the learnable cycle space. Directed basis cycles (found by
/// search when the graph admits them) are concatenated to roughly
/// `total_length` MCMs per circuit; any remaining signed basis elements fall
/// back to walk-decomposed estimation with end-point cancellation.
pub fn characterize<B: ExperimentBackend + Sync>(
    backend: &B,
    g: &PatternTransferGraph,
    budget: &ShotBudget,
    seed: u64,
    exact: bool,
    total_length: usize,
) -> Result<CharacterizationResult> {
    let search = directed_cycle_basis(g);
    if search.complete {
        // Per-element seeds are derived from the index, so the result is
        // independent of worker scheduling.
        let cycles = search
            .cycles
            .par_iter()
            .enumerate()
            .map(|(i, cyc)| {
                let path = PathSpec::from_edge_indices(g, &cyc.edges);
                let reps = (total_length / path.len()).max(1);
                let report = estimate_cycle_concatenated(
                    &path,
                    g,
                    backend,
                    &[reps],
                    budget,
                    derive_seed(seed, CYCLE_SALT, i as u64),
                    exact,
                )?;
                let edges: Vec<(f64, String)> =
                    path.edges.iter().map(|e| (1.0, e.to_string())).collect();
                Ok(CycleQuantity {
                    trivial: is_trivial(&edges),
                    length: path.len(),
                    directed: true,
                    geo_mean: report.geo_mean,
                    geo_std: report.geo_std,
                    log_sum: report.slope,
                    log_std: report.slope_std,
                    failed: report.geo_mean.is_none(),
                    edges,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(CharacterizationResult {
            cycles,
            all_directed: true,
        });
    }

    // No complete directed basis found: run the fundamental signed basis.
    let basis = cycle_basis(g);
    let cycles = basis
        .par_iter()
        .enumerate()
        .map(|(i, chain)| {
            estimate_signed_cycle(
                backend,
                g,
                chain,
                budget,
                derive_seed(seed, CYCLE_SALT, i as u64),
                exact,
                total_length,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CharacterizationResult {
        cycles,
        all_directed: false,
    })
}

fn is_trivial(edges: &[(f64, String)]) -> bool {
    edges.len() == 1 && {
        let label = &edges[0].1;
        let parts: Vec<&str> = label.split('|').collect();
        parts.len() == 3
            && parts[0].bytes().all(|b| b == b'0')
            && parts[1].bytes().all(|b| b == b'0')
            && parts[2].bytes().all(|b| b == b'I')
    }
}

fn estimate_signed_cycle<B: ExperimentBackend>(
    backend: &B,
    g: &PatternTransferGraph,
    chain: &OneChain,
    budget: &ShotBudget,
    seed: u64,
    exact: bool,
    total_length: usize,
) -> Result<CycleQuantity> {
    let edges: Vec<(f64, String)> = chain
        .iter()
        .map(|(e, c)| (c, g.edge(e).label.to_string()))
        .collect();
    let length: usize = chain.iter().map(|(_, c)| c.abs().round() as usize).sum();
    // A directed element (all +1) still concatenates.
    let directed = chain.iter().all(|(_, c)| c == 1.0) && {
        let idxs: Vec<usize> = chain.support().collect();
        PathSpec::from_edge_indices(g, &idxs)
            .is_cycle(g)
            .unwrap_or(false)
    };
    if directed {
        let idxs: Vec<usize> = chain.support().collect();
        let path = PathSpec::from_edge_indices(g, &idxs);
        let reps = (total_length / path.len()).max(1);
        let report =
            estimate_cycle_concatenated(&path, g, backend, &[reps], budget, seed, exact)?;
        return Ok(CycleQuantity {
            trivial: is_trivial(&edges),
            length,
            directed: true,
            geo_mean: report.geo_mean,
            geo_std: report.geo_std,
            log_sum: report.slope,
            log_std: report.slope_std,
            failed: report.geo_mean.is_none(),
            edges,
        });
    }
    let est = estimate_chain(chain, g, backend, budget, seed, exact)?;
    let geo = est.value.map(|v| (v / length as f64).exp());
    let geo_std = est
        .value
        .map(|v| (v / length as f64).exp() * est.std / length as f64)
        .unwrap_or(0.0);
    Ok(CycleQuantity {
        trivial: is_trivial(&edges),
        length,
        directed: false,
        geo_mean: geo,
        geo_std,
        log_sum: est.value,
        log_std: est.std,
        failed: est.failed,
        edges,
    })
}

/// The cycle's true geometric-mean fidelity under a known model, for
/// validation against estimates.
pub fn true_geo_mean(
    quantity: &CycleQuantity,
    fid: &crate::channels::FidelityTable,
    g: &PatternTransferGraph,
) -> f64 {
    let mut log_sum = 0.0;
    for (c, label) in &quantity.edges {
        let edge: crate::graph::EdgeLabel = label.parse().expect("stored labels parse");
        let idx = g.edge_index(&edge).expect("edge in graph");
        log_sum += c * fid.values()[idx].ln();
    }
    (log_sum / quantity.length as f64).exp()
}
