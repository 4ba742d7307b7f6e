//! Estimation drivers: sampled and exact evaluation of compiled experiments,
//! concatenated-cycle regression, and walk-decomposed chain estimation with
//! end-point cancellation.

use super::compile::{compile_path, CompiledExperiment};
use super::{EstimationReport, PathSpec, ShotBudget};
use crate::error::{CoreError, Result};
use crate::graph::{OneChain, PatternTransferGraph};
use crate::model::NoiseModel;
use crate::pauli::pattern;
use crate::rng::{rng_for, derive_seed};
use crate::sim::enumerate::enumerate_expectation;
use crate::sim::run::{run_circuit, RunOptions};
use rand::Rng;

const MAIN_SALT: u64 = 0x6d61_696e;
const AUX_SALT: u64 = 0x6175_78;
const BOOT_SALT: u64 = 0x626f_6f74;
const CONCAT_SALT: u64 = 0x636f_6e63;
const WALK_SALT: u64 = 0x77a1_6b;


/// Anything that can execute circuits: the in-process simulated model or an
/// external shot-record provider honoring the same contract. Exact-mode
/// evaluation is optional for external backends.
pub trait ExperimentBackend {
    fn gate(&self) -> &crate::model::CliffordGate;
    fn run(
        &self,
        spec: &crate::sim::circuit::CircuitSpec,
        shots: usize,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> Result<Vec<crate::sim::circuit::ShotRecord>>;
    fn exact_expectation(&self, spec: &crate::sim::circuit::CircuitSpec) -> Result<f64>;
}

impl ExperimentBackend for NoiseModel {
    fn gate(&self) -> &crate::model::CliffordGate {
        NoiseModel::gate(self)
    }

    fn run(
        &self,
        spec: &crate::sim::circuit::CircuitSpec,
        shots: usize,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> Result<Vec<crate::sim::circuit::ShotRecord>> {
        run_circuit(spec, self, shots, rng, RunOptions::default())
    }

    fn exact_expectation(&self, spec: &crate::sim::circuit::CircuitSpec) -> Result<f64> {
        enumerate_expectation(spec, self)
    }
}

/// Per-circuit means of the Fourier-weighted main observable and the raw
/// auxiliary observable; the bootstrap resamples these.
#[derive(Clone, Debug)]
struct CircuitMeans {
    s: Vec<f64>,
    t: Vec<f64>,
}

fn collect_means<B: ExperimentBackend>(
    exp: &CompiledExperiment,
    backend: &B,
    budget: &ShotBudget,
    seed: u64,
) -> Result<CircuitMeans> {
    budget.validate()?;
    let mut s = Vec::with_capacity(budget.circuits);
    for c in 0..budget.circuits {
        let mut rng = rng_for(seed, MAIN_SALT, c as u64);
        let recs = backend.run(&exp.main_spec, budget.shots_per_circuit, &mut rng)?;
        let mean = recs
            .iter()
            .map(|r| r.fourier_weighted(&exp.main_spec))
            .sum::<f64>()
            / recs.len() as f64;
        s.push(mean);
    }
    let mut t = Vec::with_capacity(budget.aux_circuits);
    for c in 0..budget.aux_circuits {
        let mut rng = rng_for(seed, AUX_SALT, c as u64);
        let recs = backend.run(&exp.aux_spec, budget.aux_shots_per_circuit, &mut rng)?;
        let mean = recs.iter().map(|r| r.terminating as f64).sum::<f64>() / recs.len() as f64;
        t.push(mean);
    }
    Ok(CircuitMeans { s, t })
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sample_std(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

fn log_ratio(s: f64, t: f64) -> Option<f64> {
    let ratio = s / t;
    if ratio > 0.0 && ratio.is_finite() {
        Some(ratio.ln())
    } else {
        None
    }
}

fn report_from_means(
    means: &CircuitMeans,
    budget: &ShotBudget,
    seed: u64,
) -> EstimationReport {
    let s_hat = mean(&means.s);
    let t_hat = mean(&means.t);
    let value = log_ratio(s_hat, t_hat);
    let mut boot_values = Vec::with_capacity(budget.bootstrap_resamples);
    let mut rng = rng_for(seed, BOOT_SALT, 0);
    for _ in 0..budget.bootstrap_resamples {
        let s_b: f64 = (0..means.s.len())
            .map(|_| means.s[rng.gen_range(0..means.s.len())])
            .sum::<f64>()
            / means.s.len() as f64;
        let t_b: f64 = (0..means.t.len())
            .map(|_| means.t[rng.gen_range(0..means.t.len())])
            .sum::<f64>()
            / means.t.len() as f64;
        if let Some(v) = log_ratio(s_b, t_b) {
            boot_values.push(v);
        }
    }
    EstimationReport {
        value,
        std: sample_std(&boot_values),
        s_hat,
        t_hat,
        shots_main: budget.shots_main(),
        shots_aux: budget.shots_aux(),
        circuits: budget.circuits,
        failed: value.is_none(),
    }
}

/// Sampled estimate of the walk functional -v_0 + sum_i log lambda_i + v_l.
pub fn estimate_path<B: ExperimentBackend>(
    exp: &CompiledExperiment,
    backend: &B,
    budget: &ShotBudget,
    seed: u64,
) -> Result<EstimationReport> {
    let means = collect_means(exp, backend, budget, seed)?;
    Ok(report_from_means(&means, budget, seed))
}

/// Exact-mode estimate: sampling replaced by outcome enumeration.
pub fn estimate_path_exact<B: ExperimentBackend>(
    exp: &CompiledExperiment,
    backend: &B,
) -> Result<EstimationReport> {
    let s_hat = backend.exact_expectation(&exp.main_spec)?;
    let t_hat = backend.exact_expectation(&exp.aux_spec)?;
    let value = log_ratio(s_hat, t_hat);
    Ok(EstimationReport {
        value,
        std: 0.0,
        s_hat,
        t_hat,
        shots_main: 0,
        shots_aux: 0,
        circuits: 0,
        failed: value.is_none(),
    })
}

/// The closed-form sides of the main-identity check: the expected main mean
/// lambda_M^{v_l} <<G^dag(Q_1 (x) Z^{x_1})|rho_W>> prod_i lambda_i and the
/// expected auxiliary mean lambda_M^{v_0} <<G^dag(Q_1 (x) Z^{x_1})|rho_W>>.
pub fn theorem1_rhs(exp: &CompiledExperiment, model: &NoiseModel) -> Result<(f64, f64)> {
    let mut rho = model.spam().prep_state().clone();
    if let Some(w) = &exp.main_spec.init_rotation {
        rho.apply_unitary(&crate::unitary::local_layer_matrix(w));
    }
    let obs = &exp.aux_spec.terminating;
    let overlap = obs.sign as f64 * rho.expectation_pauli(&obs.op);
    let lam_prod: f64 = exp
        .lambda_indices
        .iter()
        .map(|&i| model.fidelities().values()[i])
        .product();
    let term_main = model
        .spam()
        .term_fidelity(pattern(&exp.main_spec.terminating.op).value());
    let term_aux = model.spam().term_fidelity(exp.v_start);
    Ok((term_main * overlap * lam_prod, term_aux * overlap))
}

/// Result of a concatenated-cycle estimation.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CycleReport {
    pub l_values: Vec<usize>,
    pub per_l: Vec<EstimationReport>,
    /// Least-squares slope of the estimate against L: sum of log fidelities
    /// around the cycle.
    pub slope: Option<f64>,
    pub slope_std: f64,
    /// exp(slope / cycle length): geometric-mean fidelity around the cycle.
    pub geo_mean: Option<f64>,
    pub geo_std: f64,
    pub fit_residual: f64,
    /// Set when some per-L estimates failed and the fit used the survivors.
    pub partial: bool,
    pub cycle_len: usize,
}

fn fit_slope(points: &[(f64, f64)]) -> (f64, f64) {
    // Least squares y = a + b x; for a single point the intercept is pinned
    // at 0, which is exact for closed walks.
    if points.len() == 1 {
        return (points[0].1 / points[0].0, 0.0);
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    let b = (n * sxy - sx * sy) / denom;
    let a = (sy - b * sx) / n;
    let residual = points
        .iter()
        .map(|p| (p.1 - a - b * p.0).abs())
        .fold(0.0, f64::max);
    (b, residual)
}

/// Runs the protocol on L-fold concatenations of a directed cycle and fits
/// the log estimate against L; the slope is the cycle's log-fidelity sum and
/// exp(slope / l) its geometric-mean fidelity.
pub fn estimate_cycle_concatenated<B: ExperimentBackend>(
    cycle: &PathSpec,
    g: &PatternTransferGraph,
    backend: &B,
    l_values: &[usize],
    budget: &ShotBudget,
    seed: u64,
    exact: bool,
) -> Result<CycleReport> {
    if !cycle.is_cycle(g)? {
        return Err(CoreError::PathCondition {
            step: cycle.len(),
            detail: "walk does not close".into(),
        });
    }
    if l_values.is_empty() || l_values.contains(&0) {
        return Err(CoreError::InvalidConfig(
            "concatenation counts must be positive".into(),
        ));
    }
    let cycle_len = cycle.len();
    let mut per_l = Vec::with_capacity(l_values.len());
    let mut means_per_l: Vec<Option<CircuitMeans>> = Vec::with_capacity(l_values.len());
    for (i, &l_rep) in l_values.iter().enumerate() {
        let exp = compile_path(&cycle.repeat(l_rep), backend.gate())?;
        if exact {
            per_l.push(estimate_path_exact(&exp, backend)?);
            means_per_l.push(None);
        } else {
            let sub_seed = derive_seed(seed, CONCAT_SALT, i as u64);
            let means = collect_means(&exp, backend, budget, sub_seed)?;
            per_l.push(report_from_means(&means, budget, sub_seed));
            means_per_l.push(Some(means));
        }
    }
    let surviving: Vec<(f64, f64)> = l_values
        .iter()
        .zip(per_l.iter())
        .filter_map(|(&l_rep, rep)| rep.value.map(|v| (l_rep as f64, v)))
        .collect();
    let partial = surviving.len() < l_values.len();
    if surviving.is_empty() {
        return Ok(CycleReport {
            l_values: l_values.to_vec(),
            per_l,
            slope: None,
            slope_std: 0.0,
            geo_mean: None,
            geo_std: 0.0,
            fit_residual: 0.0,
            partial,
            cycle_len,
        });
    }
    let (slope, fit_residual) = fit_slope(&surviving);
    let geo_mean = (slope / cycle_len as f64).exp();

    // Joint bootstrap across the per-L circuit sets.
    let (slope_std, geo_std) = if exact {
        (0.0, 0.0)
    } else {
        let mut rng = rng_for(seed, BOOT_SALT, 1);
        let mut slopes = Vec::with_capacity(budget.bootstrap_resamples);
        for _ in 0..budget.bootstrap_resamples {
            let mut points = Vec::new();
            for (i, &l_rep) in l_values.iter().enumerate() {
                let Some(means) = &means_per_l[i] else { continue };
                let s_b: f64 = (0..means.s.len())
                    .map(|_| means.s[rng.gen_range(0..means.s.len())])
                    .sum::<f64>()
                    / means.s.len() as f64;
                let t_b: f64 = (0..means.t.len())
                    .map(|_| means.t[rng.gen_range(0..means.t.len())])
                    .sum::<f64>()
                    / means.t.len() as f64;
                if let Some(v) = log_ratio(s_b, t_b) {
                    points.push((l_rep as f64, v));
                }
            }
            if points.is_empty() {
                continue;
            }
            slopes.push(fit_slope(&points).0);
        }
        let geo_samples: Vec<f64> = slopes
            .iter()
            .map(|b| (b / cycle_len as f64).exp())
            .collect();
        (sample_std(&slopes), sample_std(&geo_samples))
    };
    Ok(CycleReport {
        l_values: l_values.to_vec(),
        per_l,
        slope: Some(slope),
        slope_std,
        geo_mean: Some(geo_mean),
        geo_std,
        fit_residual,
        partial,
        cycle_len,
    })
}

/// One directed walk in a signed decomposition of a cycle-space chain.
#[derive(Clone, Debug)]
pub struct WalkPlan {
    pub weight: f64,
    pub path: PathSpec,
}

/// Splits a chain with uniform-magnitude coefficients into directed trails
/// per sign class. Each trail is separately estimable with its end points;
/// when the chain has zero boundary, summing weight * estimate cancels all
/// end-point terms exactly in expectation.
pub fn decompose_into_walks(
    chain: &OneChain,
    g: &PatternTransferGraph,
) -> Result<Vec<WalkPlan>> {
    if chain.support_len() == 0 {
        return Ok(Vec::new());
    }
    let min_abs = chain
        .iter()
        .map(|(_, c)| c.abs())
        .fold(f64::INFINITY, f64::min);
    // Integer multiplicities relative to the smallest coefficient.
    let mut multiplicities: Vec<(usize, i64)> = Vec::new();
    for (e, c) in chain.iter() {
        let k = (c / min_abs).round() as i64;
        if ((c / min_abs) - k as f64).abs() > 1e-9 || k == 0 {
            return Err(CoreError::InvalidConfig(
                "chain coefficients are not integer multiples of a common unit".into(),
            ));
        }
        multiplicities.push((e, k));
    }
    let mut plans = Vec::new();
    for sign in [1i64, -1] {
        let mut remaining: std::collections::BTreeMap<usize, i64> = multiplicities
            .iter()
            .filter(|(_, k)| k.signum() == sign)
            .map(|(e, k)| (*e, k.abs()))
            .collect();
        while !remaining.is_empty() {
            // Start at a vertex with positive out-minus-in imbalance if one
            // exists, otherwise the lowest vertex with a remaining out-edge.
            let mut imbalance: std::collections::BTreeMap<usize, i64> = Default::default();
            for (&e, &k) in &remaining {
                *imbalance.entry(g.edge(e).src).or_insert(0) += k;
                *imbalance.entry(g.edge(e).dst).or_insert(0) -= k;
            }
            let start = imbalance
                .iter()
                .find(|(_, &v)| v > 0)
                .map(|(&v, _)| v)
                .unwrap_or_else(|| {
                    let (&e, _) = remaining.iter().next().unwrap();
                    g.edge(e).src
                });
            let mut at = start;
            let mut trail = Vec::new();
            loop {
                let next = remaining
                    .iter()
                    .find(|(&e, _)| g.edge(e).src == at)
                    .map(|(&e, _)| e);
                let Some(e) = next else { break };
                *remaining.get_mut(&e).unwrap() -= 1;
                if remaining[&e] == 0 {
                    remaining.remove(&e);
                }
                trail.push(e);
                at = g.edge(e).dst;
            }
            if trail.is_empty() {
                return Err(CoreError::InvalidConfig(
                    "trail extraction stalled; disconnected remainder".into(),
                ));
            }
            plans.push(WalkPlan {
                weight: sign as f64 * min_abs,
                path: PathSpec::from_edge_indices(g, &trail),
            });
        }
    }
    Ok(plans)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ChainEstimate {
    pub value: Option<f64>,
    pub std: f64,
    pub n_walks: usize,
    pub failed: bool,
    pub reports: Vec<EstimationReport>,
}

/// Estimates a zero-boundary chain as a weighted sum of walk estimates. The
/// chain must lie in the cycle space; the boundary is checked first.
pub fn estimate_chain<B: ExperimentBackend>(
    chain: &OneChain,
    g: &PatternTransferGraph,
    backend: &B,
    per_walk_budget: &ShotBudget,
    seed: u64,
    exact: bool,
) -> Result<ChainEstimate> {
    let boundary_norm = g.boundary(chain)?.norm();
    if boundary_norm > crate::graph::LEARNABLE_TOL {
        return Err(CoreError::NotLearnable(boundary_norm));
    }
    let plans = decompose_into_walks(chain, g)?;
    let mut reports = Vec::with_capacity(plans.len());
    let mut value = Some(0.0);
    let mut variance = 0.0;
    for (i, plan) in plans.iter().enumerate() {
        let exp = compile_path(&plan.path, backend.gate())?;
        let report = if exact {
            estimate_path_exact(&exp, backend)?
        } else {
            estimate_path(&exp, backend, per_walk_budget, derive_seed(seed, WALK_SALT, i as u64))?
        };
        match (value, report.value) {
            (Some(acc), Some(v)) => value = Some(acc + plan.weight * v),
            _ => value = None,
        }
        variance += plan.weight * plan.weight * report.std * report.std;
        reports.push(report);
    }
    Ok(ChainEstimate {
        value,
        std: variance.sqrt(),
        n_walks: plans.len(),
        failed: value.is_none(),
        reports,
    })
}
