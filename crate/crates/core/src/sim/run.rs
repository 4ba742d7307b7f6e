//! Shot sampling: compiled MCM application, twirled terminating measurements
//! and whole-circuit execution.

use rand::Rng;

use crate::bits::Bits;
use crate::clifford::LocalLayer;
use crate::error::{CoreError, Result};
use crate::model::NoiseModel;
use crate::pauli::pattern;
use crate::sim::circuit::{CircuitSpec, ShotRecord, SignedPauli};
use crate::sim::density::DensityMatrix;
use crate::sim::spam::SpamModel;
use crate::unitary::{local_layer_matrix, pauli_matrix, CMat};

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Replace the Bernoulli terminating measurement by an explicit random-H
    /// twirl, with the frame fixed once per circuit batch.
    pub explicit_terminating_twirl: bool,
}

/// One compiled MCM: draw (a, b, P), apply G, measure the ancilla register,
/// report k = k' + a, and leave the post-state with the system hit by P and
/// the ancilla relabeled to |k' + a + b>.
pub fn sample_mcm(
    model: &NoiseModel,
    rho: &mut DensityMatrix,
    rng: &mut impl Rng,
) -> Result<Bits> {
    let (n, m) = (model.n(), model.m());
    let (a, b, p) = model.sample_error(rng);
    rho.apply_unitary(model.gate().unitary());
    let probs = rho.ancilla_probabilities(m);
    let total: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    if total <= 0.0 {
        return Err(CoreError::ZeroTraceBranch("all ancilla outcomes".into()));
    }
    let draw = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut measured = 0usize;
    for (w, pr) in probs.iter().enumerate() {
        acc += pr.max(0.0);
        if draw < acc {
            measured = w;
            break;
        }
        measured = w;
    }
    let prob = probs[measured];
    if prob <= 0.0 {
        return Err(CoreError::ZeroTraceBranch(format!("{measured:b}")));
    }
    let mut block = rho.project_ancilla(m, measured);
    block.mapv_inplace(|v| v / prob);
    let pm = pauli_matrix(&p);
    let moved = pm.dot(&block).dot(&pm);
    let relabeled = measured ^ a ^ b;
    *rho = DensityMatrix::from_system_block(m, n, &moved, relabeled);
    Ok(Bits::new(n, measured ^ a))
}

/// Twirled terminating measurement: a +-1 Bernoulli draw whose mean is
/// lambda_M^{pt(E)} <<E|rho>>, the expectation the random-H compilation
/// produces on average.
pub fn measure_pauli_twirled(
    obs: &SignedPauli,
    rho: &DensityMatrix,
    spam: &SpamModel,
    rng: &mut impl Rng,
) -> Result<i8> {
    let lam = spam.term_fidelity(pattern(&obs.op).value());
    let mean = lam * obs.sign as f64 * rho.expectation_pauli(&obs.op);
    bernoulli_pm(mean, rng)
}

/// Explicit-twirl variant: applies a given random single-qubit frame, the
/// terminating Pauli noise, and measures the rotated observable.
pub fn measure_pauli_explicit(
    obs: &SignedPauli,
    rho: &DensityMatrix,
    spam: &SpamModel,
    frame: &LocalLayer,
    frame_matrix: &CMat,
    rng: &mut impl Rng,
) -> Result<i8> {
    let mut rotated = rho.clone();
    rotated.apply_unitary(frame_matrix);
    let noisy = spam.apply_terminating_noise(&rotated);
    let (img, s) = frame.tableau().conjugate(&obs.op)?;
    let mean = (obs.sign * s) as f64 * noisy.expectation_pauli(&img);
    bernoulli_pm(mean, rng)
}

fn bernoulli_pm(mean: f64, rng: &mut impl Rng) -> Result<i8> {
    if mean.abs() > 1.0 + 1e-9 {
        return Err(CoreError::NonPhysical(format!(
            "observable mean {mean} outside [-1, 1]"
        )));
    }
    let p_plus = (1.0 + mean.clamp(-1.0, 1.0)) / 2.0;
    Ok(if rng.gen::<f64>() < p_plus { 1 } else { -1 })
}

/// Runs `shots` independent shots of the circuit under the model. The caller
/// owns the RNG stream, so batches are reproducible and can be parallelized
/// by splitting seeds.
pub fn run_circuit(
    spec: &CircuitSpec,
    model: &NoiseModel,
    shots: usize,
    rng: &mut impl Rng,
    opts: RunOptions,
) -> Result<Vec<ShotRecord>> {
    spec.validate()?;
    if spec.n != model.n() || spec.m != model.m() {
        return Err(CoreError::SizeMismatch(format!(
            "circuit ({}, {}) vs model ({}, {})",
            spec.n,
            spec.m,
            model.n(),
            model.m()
        )));
    }
    let init_matrix = spec.init_rotation.as_ref().map(local_layer_matrix);
    let layer_matrices: Vec<Option<CMat>> = spec
        .layers
        .iter()
        .map(|l| l.interleaver.as_ref().map(local_layer_matrix))
        .collect();
    let frame = if opts.explicit_terminating_twirl {
        let indices = (0..spec.n_qubits()).map(|_| rng.gen_range(0..24u8)).collect();
        let layer = LocalLayer::from_indices(indices);
        let matrix = local_layer_matrix(&layer);
        Some((layer, matrix))
    } else {
        None
    };

    let mut records = Vec::with_capacity(shots);
    for _ in 0..shots {
        let mut rho = model.spam().prep_state().clone();
        if let Some(w) = &init_matrix {
            rho.apply_unitary(w);
        }
        let mut outcomes = Vec::with_capacity(spec.depth());
        for (layer, mat) in spec.layers.iter().zip(layer_matrices.iter()) {
            let k = sample_mcm(model, &mut rho, rng)?;
            outcomes.push(k);
            let _ = layer;
            if let Some(u) = mat {
                rho.apply_unitary(u);
            }
        }
        let r = match &frame {
            Some((layer, matrix)) => {
                measure_pauli_explicit(&spec.terminating, &rho, model.spam(), layer, matrix, rng)?
            }
            None => measure_pauli_twirled(&spec.terminating, &rho, model.spam(), rng)?,
        };
        records.push(ShotRecord {
            mcm_outcomes: outcomes,
            terminating: r,
        });
    }
    Ok(records)
}
