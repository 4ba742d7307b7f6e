//! Exact expectation values by enumerating all MCM outcome sequences with
//! repeated superoperator application. This is the oracle the sampling path
//! and the protocol identities are checked against.

use crate::channels::apply_instrument_physical;
use crate::error::{CoreError, Result};
use crate::model::NoiseModel;
use crate::pauli::pattern;
use crate::sim::circuit::CircuitSpec;
use crate::sim::density::DensityMatrix;
use crate::unitary::{local_layer_matrix, CMat};

const BRANCH_CUTOFF: f64 = 1e-18;

/// Exact E[(-1)^{sum m_i . mask_i} r] under the model.
pub fn enumerate_expectation(spec: &CircuitSpec, model: &NoiseModel) -> Result<f64> {
    walk(spec, model, &mut |_, phase, value| phase * value)
}

/// The full joint outcome distribution: one entry per outcome sequence with
/// its probability and the conditional expectation of the terminating result.
pub fn enumerate_joint(
    spec: &CircuitSpec,
    model: &NoiseModel,
) -> Result<Vec<(Vec<usize>, f64, f64)>> {
    let mut rows = Vec::new();
    walk_full(spec, model, &mut rows)?;
    Ok(rows)
}

fn check(spec: &CircuitSpec, model: &NoiseModel) -> Result<()> {
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
    if spec.n * spec.depth() > 20 {
        return Err(CoreError::InvalidCircuit(format!(
            "enumeration of 2^{} outcome sequences exceeds the size cap",
            spec.n * spec.depth()
        )));
    }
    Ok(())
}

fn initial_state(spec: &CircuitSpec, model: &NoiseModel, init: &Option<CMat>) -> DensityMatrix {
    let mut rho = model.spam().prep_state().clone();
    let _ = spec;
    if let Some(u) = init {
        rho.apply_unitary(u);
    }
    rho
}

fn walk(
    spec: &CircuitSpec,
    model: &NoiseModel,
    combine: &mut impl FnMut(&[usize], f64, f64) -> f64,
) -> Result<f64> {
    check(spec, model)?;
    let init = spec.init_rotation.as_ref().map(local_layer_matrix);
    let layer_mats: Vec<Option<CMat>> = spec
        .layers
        .iter()
        .map(|l| l.interleaver.as_ref().map(local_layer_matrix))
        .collect();
    let term_lambda = model
        .spam()
        .term_fidelity(pattern(&spec.terminating.op).value());
    let rho0 = initial_state(spec, model, &init);

    let mut acc = 0.0;
    let mut stack: Vec<(usize, DensityMatrix, f64, Vec<usize>)> =
        vec![(0, rho0, 1.0, Vec::new())];
    while let Some((depth, rho, phase, outcomes)) = stack.pop() {
        if depth == spec.depth() {
            let value =
                term_lambda * spec.terminating.sign as f64 * rho.expectation_pauli(&spec.terminating.op);
            acc += combine(&outcomes, phase, value);
            continue;
        }
        let layer = &spec.layers[depth];
        for k in crate::bits::Bits::all(spec.n) {
            let mut branch =
                apply_instrument_physical(model.usi(), model.gate().unitary(), &rho, &k)?;
            let weight: f64 = branch
                .matrix()
                .iter()
                .map(|v| v.norm_sqr())
                .sum::<f64>()
                .sqrt();
            if weight < BRANCH_CUTOFF {
                continue;
            }
            if let Some(u) = &layer_mats[depth] {
                branch.apply_unitary(u);
            }
            let parity = k.dot(&layer.fourier_mask);
            let mut next = outcomes.clone();
            next.push(k.value());
            stack.push((
                depth + 1,
                branch,
                phase * if parity { -1.0 } else { 1.0 },
                next,
            ));
        }
    }
    Ok(acc)
}

fn walk_full(
    spec: &CircuitSpec,
    model: &NoiseModel,
    rows: &mut Vec<(Vec<usize>, f64, f64)>,
) -> Result<()> {
    check(spec, model)?;
    let init = spec.init_rotation.as_ref().map(local_layer_matrix);
    let layer_mats: Vec<Option<CMat>> = spec
        .layers
        .iter()
        .map(|l| l.interleaver.as_ref().map(local_layer_matrix))
        .collect();
    let term_lambda = model
        .spam()
        .term_fidelity(pattern(&spec.terminating.op).value());
    let rho0 = initial_state(spec, model, &init);

    let mut stack: Vec<(usize, DensityMatrix, Vec<usize>)> = vec![(0, rho0, Vec::new())];
    while let Some((depth, rho, outcomes)) = stack.pop() {
        if depth == spec.depth() {
            let p = rho.trace();
            let value = term_lambda
                * spec.terminating.sign as f64
                * rho.expectation_pauli(&spec.terminating.op);
            // (sequence, probability, p * E[r | sequence]).
            rows.push((outcomes, p, value));
            continue;
        }
        for k in crate::bits::Bits::all(spec.n) {
            let mut branch =
                apply_instrument_physical(model.usi(), model.gate().unitary(), &rho, &k)?;
            if let Some(u) = &layer_mats[depth] {
                branch.apply_unitary(u);
            }
            let mut next = outcomes.clone();
            next.push(k.value());
            stack.push((depth + 1, branch, next));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::Bits;
    use crate::channels::{random_instrument, UniformStochasticInstrument};
    use crate::clifford::CliffordGen;
    use crate::model::CliffordGate;
    use crate::sim::circuit::{McmLayer, SignedPauli};
    use crate::sim::run::{run_circuit, RunOptions};
    use crate::sim::spam::SpamModel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn depth2_spec() -> CircuitSpec {
        CircuitSpec {
            n: 1,
            m: 1,
            init_rotation: None,
            layers: vec![
                McmLayer {
                    fourier_mask: "1".parse().unwrap(),
                    interleaver: Some(crate::clifford::LocalLayer::identity(2)),
                },
                McmLayer {
                    fourier_mask: "0".parse().unwrap(),
                    interleaver: None,
                },
            ],
            terminating: SignedPauli::positive("ZI".parse().unwrap()),
        }
    }

    #[test]
    fn depth_zero_is_lemma_base_case() {
        let spam = SpamModel::product(&[0.95, 1.0], &[0.85, 1.0]).unwrap();
        let model = NoiseModel::new(
            CliffordGate::identity(2),
            UniformStochasticInstrument::ideal(1, 1),
            spam,
        )
        .unwrap();
        let spec = CircuitSpec {
            n: 1,
            m: 1,
            init_rotation: None,
            layers: vec![],
            terminating: SignedPauli::positive("ZI".parse().unwrap()),
        };
        let v = enumerate_expectation(&spec, &model).unwrap();
        assert!((v - 0.85 * 0.95).abs() < 1e-12);
    }

    #[test]
    fn branch_probabilities_sum_to_one() {
        let usi = random_instrument(1, 1, 0.3, 61).unwrap();
        let gate = CliffordGate::from_circuit(2, &[CliffordGen::Cnot(0, 1)]).unwrap();
        let model = NoiseModel::new(gate, usi, SpamModel::ideal(2)).unwrap();
        let rows = enumerate_joint(&depth2_spec(), &model).unwrap();
        let total: f64 = rows.iter().map(|(_, p, _)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_agrees_with_enumeration_at_depth_two() {
        let usi = random_instrument(1, 1, 0.2, 62).unwrap();
        let gate = CliffordGate::from_circuit(2, &[CliffordGen::Cnot(0, 1)]).unwrap();
        let model =
            NoiseModel::new(gate, usi, SpamModel::product(&[0.98, 0.97], &[0.96, 0.99]).unwrap())
                .unwrap();
        let spec = depth2_spec();
        let exact = enumerate_expectation(&spec, &model).unwrap();
        let shots = 200_000usize;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let recs = run_circuit(&spec, &model, shots, &mut rng, RunOptions::default()).unwrap();
        let mean: f64 =
            recs.iter().map(|r| r.fourier_weighted(&spec)).sum::<f64>() / shots as f64;
        let sigma = ((1.0 - exact * exact) / shots as f64).sqrt();
        assert!(
            (mean - exact).abs() < 4.0 * sigma,
            "sampled {mean} vs exact {exact}"
        );
    }

    #[test]
    fn noiseless_cycle_gives_unit_weighted_mean() {
        // Identity gate, ideal everything, eigenstate input: the weighted mean
        // is exactly 1 for a self-loop path measured in the same basis.
        let model = NoiseModel::new(
            CliffordGate::identity(2),
            UniformStochasticInstrument::ideal(1, 1),
            SpamModel::ideal(2),
        )
        .unwrap();
        let spec = CircuitSpec {
            n: 1,
            m: 1,
            init_rotation: None,
            layers: vec![
                McmLayer {
                    fourier_mask: Bits::zero(1),
                    interleaver: Some(crate::clifford::LocalLayer::identity(2)),
                },
                McmLayer {
                    fourier_mask: Bits::zero(1),
                    interleaver: None,
                },
            ],
            terminating: SignedPauli::positive("ZI".parse().unwrap()),
        };
        let v = enumerate_expectation(&spec, &model).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }
}
