//! The exact-mode invariant suite behind `mcmcb verify`: transform round
//! trips, dual-form equivalence, the main estimation identity, and gauge
//! invariance. Any residual above tolerance fails the run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use mcmcb_core::bits::Bits;
use mcmcb_core::channels::{
    apply_instrument_dual, apply_instrument_physical, fidelities_from_rates,
    gauge_transform_shrinking, random_instrument, rates_from_fidelities, DualChannel,
};
use mcmcb_core::clifford::random_tableau;
use mcmcb_core::error::Result;
use mcmcb_core::graph::{build_ptg, cycle_basis, ZeroChain};
use mcmcb_core::model::{CliffordGate, NoiseModel};
use mcmcb_core::pauli::PauliOp;
use mcmcb_core::protocol::{compile_path, random_walk, theorem1_rhs};
use mcmcb_core::sim::density::DensityMatrix;
use mcmcb_core::sim::enumerate::enumerate_expectation;
use mcmcb_core::sim::spam::SpamModel;
use mcmcb_core::unitary::unitary_from_tableau;

#[derive(Serialize, Clone, Debug)]
pub struct VerifyRow {
    pub check: String,
    pub seed: u64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn row(check: &str, seed: u64, residual: f64, tolerance: f64) -> VerifyRow {
    VerifyRow {
        check: check.into(),
        seed,
        residual,
        tolerance,
        pass: residual <= tolerance,
    }
}

fn random_state(n_qubits: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let coeffs: Vec<f64> = (0..n_qubits).map(|_| rng.gen::<f64>() * 1.8 - 0.9).collect();
    let mut rho = DensityMatrix::z_product(&coeffs);
    let frame = mcmcb_core::clifford::LocalLayer::from_indices(
        (0..n_qubits).map(|_| rng.gen_range(0..24)).collect(),
    );
    rho.apply_unitary(&mcmcb_core::unitary::local_layer_matrix(&frame));
    rho
}

pub fn run_verify(seeds: &[u64]) -> Result<Vec<VerifyRow>> {
    let mut rows = Vec::new();
    for &seed in seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        // Transform round trip on both table shapes.
        let mut residual: f64 = 0.0;
        for (n, m) in [(1usize, 1usize), (1, 2)] {
            let usi = random_instrument(n, m, 0.2, rng.gen()).unwrap();
            let back = rates_from_fidelities(&fidelities_from_rates(&usi))?;
            for (a, b) in usi.rates().iter().zip(back.rates().iter()) {
                residual = residual.max((a - b).abs());
            }
        }
        rows.push(row("transform-round-trip", seed, residual, 1e-12));

        // Dual form equals physical form.
        let mut residual: f64 = 0.0;
        let usi = random_instrument(1, 1, 0.25, rng.gen()).unwrap();
        let tableau = random_tableau(2, &mut rng);
        let ch = DualChannel::new(fidelities_from_rates(&usi), &tableau)?;
        let u_g = unitary_from_tableau(&tableau);
        let rho = random_state(2, &mut rng);
        for k in Bits::all(1) {
            let phys = apply_instrument_physical(&usi, &u_g, &rho, &k)?;
            let dual = apply_instrument_dual(&ch, &rho.pauli_coefficients(), &k)?;
            residual = residual.max(phys.pauli_coefficients().max_abs_diff(&dual));
        }
        rows.push(row("dual-form-equivalence", seed, residual, 1e-12));

        // Main identity for random models and walks.
        let mut residual: f64 = 0.0;
        let mut done = 0;
        while done < 3 {
            let tableau = random_tableau(2, &mut rng);
            let gate = CliffordGate::from_tableau(tableau.clone());
            let usi = random_instrument(1, 1, 0.04, rng.gen()).unwrap();
            let spam = SpamModel::random(2, 0.02, rng.gen())?;
            let model = NoiseModel::new(gate, usi, spam)?;
            let g = build_ptg(&tableau, 1, 1)?;
            let Some(path) = random_walk(&g, 1 + rng.gen_range(0..4), &mut rng) else {
                continue;
            };
            let exp = compile_path(&path, model.gate())?;
            let (rhs_s, rhs_t) = theorem1_rhs(&exp, &model)?;
            let s = enumerate_expectation(&exp.main_spec, &model)?;
            let t = enumerate_expectation(&exp.aux_spec, &model)?;
            residual = residual.max((s - rhs_s).abs()).max((t - rhs_t).abs());
            done += 1;
        }
        rows.push(row("main-identity", seed, residual, 1e-10));

        // Gauge invariance of outcome functionals and cycle functionals.
        let gate = CliffordGate::from_circuit(
            2,
            &[mcmcb_core::clifford::CliffordGen::Cnot(0, 1)],
        )?;
        let g = build_ptg(gate.tableau(), 1, 1)?;
        let usi = random_instrument(1, 1, 0.05, rng.gen()).unwrap();
        let model = NoiseModel::new(gate, usi, SpamModel::random(2, 0.02, rng.gen())?)?;
        let mut nu = ZeroChain::new();
        for v in 1..g.n_vertices() {
            nu.add(v, rng.gen::<f64>() - 0.5);
        }
        let (transformed, _) = gauge_transform_shrinking(&model, &nu, 1.02, 40)?;
        let mut residual: f64 = 0.0;
        let mut done = 0;
        while done < 2 {
            let Some(path) = random_walk(&g, 3, &mut rng) else { continue };
            let exp = compile_path(&path, model.gate())?;
            let a = enumerate_expectation(&exp.main_spec, &model)?;
            let b = enumerate_expectation(&exp.main_spec, &transformed)?;
            residual = residual.max((a - b).abs());
            done += 1;
        }
        let log_before: Vec<f64> = model.fidelities().values().iter().map(|v| v.ln()).collect();
        let log_after: Vec<f64> = transformed
            .fidelities()
            .values()
            .iter()
            .map(|v| v.ln())
            .collect();
        for c in cycle_basis(&g) {
            residual = residual.max((c.evaluate(&log_after) - c.evaluate(&log_before)).abs());
        }
        rows.push(row("gauge-invariance", seed, residual, 1e-10));

        let _ = PauliOp::identity(1);
    }
    Ok(rows)
}
