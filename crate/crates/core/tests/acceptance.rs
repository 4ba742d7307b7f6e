//! Acceptance suite: one test per criterion, each printing a pass line with
//! its measured runtime. Tolerances are pinned in the assertions.

use std::time::Instant;

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mcmcb_core::analysis::{
    characterize, independence_test, reconstruct_error_rate, true_geo_mean, CorrelationQuery,
};
use mcmcb_core::bits::Bits;
use mcmcb_core::channels::{
    apply_instrument_dual, apply_instrument_physical, compiled_instrument, fidelities_from_rates,
    gauge_transform_shrinking, random_general_instrument, random_instrument,
    random_instrument_planted, random_measure_and_prepare, rates_from_fidelities, twirl_average,
    DualChannel, PlantSpec,
};
use mcmcb_core::clifford::{random_tableau, CliffordGen, CliffordTableau};
use mcmcb_core::graph::{
    build_ptg, build_syndrome_tableau, cycle_basis, error_rate_chain_exact, proposition_chains,
    walsh_cycle_invariance_check, PropositionKind, ZeroChain,
};
use mcmcb_core::model::{CliffordGate, NoiseModel};
use mcmcb_core::pauli::{symplectic_inner, PauliOp};
use mcmcb_core::protocol::{
    compile_path, decompose_into_walks, predict_variance, random_walk, theorem1_rhs, PathSpec,
    ShotBudget,
};
use mcmcb_core::sim::density::DensityMatrix;
use mcmcb_core::sim::enumerate::enumerate_expectation;
use mcmcb_core::sim::spam::SpamModel;
use mcmcb_core::unitary::unitary_from_tableau;

fn random_state(n_qubits: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let dim = 1usize << n_qubits;
    let mut mat: Array2<Complex64> = Array2::zeros((dim, dim));
    for _ in 0..3 {
        let w = rng.gen::<f64>() + 0.1;
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        for i in 0..dim {
            for j in 0..dim {
                mat[(i, j)] += v[i] * v[j].conj() * (w / norm);
            }
        }
    }
    let tr: f64 = (0..dim).map(|i| mat[(i, i)].re).sum();
    mat.mapv_inplace(|x| x / tr);
    DensityMatrix::from_matrix(n_qubits, mat).unwrap()
}

fn cnot_gate() -> CliffordGate {
    CliffordGate::from_circuit(2, &[CliffordGen::Cnot(0, 1)]).unwrap()
}

#[test]
fn criterion_01_transform_correctness() {
    let start = Instant::now();
    let shapes = [(1usize, 1usize), (1, 2), (2, 1)];
    let mut done = 0;
    let mut seed = 1000u64;
    while done < 50 {
        let (n, m) = shapes[done % shapes.len()];
        let eps = 0.05 + 0.35 * ((done as f64 * 0.61803) % 1.0);
        let usi = random_instrument(n, m, eps, seed).unwrap();
        seed += 1;
        let fast = fidelities_from_rates(&usi);
        // Independent quadruple-sum oracle.
        for x in Bits::all(n) {
            for y in Bits::all(n) {
                for q in PauliOp::all(m) {
                    let mut acc = 0.0;
                    for a in Bits::all(n) {
                        for b in Bits::all(n) {
                            for p in PauliOp::all(m) {
                                let e = (a.dot(&x) as u8
                                    + b.dot(&y) as u8
                                    + symplectic_inner(&p, &q).unwrap())
                                    & 1;
                                acc += if e == 1 { -1.0 } else { 1.0 } * usi.rate(&a, &b, &p);
                            }
                        }
                    }
                    assert!(
                        (fast.value(&x, &y, &q) - acc).abs() < 1e-12,
                        "transform disagrees with the oracle at {x}|{y}|{q}"
                    );
                }
            }
        }
        assert!((fast.values()[0] - 1.0).abs() < 1e-12, "lambda_(0,0)^I != 1");
        let back = rates_from_fidelities(&fast).unwrap();
        for (a, b) in usi.rates().iter().zip(back.rates().iter()) {
            assert!((a - b).abs() < 1e-12, "round trip drift");
        }
        done += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "criterion 1 overran: {elapsed:?}");
    println!("criterion 01 transform-correctness: PASS ({elapsed:?})");
}

#[test]
fn criterion_02_dual_form_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let shapes = [(1usize, 1usize), (1, 2), (2, 1)];
    for i in 0..20 {
        let (n, m) = shapes[i % shapes.len()];
        let usi = random_instrument(n, m, 0.3, rng.gen()).unwrap();
        let tableau = random_tableau(n + m, &mut rng);
        let u_g = unitary_from_tableau(&tableau);
        let fid = fidelities_from_rates(&usi);
        let ch = DualChannel::new(fid, &tableau).unwrap();
        let rho = random_state(n + m, &mut rng);
        let k = Bits::new(n, rng.gen_range(0..1usize << n));
        let phys = apply_instrument_physical(&usi, &u_g, &rho, &k).unwrap();
        let dual = apply_instrument_dual(&ch, &rho.pauli_coefficients(), &k).unwrap();
        let diff = phys.pauli_coefficients().max_abs_diff(&dual);
        assert!(diff < 1e-12, "tuple {i}: physical and dual differ by {diff}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "criterion 2 overran: {elapsed:?}");
    println!("criterion 02 dual-form-equivalence: PASS ({elapsed:?})");
}

#[test]
fn criterion_03_twirl_fixed_point() {
    let start = Instant::now();
    let gate = cnot_gate();
    for seed in 0..10u64 {
        let mi = random_general_instrument(1, 1, 2, 300 + seed);
        // twirl_average verifies k-independence and the uniform stochastic
        // structure internally at 1e-10 and errors otherwise.
        let usi = twirl_average(&mi, gate.tableau()).unwrap();
        let total: f64 = usi.rates().iter().sum();
        assert!((total - 1.0).abs() < 1e-10, "twirl output not normalized");
        assert!(
            usi.rates().iter().all(|r| *r > -1e-10),
            "twirl output has negative rates"
        );
    }
    // Fixed point: an already-compiled instrument twirls to itself.
    let usi = random_instrument(1, 1, 0.25, 391).unwrap();
    let mi = compiled_instrument(&usi, gate.unitary());
    let back = twirl_average(&mi, gate.tableau()).unwrap();
    let f0 = fidelities_from_rates(&usi);
    let f1 = fidelities_from_rates(&back);
    for (a, b) in f0.values().iter().zip(f1.values().iter()) {
        assert!((a - b).abs() < 1e-10, "fixed point drift: {a} vs {b}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "criterion 3 overran: {elapsed:?}");
    println!("criterion 03 twirl-fixed-point: PASS ({elapsed:?})");
}

#[test]
fn criterion_04_pattern_transfer_graph_golden() {
    let start = Instant::now();
    let t = CliffordTableau::from_gen(2, &CliffordGen::Cnot(0, 1)).unwrap();
    // Published n = m = 1 graph, edge for edge. Vertex names read system
    // qubit first.
    let g = build_ptg(&t, 1, 1).unwrap();
    assert_eq!(g.n_vertices(), 4);
    assert_eq!(g.n_edges(), 16);
    let expected = [
        ("0|0|I", "00", "00"),
        ("0|1|I", "00", "01"),
        ("1|0|I", "11", "00"),
        ("1|1|I", "11", "01"),
        ("0|0|Z", "10", "10"),
        ("0|1|Z", "10", "11"),
        ("1|0|Z", "01", "10"),
        ("1|1|Z", "01", "11"),
        ("0|0|X", "11", "10"),
        ("1|0|X", "11", "10"),
        ("0|0|Y", "11", "10"),
        ("1|0|Y", "11", "10"),
        ("0|1|X", "11", "11"),
        ("1|1|X", "11", "11"),
        ("0|1|Y", "11", "11"),
        ("1|1|Y", "11", "11"),
    ];
    for (label, src, dst) in expected {
        let info = g.edge(g.edge_index(&label.parse().unwrap()).unwrap());
        assert_eq!(g.vertex_name(info.src), src, "edge {label} src");
        assert_eq!(g.vertex_name(info.dst), dst, "edge {label} dst");
    }
    assert_eq!(cycle_basis(&g).len(), 13, "learnable degrees of freedom");

    // Published m = 2, n = 0 graph.
    let g2 = build_ptg(&t, 0, 2).unwrap();
    let expected2 = [
        ("II", "00", "00"),
        ("IX", "01", "01"),
        ("ZI", "10", "10"),
        ("XZ", "11", "11"),
        ("ZX", "11", "11"),
        ("YY", "11", "11"),
        ("XY", "11", "11"),
        ("YZ", "11", "11"),
        ("IZ", "11", "01"),
        ("IY", "11", "01"),
        ("ZY", "01", "11"),
        ("ZZ", "01", "11"),
        ("XI", "11", "10"),
        ("YI", "11", "10"),
        ("YX", "10", "11"),
        ("XX", "10", "11"),
    ];
    for (q, src, dst) in expected2 {
        let label = format!("||{q}").parse().unwrap();
        let info = g2.edge(g2.edge_index(&label).unwrap());
        assert_eq!(g2.vertex_name(info.src), src, "edge {q} src");
        assert_eq!(g2.vertex_name(info.dst), dst, "edge {q} dst");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "criterion 4 overran: {elapsed:?}");
    println!("criterion 04 pattern-transfer-graph-golden: PASS ({elapsed:?})");
}

#[test]
fn criterion_05_main_identity_exact() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut checked = 0;
    while checked < 20 {
        let tableau = random_tableau(2, &mut rng);
        let gate = CliffordGate::from_tableau(tableau.clone());
        let usi = random_instrument(1, 1, 0.02 + 0.05 * rng.gen::<f64>(), rng.gen()).unwrap();
        let spam = SpamModel::random(2, 0.03, rng.gen()).unwrap();
        let model = NoiseModel::new(gate, usi, spam).unwrap();
        let g = build_ptg(&tableau, 1, 1).unwrap();
        let len = 1 + rng.gen_range(0..4);
        let Some(path) = random_walk(&g, len, &mut rng) else {
            continue;
        };
        let exp = compile_path(&path, model.gate()).unwrap();
        let (rhs_s, rhs_t) = theorem1_rhs(&exp, &model).unwrap();
        let s = enumerate_expectation(&exp.main_spec, &model).unwrap();
        let t = enumerate_expectation(&exp.aux_spec, &model).unwrap();
        assert!((s - rhs_s).abs() < 1e-10, "main identity off by {}", s - rhs_s);
        assert!((t - rhs_t).abs() < 1e-10, "aux identity off by {}", t - rhs_t);
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "criterion 5 overran: {elapsed:?}");
    println!("criterion 05 main-identity-exact: PASS ({elapsed:?})");
}

#[test]
fn criterion_06_gauge_invariance() {
    let start = Instant::now();
    let gate = cnot_gate();
    let g = build_ptg(gate.tableau(), 1, 1).unwrap();
    let usi = random_instrument(1, 1, 0.05, 606).unwrap();
    let model = NoiseModel::new(gate, usi, SpamModel::random(2, 0.02, 607).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(608);
    // Ten random depth-3 circuits from compiled walks.
    let mut circuits = Vec::new();
    while circuits.len() < 10 {
        let Some(path) = random_walk(&g, 3, &mut rng) else {
            continue;
        };
        circuits.push(compile_path(&path, model.gate()).unwrap().main_spec);
    }
    let baseline: Vec<f64> = circuits
        .iter()
        .map(|c| enumerate_expectation(c, &model).unwrap())
        .collect();
    let log_before: Vec<f64> = model.fidelities().values().iter().map(|v| v.ln()).collect();
    let basis = cycle_basis(&g);
    for trial in 0..10 {
        let mut nu = ZeroChain::new();
        for v in 1..g.n_vertices() {
            nu.add(v, rng.gen::<f64>() - 0.5);
        }
        let eta: f64 = if trial % 2 == 0 { 1.02 } else { 1.05 };
        let (transformed, nu_used) = gauge_transform_shrinking(&model, &nu, eta, 40).unwrap();
        for (circuit, base) in circuits.iter().zip(baseline.iter()) {
            let v = enumerate_expectation(circuit, &transformed).unwrap();
            assert!(
                (v - base).abs() < 1e-10,
                "trial {trial}: outcome moved by {}",
                v - base
            );
        }
        let log_after: Vec<f64> = transformed
            .fidelities()
            .values()
            .iter()
            .map(|v| v.ln())
            .collect();
        for c in &basis {
            let shift = c.evaluate(&log_after) - c.evaluate(&log_before);
            assert!(shift.abs() < 1e-10, "cycle functional shifted by {shift}");
        }
        let delta = g.coboundary(&nu_used);
        let mut some_cut_shifted = false;
        for v in 1..g.n_vertices() {
            let mu = g.coboundary(&ZeroChain::vertex(v));
            let shift = mu.evaluate(&log_after) - mu.evaluate(&log_before);
            let expected = delta.inner(&mu) * eta.ln();
            assert!(
                (shift - expected).abs() < 1e-10,
                "cut functional shift {shift} != {expected}"
            );
            if expected.abs() > 1e-9 {
                some_cut_shifted = true;
            }
        }
        assert!(some_cut_shifted, "trial {trial}: no cut functional moved");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "criterion 6 overran: {elapsed:?}");
    println!("criterion 06 gauge-invariance: PASS ({elapsed:?})");
}

#[test]
fn criterion_07_cycle_learning_reproduction() {
    let start = Instant::now();
    let gate = cnot_gate();
    let g = build_ptg(gate.tableau(), 1, 1).unwrap();
    let usi = random_instrument(1, 1, 0.01, 707).unwrap();
    let model = NoiseModel::new(gate, usi, SpamModel::random(2, 0.01, 708).unwrap()).unwrap();
    let budget = ShotBudget::symmetric(100, 100);
    let result = characterize(&model, &g, &budget, 709, false, 12).unwrap();
    assert_eq!(result.cycles.len(), 13, "thirteen learnable degrees of freedom");
    assert!(result.all_directed, "directed basis expected for this gadget");

    let mut within = 0usize;
    for c in &result.cycles {
        let truth = true_geo_mean(c, model.fidelities(), &g);
        let est = c.geo_mean.expect("no failures at this budget");
        if (est - truth).abs() <= 3.0 * c.geo_std {
            within += 1;
        }
        // Bootstrap deviation within a factor 2 of the rough analytic
        // prediction, per cycle.
        let total_len = c.length * (12 / c.length).max(1);
        let n_total = budget.shots_main() + budget.shots_aux();
        // lambda0 is the SPAM-only prefactor of the auxiliary mean for this
        // cycle's starting point.
        let idxs: Vec<usize> = c
            .edges
            .iter()
            .map(|(_, label)| g.edge_index(&label.parse().unwrap()).unwrap())
            .collect();
        let path = PathSpec::from_edge_indices(&g, &idxs);
        let exp = compile_path(&path, model.gate()).unwrap();
        let (_, lambda0) = theorem1_rhs(&exp, &model).unwrap();
        let predicted = predict_variance(total_len, n_total, lambda0, truth).sqrt();
        if predicted < 1e-6 {
            // The trivial all-identity loop is deterministic: both the
            // prediction and the bootstrap deviation vanish.
            assert!(c.geo_std < 1e-6, "trivial cycle acquired spread");
        } else {
            assert!(
                c.geo_std < 2.0 * predicted && c.geo_std > predicted / 2.0,
                "cycle {:?}: bootstrap std {} vs predicted {}",
                c.edges,
                c.geo_std,
                predicted
            );
        }
    }
    assert!(within >= 12, "only {within} of 13 estimates within 3 std");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "criterion 7 overran: {elapsed:?}");
    println!(
        "criterion 07 cycle-learning-reproduction: PASS ({within}/13 within 3 std, {elapsed:?})"
    );
}

#[test]
fn criterion_08_independence_test_reproduction() {
    let start = Instant::now();
    let gate = cnot_gate();
    let g = build_ptg(gate.tableau(), 1, 1).unwrap();
    // 1e5 shots per log-fidelity: 100 circuits x 500 shots main, equal aux.
    let budget = ShotBudget {
        circuits: 100,
        shots_per_circuit: 500,
        aux_circuits: 100,
        aux_shots_per_circuit: 500,
        bootstrap_resamples: 200,
    };
    let queries = CorrelationQuery::canonical_single_ancilla(1);

    // Measure-and-prepare instrument: all four correlations consistent with 0.
    let map = random_measure_and_prepare(1, 1, 0.02, 801).unwrap();
    let map_model = NoiseModel::new(
        cnot_gate(),
        map.induced_usi(),
        SpamModel::random(2, 0.01, 802).unwrap(),
    )
    .unwrap();
    let rows = independence_test(&map_model, &g, &queries, &budget, 803, false).unwrap();
    for row in &rows {
        assert_eq!(
            row.consistent_with_zero,
            Some(true),
            "{} flagged nonzero on a factorized instrument (value {:?}, std {})",
            row.query.key(),
            row.value,
            row.std
        );
    }

    // Generic instrument with a correlation planted at >= 10x the predicted
    // deviation: at least one query must be flagged.
    let sigma_edge = predict_variance(1, budget.shots_main() + budget.shots_aux(), 0.95, 0.9)
        .sqrt();
    let sigma_c = 2.0 * sigma_edge;
    let plant_mass = 10.0 * sigma_c / 4.0 * 1.5;
    let one: Bits = "1".parse().unwrap();
    let planted = random_instrument_planted(
        1,
        1,
        0.02,
        804,
        &[PlantSpec {
            a: one,
            b: one,
            p: PauliOp::identity(1),
            mass: plant_mass,
        }],
    )
    .unwrap();
    let planted_model =
        NoiseModel::new(cnot_gate(), planted, SpamModel::random(2, 0.01, 805).unwrap()).unwrap();
    // Verify the plant really sits 10 predicted deviations out.
    let fid = planted_model.fidelities();
    let zero = Bits::zero(1);
    let c_true: f64 = PauliOp::all(1)
        .map(|q| {
            (fid.value(&zero, &zero, &q).ln() + fid.value(&one, &one, &q).ln()
                - fid.value(&one, &zero, &q).ln()
                - fid.value(&zero, &one, &q).ln())
            .abs()
        })
        .fold(0.0, f64::max);
    assert!(
        c_true >= 10.0 * sigma_c,
        "plant too small: {c_true} vs 10 sigma = {}",
        10.0 * sigma_c
    );
    let rows = independence_test(&planted_model, &g, &queries, &budget, 806, false).unwrap();
    assert!(
        rows.iter()
            .any(|r| r.consistent_with_zero == Some(false)),
        "no correlation flagged on the planted instrument"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 900.0, "criterion 8 overran: {elapsed:?}");
    println!("criterion 08 independence-test-reproduction: PASS ({elapsed:?})");
}

#[test]
fn criterion_09_error_rate_recovery_coverage() {
    let start = Instant::now();
    let gate = cnot_gate();
    let g = build_ptg(gate.tableau(), 1, 1).unwrap();
    let one: Bits = "1".parse().unwrap();
    let p_id = PauliOp::identity(1);

    // Fix an instrument whose true p_{1,1}^I sits in the published regime.
    let mut chosen = None;
    for seed in 900..1100u64 {
        let usi = random_instrument(1, 1, 0.018, seed).unwrap();
        let rate = usi.rate(&one, &one, &p_id);
        if (2e-4..=4e-4).contains(&rate) {
            chosen = Some((usi, rate, seed));
            break;
        }
    }
    let (usi, truth, seed) = chosen.expect("a seed in the target regime exists");
    let model =
        NoiseModel::new(gate, usi, SpamModel::random(2, 0.005, seed + 5000).unwrap()).unwrap();

    // 40000 total shots per repetition of the whole experiment: 10 inner
    // repetitions, each splitting 4000 shots over the decomposition walks
    // (main + auxiliary).
    let chain = mcmcb_core::graph::error_rate_chain(&one, &one, &p_id, &g);
    let n_walks = decompose_into_walks(&chain, &g).unwrap().len();
    let inner_reps = 10usize;
    let per_side = 40_000 / inner_reps / n_walks / 2;
    let circuits = 4usize;
    let budget = ShotBudget {
        circuits,
        shots_per_circuit: per_side / circuits,
        aux_circuits: circuits,
        aux_shots_per_circuit: per_side / circuits,
        bootstrap_resamples: 50,
    };
    let total_shots = inner_reps * n_walks * 2 * circuits * (per_side / circuits);
    assert!(total_shots <= 40_000, "budget exceeded: {total_shots}");

    let mut covered = 0usize;
    for rep in 0..100u64 {
        let est = reconstruct_error_rate(
            &one,
            &one,
            &p_id,
            &model,
            &g,
            &budget,
            9000 + rep,
            false,
            inner_reps,
        )
        .unwrap();
        let value = est.value.expect("estimates succeed at this noise level");
        if (value - truth).abs() <= 3.0 * est.std {
            covered += 1;
        }
    }
    assert!(
        covered >= 95,
        "coverage {covered}/100 below 95 (truth {truth:.3e})"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1800.0, "criterion 9 overran: {elapsed:?}");
    println!(
        "criterion 09 error-rate-recovery: PASS ({covered}/100 covered, truth {truth:.2e}, {elapsed:?})"
    );
}

#[test]
fn criterion_10_propositions_and_walsh_invariance() {
    let start = Instant::now();
    // Zero boundaries in exact integer arithmetic for the CNOT gadget.
    let t = CliffordTableau::from_gen(2, &CliffordGen::Cnot(0, 1)).unwrap();
    let g = build_ptg(&t, 1, 1).unwrap();
    let one: Bits = "1".parse().unwrap();
    let stabs_z = vec!["Z".parse::<PauliOp>().unwrap()];
    for p in PauliOp::all(1) {
        let chain = error_rate_chain_exact(&one, &one, &p, &g);
        assert!(g.boundary_exact(&chain).unwrap().is_zero(), "Prop 1 for {p}");
    }
    for p in [PauliOp::identity(1), "Z".parse().unwrap()] {
        let chain =
            proposition_chains(&PropositionKind::StabilizerSum { p }, &stabs_z, &g).unwrap();
        assert!(g.boundary_exact(&chain).unwrap().is_zero(), "Prop 2 for {p}");
        let chain3 = proposition_chains(
            &PropositionKind::ReadoutPostSum { a: one, p },
            &stabs_z,
            &g,
        )
        .unwrap();
        assert!(g.boundary_exact(&chain3).unwrap().is_zero(), "Prop 3 for {p}");
    }
    // Two-stabilizer syndrome circuit.
    let stabs = vec!["ZZ".parse::<PauliOp>().unwrap(), "XX".parse().unwrap()];
    let ts = build_syndrome_tableau(&stabs).unwrap();
    let gs = build_ptg(&ts, 2, 2).unwrap();
    let a2: Bits = "10".parse().unwrap();
    for p in ["II", "ZZ", "XX", "YY"] {
        let p: PauliOp = p.parse().unwrap();
        let chain =
            proposition_chains(&PropositionKind::StabilizerSum { p }, &stabs, &gs).unwrap();
        assert!(gs.boundary_exact(&chain).unwrap().is_zero(), "Prop 2 for {p}");
        let chain3 =
            proposition_chains(&PropositionKind::ReadoutPostSum { a: a2, p }, &stabs, &gs)
                .unwrap();
        assert!(gs.boundary_exact(&chain3).unwrap().is_zero(), "Prop 3 for {p}");
    }
    // Walsh-Hadamard invariance of the cycle space for n = 0.
    let g2 = build_ptg(&t, 0, 2).unwrap();
    assert!(walsh_cycle_invariance_check(&g2).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    for _ in 0..3 {
        let rt = random_tableau(2, &mut rng);
        let gr = build_ptg(&rt, 0, 2).unwrap();
        assert!(walsh_cycle_invariance_check(&gr).unwrap());
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "criterion 10 overran: {elapsed:?}");
    println!("criterion 10 propositions-and-walsh: PASS ({elapsed:?})");
}
