//! Property tests for the structural invariants: transform inversion,
//! boundary/coboundary adjointness, and pattern preservation.

use proptest::prelude::*;

use mcmcb_core::channels::{
    fidelities_from_rates, rates_from_fidelities, UniformStochasticInstrument,
};
use mcmcb_core::clifford::{CliffordGen, CliffordTableau, LocalLayer};
use mcmcb_core::graph::{build_ptg, OneChain, ZeroChain};
use mcmcb_core::pauli::{pattern, PauliOp};

fn normalized_rates(len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0f64..1.0, len).prop_map(|mut v| {
        let total: f64 = v.iter().sum();
        if total == 0.0 {
            v[0] = 1.0;
        } else {
            for x in v.iter_mut() {
                *x /= total;
            }
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_pair_inverts(rates in normalized_rates(64)) {
        // n = 1, m = 2: table length 64.
        let usi = UniformStochasticInstrument::new(1, 2, rates).unwrap();
        let back = rates_from_fidelities(&fidelities_from_rates(&usi)).unwrap();
        for (a, b) in usi.rates().iter().zip(back.rates().iter()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_coboundary_adjoint(
        edge_coeffs in proptest::collection::vec(-3.0f64..3.0, 16),
        vertex_coeffs in proptest::collection::vec(-3.0f64..3.0, 4),
    ) {
        let t = CliffordTableau::from_gen(2, &CliffordGen::Cnot(0, 1)).unwrap();
        let g = build_ptg(&t, 1, 1).unwrap();
        let mu: OneChain = edge_coeffs.iter().copied().enumerate().collect();
        let nu: ZeroChain = vertex_coeffs.iter().copied().enumerate().collect();
        let lhs = g.coboundary(&nu).inner(&mu);
        let rhs: f64 = g
            .boundary(&mu)
            .unwrap()
            .iter()
            .map(|(v, c)| c * nu.coefficient(v))
            .sum();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn local_layers_preserve_patterns(
        indices in proptest::collection::vec(0u8..24, 3),
        pauli_idx in 0usize..64,
    ) {
        let layer = LocalLayer::from_indices(indices).tableau();
        let p = PauliOp::from_index(3, pauli_idx);
        let (img, _) = layer.conjugate(&p).unwrap();
        prop_assert_eq!(pattern(&img), pattern(&p));
    }
}
