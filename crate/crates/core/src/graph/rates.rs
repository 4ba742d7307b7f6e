//! Chains whose evaluation on log-fidelities approximates Pauli error rates,
//! and the learnable combinations for syndrome circuits. Exact-integer
//! variants back the boundary-zero proofs.

use super::chain::{IntOneChain, OneChain};
use super::PatternTransferGraph;
use crate::bits::Bits;
use crate::error::{CoreError, Result};
use crate::pauli::{symplectic_inner, PauliOp};

/// 4^{-(n+m)} sum_{x,y,Q} (-1)^{a.x + b.y + <P,Q>} e_{x,y}^Q. Adding the
/// Kronecker-delta constant for (a, b, P) = (0, 0, I) to its value on
/// log-fidelities recovers p_{a,b}^P to first order in the noise.
pub fn error_rate_chain(a: &Bits, b: &Bits, p: &PauliOp, g: &PatternTransferGraph) -> OneChain {
    error_rate_chain_exact(a, b, p, g).to_float()
}

pub fn error_rate_chain_exact(
    a: &Bits,
    b: &Bits,
    p: &PauliOp,
    g: &PatternTransferGraph,
) -> IntOneChain {
    let denom = 1i64 << (2 * (g.n() + g.m()));
    let mut chain = IntOneChain::new(denom);
    for (e, info) in g.edges().iter().enumerate() {
        let exp = (a.dot(&info.label.x) as u8
            + b.dot(&info.label.y) as u8
            + symplectic_inner(p, &info.label.q).expect("sizes match"))
            & 1;
        chain.add(e, if exp == 1 { -1 } else { 1 });
    }
    chain
}

/// The learnable combinations of Propositions 1-3. Kinds 2 and 3 assume the
/// graph was built from a syndrome circuit for the given stabilizers and
/// require P to commute with all of them.
#[derive(Clone, Debug)]
pub enum PropositionKind {
    /// p_{a,b}^P with a != 0 and b != 0.
    SingleRate { a: Bits, b: Bits, p: PauliOp },
    /// sum_k p_{0,0}^{S^k P}.
    StabilizerSum { p: PauliOp },
    /// sum_k p_{0,a}^{S^k P} + p_{a,0}^{S^k P} with a != 0.
    ReadoutPostSum { a: Bits, p: PauliOp },
}

pub fn proposition_chains(
    kind: &PropositionKind,
    stabilizers: &[PauliOp],
    g: &PatternTransferGraph,
) -> Result<IntOneChain> {
    let n = g.n();
    let m = g.m();
    let check_centralizer = |p: &PauliOp| -> Result<()> {
        for s in stabilizers {
            if symplectic_inner(p, s)? == 1 {
                return Err(CoreError::InvalidConfig(format!(
                    "{p} anticommutes with stabilizer {s}"
                )));
            }
        }
        Ok(())
    };
    let stabilizer_product = |k: usize| -> PauliOp {
        let mut acc = PauliOp::identity(m);
        for (i, s) in stabilizers.iter().enumerate() {
            if (k >> i) & 1 == 1 {
                acc = acc.multiply(s).expect("sizes match");
            }
        }
        acc
    };
    match kind {
        PropositionKind::SingleRate { a, b, p } => {
            if a.is_zero() || b.is_zero() {
                return Err(CoreError::InvalidConfig(
                    "single-rate chains are learnable only for a != 0 and b != 0".into(),
                ));
            }
            Ok(error_rate_chain_exact(a, b, p, g))
        }
        PropositionKind::StabilizerSum { p } => {
            check_centralizer(p)?;
            let denom = 1i64 << (2 * (n + m));
            let mut chain = IntOneChain::new(denom);
            for (e, info) in g.edges().iter().enumerate() {
                let mut coeff = 0i64;
                for k in 0..1usize << stabilizers.len() {
                    let skp = stabilizer_product(k).multiply(p)?;
                    let exp = symplectic_inner(&skp, &info.label.q)?;
                    coeff += if exp == 1 { -1 } else { 1 };
                }
                chain.add(e, coeff);
            }
            Ok(chain)
        }
        PropositionKind::ReadoutPostSum { a, p } => {
            if a.is_zero() {
                return Err(CoreError::InvalidConfig(
                    "readout/post-measurement sums need a != 0".into(),
                ));
            }
            check_centralizer(p)?;
            let denom = 1i64 << (2 * (n + m));
            let mut chain = IntOneChain::new(denom);
            for (e, info) in g.edges().iter().enumerate() {
                let mut stab = 0i64;
                for k in 0..1usize << stabilizers.len() {
                    let skp = stabilizer_product(k).multiply(p)?;
                    let exp = symplectic_inner(&skp, &info.label.q)?;
                    stab += if exp == 1 { -1 } else { 1 };
                }
                let sx = if a.dot(&info.label.x) { -1 } else { 1 };
                let sy = if a.dot(&info.label.y) { -1 } else { 1 };
                chain.add(e, stab * (sx + sy));
            }
            Ok(chain)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{CliffordGen, CliffordTableau};
    use crate::graph::{build_ptg, build_syndrome_tableau};

    fn cnot_graph() -> PatternTransferGraph {
        let g = CliffordTableau::from_gen(2, &CliffordGen::Cnot(0, 1)).unwrap();
        build_ptg(&g, 1, 1).unwrap()
    }

    #[test]
    fn nonzero_ab_chain_has_exact_zero_boundary() {
        let g = cnot_graph();
        let one: Bits = "1".parse().unwrap();
        for p in PauliOp::all(1) {
            let chain = error_rate_chain_exact(&one, &one, &p, &g);
            assert!(g.boundary_exact(&chain).unwrap().is_zero());
        }
    }

    #[test]
    fn zero_chain_on_ideal_model_evaluates_to_zero() {
        let g = cnot_graph();
        let chain = error_rate_chain(&Bits::zero(1), &Bits::zero(1), &PauliOp::identity(1), &g);
        let log_fid = vec![0.0; g.n_edges()];
        assert_eq!(chain.evaluate(&log_fid), 0.0);
    }

    #[test]
    fn decomposition_groups_match_published_example() {
        // The two directed-cycle groups the p_{1,1}^I decomposition uses,
        // including the padding edges that cancel between them, recombine to
        // 16 p_{1,1}^I exactly.
        let g = cnot_graph();
        let one: Bits = "1".parse().unwrap();
        let chain = error_rate_chain(&one, &one, &PauliOp::identity(1), &g);
        let idx = |key: &str| g.edge_index(&key.parse().unwrap()).unwrap();
        let positive = [
            "1|1|X", "1|1|Y", "0|0|Y", "0|1|Z", "0|0|X", "0|0|Z", "0|1|Z", "1|1|I", "1|1|Z",
        ];
        let negative = [
            "0|1|Y", "1|0|X", "0|1|Z", "0|1|X", "1|0|Y", "0|1|Z", "1|0|I", "0|1|I", "1|0|Z",
            "0|1|Z",
        ];
        let mut recombined = OneChain::edge(idx("0|0|I"));
        for key in positive {
            recombined.add(idx(key), 1.0);
        }
        for key in negative {
            recombined.add(idx(key), -1.0);
        }
        recombined.scale(1.0 / 16.0);
        recombined.add_scaled(&chain, -1.0);
        assert!(recombined.is_zero(1e-14));
    }

    #[test]
    fn proposition_two_and_three_boundary_zero() {
        // CNOT as the syndrome circuit for S = {Z} on one system qubit.
        let stabs = vec!["Z".parse::<PauliOp>().unwrap()];
        let t = build_syndrome_tableau(&stabs).unwrap();
        let g = build_ptg(&t, 1, 1).unwrap();
        let chain = proposition_chains(
            &PropositionKind::StabilizerSum {
                p: PauliOp::identity(1),
            },
            &stabs,
            &g,
        )
        .unwrap();
        assert!(g.boundary_exact(&chain).unwrap().is_zero());
        let chain3 = proposition_chains(
            &PropositionKind::ReadoutPostSum {
                a: "1".parse().unwrap(),
                p: PauliOp::identity(1),
            },
            &stabs,
            &g,
        )
        .unwrap();
        assert!(g.boundary_exact(&chain3).unwrap().is_zero());
    }

    #[test]
    fn anticommuting_p_is_rejected() {
        let stabs = vec!["Z".parse::<PauliOp>().unwrap()];
        let t = build_syndrome_tableau(&stabs).unwrap();
        let g = build_ptg(&t, 1, 1).unwrap();
        let res = proposition_chains(
            &PropositionKind::StabilizerSum {
                p: "X".parse().unwrap(),
            },
            &stabs,
            &g,
        );
        assert!(res.is_err());
    }

    #[test]
    fn kind_one_matches_error_rate_chain() {
        let g = cnot_graph();
        let one: Bits = "1".parse().unwrap();
        let via_prop = proposition_chains(
            &PropositionKind::SingleRate {
                a: one,
                b: one,
                p: PauliOp::identity(1),
            },
            &[],
            &g,
        )
        .unwrap();
        assert_eq!(
            via_prop,
            error_rate_chain_exact(&one, &one, &PauliOp::identity(1), &g)
        );
    }
}
