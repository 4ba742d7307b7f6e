//! Walsh-Hadamard invariance of the cycle space for graphs without ancillas
//! (n = 0): the transform of every cycle is again a cycle.

use super::chain::IntOneChain;
use super::spaces::cycle_basis;
use super::PatternTransferGraph;
use crate::error::{CoreError, Result};
use crate::pauli::{symplectic_inner, PauliOp};

/// For every fundamental cycle sum_k eps_k e^{Q_k}, checks that the image
/// 4^{-m} sum_k eps_k sum_R (-1)^{<Q_k, R>} e^R has exactly zero boundary.
/// Only meaningful for n = 0; graphs with measured ancillas do not have this
/// property.
pub fn walsh_cycle_invariance_check(g: &PatternTransferGraph) -> Result<bool> {
    if g.n() != 0 {
        return Err(CoreError::InvalidConfig(
            "Walsh-Hadamard cycle invariance is defined for n = 0 graphs".into(),
        ));
    }
    let m = g.m();
    let denom = 1i64 << (2 * m);
    for cycle in cycle_basis(g) {
        let mut image = IntOneChain::new(denom);
        for (e, c) in cycle.iter() {
            let eps = c.round() as i64;
            debug_assert!((c - eps as f64).abs() < 1e-9);
            let qk = g.edge(e).label.q;
            for (r_idx, r) in PauliOp::all(m).enumerate() {
                let s = if symplectic_inner(&qk, &r)? == 1 { -1 } else { 1 };
                image.add(r_idx, eps * s);
            }
        }
        if !g.boundary_exact(&image)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
