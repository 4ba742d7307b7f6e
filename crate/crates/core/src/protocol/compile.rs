//! Path compilation: solve the interleavers H_i with
//! H_i (Q_i (x) Z^{y_i}) H_i^dag = G^dag (Q_{i+1} (x) Z^{x_{i+1}}) G, signs
//! included, plus the alignment rotation for the prepared state and the
//! auxiliary experiment's observable.

use serde::{Deserialize, Serialize};

use super::PathSpec;
use crate::bits::Bits;
use crate::clifford::LocalLayer;
use crate::error::{CoreError, Result};
use crate::model::CliffordGate;
use crate::pauli::{pattern, PauliOp};
use crate::sim::circuit::{CircuitSpec, McmLayer, SignedPauli};

/// A compiled main/auxiliary experiment pair for one walk.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompiledExperiment {
    pub path: PathSpec,
    pub main_spec: CircuitSpec,
    pub aux_spec: CircuitSpec,
    /// Conjugation signs of G^dag(Q_i (x) Z^{x_i}) per layer. They are folded
    /// into the solved rotations, so no post-processing correction remains;
    /// kept for diagnostics.
    pub sign_corrections: Vec<i8>,
    /// Fourier masks x_i + y_i per layer.
    pub fourier_masks: Vec<Bits>,
    /// Start and end weight-pattern values.
    pub v_start: usize,
    pub v_end: usize,
    /// Fidelity-table indices of the walked edges, for exact-mode products.
    pub lambda_indices: Vec<usize>,
}

/// Compiles a walk into circuits. The walk's edge labels determine everything:
/// interleavers are solved per qubit from the single-qubit factors, the
/// initial rotation aligns the canonical Z^{v_0} component of the prepared
/// state with the signed bra operator, and the auxiliary experiment measures
/// that operator directly.
pub fn compile_path(path: &PathSpec, gate: &CliffordGate) -> Result<CompiledExperiment> {
    if path.is_empty() {
        return Err(CoreError::PathCondition {
            step: 0,
            detail: "empty path".into(),
        });
    }
    let total = gate.n_qubits();
    let m = path.edges[0].q.n_qubits();
    let n = total - m;
    let l = path.len();

    // Per layer: the ket operator Q_i (x) Z^{y_i} and the signed bra operator
    // G^dag(Q_i (x) Z^{x_i}).
    let mut kets = Vec::with_capacity(l);
    let mut bras = Vec::with_capacity(l);
    let mut signs = Vec::with_capacity(l);
    for (i, label) in path.edges.iter().enumerate() {
        if label.x.len() != n || label.y.len() != n || label.q.n_qubits() != m {
            return Err(CoreError::ForeignEdge(label.to_string()));
        }
        let ket = PauliOp::q_otimes_zx(&label.q, &label.y);
        let bra_embedded = PauliOp::q_otimes_zx(&label.q, &label.x);
        let (bra, sign) = gate.dagger_conjugate(&bra_embedded)?;
        if i > 0 {
            let prev_ket: PauliOp = kets[i - 1];
            if pattern(&prev_ket) != pattern(&bra) {
                return Err(CoreError::PathCondition {
                    step: i,
                    detail: format!(
                        "dst pattern {} of step {} differs from src pattern {}",
                        pattern(&prev_ket),
                        i - 1,
                        pattern(&bra)
                    ),
                });
            }
        }
        kets.push(ket);
        bras.push(bra);
        signs.push(sign);
    }

    let v_start = pattern(&bras[0]).value();
    let v_end = pattern(&kets[l - 1]).value();

    // Initial alignment: map the canonical Z^{v_0} component onto the signed
    // bra of the first step.
    let canonical = PauliOp::from_bits(total, 0, v_start);
    let init_rotation = LocalLayer::solve(&canonical, &bras[0], signs[0])?;

    let mut layers = Vec::with_capacity(l);
    let mut masks = Vec::with_capacity(l);
    for i in 0..l {
        let mask = path.edges[i].x.xor(&path.edges[i].y);
        masks.push(mask);
        let interleaver = if i + 1 < l {
            Some(LocalLayer::solve(&kets[i], &bras[i + 1], signs[i + 1])?)
        } else {
            None
        };
        layers.push(McmLayer {
            fourier_mask: mask,
            interleaver,
        });
    }

    let main_spec = CircuitSpec {
        n,
        m,
        init_rotation: Some(init_rotation.clone()),
        layers,
        terminating: SignedPauli::positive(kets[l - 1]),
    };
    let aux_spec = CircuitSpec {
        n,
        m,
        init_rotation: Some(init_rotation),
        layers: vec![],
        terminating: SignedPauli {
            op: bras[0],
            sign: signs[0],
        },
    };
    main_spec.validate()?;
    aux_spec.validate()?;

    let lambda_indices = path
        .edges
        .iter()
        .map(|label| {
            (((label.x.value() << n) | label.y.value()) << (2 * m)) | label.q.index()
        })
        .collect();

    Ok(CompiledExperiment {
        path: path.clone(),
        main_spec,
        aux_spec,
        sign_corrections: signs,
        fourier_masks: masks,
        v_start,
        v_end,
        lambda_indices,
    })
}
