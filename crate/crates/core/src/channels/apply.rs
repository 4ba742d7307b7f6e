//! Exact action of a compiled noisy MCM on a state, in both the physical
//! (density matrix) form and the dual (Pauli coefficient) form. The two
//! routes are independent and are held to agree to 1e-12 in tests.

use ndarray::Array2;
use num_complex::Complex64;

use super::{FidelityTable, UniformStochasticInstrument};
use crate::bits::Bits;
use crate::clifford::CliffordTableau;
use crate::error::{CoreError, Result};
use crate::pauli::PauliOp;
use crate::sim::density::{DensityMatrix, PauliCoefficients};
use crate::unitary::{pauli_matrix, CMat};

/// rho -> sum_{a,b,P} p_{a,b}^P (P (x) |k+b><k+a|) G rho G^dag (P (x) |k+a><k+b|),
/// unnormalized; the traces over all k sum to 1.
pub fn apply_instrument_physical(
    usi: &UniformStochasticInstrument,
    u_g: &CMat,
    rho: &DensityMatrix,
    k: &Bits,
) -> Result<DensityMatrix> {
    let (n, m) = (usi.n(), usi.m());
    if rho.n_qubits() != n + m {
        return Err(CoreError::SizeMismatch(format!(
            "state on {} qubits, instrument on {}",
            rho.n_qubits(),
            n + m
        )));
    }
    let mut rotated = rho.clone();
    rotated.apply_unitary(u_g);
    let sys_dim = 1usize << m;
    let dim = 1usize << (n + m);
    let mut out: CMat = Array2::zeros((dim, dim));
    for a in 0..1usize << n {
        let block = rotated.project_ancilla(m, k.value() ^ a);
        for b in 0..1usize << n {
            let mut weighted: CMat = Array2::zeros((sys_dim, sys_dim));
            let mut any = false;
            for p_idx in 0..1usize << (2 * m) {
                let r = usi.rates()[(((a << n) | b) << (2 * m)) | p_idx];
                if r == 0.0 {
                    continue;
                }
                any = true;
                let pm = pauli_matrix(&PauliOp::from_index(m, p_idx));
                let moved = pm.dot(&block).dot(&pm);
                weighted.scaled_add(Complex64::new(r, 0.0), &moved);
            }
            if !any {
                continue;
            }
            let anc = (k.value() ^ b) << m;
            for i in 0..sys_dim {
                for j in 0..sys_dim {
                    out[(anc | i, anc | j)] += weighted[(i, j)];
                }
            }
        }
    }
    DensityMatrix::from_matrix(n + m, out)
}

/// Precomputed dual-space form of T_k = U_k G: for each (Q, x) the phase-free
/// operator behind the bra <<G^dag(Q (x) Z^x)| and its conjugation sign.
#[derive(Clone, Debug)]
pub struct DualChannel {
    n: usize,
    m: usize,
    fidelities: FidelityTable,
    /// Indexed by (x << 2m) | Q.index(): full-Pauli index of G^dag(Q (x) Z^x)
    /// and the sign it carries.
    bra_ops: Vec<(usize, i8)>,
}

impl DualChannel {
    pub fn new(fidelities: FidelityTable, g: &CliffordTableau) -> Result<Self> {
        let (n, m) = (fidelities.n(), fidelities.m());
        if g.n_qubits() != n + m {
            return Err(CoreError::SizeMismatch(format!(
                "gate on {} qubits, table on {}",
                g.n_qubits(),
                n + m
            )));
        }
        let g_inv = g.inverse();
        let mut bra_ops = Vec::with_capacity((1 << n) * (1 << (2 * m)));
        for x in 0..1usize << n {
            for q_idx in 0..1usize << (2 * m) {
                let q = PauliOp::from_index(m, q_idx);
                let embedded = PauliOp::from_bits(n + m, q.x_bits(), q.z_bits() | (x << m));
                let (r, sign) = g_inv.conjugate(&embedded)?;
                bra_ops.push((r.index(), sign));
            }
        }
        Ok(DualChannel {
            n,
            m,
            fidelities,
            bra_ops,
        })
    }

    pub fn fidelities(&self) -> &FidelityTable {
        &self.fidelities
    }

    /// Coefficient of G^dag(Q (x) Z^x) in the input, sign included.
    fn bra_coefficient(&self, coeffs: &PauliCoefficients, x: usize, q_idx: usize) -> f64 {
        let (r_idx, sign) = self.bra_ops[(x << (2 * self.m)) | q_idx];
        coeffs.c[r_idx] * sign as f64
    }
}

/// Dual form of the compiled MCM (the instrument composed with its gate):
/// the output coefficient on Q (x) Z^y accumulates
/// 2^{-n} sum_x (-1)^{k.(x+y)} lambda_{x,y}^Q <<G^dag(Q (x) Z^x)|rho>> / 2^{n+m}.
pub fn apply_instrument_dual(
    ch: &DualChannel,
    coeffs: &PauliCoefficients,
    k: &Bits,
) -> Result<PauliCoefficients> {
    let (n, m) = (ch.n, ch.m);
    if coeffs.n_qubits != n + m {
        return Err(CoreError::SizeMismatch(format!(
            "coefficients on {} qubits, channel on {}",
            coeffs.n_qubits,
            n + m
        )));
    }
    let mut out = PauliCoefficients::zeros(n + m);
    let scale = 1.0 / (1usize << n) as f64;
    for q_idx in 0..1usize << (2 * m) {
        let q = PauliOp::from_index(m, q_idx);
        for y in 0..1usize << n {
            let mut acc = 0.0;
            for x in 0..1usize << n {
                let lam = ch.fidelities.values()[(((x << n) | y) << (2 * m)) | q_idx];
                if lam == 0.0 {
                    continue;
                }
                let par = ((k.value() & (x ^ y)).count_ones() & 1) == 1;
                let s = if par { -1.0 } else { 1.0 };
                acc += s * lam * ch.bra_coefficient(coeffs, x, q_idx);
            }
            let target = PauliOp::from_bits(n + m, q.x_bits(), q.z_bits() | (y << m));
            out.c[target.index()] = acc * scale;
        }
    }
    Ok(out)
}
