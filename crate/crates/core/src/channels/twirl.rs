//! Analytic randomized-compiling twirl: averages a general instrument over
//! the compiling frame and extracts the uniform stochastic instrument it
//! collapses to.

use ndarray::Array2;
use num_complex::Complex64;

use super::{
    rates_from_fidelities, FidelityTable, GeneralInstrument, UniformStochasticInstrument,
};
use crate::clifford::CliffordTableau;
use crate::error::{CoreError, Result};
use crate::pauli::{symplectic_inner, PauliOp};
use crate::unitary::{dagger, max_abs_diff, pauli_matrix, unitary_from_tableau, CMat};

const TWIRL_TOL: f64 = 1e-10;

/// Averages E_{P,alpha,beta,gamma}[(P (x) X^a Z^g) M_{k-a} G^dag (P (x) Z^b X^a)]
/// over all compiling choices and extracts the k-independent rate table.
///
/// Errors if the average is not a uniform stochastic instrument to within
/// 1e-10, which signals either a bug or a non-instrument input.
pub fn twirl_average(
    mi: &GeneralInstrument,
    g: &CliffordTableau,
) -> Result<UniformStochasticInstrument> {
    let (n, m) = (mi.n(), mi.m());
    if g.n_qubits() != n + m {
        return Err(CoreError::SizeMismatch(format!(
            "gate on {} qubits, instrument on {}",
            g.n_qubits(),
            n + m
        )));
    }
    if n + m > 3 {
        return Err(CoreError::InvalidConfig(
            "exact twirl enumeration is capped at n + m <= 3".into(),
        ));
    }
    let dim = 1usize << (n + m);
    let n_outcomes = 1usize << n;
    let n_basis = 1usize << (2 * (n + m));
    let u_g = unitary_from_tableau(g);
    let u_g_dag = dagger(&u_g);

    let basis: Vec<CMat> = (0..n_basis)
        .map(|t| pauli_matrix(&PauliOp::from_index(n + m, t)))
        .collect();
    // G^dag B G per basis element, shared across compiling tuples.
    let conj_b: Vec<CMat> = basis.iter().map(|b| u_g_dag.dot(b).dot(&u_g)).collect();

    let tuples = (1usize << (2 * m)) * (1usize << (3 * n));
    let weight = 1.0 / tuples as f64;
    let mut avg: Vec<Vec<CMat>> =
        vec![vec![Array2::zeros((dim, dim)); n_basis]; n_outcomes];

    for p_idx in 0..1usize << (2 * m) {
        let p = PauliOp::from_index(m, p_idx);
        for alpha in 0..n_outcomes {
            for beta in 0..n_outcomes {
                let pre = PauliOp::from_bits(
                    n + m,
                    p.x_bits() | (alpha << m),
                    p.z_bits() | (beta << m),
                );
                for gamma in 0..n_outcomes {
                    let post_mat = pauli_matrix(&PauliOp::from_bits(
                        n + m,
                        p.x_bits() | (alpha << m),
                        p.z_bits() | (gamma << m),
                    ));
                    for (t, cb) in conj_b.iter().enumerate() {
                        // Pre B Pre^dag = +-B for Pauli frames.
                        let sign = if symplectic_inner(&pre, &PauliOp::from_index(n + m, t))? == 1
                        {
                            -weight
                        } else {
                            weight
                        };
                        for k in 0..n_outcomes {
                            let moved = mi.apply(k ^ alpha, cb);
                            let term = post_mat.dot(&moved).dot(&post_mat);
                            avg[k][t].scaled_add(Complex64::new(sign, 0.0), &term);
                        }
                    }
                }
            }
        }
    }

    // Extract lambda_{x,y}^Q = 2^{-m} (-1)^{k.(x+y)} <<Q (x) Z^y | U_k | Q (x) Z^x>>
    // for every k and check k-independence.
    let table_len = UniformStochasticInstrument::table_len(n, m);
    let mut lambda = vec![vec![0.0; table_len]; n_outcomes];
    for k in 0..n_outcomes {
        for x in 0..n_outcomes {
            for y in 0..n_outcomes {
                for q_idx in 0..1usize << (2 * m) {
                    let q = PauliOp::from_index(m, q_idx);
                    let in_op = PauliOp::from_bits(n + m, q.x_bits(), q.z_bits() | (x << m));
                    let out_op =
                        pauli_matrix(&PauliOp::from_bits(n + m, q.x_bits(), q.z_bits() | (y << m)));
                    let acted = &avg[k][in_op.index()];
                    let mut tr = Complex64::new(0.0, 0.0);
                    for i in 0..dim {
                        for j in 0..dim {
                            tr += out_op[(i, j)] * acted[(j, i)];
                        }
                    }
                    if tr.im.abs() > TWIRL_TOL {
                        return Err(CoreError::TwirlResidual {
                            residual: tr.im.abs(),
                            tol: TWIRL_TOL,
                        });
                    }
                    let par = ((k & (x ^ y)).count_ones() & 1) == 1;
                    let val = tr.re / (1 << m) as f64 * if par { -1.0 } else { 1.0 };
                    lambda[k][(((x << n) | y) << (2 * m)) | q_idx] = val;
                }
            }
        }
    }
    let mut residual: f64 = 0.0;
    for k in 1..n_outcomes {
        for (a, b) in lambda[k].iter().zip(lambda[0].iter()) {
            residual = residual.max((a - b).abs());
        }
    }
    if residual > TWIRL_TOL {
        return Err(CoreError::TwirlResidual {
            residual,
            tol: TWIRL_TOL,
        });
    }

    let usi = rates_from_fidelities(&FidelityTable::from_raw(n, m, lambda[0].clone()))?;

    // Structural check: the averaged superoperator must equal the extracted
    // uniform stochastic instrument on the whole operator basis.
    let mut structural: f64 = 0.0;
    for k in 0..n_outcomes {
        for t in 0..n_basis {
            let expected = usi_action_on_basis(&usi, k, t);
            structural = structural.max(max_abs_diff(&expected, &avg[k][t]));
        }
    }
    if structural > TWIRL_TOL {
        return Err(CoreError::TwirlResidual {
            residual: structural,
            tol: TWIRL_TOL,
        });
    }
    Ok(usi)
}

/// Exact action of U_k (no gate) on a basis Pauli S_sys (x) S_anc:
/// nonzero only for Z-type ancilla parts.
fn usi_action_on_basis(usi: &UniformStochasticInstrument, k: usize, t: usize) -> CMat {
    let (n, m) = (usi.n(), usi.m());
    let dim = 1usize << (n + m);
    let full = PauliOp::from_index(n + m, t);
    let s_sys = full.system_part(m);
    let s_anc = full.ancilla_part(m);
    let mut out: CMat = Array2::zeros((dim, dim));
    if s_anc.x_bits() != 0 {
        return out;
    }
    let z_anc = s_anc.z_bits();
    let sys_mat = pauli_matrix(&s_sys);
    let sys_dim = 1usize << m;
    for a in 0..1usize << n {
        let anc_sign = if (((k ^ a) & z_anc).count_ones() & 1) == 1 {
            -1.0
        } else {
            1.0
        };
        for b in 0..1usize << n {
            let mut coeff = 0.0;
            for p_idx in 0..1usize << (2 * m) {
                let p = PauliOp::from_index(m, p_idx);
                let r = usi.rates()[(((a << n) | b) << (2 * m)) | p_idx];
                if r == 0.0 {
                    continue;
                }
                let s = if symplectic_inner(&p, &s_sys).unwrap() == 1 {
                    -1.0
                } else {
                    1.0
                };
                coeff += r * s;
            }
            let scale = Complex64::new(coeff * anc_sign, 0.0);
            if scale.norm() == 0.0 {
                continue;
            }
            let anc = (k ^ b) << m;
            for i in 0..sys_dim {
                for j in 0..sys_dim {
                    out[(anc | i, anc | j)] += scale * sys_mat[(i, j)];
                }
            }
        }
    }
    out
}

/// Builds the compiled instrument T_k = U_k G from a rate table and a gate
/// unitary, as one Kraus operator per (a, b, P) triple.
pub fn compiled_instrument(
    usi: &UniformStochasticInstrument,
    u_g: &CMat,
) -> GeneralInstrument {
    let (n, m) = (usi.n(), usi.m());
    let dim = 1usize << (n + m);
    let sys_dim = 1usize << m;
    let mut kraus: Vec<Vec<CMat>> = vec![Vec::new(); 1 << n];
    for (k, slot) in kraus.iter_mut().enumerate() {
        for idx in 0..usi.rates().len() {
            let r = usi.rates()[idx];
            if r <= 0.0 {
                continue;
            }
            let (a, b, p) = usi.decode_index(idx);
            let pm = pauli_matrix(&p);
            let mut op: CMat = Array2::zeros((dim, dim));
            let row_anc = (k ^ b.value()) << m;
            let col_anc = (k ^ a.value()) << m;
            for i in 0..sys_dim {
                for j in 0..sys_dim {
                    op[(row_anc | i, col_anc | j)] = pm[(i, j)] * r.sqrt();
                }
            }
            slot.push(op.dot(u_g));
        }
    }
    GeneralInstrument::new(n, m, kraus).expect("compiled instrument is trace preserving")
}
