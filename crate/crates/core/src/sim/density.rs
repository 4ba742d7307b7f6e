//! Dense density matrices and their Pauli-coefficient (dual space) view.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::pauli::PauliOp;
use crate::unitary::{dagger, CMat};

/// A complex Hermitian matrix on n qubits; trace 1 for states, possibly
/// unnormalized mid-protocol. Basis bit i is qubit i (system low, ancilla high).
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    n_qubits: usize,
    mat: CMat,
}

impl DensityMatrix {
    pub fn from_matrix(n_qubits: usize, mat: CMat) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if mat.dim() != (dim, dim) {
            return Err(CoreError::SizeMismatch(format!(
                "matrix shape {:?}, expected {dim}x{dim}",
                mat.dim()
            )));
        }
        Ok(DensityMatrix { n_qubits, mat })
    }

    pub fn computational_basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut mat: CMat = Array2::zeros((dim, dim));
        mat[(index, index)] = Complex64::new(1.0, 0.0);
        DensityMatrix { n_qubits, mat }
    }

    pub fn all_zeros(n_qubits: usize) -> Self {
        Self::computational_basis(n_qubits, 0)
    }

    /// Product state prod_i (I + c_i Z_i)/2; coefficients in [-1, 1].
    pub fn z_product(coeffs: &[f64]) -> Self {
        let n = coeffs.len();
        let dim = 1usize << n;
        let mut mat: CMat = Array2::zeros((dim, dim));
        for j in 0..dim {
            let mut v = 1.0;
            for (i, c) in coeffs.iter().enumerate() {
                let z = if (j >> i) & 1 == 1 { -1.0 } else { 1.0 };
                v *= (1.0 + c * z) / 2.0;
            }
            mat[(j, j)] = Complex64::new(v, 0.0);
        }
        DensityMatrix { n_qubits: n, mat }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|j| self.mat[(j, j)].re).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn apply_unitary(&mut self, u: &CMat) {
        self.mat = u.dot(&self.mat).dot(&dagger(u));
    }

    /// Tr(P rho) for a phase-free Pauli; real for Hermitian rho.
    pub fn expectation_pauli(&self, p: &PauliOp) -> f64 {
        let x = p.x_bits();
        let z = p.z_bits();
        let ph = ((x & z).count_ones() % 4) as u8;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..self.dim() {
            let col = j ^ x;
            // P[j, col] = i^ph (-1)^{|z & col|}
            let sign = ((z & col).count_ones() & 1) as u8;
            let phase = match (ph + 2 * sign) % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
            acc += phase * self.mat[(col, j)];
        }
        acc.re
    }

    /// Probabilities of each ancilla computational-basis outcome, tracing out
    /// the m-qubit system on the low bits.
    pub fn ancilla_probabilities(&self, m: usize) -> Vec<f64> {
        let n = self.n_qubits - m;
        let mut probs = vec![0.0; 1 << n];
        for w in 0..1usize << n {
            for s in 0..1usize << m {
                let j = (w << m) | s;
                probs[w] += self.mat[(j, j)].re;
            }
        }
        probs
    }

    /// The system block (I (x) <w|) rho (I (x) |w>), a 2^m x 2^m matrix.
    pub fn project_ancilla(&self, m: usize, w: usize) -> CMat {
        let sys_dim = 1usize << m;
        let mut out: CMat = Array2::zeros((sys_dim, sys_dim));
        for i in 0..sys_dim {
            for j in 0..sys_dim {
                out[(i, j)] = self.mat[((w << m) | i, (w << m) | j)];
            }
        }
        out
    }

    /// Builds M (x) |w><w| on m + n qubits from a system block.
    pub fn from_system_block(m: usize, n: usize, block: &CMat, w: usize) -> Self {
        let dim = 1usize << (m + n);
        let sys_dim = 1usize << m;
        let mut mat: CMat = Array2::zeros((dim, dim));
        for i in 0..sys_dim {
            for j in 0..sys_dim {
                mat[((w << m) | i, (w << m) | j)] = block[(i, j)];
            }
        }
        DensityMatrix { n_qubits: m + n, mat }
    }

    pub fn scale(&mut self, s: f64) {
        self.mat.mapv_inplace(|v| v * s);
    }

    pub fn pauli_coefficients(&self) -> PauliCoefficients {
        let n = self.n_qubits;
        let scale = 1.0 / (1usize << n) as f64;
        let c = PauliOp::all(n)
            .map(|p| self.expectation_pauli(&p) * scale)
            .collect();
        PauliCoefficients { n_qubits: n, c }
    }

    pub fn from_pauli_coefficients(coeffs: &PauliCoefficients) -> Self {
        let n = coeffs.n_qubits;
        let dim = 1usize << n;
        let mut mat: CMat = Array2::zeros((dim, dim));
        for (idx, &cv) in coeffs.c.iter().enumerate() {
            if cv == 0.0 {
                continue;
            }
            let p = PauliOp::from_index(n, idx);
            let x = p.x_bits();
            let z = p.z_bits();
            let ph = ((x & z).count_ones() % 4) as u8;
            for j in 0..dim {
                let sign = ((z & j).count_ones() & 1) as u8;
                let phase = match (ph + 2 * sign) % 4 {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                };
                mat[(j ^ x, j)] += phase * cv;
            }
        }
        DensityMatrix { n_qubits: n, mat }
    }

    /// Scales the coefficient of every Pauli with weight pattern t by f(t).
    /// Used for pattern-diagonal channels (terminating noise, gauge maps).
    pub fn scale_by_pattern(&mut self, f: impl Fn(usize) -> f64) {
        let mut coeffs = self.pauli_coefficients();
        for (idx, c) in coeffs.c.iter_mut().enumerate() {
            let p = PauliOp::from_index(self.n_qubits, idx);
            *c *= f(p.x_bits() | p.z_bits());
        }
        *self = DensityMatrix::from_pauli_coefficients(&coeffs);
    }
}

/// The vector of 2^{-n} Tr(P rho) over all phase-free Paulis in index order.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliCoefficients {
    pub n_qubits: usize,
    pub c: Vec<f64>,
}

impl PauliCoefficients {
    pub fn zeros(n_qubits: usize) -> Self {
        PauliCoefficients {
            n_qubits,
            c: vec![0.0; 1 << (2 * n_qubits)],
        }
    }

    pub fn max_abs_diff(&self, other: &PauliCoefficients) -> f64 {
        self.c
            .iter()
            .zip(other.c.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
