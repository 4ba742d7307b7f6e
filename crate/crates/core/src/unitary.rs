//! Dense complex matrices for Paulis, Clifford generators and whole tableaux.
//!
//! Basis convention: computational basis index bit `i` is qubit `i`, so the
//! system register (qubits 0..m) occupies the low bits and the ancilla
//! register the high bits.

use ndarray::Array2;
use num_complex::Complex64;

use crate::clifford::{single_qubit_cliffords, CliffordGen, CliffordTableau, LocalLayer};
use crate::pauli::PauliOp;

pub type CMat = Array2<Complex64>;

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

pub fn zeros(dim: usize) -> CMat {
    Array2::zeros((dim, dim))
}

pub fn identity(dim: usize) -> CMat {
    Array2::eye(dim)
}

fn parity(v: usize) -> u32 {
    (v.count_ones()) & 1
}

/// Dense matrix of i^ph * X^x * Z^z: column j maps to i^ph (-1)^{|z & j|} |j ^ x>.
pub fn phased_pauli_matrix(n_qubits: usize, x: usize, z: usize, ph: u8) -> CMat {
    let dim = 1usize << n_qubits;
    let mut m = zeros(dim);
    for j in 0..dim {
        let sign = if parity(z & j) == 1 { 2 } else { 0 };
        m[(j ^ x, j)] = I_POWERS[((ph + sign) % 4) as usize];
    }
    m
}

/// Dense matrix of a phase-free Pauli in its Hermitian form.
pub fn pauli_matrix(p: &PauliOp) -> CMat {
    let x = p.x_bits();
    let z = p.z_bits();
    phased_pauli_matrix(p.n_qubits(), x, z, ((x & z).count_ones() % 4) as u8)
}

pub fn gen_matrix(n_qubits: usize, gen: &CliffordGen) -> CMat {
    let dim = 1usize << n_qubits;
    let mut m = zeros(dim);
    match gen {
        CliffordGen::H(q) => {
            let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            for j in 0..dim {
                let bit = (j >> q) & 1;
                m[(j & !(1 << q), j)] += s;
                let sign = if bit == 1 { -s } else { s };
                m[(j | (1 << q), j)] += sign;
            }
        }
        CliffordGen::S(q) => {
            for j in 0..dim {
                m[(j, j)] = I_POWERS[(j >> q) & 1];
            }
        }
        CliffordGen::Cnot(c, t) => {
            for j in 0..dim {
                let out = if (j >> c) & 1 == 1 { j ^ (1 << t) } else { j };
                m[(out, j)] = Complex64::new(1.0, 0.0);
            }
        }
        CliffordGen::Cz(a, b) => {
            for j in 0..dim {
                let ph = ((j >> a) & 1) & ((j >> b) & 1);
                m[(j, j)] = if ph == 1 {
                    Complex64::new(-1.0, 0.0)
                } else {
                    Complex64::new(1.0, 0.0)
                };
            }
        }
        CliffordGen::ControlledPauli(c, p) => {
            let x = p.x_bits();
            let z = p.z_bits();
            let ph = ((x & z).count_ones() % 4) as u8;
            for j in 0..dim {
                if (j >> c) & 1 == 1 {
                    let sign = if parity(z & j) == 1 { 2 } else { 0 };
                    m[(j ^ x, j)] = I_POWERS[((ph + sign) % 4) as usize];
                } else {
                    m[(j, j)] = Complex64::new(1.0, 0.0);
                }
            }
        }
    }
    m
}

pub fn circuit_matrix(n_qubits: usize, gens: &[CliffordGen]) -> CMat {
    let mut u = identity(1 << n_qubits);
    for g in gens {
        u = gen_matrix(n_qubits, g).dot(&u);
    }
    u
}

/// Kronecker product with `a` on the high bits and `b` on the low bits.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

fn single_qubit_matrix(index: usize) -> CMat {
    circuit_matrix(1, &single_qubit_cliffords()[index].word)
}

/// Full unitary of a layer of single-qubit Cliffords (qubit 0 on the low bit).
pub fn local_layer_matrix(layer: &LocalLayer) -> CMat {
    let mut m = single_qubit_matrix(layer.indices()[0] as usize);
    for &idx in &layer.indices()[1..] {
        m = kron(&single_qubit_matrix(idx as usize), &m);
    }
    m
}

/// Reconstructs a unitary (up to global phase) from its conjugation tableau.
///
/// Column 0 is the joint +1 eigenvector of the signed Z images; column k is
/// the image of X^k applied to it, with the exact i-phase from the tableau.
pub fn unitary_from_tableau(t: &CliffordTableau) -> CMat {
    let n = t.n_qubits();
    let dim = 1usize << n;
    let half = Complex64::new(0.5, 0.0);
    let mut proj = identity(dim);
    for i in 0..n {
        let (zi, sign) = t.z_image(i);
        let mut zm = pauli_matrix(&zi);
        if sign < 0 {
            zm.mapv_inplace(|v| -v);
        }
        proj = (&proj + &proj.dot(&zm)).mapv(|v| v * half);
    }
    let col0 = (0..dim)
        .find(|&c| proj.column(c).iter().any(|v| v.norm() > 1e-9))
        .expect("stabilizer projector has rank one");
    let mut phi0: Vec<Complex64> = proj.column(col0).to_vec();
    let norm: f64 = phi0.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let lead = *phi0.iter().find(|v| v.norm() > 1e-9).unwrap();
    let phase = lead.conj() / lead.norm();
    for v in phi0.iter_mut() {
        *v = *v * phase / norm;
    }
    let mut u = zeros(dim);
    for k in 0..dim {
        let img = t.conjugate_phased(k as u16, 0, 0);
        let (x, z, ph) = (img.x as usize, img.z as usize, img.ph);
        for (j, amp) in phi0.iter().enumerate() {
            if amp.norm() == 0.0 {
                continue;
            }
            let sign = if parity(z & j) == 1 { 2 } else { 0 };
            u[(j ^ x, k)] = I_POWERS[((ph + sign) % 4) as usize] * amp;
        }
    }
    u
}

pub fn dagger(m: &CMat) -> CMat {
    m.t().mapv(|v| v.conj())
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::random_tableau;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn conj(u: &CMat, p: &CMat) -> CMat {
        u.dot(p).dot(&dagger(u))
    }

    #[test]
    fn tableau_conjugation_matches_matrix_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..8 {
            let t = random_tableau(2, &mut rng);
            let u = unitary_from_tableau(&t);
            // Unitarity.
            assert!(max_abs_diff(&u.dot(&dagger(&u)), &identity(4)) < 1e-12);
            for p in PauliOp::all(2) {
                let (img, sign) = t.conjugate(&p).unwrap();
                let mut expected = pauli_matrix(&img);
                if sign < 0 {
                    expected.mapv_inplace(|v| -v);
                }
                assert!(max_abs_diff(&conj(&u, &pauli_matrix(&p)), &expected) < 1e-12);
            }
        }
    }

    #[test]
    fn cnot_oracle_example() {
        // Brute-force 4x4 unitary conjugation oracle for CNOT . XI . CNOT.
        let cnot = CliffordTableau::from_gen(2, &CliffordGen::Cnot(0, 1)).unwrap();
        let u = gen_matrix(2, &CliffordGen::Cnot(0, 1));
        let xi: PauliOp = "XI".parse().unwrap();
        let xx: PauliOp = "XX".parse().unwrap();
        assert!(max_abs_diff(&conj(&u, &pauli_matrix(&xi)), &pauli_matrix(&xx)) < 1e-12);
        assert_eq!(cnot.conjugate(&xi).unwrap(), (xx, 1));
    }

    #[test]
    fn gen_matrices_match_tableaux() {
        let gens = [
            CliffordGen::H(1),
            CliffordGen::S(0),
            CliffordGen::Cnot(1, 0),
            CliffordGen::Cz(0, 1),
            CliffordGen::ControlledPauli(1, "YI".parse().unwrap()),
        ];
        for g in &gens {
            let t = CliffordTableau::from_gen(2, g).unwrap();
            let u = gen_matrix(2, g);
            for p in PauliOp::all(2) {
                let (img, sign) = t.conjugate(&p).unwrap();
                let mut expected = pauli_matrix(&img);
                if sign < 0 {
                    expected.mapv_inplace(|v| -v);
                }
                assert!(
                    max_abs_diff(&conj(&u, &pauli_matrix(&p)), &expected) < 1e-12,
                    "generator {g:?} disagrees on {p}"
                );
            }
        }
    }

    #[test]
    fn local_layer_matrix_matches_tableau() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let layer = LocalLayer::from_indices(vec![
                rng.gen_range(0..24),
                rng.gen_range(0..24),
            ]);
            let u = local_layer_matrix(&layer);
            let t = layer.tableau();
            for p in PauliOp::all(2) {
                let (img, sign) = t.conjugate(&p).unwrap();
                let mut expected = pauli_matrix(&img);
                if sign < 0 {
                    expected.mapv_inplace(|v| -v);
                }
                assert!(max_abs_diff(&conj(&u, &pauli_matrix(&p)), &expected) < 1e-12);
            }
        }
    }
}
