//! The ideal Clifford gate for simultaneous stabilizer measurements: per
//! ancilla, a Hadamard, a controlled stabilizer with the ancilla as control,
//! and a closing Hadamard.

use crate::clifford::{CliffordGen, CliffordTableau};
use crate::error::{CoreError, Result};
use crate::pauli::{symplectic_inner, PauliOp};

/// The gate word on m system qubits (wires 0..m) plus one ancilla per
/// stabilizer (wires m..m+n).
pub fn build_syndrome_circuit(stabilizers: &[PauliOp]) -> Result<(usize, usize, Vec<CliffordGen>)> {
    if stabilizers.is_empty() {
        return Err(CoreError::InvalidConfig("no stabilizers given".into()));
    }
    let m = stabilizers[0].n_qubits();
    let n = stabilizers.len();
    for s in stabilizers {
        if s.n_qubits() != m {
            return Err(CoreError::SizeMismatch(
                "stabilizers act on different qubit counts".into(),
            ));
        }
    }
    for (i, a) in stabilizers.iter().enumerate() {
        for b in stabilizers.iter().skip(i + 1) {
            if symplectic_inner(a, b)? == 1 {
                return Err(CoreError::NonCommutingStabilizers(
                    a.to_string(),
                    b.to_string(),
                ));
            }
        }
    }
    let total = m + n;
    let mut gens = Vec::with_capacity(3 * n);
    for (i, s) in stabilizers.iter().enumerate() {
        let wire = m + i;
        gens.push(CliffordGen::H(wire));
        let embedded = PauliOp::from_bits(total, s.x_bits(), s.z_bits());
        gens.push(CliffordGen::ControlledPauli(wire, embedded));
        gens.push(CliffordGen::H(wire));
    }
    Ok((n, m, gens))
}

pub fn build_syndrome_tableau(stabilizers: &[PauliOp]) -> Result<CliffordTableau> {
    let (n, m, gens) = build_syndrome_circuit(stabilizers)?;
    CliffordTableau::from_circuit(n + m, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitary::{circuit_matrix, max_abs_diff, unitary_from_tableau};

    #[test]
    fn z_syndrome_equals_cnot() {
        let t = build_syndrome_tableau(&["Z".parse().unwrap()]).unwrap();
        let cnot = CliffordTableau::from_gen(2, &CliffordGen::Cnot(0, 1)).unwrap();
        assert_eq!(t, cnot);
        // Matrix oracle: H_a CZ H_a equals CNOT with the system as control.
        let circuit = [
            CliffordGen::H(1),
            CliffordGen::Cz(0, 1),
            CliffordGen::H(1),
        ];
        let u = circuit_matrix(2, &circuit);
        let v = unitary_from_tableau(&t);
        // Compare as channels: strip the global phase via the first nonzero
        // entries.
        let phase = u[(0, 0)] / v[(0, 0)];
        let adjusted = v.mapv(|x| x * phase);
        assert!(max_abs_diff(&u, &adjusted) < 1e-12);
    }

    #[test]
    fn identity_stabilizer_gives_trivial_wire() {
        let t = build_syndrome_tableau(&["I".parse().unwrap()]).unwrap();
        assert_eq!(t, CliffordTableau::identity(2));
    }

    #[test]
    fn two_stabilizer_tableau_is_symplectic() {
        let t =
            build_syndrome_tableau(&["ZZ".parse().unwrap(), "XX".parse().unwrap()]).unwrap();
        assert_eq!(t.n_qubits(), 4);
        assert!(t.is_symplectic());
    }

    #[test]
    fn non_commuting_stabilizers_rejected() {
        let res = build_syndrome_tableau(&["ZI".parse().unwrap(), "XI".parse().unwrap()]);
        assert!(matches!(res, Err(CoreError::NonCommutingStabilizers(_, _))));
    }
}
