//! Phase-free Pauli operators in the symplectic (X/Z bit-vector) representation,
//! and Pauli weight patterns.

use std::fmt;
use std::str::FromStr;

use crate::bits::Bits;
use crate::error::{CoreError, Result};

/// A Pauli operator on `n_qubits` qubits, modulo phase. Qubit `i` carries the
/// factor encoded by bit `i` of `x` and `z`: (0,0) = I, (1,0) = X, (0,1) = Z,
/// (1,1) = Y. Equality is bitwise, so two operators are equal iff they agree
/// up to a global phase.
///
/// When an operator acts on a joint system+ancilla register, the system
/// occupies qubits `0..m` and the ancillas occupy qubits `m..m+n`, matching
/// the text form "system qubits first, then ancilla".
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOp {
    n_qubits: u8,
    x: u16,
    z: u16,
}

/// Weight pattern of a Pauli operator: bit `i` is set iff the operator acts
/// non-trivially on qubit `i`.
pub type WeightPattern = Bits;

impl PauliOp {
    pub const MAX_QUBITS: usize = 16;

    pub fn identity(n_qubits: usize) -> Self {
        assert!(n_qubits <= Self::MAX_QUBITS);
        PauliOp {
            n_qubits: n_qubits as u8,
            x: 0,
            z: 0,
        }
    }

    pub fn from_bits(n_qubits: usize, x: usize, z: usize) -> Self {
        assert!(n_qubits <= Self::MAX_QUBITS);
        let mask = if n_qubits == Self::MAX_QUBITS {
            u16::MAX as usize
        } else {
            (1usize << n_qubits) - 1
        };
        PauliOp {
            n_qubits: n_qubits as u8,
            x: (x & mask) as u16,
            z: (z & mask) as u16,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    pub fn x_bits(&self) -> usize {
        self.x as usize
    }

    pub fn z_bits(&self) -> usize {
        self.z as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// The single-qubit factor on qubit `i` as a 1-qubit Pauli.
    pub fn factor(&self, i: usize) -> PauliOp {
        debug_assert!(i < self.n_qubits());
        PauliOp::from_bits(1, ((self.x >> i) & 1) as usize, ((self.z >> i) & 1) as usize)
    }

    pub fn set_factor(&mut self, i: usize, f: PauliOp) {
        debug_assert!(i < self.n_qubits());
        debug_assert_eq!(f.n_qubits(), 1);
        self.x = (self.x & !(1 << i)) | ((f.x & 1) << i);
        self.z = (self.z & !(1 << i)) | ((f.z & 1) << i);
    }

    /// Canonical flat index `(z << n) | x`, enumerating all 4^n operators.
    pub fn index(&self) -> usize {
        ((self.z as usize) << self.n_qubits()) | self.x as usize
    }

    pub fn from_index(n_qubits: usize, idx: usize) -> Self {
        debug_assert!(idx < 1usize << (2 * n_qubits));
        let mask = (1usize << n_qubits) - 1;
        PauliOp::from_bits(n_qubits, idx & mask, idx >> n_qubits)
    }

    /// All Pauli operators on `n_qubits` qubits in index order.
    pub fn all(n_qubits: usize) -> impl Iterator<Item = PauliOp> {
        (0..1usize << (2 * n_qubits)).map(move |i| PauliOp::from_index(n_qubits, i))
    }

    /// Phase-free product: the Pauli whose bit-vectors are the XOR of the
    /// operands'. Any i/-1 phase of the operator product is discarded.
    pub fn multiply(&self, other: &PauliOp) -> Result<PauliOp> {
        if self.n_qubits != other.n_qubits {
            return Err(CoreError::SizeMismatch(format!(
                "{} vs {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(PauliOp {
            n_qubits: self.n_qubits,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        })
    }

    /// Embeds a system Pauli `q` (on m qubits) and an ancilla Z^x (on n qubits)
    /// into a single operator on m+n qubits, system first.
    pub fn q_otimes_zx(q: &PauliOp, x: &Bits) -> PauliOp {
        let m = q.n_qubits();
        let n = x.len();
        PauliOp::from_bits(m + n, q.x_bits(), q.z_bits() | (x.value() << m))
    }

    /// Restriction to the system factor, qubits `0..m`.
    pub fn system_part(&self, m: usize) -> PauliOp {
        let mask = (1usize << m) - 1;
        PauliOp::from_bits(m, self.x_bits() & mask, self.z_bits() & mask)
    }

    /// The ancilla factor, qubits `m..`, as a Pauli on n qubits.
    pub fn ancilla_part(&self, m: usize) -> PauliOp {
        let n = self.n_qubits() - m;
        PauliOp::from_bits(n, self.x_bits() >> m, self.z_bits() >> m)
    }
}

/// Symplectic inner product: 0 iff `p` and `q` commute, 1 otherwise.
pub fn symplectic_inner(p: &PauliOp, q: &PauliOp) -> Result<u8> {
    if p.n_qubits != q.n_qubits {
        return Err(CoreError::SizeMismatch(format!(
            "{} vs {} qubits",
            p.n_qubits, q.n_qubits
        )));
    }
    let acc = (p.x & q.z).count_ones() + (p.z & q.x).count_ones();
    Ok((acc & 1) as u8)
}

/// Weight pattern pt(p): bit i set iff p acts non-trivially on qubit i.
pub fn pattern(p: &PauliOp) -> WeightPattern {
    Bits::new(p.n_qubits(), (p.x | p.z) as usize)
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n_qubits() {
            let c = match ((self.x >> i) & 1, (self.z >> i) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp({self})")
    }
}

impl serde::Serialize for PauliOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for PauliOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for PauliOp {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() > Self::MAX_QUBITS {
            return Err(CoreError::Parse(format!("Pauli string too long: {s:?}")));
        }
        let mut x = 0usize;
        let mut z = 0usize;
        for (i, c) in s.chars().enumerate() {
            match c {
                'I' | 'i' => {}
                'X' | 'x' => x |= 1 << i,
                'Z' | 'z' => z |= 1 << i,
                'Y' | 'y' => {
                    x |= 1 << i;
                    z |= 1 << i;
                }
                _ => return Err(CoreError::Parse(format!("invalid Pauli {c:?} in {s:?}"))),
            }
        }
        Ok(PauliOp::from_bits(s.len(), x, z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_anticommutation() {
        let x: PauliOp = "X".parse().unwrap();
        let z: PauliOp = "Z".parse().unwrap();
        assert_eq!(symplectic_inner(&x, &z).unwrap(), 1);
    }

    #[test]
    fn identity_commutes_with_everything() {
        for q in PauliOp::all(3) {
            assert_eq!(symplectic_inner(&PauliOp::identity(3), &q).unwrap(), 0);
        }
    }

    #[test]
    fn paired_anticommutation_cancels() {
        let xx: PauliOp = "XX".parse().unwrap();
        let zz: PauliOp = "ZZ".parse().unwrap();
        assert_eq!(symplectic_inner(&xx, &zz).unwrap(), 0);
    }

    #[test]
    fn patterns() {
        let iz: PauliOp = "IZ".parse().unwrap();
        assert_eq!(pattern(&iz).to_string(), "01");
        assert_eq!(pattern(&PauliOp::identity(4)).to_string(), "0000");
        let xy: PauliOp = "XY".parse().unwrap();
        assert_eq!(pattern(&xy).to_string(), "11");
    }

    #[test]
    fn symmetry_and_bilinearity_exhaustive() {
        for n in 1..=3usize {
            for p in PauliOp::all(n) {
                for q in PauliOp::all(n) {
                    let pq = symplectic_inner(&p, &q).unwrap();
                    assert_eq!(pq, symplectic_inner(&q, &p).unwrap());
                    for r in PauliOp::all(n) {
                        let qr = q.multiply(&r).unwrap();
                        let lhs = symplectic_inner(&p, &qr).unwrap();
                        let rhs =
                            (pq + symplectic_inner(&p, &r).unwrap()) & 1;
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn embedding_order_is_system_first() {
        let q: PauliOp = "X".parse().unwrap();
        let x: Bits = "1".parse().unwrap();
        assert_eq!(PauliOp::q_otimes_zx(&q, &x).to_string(), "XZ");
        let q2: PauliOp = "XY".parse().unwrap();
        let x2: Bits = "01".parse().unwrap();
        assert_eq!(PauliOp::q_otimes_zx(&q2, &x2).to_string(), "XYIZ");
    }

    #[test]
    fn mixed_size_inner_product_rejected() {
        let a = PauliOp::identity(2);
        let b = PauliOp::identity(3);
        assert!(symplectic_inner(&a, &b).is_err());
    }
}
