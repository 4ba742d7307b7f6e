//! Clifford conjugation on phase-free Paulis with explicit sign tracking.
//!
//! A tableau stores, for each generator X_i and Z_i, its image under
//! conjugation `U P U^dag` as a phase-free Pauli plus a sign. Signs matter
//! because the dual-space bras of the instrument carry them, so every
//! operation that feeds the simulator propagates them.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::pauli::{pattern, symplectic_inner, PauliOp};

pub type Sign = i8;

/// Internal representation i^ph * X^x * Z^z used while multiplying images.
/// The canonical Hermitian form of a phase-free Pauli has ph = |x & z| mod 4.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PhasedPauli {
    pub x: u16,
    pub z: u16,
    pub ph: u8,
}

pub(crate) fn herm_phase(x: u16, z: u16) -> u8 {
    ((x & z).count_ones() % 4) as u8
}

impl PhasedPauli {
    fn identity() -> Self {
        PhasedPauli { x: 0, z: 0, ph: 0 }
    }

    fn from_signed(p: &PauliOp, negative: bool) -> Self {
        let x = p.x_bits() as u16;
        let z = p.z_bits() as u16;
        PhasedPauli {
            x,
            z,
            ph: (herm_phase(x, z) + if negative { 2 } else { 0 }) % 4,
        }
    }

    /// Product rule: Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1.
    fn mul(&self, rhs: &PhasedPauli) -> Self {
        let swaps = (self.z & rhs.x).count_ones() as u8;
        PhasedPauli {
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
            ph: (self.ph + rhs.ph + 2 * (swaps % 2)) % 4,
        }
    }
}

/// Generators for building Clifford tableaux and their dense unitaries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CliffordGen {
    H(usize),
    S(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
    /// Controlled application of a Pauli; the control qubit must carry the
    /// identity factor of the Pauli.
    ControlledPauli(usize, PauliOp),
}

/// Symplectic map with signs describing conjugation by a Clifford unitary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliffordTableau {
    n_qubits: usize,
    x_images: Vec<(PauliOp, bool)>,
    z_images: Vec<(PauliOp, bool)>,
}

impl CliffordTableau {
    pub fn identity(n_qubits: usize) -> Self {
        let x_images = (0..n_qubits)
            .map(|i| (PauliOp::from_bits(n_qubits, 1 << i, 0), false))
            .collect();
        let z_images = (0..n_qubits)
            .map(|i| (PauliOp::from_bits(n_qubits, 0, 1 << i), false))
            .collect();
        CliffordTableau {
            n_qubits,
            x_images,
            z_images,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_image(&self, i: usize) -> (PauliOp, Sign) {
        let (p, neg) = self.x_images[i];
        (p, if neg { -1 } else { 1 })
    }

    pub fn z_image(&self, i: usize) -> (PauliOp, Sign) {
        let (p, neg) = self.z_images[i];
        (p, if neg { -1 } else { 1 })
    }

    /// Conjugation of the x/z bit pair, keeping the full i-phase. Used by the
    /// conjugation entry point and by the unitary synthesis.
    pub(crate) fn conjugate_phased(&self, x: u16, z: u16, ph_in: u8) -> PhasedPauli {
        let mut acc = PhasedPauli {
            x: 0,
            z: 0,
            ph: ph_in,
        };
        for i in 0..self.n_qubits {
            if (x >> i) & 1 == 1 {
                let (p, neg) = self.x_images[i];
                acc = acc.mul(&PhasedPauli::from_signed(&p, neg));
            }
        }
        for i in 0..self.n_qubits {
            if (z >> i) & 1 == 1 {
                let (p, neg) = self.z_images[i];
                acc = acc.mul(&PhasedPauli::from_signed(&p, neg));
            }
        }
        acc
    }

    /// Returns U p U^dag as a phase-free Pauli with its sign.
    pub fn conjugate(&self, p: &PauliOp) -> Result<(PauliOp, Sign)> {
        if p.n_qubits() != self.n_qubits {
            return Err(CoreError::SizeMismatch(format!(
                "tableau on {} qubits, Pauli on {}",
                self.n_qubits,
                p.n_qubits()
            )));
        }
        let x = p.x_bits() as u16;
        let z = p.z_bits() as u16;
        let out = self.conjugate_phased(x, z, herm_phase(x, z));
        let diff = (out.ph + 4 - herm_phase(out.x, out.z)) % 4;
        debug_assert_eq!(diff % 2, 0, "conjugation of a Hermitian Pauli must be +-Hermitian");
        Ok((
            PauliOp::from_bits(self.n_qubits, out.x as usize, out.z as usize),
            if diff == 0 { 1 } else { -1 },
        ))
    }

    /// Composition: apply `first`, then `self`.
    pub fn compose(&self, first: &CliffordTableau) -> Result<CliffordTableau> {
        if first.n_qubits != self.n_qubits {
            return Err(CoreError::SizeMismatch(format!(
                "{} vs {} qubits",
                first.n_qubits, self.n_qubits
            )));
        }
        let map = |(p, neg): &(PauliOp, bool)| -> Result<(PauliOp, bool)> {
            let (q, s) = self.conjugate(p)?;
            Ok((q, *neg ^ (s < 0)))
        };
        Ok(CliffordTableau {
            n_qubits: self.n_qubits,
            x_images: first.x_images.iter().map(map).collect::<Result<_>>()?,
            z_images: first.z_images.iter().map(map).collect::<Result<_>>()?,
        })
    }

    /// Inverse tableau: invert the symplectic bit map over GF(2), then fix
    /// signs via forward conjugation.
    pub fn inverse(&self) -> CliffordTableau {
        let n = self.n_qubits;
        // Row-reduce [M | I] where column j of M is the symplectic vector
        // (x | z << n) of the image of generator j (X_0..X_{n-1}, Z_0..Z_{n-1}).
        let dim = 2 * n;
        let col_vec = |p: &PauliOp| -> u32 { (p.x_bits() | (p.z_bits() << n)) as u32 };
        let mut rows = vec![0u64; dim];
        for j in 0..n {
            let cx = col_vec(&self.x_images[j].0);
            let cz = col_vec(&self.z_images[j].0);
            for (r, row) in rows.iter_mut().enumerate() {
                *row |= ((((cx >> r) & 1) as u64) << j) | ((((cz >> r) & 1) as u64) << (n + j));
            }
        }
        for (r, row) in rows.iter_mut().enumerate() {
            *row |= 1u64 << (dim + r);
        }
        for col in 0..dim {
            let pivot = (col..dim)
                .find(|&r| (rows[r] >> col) & 1 == 1)
                .expect("tableau bit map must be invertible");
            rows.swap(col, pivot);
            for r in 0..dim {
                if r != col && (rows[r] >> col) & 1 == 1 {
                    rows[r] ^= rows[col];
                }
            }
        }
        let inv_col = |j: usize| -> PauliOp {
            let mut v = 0u32;
            for (r, row) in rows.iter().enumerate() {
                v |= (((row >> (dim + j)) & 1) as u32) << r;
            }
            PauliOp::from_bits(n, (v as usize) & ((1 << n) - 1), (v as usize) >> n)
        };
        let fix = |gen: PauliOp, raw: PauliOp| -> (PauliOp, bool) {
            let (img, s) = self.conjugate(&raw).expect("size checked");
            debug_assert_eq!(img, gen);
            (raw, s < 0)
        };
        let x_images = (0..n)
            .map(|i| fix(PauliOp::from_bits(n, 1 << i, 0), inv_col(i)))
            .collect();
        let z_images = (0..n)
            .map(|i| fix(PauliOp::from_bits(n, 0, 1 << i), inv_col(n + i)))
            .collect();
        CliffordTableau {
            n_qubits: n,
            x_images,
            z_images,
        }
    }

    /// Checks that generator images preserve all commutation relations.
    pub fn is_symplectic(&self) -> bool {
        let n = self.n_qubits;
        let gen = |i: usize| -> &PauliOp {
            if i < n {
                &self.x_images[i].0
            } else {
                &self.z_images[i - n].0
            }
        };
        for i in 0..2 * n {
            for j in 0..2 * n {
                let expected = u8::from(i < n && j == i + n || j < n && i == j + n);
                if symplectic_inner(gen(i), gen(j)).unwrap() != expected {
                    return false;
                }
            }
        }
        true
    }

    pub fn from_gen(n: usize, gen: &CliffordGen) -> Result<CliffordTableau> {
        let mut t = CliffordTableau::identity(n);
        let check = |q: usize| -> Result<()> {
            if q >= n {
                Err(CoreError::InvalidConfig(format!("qubit {q} out of range for {n} qubits")))
            } else {
                Ok(())
            }
        };
        match gen {
            CliffordGen::H(q) => {
                check(*q)?;
                t.x_images[*q] = (PauliOp::from_bits(n, 0, 1 << q), false);
                t.z_images[*q] = (PauliOp::from_bits(n, 1 << q, 0), false);
            }
            CliffordGen::S(q) => {
                check(*q)?;
                t.x_images[*q] = (PauliOp::from_bits(n, 1 << q, 1 << q), false);
            }
            CliffordGen::Cnot(c, tq) => {
                check(*c)?;
                check(*tq)?;
                if c == tq {
                    return Err(CoreError::InvalidConfig("cnot control equals target".into()));
                }
                t.x_images[*c] = (PauliOp::from_bits(n, (1 << c) | (1 << tq), 0), false);
                t.z_images[*tq] = (PauliOp::from_bits(n, 0, (1 << c) | (1 << tq)), false);
            }
            CliffordGen::Cz(a, b) => {
                check(*a)?;
                check(*b)?;
                if a == b {
                    return Err(CoreError::InvalidConfig("cz qubits coincide".into()));
                }
                t.x_images[*a] = (PauliOp::from_bits(n, 1 << a, 1 << b), false);
                t.x_images[*b] = (PauliOp::from_bits(n, 1 << b, 1 << a), false);
            }
            CliffordGen::ControlledPauli(c, p) => {
                check(*c)?;
                if p.n_qubits() != n {
                    return Err(CoreError::SizeMismatch(format!(
                        "controlled Pauli on {} qubits in a {} qubit circuit",
                        p.n_qubits(),
                        n
                    )));
                }
                if !p.factor(*c).is_identity() {
                    return Err(CoreError::InvalidConfig(
                        "controlled Pauli must act as identity on its control".into(),
                    ));
                }
                // X_c -> X_c * P; any generator anticommuting with P picks up Z_c.
                let xc = PauliOp::from_bits(n, 1 << c, 0);
                t.x_images[*c] = (xc.multiply(p)?, false);
                let zc_bits = 1usize << c;
                for i in 0..n {
                    if i == *c {
                        continue;
                    }
                    let gx = PauliOp::from_bits(n, 1 << i, 0);
                    if symplectic_inner(&gx, p)? == 1 {
                        t.x_images[i] = (PauliOp::from_bits(n, 1 << i, zc_bits), false);
                    }
                    let gz = PauliOp::from_bits(n, 0, 1 << i);
                    if symplectic_inner(&gz, p)? == 1 {
                        t.z_images[i] = (PauliOp::from_bits(n, 0, (1 << i) | zc_bits), false);
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn from_circuit(n: usize, gens: &[CliffordGen]) -> Result<CliffordTableau> {
        let mut t = CliffordTableau::identity(n);
        for g in gens {
            t = CliffordTableau::from_gen(n, g)?.compose(&t)?;
        }
        Ok(t)
    }

    /// Tensor product of single-qubit tableaux, one per wire.
    pub fn tensor_single_qubit(factors: &[&CliffordTableau]) -> CliffordTableau {
        let n = factors.len();
        let embed = |wire: usize, (p, neg): (PauliOp, bool)| -> (PauliOp, bool) {
            (
                PauliOp::from_bits(n, p.x_bits() << wire, p.z_bits() << wire),
                neg,
            )
        };
        let x_images = factors
            .iter()
            .enumerate()
            .map(|(w, f)| {
                debug_assert_eq!(f.n_qubits, 1);
                embed(w, f.x_images[0])
            })
            .collect();
        let z_images = factors
            .iter()
            .enumerate()
            .map(|(w, f)| embed(w, f.z_images[0]))
            .collect();
        CliffordTableau {
            n_qubits: n,
            x_images,
            z_images,
        }
    }
}

/// One entry of the canonical single-qubit Clifford enumeration: the tableau
/// plus the H/S word generating it (identity has the empty word).
#[derive(Clone, Debug)]
pub struct SingleQubitClifford {
    pub tableau: CliffordTableau,
    pub word: Vec<CliffordGen>,
}

static SINGLE_QUBIT_TABLE: OnceLock<Vec<SingleQubitClifford>> = OnceLock::new();

/// The 24 single-qubit Cliffords in a fixed breadth-first order over words
/// in {H, S}, identity first. The order is the tie-break for solver lookups.
pub fn single_qubit_cliffords() -> &'static [SingleQubitClifford] {
    SINGLE_QUBIT_TABLE.get_or_init(|| {
        let mut found: Vec<SingleQubitClifford> = vec![SingleQubitClifford {
            tableau: CliffordTableau::identity(1),
            word: vec![],
        }];
        let mut frontier = vec![0usize];
        while found.len() < 24 {
            let mut next = Vec::new();
            for &idx in &frontier {
                for gen in [CliffordGen::H(0), CliffordGen::S(0)] {
                    let base = found[idx].clone();
                    let t = CliffordTableau::from_gen(1, &gen)
                        .unwrap()
                        .compose(&base.tableau)
                        .unwrap();
                    if !found.iter().any(|c| c.tableau == t) {
                        let mut word = base.word;
                        word.push(gen);
                        next.push(found.len());
                        found.push(SingleQubitClifford { tableau: t, word });
                    }
                }
            }
            assert!(!next.is_empty(), "single-qubit Clifford BFS stalled");
            frontier = next;
        }
        found
    })
}

/// Finds the canonical single-qubit Clifford C with C src C^dag = +dst.
/// Both Paulis must be identity or both non-identity.
pub fn solve_single_qubit_clifford(src: &PauliOp, dst: &PauliOp) -> Result<CliffordTableau> {
    solve_single_qubit_clifford_signed(src, dst, 1)
}

/// Signed variant: C src C^dag = sign * dst. Used when the compiled target
/// carries a conjugation sign.
pub fn solve_single_qubit_clifford_signed(
    src: &PauliOp,
    dst: &PauliOp,
    sign: Sign,
) -> Result<CliffordTableau> {
    if src.is_identity() != dst.is_identity() {
        return Err(CoreError::PatternMismatch {
            src: src.to_string(),
            dst: dst.to_string(),
        });
    }
    if src.is_identity() {
        if sign < 0 {
            return Err(CoreError::PatternMismatch {
                src: src.to_string(),
                dst: format!("-{dst}"),
            });
        }
        return Ok(CliffordTableau::identity(1));
    }
    for c in single_qubit_cliffords() {
        let (img, s) = c.tableau.conjugate(src)?;
        if img == *dst && s == sign {
            return Ok(c.tableau.clone());
        }
    }
    unreachable!("single-qubit Cliffords act transitively on signed non-identity Paulis")
}

/// A layer of independent single-qubit Cliffords, one per wire, referenced by
/// index into the canonical table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalLayer {
    indices: Vec<u8>,
}

impl LocalLayer {
    pub fn identity(n_qubits: usize) -> Self {
        LocalLayer {
            indices: vec![0; n_qubits],
        }
    }

    pub fn from_indices(indices: Vec<u8>) -> Self {
        debug_assert!(indices.iter().all(|&i| (i as usize) < 24));
        LocalLayer { indices }
    }

    pub fn n_qubits(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[u8] {
        &self.indices
    }

    pub fn is_identity(&self) -> bool {
        self.indices.iter().all(|&i| i == 0)
    }

    pub fn tableau(&self) -> CliffordTableau {
        let table = single_qubit_cliffords();
        let factors: Vec<&CliffordTableau> = self
            .indices
            .iter()
            .map(|&i| &table[i as usize].tableau)
            .collect();
        CliffordTableau::tensor_single_qubit(&factors)
    }

    /// Solves per wire for a layer mapping `src` to `dst` with the requested
    /// overall sign. The sign is absorbed on the lowest non-identity wire.
    pub fn solve(src: &PauliOp, dst: &PauliOp, sign: Sign) -> Result<LocalLayer> {
        let n = src.n_qubits();
        if dst.n_qubits() != n {
            return Err(CoreError::SizeMismatch(format!(
                "{} vs {} qubits",
                n,
                dst.n_qubits()
            )));
        }
        if pattern(src) != pattern(dst) {
            return Err(CoreError::PatternMismatch {
                src: src.to_string(),
                dst: dst.to_string(),
            });
        }
        if sign < 0 && src.is_identity() {
            return Err(CoreError::PatternMismatch {
                src: src.to_string(),
                dst: format!("-{dst}"),
            });
        }
        let flip_wire = if sign < 0 {
            (0..n).find(|&i| !src.factor(i).is_identity())
        } else {
            None
        };
        let table = single_qubit_cliffords();
        let mut indices = Vec::with_capacity(n);
        for i in 0..n {
            let want = if flip_wire == Some(i) { -1 } else { 1 };
            let t = solve_single_qubit_clifford_signed(&src.factor(i), &dst.factor(i), want)?;
            let idx = table
                .iter()
                .position(|c| c.tableau == t)
                .expect("solver returns canonical entries");
            indices.push(idx as u8);
        }
        Ok(LocalLayer { indices })
    }
}

/// A uniformly random tableau obtained from a seeded word of primitive gates.
/// Deterministic per RNG stream; used by tests and the verification suite.
pub fn random_tableau(n: usize, rng: &mut impl rand::Rng) -> CliffordTableau {
    let mut gens = Vec::new();
    for _ in 0..(8 * n + 12) {
        let q = rng.gen_range(0..n);
        match rng.gen_range(0..4) {
            0 => gens.push(CliffordGen::H(q)),
            1 => gens.push(CliffordGen::S(q)),
            2 if n > 1 => {
                let mut t = rng.gen_range(0..n);
                while t == q {
                    t = rng.gen_range(0..n);
                }
                gens.push(CliffordGen::Cnot(q, t));
            }
            _ => gens.push(CliffordGen::S(q)),
        }
    }
    CliffordTableau::from_circuit(n, &gens).expect("generated circuit is valid")
}
