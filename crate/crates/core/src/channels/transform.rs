//! Fast transforms between Pauli error rates and Pauli fidelities.
//!
//! The kernel (-1)^{a.x + b.y + <P,Q>} factorizes into Walsh-Hadamard
//! transforms over every index bit followed by a swap of the X/Z halves of
//! the Pauli sub-index, since <P,Q> = x_P.z_Q + z_P.x_Q.

use super::{FidelityTable, UniformStochasticInstrument, NEGATIVE_RATE_TOL};
use crate::error::{CoreError, Result};

/// In-place Walsh-Hadamard transform, unnormalized: a'[k] = sum_j (-1)^{j.k} a[j].
pub(crate) fn fwht_in_place(a: &mut [f64]) {
    debug_assert!(a.len().is_power_of_two());
    let n = a.len();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(h * 2) {
            for j in i..i + h {
                let x = a[j];
                let y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
        }
        h *= 2;
    }
}

/// Swaps the x and z halves of the low 2m bits of every index.
pub(crate) fn swap_pauli_halves(a: &mut [f64], m: usize) {
    let block = 1usize << (2 * m);
    let mask = (1usize << m) - 1;
    for chunk in a.chunks_mut(block) {
        for lo in 0..block {
            let swapped = ((lo & mask) << m) | (lo >> m);
            if lo < swapped {
                chunk.swap(lo, swapped);
            }
        }
    }
}

/// Symplectic character transform over the Pauli index only (n = 0 case).
pub(crate) fn symplectic_fwht(a: &mut [f64], m: usize) {
    debug_assert_eq!(a.len(), 1 << (2 * m));
    fwht_in_place(a);
    swap_pauli_halves(a, m);
}

/// lambda_{x,y}^Q = sum_{a,b,P} (-1)^{a.x + b.y + <P,Q>} p_{a,b}^P.
pub fn fidelities_from_rates(u: &UniformStochasticInstrument) -> FidelityTable {
    let mut v = u.rates().to_vec();
    fwht_in_place(&mut v);
    swap_pauli_halves(&mut v, u.m());
    FidelityTable::from_raw(u.n(), u.m(), v)
}

/// p_{a,b}^P = 4^{-(n+m)} sum_{x,y,Q} (-1)^{a.x + b.y + <P,Q>} lambda_{x,y}^Q.
///
/// Reports negative rates beyond the physicality tolerance instead of
/// clamping them.
pub fn rates_from_fidelities(f: &FidelityTable) -> Result<UniformStochasticInstrument> {
    if (f.values()[0] - 1.0).abs() > 1e-9 {
        return Err(CoreError::NonPhysical(format!(
            "lambda_(0,0)^I = {}, expected 1",
            f.values()[0]
        )));
    }
    let mut v = f.values().to_vec();
    let scale = 1.0 / (1usize << (2 * (f.n() + f.m()))) as f64;
    fwht_in_place(&mut v);
    swap_pauli_halves(&mut v, f.m());
    for r in v.iter_mut() {
        *r *= scale;
    }
    if let Some(r) = v.iter().find(|r| **r < -NEGATIVE_RATE_TOL) {
        return Err(CoreError::NonPhysical(format!(
            "fidelity table yields negative rate {r}"
        )));
    }
    UniformStochasticInstrument::new(f.n(), f.m(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::Bits;
    use crate::channels::random_instrument;
    use crate::pauli::{symplectic_inner, PauliOp};

    /// Direct quadruple-sum oracle for the forward transform.
    fn naive_fidelities(u: &UniformStochasticInstrument) -> Vec<f64> {
        let (n, m) = (u.n(), u.m());
        let mut out = vec![0.0; UniformStochasticInstrument::table_len(n, m)];
        for x in Bits::all(n) {
            for y in Bits::all(n) {
                for q in PauliOp::all(m) {
                    let mut acc = 0.0;
                    for a in Bits::all(n) {
                        for b in Bits::all(n) {
                            for p in PauliOp::all(m) {
                                let exp = (a.dot(&x) as u8
                                    + b.dot(&y) as u8
                                    + symplectic_inner(&p, &q).unwrap())
                                    & 1;
                                let s = if exp == 1 { -1.0 } else { 1.0 };
                                acc += s * u.rate(&a, &b, &p);
                            }
                        }
                    }
                    out[(((x.value() << n) | y.value()) << (2 * m)) | q.index()] = acc;
                }
            }
        }
        out
    }

    #[test]
    fn ideal_instrument_has_unit_fidelities() {
        let u = UniformStochasticInstrument::ideal(1, 2);
        let f = fidelities_from_rates(&u);
        assert!(f.values().iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn fast_transform_matches_naive_oracle() {
        for (n, m, seed) in [(1, 1, 7u64), (1, 2, 8), (2, 1, 9)] {
            let u = random_instrument(n, m, 0.25, seed).unwrap();
            let fast = fidelities_from_rates(&u);
            let naive = naive_fidelities(&u);
            for (a, b) in fast.values().iter().zip(naive.iter()) {
                assert!((a - b).abs() < 1e-13);
            }
            assert!((fast.values()[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let u = random_instrument(1, 2, 0.3, 42).unwrap();
        let back = rates_from_fidelities(&fidelities_from_rates(&u)).unwrap();
        for (a, b) in u.rates().iter().zip(back.rates().iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn all_ones_table_is_ideal() {
        let len = UniformStochasticInstrument::table_len(1, 1);
        let f = FidelityTable::new(1, 1, vec![1.0; len]).unwrap();
        let u = rates_from_fidelities(&f).unwrap();
        assert!((u.rates()[0] - 1.0).abs() < 1e-14);
        assert!(u.rates()[1..].iter().all(|r| r.abs() < 1e-14));
    }

    #[test]
    fn non_physical_table_is_reported() {
        let len = UniformStochasticInstrument::table_len(1, 1);
        let mut vals = vec![1.0; len];
        // A wildly inconsistent table produces rates far below -1e-9.
        vals[3] = -1.0;
        vals[7] = 1.0;
        vals[5] = -0.5;
        let f = FidelityTable::from_raw(1, 1, vals);
        assert!(rates_from_fidelities(&f).is_err());
    }
}
