//! Formal linear combinations of vertices (0-chains) and edges (1-chains) of
//! a pattern transfer graph, over floats and, for boundary-zero proofs, over
//! exact integers with a fixed power-of-two denominator.

use std::collections::BTreeMap;

/// Sparse real combination of vertices, keyed by weight-pattern value.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ZeroChain {
    coeffs: BTreeMap<usize, f64>,
}

impl ZeroChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(v: usize) -> Self {
        let mut c = ZeroChain::new();
        c.add(v, 1.0);
        c
    }

    pub fn coefficient(&self, v: usize) -> f64 {
        *self.coeffs.get(&v).unwrap_or(&0.0)
    }

    pub fn add(&mut self, v: usize, c: f64) {
        let entry = self.coeffs.entry(v).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.coeffs.remove(&v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.values().all(|c| c.abs() <= tol)
    }
}

impl FromIterator<(usize, f64)> for ZeroChain {
    fn from_iter<T: IntoIterator<Item = (usize, f64)>>(iter: T) -> Self {
        let mut c = ZeroChain::new();
        for (v, w) in iter {
            c.add(v, w);
        }
        c
    }
}

/// Sparse real combination of edges, keyed by flat edge index. The edge index
/// layout matches the fidelity table, so evaluating a chain on log-fidelities
/// is a sparse dot product.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OneChain {
    coeffs: BTreeMap<usize, f64>,
}

impl OneChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn edge(e: usize) -> Self {
        let mut c = OneChain::new();
        c.add(e, 1.0);
        c
    }

    pub fn coefficient(&self, e: usize) -> f64 {
        *self.coeffs.get(&e).unwrap_or(&0.0)
    }

    pub fn add(&mut self, e: usize, c: f64) {
        let entry = self.coeffs.entry(e).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn add_scaled(&mut self, other: &OneChain, scale: f64) {
        for (e, c) in other.iter() {
            self.add(e, c * scale);
        }
    }

    pub fn scale(&mut self, s: f64) {
        if s == 0.0 {
            self.coeffs.clear();
        } else {
            for c in self.coeffs.values_mut() {
                *c *= s;
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Edge-space inner product <sum e_i c_i, sum e_i c_i'> = sum c_i c_i'.
    pub fn inner(&self, other: &OneChain) -> f64 {
        self.coeffs
            .iter()
            .map(|(e, c)| c * other.coefficient(*e))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.values().all(|c| c.abs() <= tol)
    }

    /// Evaluates the chain as a functional on a dense per-edge value vector
    /// (log-fidelities in practice).
    pub fn evaluate(&self, values: &[f64]) -> f64 {
        self.coeffs.iter().map(|(e, c)| c * values[*e]).sum()
    }
}

impl FromIterator<(usize, f64)> for OneChain {
    fn from_iter<T: IntoIterator<Item = (usize, f64)>>(iter: T) -> Self {
        let mut c = OneChain::new();
        for (e, w) in iter {
            c.add(e, w);
        }
        c
    }
}

/// Integer-coefficient 1-chain scaled by a common denominator; boundary
/// computations on it are exact.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntOneChain {
    pub denom: i64,
    coeffs: BTreeMap<usize, i64>,
}

impl IntOneChain {
    pub fn new(denom: i64) -> Self {
        IntOneChain {
            denom,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, e: usize, c: i64) {
        let entry = self.coeffs.entry(e).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn coefficient(&self, e: usize) -> i64 {
        *self.coeffs.get(&e).unwrap_or(&0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn to_float(&self) -> OneChain {
        self.coeffs
            .iter()
            .map(|(e, c)| (*e, *c as f64 / self.denom as f64))
            .collect()
    }
}

/// Integer 0-chain used for exact boundary checks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntZeroChain {
    coeffs: BTreeMap<usize, i64>,
}

impl IntZeroChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: usize, c: i64) {
        let entry = self.coeffs.entry(v).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}
