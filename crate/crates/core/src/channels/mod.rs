//! Noise-model data structures for mid-circuit measurements: Pauli channels,
//! uniform stochastic instruments, measure-and-prepare instruments and general
//! (Kraus-form) instruments, with exact physical <-> dual transforms.

mod apply;
mod gauge;
mod io;
mod random;
mod transform;
mod twirl;

pub use apply::{apply_instrument_dual, apply_instrument_physical, DualChannel};
pub use gauge::{gauge_transform, gauge_transform_shrinking};
pub use io::{instrument_from_json, instrument_to_json, fidelity_table_to_keyed, InstrumentData, InstrumentFile};
pub use random::{
    random_general_instrument, random_instrument, random_instrument_planted,
    random_measure_and_prepare, PlantSpec,
};
pub use transform::{fidelities_from_rates, rates_from_fidelities};
pub use twirl::{compiled_instrument, twirl_average};

use ndarray::Array2;
use num_complex::Complex64;

use crate::bits::Bits;
use crate::error::{CoreError, Result};
use crate::pauli::PauliOp;
use crate::unitary::{dagger, identity, max_abs_diff, CMat};

pub const SUM_TOL: f64 = 1e-12;
pub const NEGATIVE_RATE_TOL: f64 = 1e-9;

/// A Pauli channel on m qubits, stored as the dense table of error rates p^P.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliChannel {
    m: usize,
    rates: Vec<f64>,
}

impl PauliChannel {
    pub fn new(m: usize, rates: Vec<f64>) -> Result<Self> {
        if rates.len() != 1 << (2 * m) {
            return Err(CoreError::SizeMismatch(format!(
                "expected {} rates, got {}",
                1 << (2 * m),
                rates.len()
            )));
        }
        let ch = PauliChannel { m, rates };
        ch.validate()?;
        Ok(ch)
    }

    pub fn identity_channel(m: usize) -> Self {
        let mut rates = vec![0.0; 1 << (2 * m)];
        rates[0] = 1.0;
        PauliChannel { m, rates }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rate(&self, p: &PauliOp) -> f64 {
        self.rates[p.index()]
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Fidelities lambda^Q = sum_P (-1)^{<P,Q>} p^P.
    pub fn fidelities(&self) -> Vec<f64> {
        let mut v = self.rates.clone();
        transform::symplectic_fwht(&mut v, self.m);
        v
    }

    pub fn validate(&self) -> Result<()> {
        let total: f64 = self.rates.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(CoreError::NonPhysical(format!(
                "Pauli channel rates sum to {total}, expected 1"
            )));
        }
        if let Some(r) = self.rates.iter().find(|r| **r < -NEGATIVE_RATE_TOL) {
            return Err(CoreError::NonPhysical(format!("negative rate {r}")));
        }
        Ok(())
    }
}

/// Dense table of Pauli error rates p_{a,b}^P for an n-ancilla, m-system MCM.
///
/// Flat layout: index(a, b, P) = ((a << n | b) << 2m) | P.index().
#[derive(Clone, Debug, PartialEq)]
pub struct UniformStochasticInstrument {
    n: usize,
    m: usize,
    rates: Vec<f64>,
}

impl UniformStochasticInstrument {
    pub fn table_len(n: usize, m: usize) -> usize {
        1usize << (2 * n + 2 * m)
    }

    pub fn new(n: usize, m: usize, rates: Vec<f64>) -> Result<Self> {
        if rates.len() != Self::table_len(n, m) {
            return Err(CoreError::SizeMismatch(format!(
                "expected {} rates, got {}",
                Self::table_len(n, m),
                rates.len()
            )));
        }
        let u = UniformStochasticInstrument { n, m, rates };
        u.validate(NEGATIVE_RATE_TOL)?;
        Ok(u)
    }

    pub fn ideal(n: usize, m: usize) -> Self {
        let mut rates = vec![0.0; Self::table_len(n, m)];
        rates[0] = 1.0;
        UniformStochasticInstrument { n, m, rates }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn index(&self, a: &Bits, b: &Bits, p: &PauliOp) -> usize {
        debug_assert_eq!(a.len(), self.n);
        debug_assert_eq!(b.len(), self.n);
        debug_assert_eq!(p.n_qubits(), self.m);
        (((a.value() << self.n) | b.value()) << (2 * self.m)) | p.index()
    }

    pub fn decode_index(&self, idx: usize) -> (Bits, Bits, PauliOp) {
        let p = PauliOp::from_index(self.m, idx & ((1 << (2 * self.m)) - 1));
        let ab = idx >> (2 * self.m);
        let b = Bits::new(self.n, ab & ((1 << self.n) - 1));
        let a = Bits::new(self.n, ab >> self.n);
        (a, b, p)
    }

    pub fn rate(&self, a: &Bits, b: &Bits, p: &PauliOp) -> f64 {
        self.rates[self.index(a, b, p)]
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn rates_mut(&mut self) -> &mut [f64] {
        &mut self.rates
    }

    pub fn validate(&self, neg_tol: f64) -> Result<()> {
        let total: f64 = self.rates.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(CoreError::NonPhysical(format!(
                "instrument rates sum to {total}, expected 1"
            )));
        }
        if let Some(r) = self.rates.iter().find(|r| **r < -neg_tol) {
            return Err(CoreError::NonPhysical(format!("negative rate {r}")));
        }
        Ok(())
    }
}

/// Pauli fidelities lambda_{x,y}^Q, indexed like the rate table.
#[derive(Clone, Debug, PartialEq)]
pub struct FidelityTable {
    n: usize,
    m: usize,
    values: Vec<f64>,
}

impl FidelityTable {
    pub fn new(n: usize, m: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != UniformStochasticInstrument::table_len(n, m) {
            return Err(CoreError::SizeMismatch(format!(
                "expected {} fidelities, got {}",
                UniformStochasticInstrument::table_len(n, m),
                values.len()
            )));
        }
        let f = FidelityTable { n, m, values };
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn from_raw(n: usize, m: usize, values: Vec<f64>) -> Self {
        FidelityTable { n, m, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn index(&self, x: &Bits, y: &Bits, q: &PauliOp) -> usize {
        (((x.value() << self.n) | y.value()) << (2 * self.m)) | q.index()
    }

    pub fn decode_index(&self, idx: usize) -> (Bits, Bits, PauliOp) {
        let q = PauliOp::from_index(self.m, idx & ((1 << (2 * self.m)) - 1));
        let xy = idx >> (2 * self.m);
        let y = Bits::new(self.n, xy & ((1 << self.n) - 1));
        let x = Bits::new(self.n, xy >> self.n);
        (x, y, q)
    }

    pub fn value(&self, x: &Bits, y: &Bits, q: &PauliOp) -> f64 {
        self.values[self.index(x, y, q)]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn validate(&self) -> Result<()> {
        if (self.values[0] - 1.0).abs() > SUM_TOL {
            return Err(CoreError::NonPhysical(format!(
                "lambda_(0,0)^I = {}, expected 1",
                self.values[0]
            )));
        }
        if let Some(v) = self.values.iter().find(|v| v.abs() > 1.0 + 1e-9) {
            return Err(CoreError::NonPhysical(format!("fidelity {v} outside [-1, 1]")));
        }
        Ok(())
    }
}

/// Measurement-noise table q_a^P and preparation-noise table r_b^P; the
/// induced instrument has rates p_{a,b}^P = sum_{P1 P2 = P} q_a^{P1} r_b^{P2}.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureAndPrepareInstrument {
    n: usize,
    m: usize,
    measure_rates: Vec<f64>,
    prepare_rates: Vec<f64>,
}

impl MeasureAndPrepareInstrument {
    pub fn half_table_len(n: usize, m: usize) -> usize {
        1usize << (n + 2 * m)
    }

    pub fn new(n: usize, m: usize, measure_rates: Vec<f64>, prepare_rates: Vec<f64>) -> Result<Self> {
        let len = Self::half_table_len(n, m);
        if measure_rates.len() != len || prepare_rates.len() != len {
            return Err(CoreError::SizeMismatch(format!(
                "expected {len} entries per table, got {} and {}",
                measure_rates.len(),
                prepare_rates.len()
            )));
        }
        for (name, t) in [("measure", &measure_rates), ("prepare", &prepare_rates)] {
            let total: f64 = t.iter().sum();
            if (total - 1.0).abs() > SUM_TOL {
                return Err(CoreError::NonPhysical(format!(
                    "{name} rates sum to {total}, expected 1"
                )));
            }
            if let Some(r) = t.iter().find(|r| **r < -NEGATIVE_RATE_TOL) {
                return Err(CoreError::NonPhysical(format!("negative {name} rate {r}")));
            }
        }
        Ok(MeasureAndPrepareInstrument {
            n,
            m,
            measure_rates,
            prepare_rates,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn half_index(&self, a: &Bits, p: &PauliOp) -> usize {
        (a.value() << (2 * self.m)) | p.index()
    }

    pub fn measure_rate(&self, a: &Bits, p: &PauliOp) -> f64 {
        self.measure_rates[self.half_index(a, p)]
    }

    pub fn prepare_rate(&self, b: &Bits, p: &PauliOp) -> f64 {
        self.prepare_rates[self.half_index(b, p)]
    }

    pub fn measure_rates(&self) -> &[f64] {
        &self.measure_rates
    }

    pub fn prepare_rates(&self) -> &[f64] {
        &self.prepare_rates
    }

    /// Convolution over P1 P2 = P of the two halves.
    pub fn induced_usi(&self) -> UniformStochasticInstrument {
        let (n, m) = (self.n, self.m);
        let mut rates = vec![0.0; UniformStochasticInstrument::table_len(n, m)];
        let np = 1usize << (2 * m);
        for a in 0..1usize << n {
            for b in 0..1usize << n {
                for p1 in 0..np {
                    let qa = self.measure_rates[(a << (2 * m)) | p1];
                    if qa == 0.0 {
                        continue;
                    }
                    for p2 in 0..np {
                        let rb = self.prepare_rates[(b << (2 * m)) | p2];
                        let p = p1 ^ p2;
                        rates[(((a << n) | b) << (2 * m)) | p] += qa * rb;
                    }
                }
            }
        }
        UniformStochasticInstrument { n, m, rates }
    }

    /// Factorized fidelities (zeta_x^Q, xi_y^Q), each a half-table.
    pub fn factor_fidelities(&self) -> (Vec<f64>, Vec<f64>) {
        let mut zeta = self.measure_rates.clone();
        let mut xi = self.prepare_rates.clone();
        transform::fwht_in_place(&mut zeta);
        transform::swap_pauli_halves(&mut zeta, self.m);
        transform::fwht_in_place(&mut xi);
        transform::swap_pauli_halves(&mut xi, self.m);
        (zeta, xi)
    }
}

/// A general quantum instrument: one completely positive map per outcome,
/// each given by a list of Kraus operators on the 2^{n+m}-dimensional space.
#[derive(Clone, Debug)]
pub struct GeneralInstrument {
    n: usize,
    m: usize,
    kraus: Vec<Vec<CMat>>,
}

impl GeneralInstrument {
    pub fn new(n: usize, m: usize, kraus: Vec<Vec<CMat>>) -> Result<Self> {
        if kraus.len() != 1 << n {
            return Err(CoreError::SizeMismatch(format!(
                "expected {} outcomes, got {}",
                1 << n,
                kraus.len()
            )));
        }
        let dim = 1usize << (n + m);
        let mut total: CMat = Array2::zeros((dim, dim));
        for maps in &kraus {
            for k in maps {
                if k.dim() != (dim, dim) {
                    return Err(CoreError::SizeMismatch(format!(
                        "Kraus operator of shape {:?}, expected {dim}x{dim}",
                        k.dim()
                    )));
                }
                total = total + dagger(k).dot(k);
            }
        }
        if max_abs_diff(&total, &identity(dim)) > 1e-10 {
            return Err(CoreError::NonPhysical(
                "instrument is not trace preserving".into(),
            ));
        }
        Ok(GeneralInstrument { n, m, kraus })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kraus(&self, outcome: usize) -> &[CMat] {
        &self.kraus[outcome]
    }

    /// Applies the map for one outcome: rho -> sum_j K_j rho K_j^dag.
    pub fn apply(&self, outcome: usize, rho: &CMat) -> CMat {
        let dim = rho.dim().0;
        let mut out: CMat = Array2::zeros((dim, dim));
        for k in &self.kraus[outcome] {
            out = out + k.dot(rho).dot(&dagger(k));
        }
        out
    }

    /// The ideal projective measurement of the ancilla register (G absorbed
    /// elsewhere): one Kraus operator I_m (x) |k><k| per outcome.
    pub fn ideal_projective(n: usize, m: usize) -> Self {
        let dim = 1usize << (n + m);
        let kraus = (0..1usize << n)
            .map(|k| {
                let mut op: CMat = Array2::zeros((dim, dim));
                for s in 0..1usize << m {
                    let j = (k << m) | s;
                    op[(j, j)] = Complex64::new(1.0, 0.0);
                }
                vec![op]
            })
            .collect();
        GeneralInstrument { n, m, kraus }
    }
}
