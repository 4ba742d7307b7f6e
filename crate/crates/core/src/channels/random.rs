//! Seeded random noise models. The error mass epsilon is spread over the
//! non-trivial entries by a Dirichlet draw (normalized unit exponentials), so
//! two calls with the same seed produce identical tables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MeasureAndPrepareInstrument, UniformStochasticInstrument};
use crate::bits::Bits;
use crate::error::{CoreError, Result};
use crate::pauli::PauliOp;

/// Extra rate mass planted on one (a, b, P) entry, used to create detectable
/// measurement/preparation correlations.
#[derive(Clone, Debug)]
pub struct PlantSpec {
    pub a: Bits,
    pub b: Bits,
    pub p: PauliOp,
    pub mass: f64,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps == 0.0 || (eps > 0.0 && eps < 0.5) {
        Ok(())
    } else {
        Err(CoreError::InvalidNoiseScale(eps))
    }
}

fn dirichlet_spread(rng: &mut ChaCha8Rng, slots: usize, mass: f64) -> Vec<f64> {
    let draws: Vec<f64> = (0..slots)
        .map(|_| -f64::ln(1.0 - rng.gen::<f64>()))
        .collect();
    let total: f64 = draws.iter().sum();
    draws.iter().map(|d| d * mass / total).collect()
}

pub fn random_instrument(n: usize, m: usize, eps: f64, seed: u64) -> Result<UniformStochasticInstrument> {
    random_instrument_planted(n, m, eps, seed, &[])
}

pub fn random_instrument_planted(
    n: usize,
    m: usize,
    eps: f64,
    seed: u64,
    plants: &[PlantSpec],
) -> Result<UniformStochasticInstrument> {
    check_eps(eps)?;
    let planted_mass: f64 = plants.iter().map(|p| p.mass).sum();
    if planted_mass < 0.0 || eps + planted_mass >= 1.0 {
        return Err(CoreError::InvalidConfig(format!(
            "planted mass {planted_mass} plus eps {eps} leaves no weight for the identity"
        )));
    }
    let len = UniformStochasticInstrument::table_len(n, m);
    let mut rates = vec![0.0; len];
    rates[0] = 1.0 - eps - planted_mass;
    if eps > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (i, v) in dirichlet_spread(&mut rng, len - 1, eps).into_iter().enumerate() {
            rates[i + 1] = v;
        }
    }
    let probe = UniformStochasticInstrument::ideal(n, m);
    for plant in plants {
        let idx = probe.index(&plant.a, &plant.b, &plant.p);
        if idx == 0 {
            return Err(CoreError::InvalidConfig(
                "cannot plant mass on the trivial (0, 0, I) entry".into(),
            ));
        }
        rates[idx] += plant.mass;
    }
    UniformStochasticInstrument::new(n, m, rates)
}

pub fn random_measure_and_prepare(
    n: usize,
    m: usize,
    eps: f64,
    seed: u64,
) -> Result<MeasureAndPrepareInstrument> {
    check_eps(eps)?;
    let len = MeasureAndPrepareInstrument::half_table_len(n, m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut half = |rng: &mut ChaCha8Rng| {
        let mut t = vec![0.0; len];
        t[0] = 1.0 - eps;
        if eps > 0.0 {
            for (i, v) in dirichlet_spread(rng, len - 1, eps).into_iter().enumerate() {
                t[i + 1] = v;
            }
        }
        t
    };
    let q = half(&mut rng);
    let r = half(&mut rng);
    MeasureAndPrepareInstrument::new(n, m, q, r)
}

/// A random general instrument built from a Haar-ish random isometry: the
/// stacked Kraus blocks are orthonormalized columns of a Gaussian matrix, so
/// trace preservation holds exactly by construction.
pub fn random_general_instrument(
    n: usize,
    m: usize,
    kraus_per_outcome: usize,
    seed: u64,
) -> super::GeneralInstrument {
    use ndarray::Array2;
    use num_complex::Complex64;

    let dim = 1usize << (n + m);
    let blocks = (1usize << n) * kraus_per_outcome;
    let rows = dim * blocks;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = || {
        let u: f64 = 1.0 - rng.gen::<f64>();
        let v: f64 = rng.gen();
        let r = (-2.0 * u.ln()).sqrt();
        Complex64::new(
            r * (2.0 * std::f64::consts::PI * v).cos(),
            r * (2.0 * std::f64::consts::PI * v).sin(),
        )
    };
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..rows).map(|_| gauss()).collect())
        .collect();
    // Gram-Schmidt over columns.
    for j in 0..dim {
        for i in 0..j {
            let proj: Complex64 = cols[i]
                .iter()
                .zip(cols[j].iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            let prev = cols[i].clone();
            for (cj, pi) in cols[j].iter_mut().zip(prev.iter()) {
                *cj -= proj * pi;
            }
        }
        let norm: f64 = cols[j].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for v in cols[j].iter_mut() {
            *v /= norm;
        }
    }
    let mut kraus: Vec<Vec<Array2<Complex64>>> = vec![Vec::new(); 1 << n];
    for block in 0..blocks {
        let mut op = Array2::zeros((dim, dim));
        for r in 0..dim {
            for (c, col) in cols.iter().enumerate() {
                op[(r, c)] = col[block * dim + r];
            }
        }
        kraus[block % (1 << n)].push(op);
    }
    super::GeneralInstrument::new(n, m, kraus).expect("isometry columns are orthonormal")
}
