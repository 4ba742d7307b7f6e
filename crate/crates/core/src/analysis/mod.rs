//! High-level applications: full learnable-parameter characterization,
//! measure-and-prepare independence testing, and error-rate reconstruction.

mod characterize;
mod combos;
mod independence;
mod reconstruct;

pub use characterize::{characterize, cycle_key, true_geo_mean, CharacterizationResult, CycleQuantity};
pub use combos::{learnable_rate_combinations, RateCombination};
pub use independence::{independence_test, IndependenceRow};
pub use reconstruct::{reconstruct_error_rate, RateEstimate};

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{CoreError, Result};
use crate::pauli::PauliOp;

/// One correlation c^Q_{x1,x2,y1,y2} = log l_{x1,y1} + log l_{x2,y2}
/// - log l_{x2,y1} - log l_{x1,y2}. Antisymmetry under swapping x1/x2 or
/// y1/y2 reduces the queries to x1 < x2 and y1 < y2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CorrelationQuery {
    pub q: PauliOp,
    pub x1: Bits,
    pub x2: Bits,
    pub y1: Bits,
    pub y2: Bits,
}

impl CorrelationQuery {
    pub fn new(q: PauliOp, x1: Bits, x2: Bits, y1: Bits, y2: Bits) -> Result<Self> {
        if x1 >= x2 || y1 >= y2 {
            return Err(CoreError::InvalidConfig(format!(
                "correlation query needs x1 < x2 and y1 < y2, got ({x1}, {x2}), ({y1}, {y2})"
            )));
        }
        Ok(CorrelationQuery { q, x1, x2, y1, y2 })
    }

    /// The canonical queries probing the (0, 1) index pair on one ancilla,
    /// one per system Pauli.
    pub fn canonical_single_ancilla(m: usize) -> Vec<CorrelationQuery> {
        let zero = Bits::zero(1);
        let one = Bits::new(1, 1);
        PauliOp::all(m)
            .map(|q| CorrelationQuery {
                q,
                x1: zero,
                x2: one,
                y1: zero,
                y2: one,
            })
            .collect()
    }

    pub fn key(&self) -> String {
        format!("c^{}_{{{},{},{},{}}}", self.q, self.x1, self.x2, self.y1, self.y2)
    }
}
