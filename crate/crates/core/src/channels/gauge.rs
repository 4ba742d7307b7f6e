//! Gauge transformations: the similarity transform by a pattern-diagonal map
//! that leaves every experiment's outcome distribution invariant while
//! shifting log-fidelities by coboundary functionals.

use super::{rates_from_fidelities, FidelityTable};
use crate::error::{CoreError, Result};
use crate::graph::chain::ZeroChain;
use crate::model::NoiseModel;
use crate::pauli::{pattern, PauliOp};
use crate::sim::spam::SpamModel;

/// Applies the gauge transform induced by the 0-chain `nu` and scale `eta`:
///
///   log lambda_{x,y}^Q += <delta(nu), e_{x,y}^Q> log eta,
///   terminating fidelities pick up eta^{-nu_t},
///   the prepared state's Pauli components pick up eta^{+nu_t}.
///
/// `nu` must have zero coefficient on the all-zero pattern; `eta` must be
/// positive and close enough to 1 that the transformed rate table stays
/// physical, otherwise an error asks the caller to shrink |log eta|.
pub fn gauge_transform(model: &NoiseModel, nu: &ZeroChain, eta: f64) -> Result<NoiseModel> {
    if eta <= 0.0 {
        return Err(CoreError::InvalidConfig(format!(
            "gauge scale eta = {eta} must be positive"
        )));
    }
    if nu.coefficient(0) != 0.0 {
        return Err(CoreError::InvalidConfig(
            "gauge 0-chain must have zero coefficient on the all-zero pattern".into(),
        ));
    }
    let (n, m) = (model.n(), model.m());
    let fid = model.fidelities();
    let mut values = fid.values().to_vec();
    for (idx, v) in values.iter_mut().enumerate() {
        let (x, y, q) = fid.decode_index(idx);
        let ket = PauliOp::q_otimes_zx(&q, &y);
        let bra = PauliOp::q_otimes_zx(&q, &x);
        let (bra_img, _) = model.gate().dagger_conjugate(&bra)?;
        let dst = pattern(&ket).value();
        let src = pattern(&bra_img).value();
        *v *= eta.powf(nu.coefficient(dst) - nu.coefficient(src));
    }
    let usi = rates_from_fidelities(&FidelityTable::from_raw(n, m, values))?;

    let spam = model.spam();
    let term = spam
        .term_fidelities()
        .iter()
        .enumerate()
        .map(|(t, lam)| lam * eta.powf(-nu.coefficient(t)))
        .collect();
    let mut prep = spam.prep_state().clone();
    prep.scale_by_pattern(|t| eta.powf(nu.coefficient(t)));
    let spam = SpamModel::from_raw(prep, term);

    NoiseModel::new(model.gate().clone(), usi, spam)
}

/// Halves the 0-chain until the transformed model stays physical at the given
/// eta, returning the transformed model with the chain actually used. Errors
/// only if even the smallest scaling fails.
pub fn gauge_transform_shrinking(
    model: &NoiseModel,
    nu: &ZeroChain,
    eta: f64,
    max_halvings: u32,
) -> Result<(NoiseModel, ZeroChain)> {
    let mut scaled = nu.clone();
    for _ in 0..=max_halvings {
        match gauge_transform(model, &scaled, eta) {
            Ok(t) => return Ok((t, scaled)),
            Err(CoreError::NonPhysical(_)) => {
                scaled = scaled.iter().map(|(v, c)| (v, c / 2.0)).collect();
            }
            Err(e) => return Err(e),
        }
    }
    Err(CoreError::NonPhysical(format!(
        "gauge chain still non-physical after {max_halvings} halvings at eta = {eta}"
    )))
}
