//! Rough analytic variance of the geometric-mean fidelity estimate.

/// Var[exp(log(s/t) / l)] for a cycle of total length `l_total` run with `n`
/// total shots split evenly between the main and auxiliary experiments,
/// where `lambda0` collects the SPAM factors and `lambda_geo` is the
/// geometric-mean fidelity:
///
///   2 (1 - lambda0^2) / (l^2 N / 2) + lambda0^2 (1 - lambda_geo^2) / (l N / 2).
pub fn predict_variance(l_total: usize, n_shots: usize, lambda0: f64, lambda_geo: f64) -> f64 {
    let l = l_total as f64;
    let n = n_shots as f64;
    2.0 * (1.0 - lambda0 * lambda0) / (l * l * n / 2.0)
        + lambda0 * lambda0 * (1.0 - lambda_geo * lambda_geo) / (l * n / 2.0)
}
