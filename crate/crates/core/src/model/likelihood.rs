use crate::error::{Error, Result};
use crate::model::graph::SparseGraph;
use crate::model::params::ModelParams;

fn check_domain(params: &ModelParams) -> Result<()> {
    params.validate()?;
    if !(params.s > 0.0 && params.s < 1.0) {
        return Err(Error::Domain(format!("likelihood weight requires 0 < s < 1, got {}", params.s)));
    }
    if params.lambda <= 0.0 {
        return Err(Error::Domain("likelihood weight requires lambda > 0".into()));
    }
    if params.n as f64 <= params.lambda * (2.0 - params.s) {
        return Err(Error::Domain(format!(
            "likelihood weight requires n > lambda (2 - s) = {}",
            params.lambda * (2.0 - params.s)
        )));
    }
    Ok(())
}

/// Log of the per-common-edge factor `s (n - lambda (2-s)) / (lambda (1-s)^2)`.
pub fn log_edge_factor(params: &ModelParams) -> Result<f64> {
    check_domain(params)?;
    let (n, l, s) = (params.n as f64, params.lambda, params.s);
    Ok((s * (n - l * (2.0 - s)) / (l * (1.0 - s) * (1.0 - s))).ln())
}

/// The part of the joint log-likelihood of `(g, h)` that depends on their
/// common edges: `e(g ∧ h) * log_edge_factor`.
pub fn log_joint_weight(g: &SparseGraph, h: &SparseGraph, params: &ModelParams) -> Result<f64> {
    Error::check_sizes(g.n(), params.n)?;
    let common = g.common_edge_count(h)?;
    Ok(common as f64 * log_edge_factor(params)?)
}

/// Full joint log-probability `log P(G = g, G' = h)` under the model.
pub fn log_joint_probability(g: &SparseGraph, h: &SparseGraph, params: &ModelParams) -> Result<f64> {
    check_domain(params)?;
    Error::check_sizes(g.n(), params.n)?;
    let common = g.common_edge_count(h)? as f64;
    let union = g.edge_count() as f64 + h.edge_count() as f64 - common;
    let sym = union - common;
    let n = params.n as f64;
    let all_pairs = n * (n - 1.0) / 2.0;
    Ok(common * params.p_two_colored().ln()
        + sym * params.p_mono().ln()
        + (all_pairs - union) * (-params.p_any()).ln_1p())
}
