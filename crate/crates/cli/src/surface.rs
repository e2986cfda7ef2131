//! Bound evaluation over a two-parameter grid for one measured state.

use qmono_core::inequalities::{evaluate_bounds, max_admissible_k, max_admissible_k_chain, StateValues};
use qmono_core::{BoundParams, BoundReport, ChainSpec, Mode};
use rayon::prelude::*;

use crate::error::Result;
use crate::spec::KPolicy;

#[derive(Clone, Debug)]
pub struct SurfacePoint {
    pub x1: f64,
    pub x2: f64,
    pub report: BoundReport<f64>,
}

/// `(α, γ)` in monogamy mode, `(β, δ)` in polygamy mode.
pub fn params_for(mode: Mode, x1: f64, x2: f64, k: f64) -> Result<BoundParams<f64>> {
    Ok(match mode {
        Mode::Monogamy => BoundParams::monogamy(x1, x2, k)?,
        Mode::Polygamy => BoundParams::polygamy(x1, x2, k)?,
    })
}

/// The largest `k` for which some branch (or chain split) holds; 1 when no
/// branch can hold and `+∞` when the dominated value vanishes.
pub fn auto_k(values: &StateValues<f64>, base: f64) -> Result<f64> {
    let pv = values.pair_values();
    if pv.len() == 2 {
        let (small, large) = if pv[0] <= pv[1] { (pv[0], pv[1]) } else { (pv[1], pv[0]) };
        return Ok(max_admissible_k(small, large, base)?.usable().unwrap_or(1.0));
    }
    let rv = values.residual_values();
    let partners = values.partners();
    let mut best: Option<f64> = None;
    for m in 1..=partners.len().saturating_sub(2) {
        let spec = ChainSpec::new(&partners, m)?;
        if let Some(k) = max_admissible_k_chain(&spec, &pv, &rv, base)?.usable() {
            best = Some(best.map_or(k, |b: f64| b.max(k)));
        }
    }
    Ok(best.unwrap_or(1.0))
}

pub fn resolve_k(policy: KPolicy, values: &StateValues<f64>, base: f64) -> Result<f64> {
    match policy {
        KPolicy::Fixed(k) => Ok(k),
        KPolicy::Unit => Ok(1.0),
        KPolicy::AutoMax => auto_k(values, base),
    }
}

/// Every `(x1, x2)` pair, `x1` in the outer loop. Parameters are checked
/// for the whole grid before any evaluation.
pub fn evaluate_surface(
    values: &StateValues<f64>,
    mode: Mode,
    x1s: &[f64],
    x2s: &[f64],
    policy: KPolicy,
) -> Result<Vec<SurfacePoint>> {
    let grid: Vec<(f64, f64)> = x1s.iter().flat_map(|&a| x2s.iter().map(move |&b| (a, b))).collect();
    for &(a, b) in &grid {
        params_for(mode, a, b, 1.0)?;
    }
    if let (KPolicy::Fixed(k), Some(&(a, b))) = (policy, grid.first()) {
        params_for(mode, a, b, k)?;
    }
    grid.par_iter()
        .map(|&(x1, x2)| {
            let k = resolve_k(policy, values, x2)?;
            let p = params_for(mode, x1, x2, k)?;
            Ok(SurfacePoint {
                x1,
                x2,
                report: evaluate_bounds(values, &p, mode)?,
            })
        })
        .collect()
}
