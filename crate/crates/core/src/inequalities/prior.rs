//! Earlier bounds the new coefficients are compared against.

use crate::error::{Error, Result};
use crate::inequalities::lemma::coeff_prior;
use crate::scalar::Real;

/// `q_ab^α + (2^{α/γ} − 1)·q_ac^α`
pub fn prior_bound_zhu<T: Real>(q_ab: T, q_ac: T, alpha: T, gamma: T) -> T {
    q_ab.powf(alpha) + coeff_prior(alpha / gamma) * q_ac.powf(alpha)
}

/// `Σ_j (2^{α/2} − 1)^{j−1} q_j^α`, valid for `α ≥ 2`.
pub fn prior_bound_jll_chain<T: Real>(values: &[T], alpha: T) -> Result<T> {
    if !(alpha >= T::lit(2.0)) {
        return Err(Error::Domain(format!("α = {alpha} below 2")));
    }
    let c = coeff_prior(alpha / T::lit(2.0));
    Ok(values
        .iter()
        .enumerate()
        .map(|(j, &q)| c.powi(j as i32) * q.powf(alpha))
        .sum())
}

/// `Σ_{j≥1} (2^β − 1)^j q_j^β`, valid for `0 ≤ β ≤ 1`.
pub fn prior_bound_polygamy_chain<T: Real>(values: &[T], beta: T) -> Result<T> {
    if !(beta >= T::zero() && beta <= T::one()) {
        return Err(Error::Domain(format!("β = {beta} outside [0, 1]")));
    }
    let c = coeff_prior(beta);
    Ok(values
        .iter()
        .enumerate()
        .map(|(j, &q)| c.powi(j as i32 + 1) * q.powf(beta))
        .sum())
}
