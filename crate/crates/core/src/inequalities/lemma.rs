//! The scalar inequalities behind the bounds and the coefficient `l(k, x)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative slack for the lemma comparisons: a check passes when it fails by
/// less than `LEMMA_SLACK · max(1, lhs)`.
pub const LEMMA_SLACK: f64 = 1e-12;

/// `l(k, x) = ((1+k)^x − 1) / k^x`.
///
/// `k = +∞` gives the limit: 1 for `x > 0`, 0 at `x = 0`.
pub fn coeff_l<T: Real>(k: T, x: T) -> Result<T> {
    if !(k >= T::one()) {
        return Err(Error::Domain(format!("k must be at least 1, got {k}")));
    }
    if !(x >= T::zero()) {
        return Err(Error::Domain(format!("exponent ratio must be non-negative, got {x}")));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    if k.is_infinite() {
        return Ok(T::one());
    }
    if x.is_infinite() {
        return Err(Error::Domain("exponent ratio must be finite".into()));
    }
    // (1+k)^x − 1 without cancellation, then divide by k^x
    Ok((x * k.ln_1p()).exp_m1() / k.powf(x))
}

/// `2^x − 1`, the coefficient `l` takes at `k = 1`.
pub fn coeff_prior<T: Real>(x: T) -> T {
    (x * T::LN_2()).exp_m1()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LemmaCheck<T> {
    pub x: T,
    pub t: T,
    pub k: T,
    /// `(1+t)^x`
    pub lhs: T,
    /// `1 + l(k, x)·t^x`
    pub rhs: T,
    pub holds: bool,
}

fn sides<T: Real>(x: T, t: T, k: T) -> Result<(T, T)> {
    if !(k >= T::one()) || k.is_infinite() {
        return Err(Error::Domain(format!("k must be finite and at least 1, got {k}")));
    }
    if !(t >= k) {
        return Err(Error::Domain(format!("t = {t} is below k = {k}")));
    }
    let lhs = (T::one() + t).powf(x);
    // l(k,x)·t^x = ((1+k)^x − 1)·(t/k)^x keeps both factors moderate
    let rhs = T::one() + (x * k.ln_1p()).exp_m1() * (t / k).powf(x);
    Ok((lhs, rhs))
}

fn slack<T: Real>(lhs: T) -> T {
    T::lit(LEMMA_SLACK) * lhs.abs().max(T::one())
}

/// `(1+t)^x ≥ 1 + l(k,x)·t^x` for `x ∈ [0, 1]`, `t ≥ k ≥ 1`.
pub fn lemma1_check<T: Real>(x: T, t: T, k: T) -> Result<LemmaCheck<T>> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    let (lhs, rhs) = sides(x, t, k)?;
    Ok(LemmaCheck {
        x,
        t,
        k,
        lhs,
        rhs,
        holds: lhs >= rhs - slack(lhs),
    })
}

/// `(1+t)^x ≤ 1 + l(k,x)·t^x` for `x ≥ 1`, `t ≥ k ≥ 1`.
pub fn lemma2_check<T: Real>(x: T, t: T, k: T) -> Result<LemmaCheck<T>> {
    if !(x >= T::one()) || x.is_infinite() {
        return Err(Error::Domain(format!("x = {x} must be finite and at least 1")));
    }
    let (lhs, rhs) = sides(x, t, k)?;
    Ok(LemmaCheck {
        x,
        t,
        k,
        lhs,
        rhs,
        holds: lhs <= rhs + slack(lhs),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Lemma {
    First,
    Second,
}

/// Outcome of a grid run; `worst` is the smallest signed slack seen
/// (`lhs − rhs` for the first lemma, `rhs − lhs` for the second).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaSummary<T> {
    pub lemma: Lemma,
    pub checked: usize,
    pub violations: usize,
    pub worst: T,
    pub first_violation: Option<LemmaCheck<T>>,
}

pub const LEMMA_K_GRID: [f64; 5] = [1.0, 1.2247, 1.5, 2.0, 5.0];

/// The standard grid: `k` from [`LEMMA_K_GRID`], `t ∈ {k, k+0.5, …, k+50}`,
/// and `x ∈ {0, 0.01, …, 1}` (first lemma) or `x ∈ {1, 1.1, …, 6}`
/// (second lemma).
pub fn lemma_grid(lemma: Lemma) -> Vec<(f64, f64, f64)> {
    let xs: Vec<f64> = match lemma {
        Lemma::First => (0..=100).map(|i| i as f64 / 100.0).collect(),
        Lemma::Second => (0..=50).map(|i| 1.0 + i as f64 / 10.0).collect(),
    };
    let mut out = Vec::with_capacity(xs.len() * LEMMA_K_GRID.len() * 101);
    for &x in &xs {
        for &k in &LEMMA_K_GRID {
            for j in 0..=100 {
                out.push((x, k + 0.5 * j as f64, k));
            }
        }
    }
    out
}

/// Runs one lemma over `(x, t, k)` points.
pub fn run_lemma<T: Real>(lemma: Lemma, points: &[(f64, f64, f64)]) -> Result<LemmaSummary<T>> {
    let mut summary = LemmaSummary {
        lemma,
        checked: 0,
        violations: 0,
        worst: T::infinity(),
        first_violation: None,
    };
    for &(x, t, k) in points {
        let (x, t, k) = (T::lit(x), T::lit(t), T::lit(k));
        let c = match lemma {
            Lemma::First => lemma1_check(x, t, k)?,
            Lemma::Second => lemma2_check(x, t, k)?,
        };
        let s = match lemma {
            Lemma::First => c.lhs - c.rhs,
            Lemma::Second => c.rhs - c.lhs,
        };
        summary.checked += 1;
        summary.worst = summary.worst.min(s);
        if !c.holds {
            summary.violations += 1;
            summary.first_violation.get_or_insert(c);
        }
    }
    Ok(summary)
}
