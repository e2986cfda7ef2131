//! N-partite bounds obtained by applying the tripartite bound along a chain
//! `A | B_1 B_2 … B_{N−1}`.
//!
//! Indices below are 1-based as in the usual statement: `values[i−1]` is
//! `Q_{AB_i}` for `i = 1..N−1`, `residuals[i−1]` is `Q_{A|B_{i+1}…B_{N−1}}`
//! for `i = 1..N−2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequalities::bounds::{
    check_inputs, max_admissible_k, signed_margin, AdmissibleK, BoundParams, BoundReport, Branch, ConditionCheck,
    KStatus, LabeledValue, Mode,
};
use crate::inequalities::lemma::{coeff_l, coeff_prior};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    /// `B_1 … B_{N−1}` in chain order.
    pub partners: Vec<String>,
    /// `m`, with `1 ≤ m ≤ N−3`.
    pub split: usize,
}

impl ChainSpec {
    pub fn new<S: AsRef<str>>(partners: &[S], split: usize) -> Result<Self> {
        let spec = Self {
            partners: partners.iter().map(|s| s.as_ref().to_string()).collect(),
            split,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Partners named `B1 … B{n}`.
    pub fn standard(partners: usize, split: usize) -> Result<Self> {
        let names: Vec<String> = (1..=partners).map(|i| format!("B{i}")).collect();
        Self::new(&names, split)
    }

    /// `N`, counting A.
    pub fn parties(&self) -> usize {
        self.partners.len() + 1
    }

    fn validate(&self) -> Result<()> {
        let n = self.parties();
        if n < 4 {
            return Err(Error::Domain(format!("chain bounds need N ≥ 4 parties, got {n}")));
        }
        if self.split < 1 || self.split > n - 3 {
            return Err(Error::Domain(format!(
                "split index m = {} outside [1, {}]",
                self.split,
                n - 3
            )));
        }
        Ok(())
    }

    fn residual_label(&self, i: usize) -> String {
        format!("A|{}", self.partners[i..].concat())
    }
}

fn check_lengths<T>(spec: &ChainSpec, values: &[T], residuals: &[T]) -> Result<()> {
    spec.validate()?;
    let n1 = spec.partners.len();
    if values.len() != n1 || residuals.len() != n1 - 1 {
        return Err(Error::LengthMismatch(format!(
            "{} partners need {} pair values and {} residuals, got {} and {}",
            n1,
            n1,
            n1 - 1,
            values.len(),
            residuals.len()
        )));
    }
    Ok(())
}

/// The per-index dominance conditions for split `m`.
pub fn chain_conditions<T: Real>(
    spec: &ChainSpec,
    values: &[T],
    residuals: &[T],
    base: T,
    k: T,
) -> Result<Vec<ConditionCheck<T>>> {
    check_lengths(spec, values, residuals)?;
    let m = spec.split;
    let n = spec.parties();
    let mut out = Vec::with_capacity(n - 2);
    for i in 1..=n - 2 {
        let (pair, res) = (values[i - 1], residuals[i - 1]);
        let name_pair = format!("A{}", spec.partners[i - 1]);
        let name_res = spec.residual_label(i);
        out.push(if i <= m {
            ConditionCheck::new(format!("k*Q_{name_pair}^g <= Q_{name_res}^g"), res, pair, base, k)
        } else {
            ConditionCheck::new(format!("Q_{name_pair}^g >= k*Q_{name_res}^g"), pair, res, base, k)
        });
    }
    Ok(out)
}

/// `Σ_{i≤m} l^{i−1} q_i^p + l^{m+1} Σ_{j=m+1}^{N−2} q_j^p + l^m q_{N−1}^p`
fn chain_sum<T: Real>(values: &[T], m: usize, power: T, l: T) -> T {
    let n1 = values.len();
    let pw = |q: T| q.powf(power);
    let head: T = (1..=m).map(|i| l.powi(i as i32 - 1) * pw(values[i - 1])).sum();
    let middle: T = (m + 1..n1).map(|j| pw(values[j - 1])).sum();
    head + l.powi(m as i32 + 1) * middle + l.powi(m as i32) * pw(values[n1 - 1])
}

fn chain<T: Real>(
    mode: Mode,
    q_joint: T,
    values: &[T],
    residuals: &[T],
    spec: &ChainSpec,
    p: &BoundParams<T>,
) -> Result<BoundReport<T>> {
    p.validate(mode)?;
    check_lengths(spec, values, residuals)?;
    check_inputs(&[q_joint])?;
    check_inputs(values)?;
    check_inputs(residuals)?;
    let (power, base) = p.exponents(mode);
    let x = p.ratio(mode);
    let conditions = chain_conditions(spec, values, residuals, base, p.k)?;
    let holds = conditions.iter().all(|c| c.holds);
    let l = coeff_l(p.k, x)?;
    let lhs = q_joint.powf(power);
    let bound = chain_sum(values, spec.split, power, l);
    let prior = chain_sum(values, spec.split, power, coeff_prior(x));

    let mut inputs = vec![LabeledValue::exact(format!("A|{}", spec.partners.concat()), q_joint)];
    inputs.extend(
        spec.partners
            .iter()
            .zip(values)
            .map(|(b, &v)| LabeledValue::exact(format!("A{b}"), v)),
    );
    inputs.extend(
        residuals
            .iter()
            .enumerate()
            .map(|(i, &v)| LabeledValue::exact(spec.residual_label(i + 1), v)),
    );
    Ok(BoundReport {
        mode,
        lhs,
        branch: if holds {
            Branch::Chain { split: spec.split }
        } else {
            Branch::None
        },
        k: p.k,
        coefficient_l: l,
        bound_new: bound,
        bound_alt: None,
        bound_prior: prior,
        margin: signed_margin(mode, lhs, bound),
        margin_prior: signed_margin(mode, lhs, prior),
        condition_holds: holds,
        conditions,
        inputs,
    })
}

/// Lower bound on `Q^α_{A|B_1…B_{N−1}}` under the chain conditions for split
/// `m` (with base power `γ`).
pub fn monogamy_bound_chain<T: Real>(
    q_joint: T,
    values: &[T],
    residuals: &[T],
    spec: &ChainSpec,
    p: &BoundParams<T>,
) -> Result<BoundReport<T>> {
    chain(Mode::Monogamy, q_joint, values, residuals, spec, p)
}

/// Upper bound on `Q^β_{A|B_1…B_{N−1}}` under the chain conditions for split
/// `m` (with base power `δ`).
pub fn polygamy_bound_chain<T: Real>(
    q_joint: T,
    values: &[T],
    residuals: &[T],
    spec: &ChainSpec,
    p: &BoundParams<T>,
) -> Result<BoundReport<T>> {
    chain(Mode::Polygamy, q_joint, values, residuals, spec, p)
}

/// The first split `m ∈ 1..=N−3` whose conditions all hold.
pub fn select_split<T: Real>(
    partners: &[String],
    values: &[T],
    residuals: &[T],
    base: T,
    k: T,
) -> Result<Option<usize>> {
    let n = partners.len() + 1;
    for m in 1..=n.saturating_sub(3) {
        let spec = ChainSpec::new(partners, m)?;
        if chain_conditions(&spec, values, residuals, base, k)?
            .iter()
            .all(|c| c.holds)
        {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Largest `k` for which every condition of split `m` holds.
pub fn max_admissible_k_chain<T: Real>(
    spec: &ChainSpec,
    values: &[T],
    residuals: &[T],
    base: T,
) -> Result<AdmissibleK<T>> {
    check_lengths(spec, values, residuals)?;
    let n = spec.parties();
    let mut acc = AdmissibleK {
        value: T::one(),
        status: KStatus::Degenerate,
    };
    for i in 1..=n - 2 {
        let (pair, res) = (values[i - 1], residuals[i - 1]);
        let one = if i <= spec.split {
            max_admissible_k(pair, res, base)?
        } else {
            max_admissible_k(res, pair, base)?
        };
        acc = acc.meet(one);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::prior::prior_bound_jll_chain;

    #[test]
    fn spec_validation() {
        assert!(ChainSpec::standard(2, 1).is_err());
        assert!(ChainSpec::standard(3, 0).is_err());
        assert!(ChainSpec::standard(3, 2).is_err());
        assert!(ChainSpec::standard(4, 2).is_ok());
        let spec = ChainSpec::standard(3, 1).unwrap();
        let p = BoundParams::<f64>::monogamy(2.0, 2.0, 1.0).unwrap();
        assert!(matches!(
            monogamy_bound_chain(1.0, &[0.1, 0.2], &[0.3, 0.2], &spec, &p),
            Err(Error::LengthMismatch(_))
        ));
    }

    #[test]
    fn unit_k_alpha_gamma_is_plain_sum() {
        let spec = ChainSpec::standard(3, 1).unwrap();
        let p = BoundParams::<f64>::monogamy(2.0, 2.0, 1.0).unwrap();
        let values = [0.3, 0.5, 0.2];
        // residuals arranged so the conditions hold
        let residuals = [0.6, 0.2];
        let r = monogamy_bound_chain(0.9, &values, &residuals, &spec, &p).unwrap();
        assert!(r.condition_holds);
        assert_eq!(r.branch, Branch::Chain { split: 1 });
        assert!((r.bound_new - (0.09 + 0.25 + 0.04)).abs() < 1e-12);
        let jll = prior_bound_jll_chain(&values, 2.0).unwrap();
        assert!((r.bound_new - jll).abs() < 1e-12);
    }

    #[test]
    fn coefficient_pattern() {
        let spec = ChainSpec::standard(5, 2).unwrap();
        let p = BoundParams::<f64>::monogamy(1.0, 2.0, 1.7).unwrap();
        let l = coeff_l(1.7f64, 0.5).unwrap();
        let v = [0.11, 0.13, 0.17, 0.19, 0.23];
        let res = [0.9, 0.8, 0.01, 0.01];
        let r = monogamy_bound_chain(1.0, &v, &res, &spec, &p).unwrap();
        let expect = v[0] + l * v[1] + l.powi(3) * (v[2] + v[3]) + l.powi(2) * v[4];
        assert!((r.bound_new - expect).abs() < 1e-15);
        assert_eq!(r.conditions.len(), 4);
    }

    #[test]
    fn all_zero_gives_zero() {
        let spec = ChainSpec::standard(3, 1).unwrap();
        let p = BoundParams::<f64>::monogamy(1.5, 2.0, 1.2).unwrap();
        let r = monogamy_bound_chain(0.7, &[0.0; 3], &[0.0; 2], &spec, &p).unwrap();
        assert_eq!(r.bound_new, 0.0);
        assert!(r.condition_holds);
    }

    #[test]
    fn polygamy_unit_k_coefficients() {
        // β = δ = 1 at k = 1: l = 2^1 − 1 = 1, so the bound is the plain sum
        let spec = ChainSpec::standard(3, 1).unwrap();
        let p = BoundParams::<f64>::polygamy(1.0, 1.0, 1.0).unwrap();
        let r = polygamy_bound_chain(0.9, &[0.2, 0.3, 0.1], &[0.5, 0.1], &spec, &p).unwrap();
        assert!((r.coefficient_l - 1.0).abs() < 1e-15);
        assert!((r.bound_new - 0.6).abs() < 1e-15);
        assert!((r.margin - (0.6 - 0.9)).abs() < 1e-15);
    }

    #[test]
    fn failing_conditions_are_reported() {
        let spec = ChainSpec::standard(3, 1).unwrap();
        let p = BoundParams::<f64>::monogamy(1.0, 2.0, 1.0).unwrap();
        let r = monogamy_bound_chain(0.9, &[0.5, 0.1, 0.3], &[0.2, 0.3], &spec, &p).unwrap();
        assert!(!r.condition_holds);
        assert_eq!(r.branch, Branch::None);
        assert!(!r.conditions[0].holds);
        assert!(!r.conditions[1].holds);
    }

    #[test]
    fn split_selection_and_admissible_k() {
        let partners: Vec<String> = ["B1", "B2", "B3", "B4"].iter().map(|s| s.to_string()).collect();
        let v = [0.1, 0.2, 0.4, 0.1];
        // m = 1 fails at j = 2 (0.2 < 0.5), m = 2 holds
        let res = [0.6, 0.5, 0.1];
        assert_eq!(select_split(&partners, &v, &res, 2.0, 1.0).unwrap(), Some(2));
        let spec = ChainSpec::new(&partners, 2).unwrap();
        let k = max_admissible_k_chain::<f64>(&spec, &v, &res, 2.0).unwrap();
        assert_eq!(k.status, KStatus::Admissible);
        // min of (0.6/0.1)², (0.5/0.2)², (0.4/0.1)²
        assert!((k.value - 6.25).abs() < 1e-12);
        let r = monogamy_bound_chain(
            1.0,
            &v,
            &res,
            &spec,
            &BoundParams::<f64>::monogamy(1.0, 2.0, k.value).unwrap(),
        )
        .unwrap();
        assert!(r.condition_holds);
    }
}
