//! Tripartite monogamy and polygamy bounds, branch selection and admissible k.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequalities::lemma::{coeff_l, coeff_prior};
use crate::inequalities::CONDITION_SLACK;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Lower bounds on `Q^α` of the joint cut.
    Monogamy,
    /// Upper bounds on `Q^β` of the joint cut.
    Polygamy,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Monogamy => "monogamy",
            Mode::Polygamy => "polygamy",
        })
    }
}

/// Which side carries the coefficient `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `Q_AC^g ≥ k·Q_AB^g`: `l` multiplies the AC term.
    AcDominant,
    /// `Q_AB^g ≥ k·Q_AC^g`: `l` multiplies the AB term.
    AbDominant,
    /// The smaller pair value is exactly zero (the `k → ∞` limit).
    DegenerateZero,
    /// No branch condition holds; the bound carries no guarantee.
    None,
    /// All chain conditions hold for this split index.
    Chain { split: usize },
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::AcDominant => f.write_str("ac-dominant"),
            Branch::AbDominant => f.write_str("ab-dominant"),
            Branch::DegenerateZero => f.write_str("degenerate-zero"),
            Branch::None => f.write_str("none"),
            Branch::Chain { split } => write!(f, "chain-m{split}"),
        }
    }
}

/// Exponents and the dominance factor `k` (which may be `+∞`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams<T> {
    pub alpha: T,
    pub gamma: T,
    pub beta: T,
    pub delta: T,
    pub k: T,
}

impl<T: Real> BoundParams<T> {
    pub fn monogamy(alpha: T, gamma: T, k: T) -> Result<Self> {
        let p = Self {
            alpha,
            gamma,
            beta: T::one(),
            delta: T::one(),
            k,
        };
        p.validate(Mode::Monogamy)?;
        Ok(p)
    }

    pub fn polygamy(beta: T, delta: T, k: T) -> Result<Self> {
        let p = Self {
            alpha: T::lit(2.0),
            gamma: T::lit(2.0),
            beta,
            delta,
            k,
        };
        p.validate(Mode::Polygamy)?;
        Ok(p)
    }

    pub fn with_k(self, k: T) -> Self {
        Self { k, ..self }
    }

    pub fn validate(&self, mode: Mode) -> Result<()> {
        if !(self.k >= T::one()) {
            return Err(Error::Domain(format!("k must be at least 1, got {}", self.k)));
        }
        match mode {
            Mode::Monogamy => {
                if !(self.gamma >= T::lit(2.0)) || self.gamma.is_infinite() {
                    return Err(Error::Domain(format!(
                        "γ must be finite and at least 2, got {}",
                        self.gamma
                    )));
                }
                if !(self.alpha >= T::zero() && self.alpha <= self.gamma) {
                    return Err(Error::Domain(format!(
                        "α must lie in [0, γ] = [0, {}], got {}",
                        self.gamma, self.alpha
                    )));
                }
            }
            Mode::Polygamy => {
                if !(self.delta >= T::zero() && self.delta <= T::one()) {
                    return Err(Error::Domain(format!("δ must lie in [0, 1], got {}", self.delta)));
                }
                if !(self.beta >= self.delta) || self.beta.is_infinite() {
                    return Err(Error::Domain(format!(
                        "β must be finite and at least δ = {}, got {}",
                        self.delta, self.beta
                    )));
                }
                if self.delta == T::zero() && self.beta != T::zero() {
                    return Err(Error::Domain("δ = 0 requires β = 0".into()));
                }
            }
        }
        Ok(())
    }

    /// `(power, base)`: `(α, γ)` or `(β, δ)`.
    pub fn exponents(&self, mode: Mode) -> (T, T) {
        match mode {
            Mode::Monogamy => (self.alpha, self.gamma),
            Mode::Polygamy => (self.beta, self.delta),
        }
    }

    /// `power / base`, with `0/0 = 0`.
    pub fn ratio(&self, mode: Mode) -> T {
        let (p, b) = self.exponents(mode);
        if p == T::zero() {
            T::zero()
        } else {
            p / b
        }
    }
}

/// A measured value with the label of the cut it belongs to.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabeledValue<T> {
    pub label: String,
    pub value: T,
    pub raw: T,
}

impl<T: Real> LabeledValue<T> {
    pub fn exact(label: impl Into<String>, value: T) -> Self {
        Self {
            label: label.into(),
            value,
            raw: value,
        }
    }
}

/// One dominance hypothesis `dominant ≥ scaled` with its measured slack.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionCheck<T> {
    pub label: String,
    pub dominant: T,
    pub scaled: T,
    pub slack: T,
    pub holds: bool,
}

impl<T: Real> ConditionCheck<T> {
    /// `large^base ≥ k·small^base` within [`CONDITION_SLACK`].
    pub(crate) fn new(label: String, large: T, small: T, base: T, k: T) -> Self {
        let dominant = large.powf(base);
        let s = small.powf(base);
        // ∞·0 is 0 here: a vanishing term is dominated by any k
        let scaled = if s == T::zero() { T::zero() } else { k * s };
        let slack = dominant - scaled;
        Self {
            label,
            dominant,
            scaled,
            slack,
            holds: slack >= -T::lit(CONDITION_SLACK),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport<T> {
    pub mode: Mode,
    /// `Q^power` of the joint cut.
    pub lhs: T,
    pub branch: Branch,
    pub k: T,
    pub coefficient_l: T,
    pub bound_new: T,
    /// The other branch's bound when both conditions hold.
    pub bound_alt: Option<T>,
    /// The same bound at `k = 1`.
    pub bound_prior: T,
    /// `lhs − bound` (monogamy) or `bound − lhs` (polygamy).
    pub margin: T,
    pub margin_prior: T,
    pub condition_holds: bool,
    pub conditions: Vec<ConditionCheck<T>>,
    pub inputs: Vec<LabeledValue<T>>,
}

impl<T: Real> BoundReport<T> {
    /// A violation: the conditions hold but the bound fails by more than
    /// `slack`.
    pub fn is_violation(&self, slack: T) -> bool {
        self.condition_holds && self.margin < -slack
    }
}

pub(crate) fn signed_margin<T: Real>(mode: Mode, lhs: T, bound: T) -> T {
    match mode {
        Mode::Monogamy => lhs - bound,
        Mode::Polygamy => bound - lhs,
    }
}

pub(crate) fn check_inputs<T: Real>(values: &[T]) -> Result<()> {
    for &v in values {
        if !(v >= T::zero()) || v.is_infinite() {
            return Err(Error::Domain(format!(
                "measure values must be finite and non-negative, got {v}"
            )));
        }
    }
    Ok(())
}

fn tripartite<T: Real>(mode: Mode, q_joint: T, q_ab: T, q_ac: T, p: &BoundParams<T>) -> Result<BoundReport<T>> {
    p.validate(mode)?;
    check_inputs(&[q_joint, q_ab, q_ac])?;
    let (power, base) = p.exponents(mode);
    let x = p.ratio(mode);
    let lhs = q_joint.powf(power);
    let (pab, pac) = (q_ab.powf(power), q_ac.powf(power));
    // l on the AC term / on the AB term
    let on_ac = |l: T| pab + l * pac;
    let on_ab = |l: T| pac + l * pab;
    let ac_larger = q_ac >= q_ab;
    let larger_under = |l: T| if ac_larger { on_ac(l) } else { on_ab(l) };

    let c_ac = ConditionCheck::new("Q_AC^g >= k*Q_AB^g".into(), q_ac, q_ab, base, p.k);
    let c_ab = ConditionCheck::new("Q_AB^g >= k*Q_AC^g".into(), q_ab, q_ac, base, p.k);
    let prior_l = coeff_prior(x);

    let (branch, l, bound, alt, prior, holds) = if q_ab.min(q_ac) == T::zero() {
        let l = coeff_l(T::infinity(), x)?;
        (
            Branch::DegenerateZero,
            l,
            larger_under(l),
            None,
            larger_under(prior_l),
            true,
        )
    } else {
        let l = coeff_l(p.k, x)?;
        match (c_ac.holds, c_ab.holds) {
            (true, true) => {
                let (branch, alt) = if ac_larger {
                    (Branch::AcDominant, on_ab(l))
                } else {
                    (Branch::AbDominant, on_ac(l))
                };
                (branch, l, larger_under(l), Some(alt), larger_under(prior_l), true)
            }
            (true, false) => (Branch::AcDominant, l, on_ac(l), None, on_ac(prior_l), true),
            (false, true) => (Branch::AbDominant, l, on_ab(l), None, on_ab(prior_l), true),
            (false, false) => (Branch::None, l, larger_under(l), None, larger_under(prior_l), false),
        }
    };
    Ok(BoundReport {
        mode,
        lhs,
        branch,
        k: p.k,
        coefficient_l: l,
        bound_new: bound,
        bound_alt: alt,
        bound_prior: prior,
        margin: signed_margin(mode, lhs, bound),
        margin_prior: signed_margin(mode, lhs, prior),
        condition_holds: holds,
        conditions: vec![c_ac, c_ab],
        inputs: vec![
            LabeledValue::exact("A|BC", q_joint),
            LabeledValue::exact("AB", q_ab),
            LabeledValue::exact("AC", q_ac),
        ],
    })
}

/// `Q^α_{A|BC} ≥ Q^α_AB + l·Q^α_AC` when `Q^γ_AC ≥ k·Q^γ_AB` (and the mirror
/// image when AB dominates).
pub fn monogamy_bound_tripartite<T: Real>(q_joint: T, q_ab: T, q_ac: T, p: &BoundParams<T>) -> Result<BoundReport<T>> {
    tripartite(Mode::Monogamy, q_joint, q_ab, q_ac, p)
}

/// `Q^β_{A|BC} ≤ Q^β_AB + l·Q^β_AC` when `Q^δ_AC ≥ k·Q^δ_AB` (and the mirror
/// image when AB dominates).
pub fn polygamy_bound_tripartite<T: Real>(q_joint: T, q_ab: T, q_ac: T, p: &BoundParams<T>) -> Result<BoundReport<T>> {
    tripartite(Mode::Polygamy, q_joint, q_ab, q_ac, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KStatus {
    Admissible,
    /// The requested dominance fails even at `k = 1`.
    Inadmissible,
    /// The dominated value is zero: any finite `k` works.
    Unbounded,
    /// Both values are zero.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdmissibleK<T> {
    pub value: T,
    pub status: KStatus,
}

impl<T: Real> AdmissibleK<T> {
    /// The `k` to use in a bound, if any: the maximum when admissible, `+∞`
    /// when unbounded, 1 when degenerate.
    pub fn usable(&self) -> Option<T> {
        match self.status {
            KStatus::Admissible => Some(self.value),
            KStatus::Unbounded => Some(T::infinity()),
            KStatus::Degenerate => Some(T::one()),
            KStatus::Inadmissible => None,
        }
    }

    /// The tighter of two constraints.
    pub fn meet(self, other: Self) -> Self {
        use KStatus::*;
        match (self.status, other.status) {
            (Degenerate, _) => other,
            (_, Degenerate) => self,
            _ => {
                let value = self.value.min(other.value);
                let status = if value < T::one() {
                    Inadmissible
                } else if value.is_infinite() {
                    Unbounded
                } else {
                    Admissible
                };
                Self { value, status }
            }
        }
    }
}

/// Largest `k` with `q_large^power ≥ k·q_small^power`, i.e.
/// `(q_large / q_small)^power`.
pub fn max_admissible_k<T: Real>(q_small: T, q_large: T, power: T) -> Result<AdmissibleK<T>> {
    check_inputs(&[q_small, q_large])?;
    Ok(match (q_small == T::zero(), q_large == T::zero()) {
        (true, true) => AdmissibleK {
            value: T::one(),
            status: KStatus::Degenerate,
        },
        (true, false) => AdmissibleK {
            value: T::infinity(),
            status: KStatus::Unbounded,
        },
        _ => {
            let value = (q_large / q_small).powf(power);
            AdmissibleK {
                value,
                status: if value >= T::one() {
                    KStatus::Admissible
                } else {
                    KStatus::Inadmissible
                },
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::prior::prior_bound_zhu;

    fn ex1() -> (f64, f64, f64) {
        (21f64.sqrt() / 6.0, 6f64.sqrt() / 6.0, 0.5)
    }

    #[test]
    fn example1_bound() {
        let (j, ab, ac) = ex1();
        let k = 6f64.sqrt() / 2.0;
        let r = monogamy_bound_tripartite(j, ab, ac, &BoundParams::<f64>::monogamy(1.0, 2.0, k).unwrap()).unwrap();
        assert_eq!(r.branch, Branch::AcDominant);
        assert!(r.condition_holds);
        let l = ((1.0 + k).sqrt() - 1.0) / k.sqrt();
        assert!((r.bound_new - (ab + l * ac)).abs() < 1e-15);
        assert!((r.bound_new - 0.6303346).abs() < 1e-7);
        assert!((r.lhs - 0.763763).abs() < 1e-6);
        assert!(r.margin > 0.0);
        assert!((r.bound_prior - prior_bound_zhu(ab, ac, 1.0, 2.0)).abs() < 1e-15);
        assert!(r.margin < r.margin_prior);
    }

    #[test]
    fn unit_k_at_alpha_gamma_is_base_relation() {
        let r =
            monogamy_bound_tripartite(0.9, 0.3, 0.5, &BoundParams::<f64>::monogamy(2.0, 2.0, 1.0).unwrap()).unwrap();
        assert!((r.bound_new - (0.09 + 0.25)).abs() < 1e-15);
        assert!((r.coefficient_l - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_zero_branch() {
        let p = BoundParams::<f64>::monogamy(1.5, 2.0, 1.3).unwrap();
        let r = monogamy_bound_tripartite(0.8, 0.0, 0.4, &p).unwrap();
        assert_eq!(r.branch, Branch::DegenerateZero);
        assert!((r.bound_new - 0.4f64.powf(1.5)).abs() < 1e-15);
        assert!(r.condition_holds);
        let q = BoundParams::<f64>::polygamy(1.0, 1.0, 2.0).unwrap();
        let r = polygamy_bound_tripartite(0.5, 0.0, 0.5, &q).unwrap();
        assert_eq!(r.branch, Branch::DegenerateZero);
        assert!((r.bound_new - 0.5).abs() < 1e-15);
        // GHZ-like: both pair values vanish
        let r = monogamy_bound_tripartite(1.0, 0.0, 0.0, &p).unwrap();
        assert_eq!(r.bound_new, 0.0);
        assert_eq!(r.lhs, 1.0);
    }

    #[test]
    fn example3_polygamy_equality() {
        let p = BoundParams::<f64>::polygamy(1.0, 1.0, 2.0).unwrap();
        let r = polygamy_bound_tripartite(0.75, 0.25, 0.5, &p).unwrap();
        assert_eq!(r.branch, Branch::AcDominant);
        assert!((r.coefficient_l - 1.0).abs() < 1e-15);
        assert!((r.bound_new - 0.75).abs() < 1e-15);
        assert!(r.margin.abs() < 1e-15);
        let unit = polygamy_bound_tripartite(0.75, 0.25, 0.5, &p.with_k(1.0)).unwrap();
        assert!((unit.bound_new - 0.75).abs() < 1e-15);
    }

    #[test]
    fn no_branch_reports_bound_without_guarantee() {
        let p = BoundParams::<f64>::monogamy(1.0, 2.0, 2.0).unwrap();
        let r = monogamy_bound_tripartite(0.9, 0.4, 0.5, &p).unwrap();
        assert_eq!(r.branch, Branch::None);
        assert!(!r.condition_holds);
        assert!(!r.is_violation(1e-9));
        let l = coeff_l(2.0f64, 0.5).unwrap();
        assert!((r.bound_new - (0.4 + l * 0.5)).abs() < 1e-15);
    }

    #[test]
    fn both_branches_at_equal_values() {
        let p = BoundParams::<f64>::monogamy(1.0, 2.0, 1.0).unwrap();
        let r = monogamy_bound_tripartite(0.9, 0.4, 0.4, &p).unwrap();
        assert_eq!(r.branch, Branch::AcDominant);
        assert_eq!(r.bound_alt, Some(r.bound_new));
    }

    #[test]
    fn alpha_zero_is_trivial() {
        let p = BoundParams::<f64>::monogamy(0.0, 2.0, 1.5).unwrap();
        let r = monogamy_bound_tripartite(0.9, 0.3, 0.6, &p).unwrap();
        assert_eq!((r.lhs, r.bound_new, r.coefficient_l), (1.0, 1.0, 0.0));
        let q = BoundParams::<f64>::polygamy(0.0, 0.0, 1.0).unwrap();
        let r = polygamy_bound_tripartite(0.9, 0.3, 0.6, &q).unwrap();
        assert_eq!((r.lhs, r.bound_new), (1.0, 1.0));
    }

    #[test]
    fn parameter_domains() {
        assert!(BoundParams::<f64>::monogamy(2.5, 2.0, 1.0).is_err());
        assert!(BoundParams::<f64>::monogamy(1.0, 1.5, 1.0).is_err());
        assert!(BoundParams::<f64>::monogamy(1.0, 2.0, 0.9).is_err());
        assert!(BoundParams::<f64>::monogamy(1.0, 2.0, f64::INFINITY).is_ok());
        assert!(BoundParams::<f64>::polygamy(0.5, 0.8, 1.0).is_err());
        assert!(BoundParams::<f64>::polygamy(2.0, 1.2, 1.0).is_err());
        assert!(BoundParams::<f64>::polygamy(1.0, 0.0, 1.0).is_err());
        let p = BoundParams::<f64>::monogamy(1.0, 2.0, 1.0).unwrap();
        assert!(monogamy_bound_tripartite(0.5, -0.1, 0.2, &p).is_err());
    }

    #[test]
    fn admissible_k() {
        let (_, ab, ac) = ex1();
        let k = max_admissible_k::<f64>(ab, ac, 2.0).unwrap();
        assert_eq!(k.status, KStatus::Admissible);
        assert!((k.value - 1.5).abs() < 1e-14);
        assert_eq!(max_admissible_k::<f64>(0.3, 0.3, 2.0).unwrap().value, 1.0);
        let u = max_admissible_k::<f64>(0.0, 0.3, 2.0).unwrap();
        assert_eq!(u.status, KStatus::Unbounded);
        assert!(u.value.is_infinite());
        assert_eq!(
            max_admissible_k::<f64>(0.0, 0.0, 2.0).unwrap().status,
            KStatus::Degenerate
        );
        assert_eq!(
            max_admissible_k::<f64>(0.5, 0.3, 2.0).unwrap().status,
            KStatus::Inadmissible
        );
    }

    #[test]
    fn saturation_at_max_k() {
        let (ab, ac, alpha, gamma) = (0.3f64, 0.6, 1.2, 2.5);
        let k = max_admissible_k::<f64>(ab, ac, gamma).unwrap().value;
        let p = BoundParams::<f64>::monogamy(alpha, gamma, k).unwrap();
        let r = monogamy_bound_tripartite(1.0, ab, ac, &p).unwrap();
        let sat = (ab.powf(gamma) + ac.powf(gamma)).powf(alpha / gamma);
        assert!((r.bound_new - sat).abs() < 1e-12);
    }
}
