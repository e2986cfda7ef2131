//! End-to-end checks on pure states: measure every cut the bounds need, then
//! evaluate the tripartite or chain bound.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequalities::bounds::{
    monogamy_bound_tripartite, polygamy_bound_tripartite, BoundParams, BoundReport, LabeledValue, Mode,
};
use crate::inequalities::chain::{monogamy_bound_chain, polygamy_bound_chain, select_split, ChainSpec};
use crate::measures::{evaluate_pure, evaluate_two_qubit, negativity, MeasureKind, MeasureValue};
use crate::roof::{optimize_roof, Direction, RoofConfig};
use crate::scalar::Real;
use crate::state::{Bipartition, DensityMatrix, PureState};

/// Every measured quantity a bound evaluation needs, computed once so that
/// parameter sweeps can reuse it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateValues<T> {
    pub kind: MeasureKind,
    /// `A, B_1, …, B_{N−1}`.
    pub order: Vec<String>,
    /// `Q_{A|B_1…B_{N−1}}`
    pub joint: LabeledValue<T>,
    /// `Q_{AB_i}`
    pub pairs: Vec<LabeledValue<T>>,
    /// `Q_{A|B_{i+1}…B_{N−1}}` for `i = 1..N−2`; empty for three parties.
    pub residuals: Vec<LabeledValue<T>>,
}

impl<T: Real> StateValues<T> {
    pub fn pair_values(&self) -> Vec<T> {
        self.pairs.iter().map(|v| v.value).collect()
    }

    pub fn residual_values(&self) -> Vec<T> {
        self.residuals.iter().map(|v| v.value).collect()
    }

    pub fn partners(&self) -> Vec<String> {
        self.order[1..].to_vec()
    }
}

fn labeled<T: Real>(label: String, v: MeasureValue<T>) -> LabeledValue<T> {
    LabeledValue {
        label,
        value: v.value,
        raw: v.raw,
    }
}

/// Polygamy bounds are stated for assisted measures and monogamy bounds for
/// the rest.
pub fn check_mode_kind(mode: Mode, kind: MeasureKind) -> Result<()> {
    match (mode, kind.is_assisted()) {
        (Mode::Monogamy, true) => Err(Error::Domain(format!(
            "{kind} is an assisted measure; use polygamy mode"
        ))),
        (Mode::Polygamy, false) => Err(Error::Domain(format!(
            "polygamy mode needs an assisted measure (coa or screnoa), got {kind}"
        ))),
        _ => Ok(()),
    }
}

/// `kind` on the `A | rest` cut of a (generally mixed) reduction.
fn mixed_value<T: Real>(
    rho: &DensityMatrix<T>,
    kind: MeasureKind,
    a: &str,
    roof: &RoofConfig,
) -> Result<MeasureValue<T>> {
    if rho.register().count() == 2 {
        return evaluate_two_qubit(kind, rho);
    }
    let cut = Bipartition::new(rho.register(), &[a])?;
    if kind == MeasureKind::Negativity {
        return negativity(rho, &cut);
    }
    let r = optimize_roof(rho, kind, Direction::for_kind(kind), &cut, roof)?;
    Ok(MeasureValue {
        kind,
        value: r.value,
        raw: r.value,
        input_class: crate::measures::InputClass::PureCut,
    })
}

/// Measures the joint cut, each pair `AB_i` and (for four or more parties)
/// each residual cut. `order` lists every qubit of the register, `A` first.
pub fn collect_values<T: Real, S: AsRef<str>>(
    psi: &PureState<T>,
    kind: MeasureKind,
    order: &[S],
    roof: &RoofConfig,
) -> Result<StateValues<T>> {
    let reg = psi.register();
    let order: Vec<String> = order.iter().map(|s| s.as_ref().to_string()).collect();
    if order.len() < 3 {
        return Err(Error::Domain(format!(
            "need at least three parties, got {}",
            order.len()
        )));
    }
    let mut sorted = reg.positions_of(&order)?;
    sorted.dedup();
    if sorted.len() != order.len() || order.len() != reg.count() {
        return Err(Error::InvalidBipartition(format!(
            "ordering {order:?} must list every qubit of the register exactly once"
        )));
    }
    let a = order[0].as_str();
    let partners = &order[1..];
    let joint_cut = Bipartition::new(reg, &[a])?;
    let joint = labeled(
        format!("{a}|{}", partners.concat()),
        evaluate_pure(kind, psi, &joint_cut)?,
    );
    let rho = psi.to_density();
    let mut pairs = Vec::with_capacity(partners.len());
    for b in partners {
        let red = rho.partial_trace(&[a, b.as_str()])?;
        pairs.push(labeled(format!("{a}{b}"), evaluate_two_qubit(kind, &red)?));
    }
    let mut residuals = Vec::new();
    if partners.len() >= 3 {
        for i in 1..partners.len() {
            let mut keep = vec![a.to_string()];
            keep.extend(partners[i..].iter().cloned());
            let red = rho.partial_trace(&keep)?;
            let v = mixed_value(&red, kind, a, roof)?;
            residuals.push(labeled(format!("{a}|{}", partners[i..].concat()), v));
        }
    }
    Ok(StateValues {
        kind,
        order,
        joint,
        pairs,
        residuals,
    })
}

/// The bound for `mode` at parameters `p` on already collected values.
///
/// Three parties use the tripartite bound; more use the chain bound at the
/// first split whose conditions hold (or `m = 1`, flagged as not holding).
pub fn evaluate_bounds<T: Real>(values: &StateValues<T>, p: &BoundParams<T>, mode: Mode) -> Result<BoundReport<T>> {
    check_mode_kind(mode, values.kind)?;
    let pv = values.pair_values();
    let mut report = if pv.len() == 2 {
        match mode {
            Mode::Monogamy => monogamy_bound_tripartite(values.joint.value, pv[0], pv[1], p)?,
            Mode::Polygamy => polygamy_bound_tripartite(values.joint.value, pv[0], pv[1], p)?,
        }
    } else {
        let rv = values.residual_values();
        let partners = values.partners();
        let (_, base) = p.exponents(mode);
        let split = select_split(&partners, &pv, &rv, base, p.k)?.unwrap_or(1);
        let spec = ChainSpec::new(&partners, split)?;
        match mode {
            Mode::Monogamy => monogamy_bound_chain(values.joint.value, &pv, &rv, &spec, p)?,
            Mode::Polygamy => polygamy_bound_chain(values.joint.value, &pv, &rv, &spec, p)?,
        }
    };
    let mut inputs = vec![values.joint.clone()];
    inputs.extend(values.pairs.iter().cloned());
    inputs.extend(values.residuals.iter().cloned());
    report.inputs = inputs;
    Ok(report)
}

/// [`collect_values`] followed by [`evaluate_bounds`], with the default roof
/// configuration for residual cuts.
pub fn verify_state<T: Real, S: AsRef<str>>(
    psi: &PureState<T>,
    kind: MeasureKind,
    order: &[S],
    p: &BoundParams<T>,
    mode: Mode,
) -> Result<BoundReport<T>> {
    check_mode_kind(mode, kind)?;
    let values = collect_values(psi, kind, order, &RoofConfig::default())?;
    evaluate_bounds(&values, p, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{ghz_state, make_w_state, GsdParams};
    use crate::inequalities::bounds::Branch;
    use crate::random::haar_random_pure;
    use crate::state::QubitRegister;

    fn example1_state() -> PureState<f64> {
        GsdParams::example1()
            .state_on(QubitRegister::new(["A", "C", "B"]).unwrap())
            .unwrap()
    }

    #[test]
    fn example1_concurrence() {
        let psi = example1_state();
        let k = 6f64.sqrt() / 2.0;
        for i in 1..20 {
            let alpha = i as f64 * 0.1;
            let p = BoundParams::<f64>::monogamy(alpha, 2.0, k).unwrap();
            let r = verify_state(&psi, MeasureKind::Concurrence, &["A", "B", "C"], &p, Mode::Monogamy).unwrap();
            assert_eq!(r.branch, Branch::AcDominant);
            assert!(r.margin > 0.0);
            assert!(r.margin < r.margin_prior, "α = {alpha}");
        }
    }

    #[test]
    fn example1_values_embedded() {
        let psi = example1_state();
        let v = collect_values(&psi, MeasureKind::Concurrence, &["A", "B", "C"], &RoofConfig::default()).unwrap();
        assert!((v.joint.value - 21f64.sqrt() / 6.0).abs() < 1e-12);
        assert!((v.pairs[0].value - 6f64.sqrt() / 6.0).abs() < 1e-12);
        assert!((v.pairs[1].value - 0.5).abs() < 1e-12);
        assert_eq!(v.pairs[0].label, "AB");
    }

    #[test]
    fn w_state_screnoa_polygamy() {
        let w = make_w_state::<f64>();
        let order = ["A", "B1", "B2"];
        for b in [1.0, 1.5, 2.0, 3.0] {
            let p = BoundParams::<f64>::polygamy(b, 1.0, 2.0).unwrap();
            let r = verify_state(&w, MeasureKind::Screnoa, &order, &p, Mode::Polygamy).unwrap();
            assert!(r.condition_holds);
            assert!(r.margin >= -1e-9, "β = {b}: {}", r.margin);
        }
    }

    #[test]
    fn ghz_is_degenerate() {
        let g = ghz_state::<f64>(3).unwrap();
        let p = BoundParams::<f64>::monogamy(1.0, 2.0, 1.5).unwrap();
        let r = verify_state(&g, MeasureKind::Concurrence, &["A", "B1", "B2"], &p, Mode::Monogamy).unwrap();
        assert_eq!(r.branch, Branch::DegenerateZero);
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert_eq!(r.bound_new, 0.0);
    }

    #[test]
    fn mode_kind_mismatch_rejected() {
        let w = make_w_state::<f64>();
        let p = BoundParams::<f64>::monogamy(1.0, 2.0, 1.0).unwrap();
        assert!(verify_state(&w, MeasureKind::Screnoa, &["A", "B1", "B2"], &p, Mode::Monogamy).is_err());
        let q = BoundParams::<f64>::polygamy(1.0, 1.0, 1.0).unwrap();
        assert!(verify_state(&w, MeasureKind::Concurrence, &["A", "B1", "B2"], &q, Mode::Polygamy).is_err());
    }

    #[test]
    fn ordering_must_cover_register() {
        let w = make_w_state::<f64>();
        let p = BoundParams::<f64>::monogamy(1.0, 2.0, 1.0).unwrap();
        assert!(verify_state(&w, MeasureKind::Concurrence, &["A", "B1"], &p, Mode::Monogamy).is_err());
        assert!(verify_state(&w, MeasureKind::Concurrence, &["A", "B1", "B1"], &p, Mode::Monogamy).is_err());
    }

    #[test]
    fn four_qubit_chain_runs() {
        let psi = haar_random_pure::<f64>(QubitRegister::standard(4).unwrap(), 3);
        let order = ["A", "B1", "B2", "B3"];
        let cfg = RoofConfig {
            restarts: 4,
            ..RoofConfig::default()
        };
        let v = collect_values(&psi, MeasureKind::Concurrence, &order, &cfg).unwrap();
        assert_eq!(v.pairs.len(), 3);
        assert_eq!(v.residuals.len(), 2);
        assert_eq!(v.residuals[0].label, "A|B2B3");
        // the last residual is the last pair
        assert!((v.residuals[1].value - v.pairs[2].value).abs() < 1e-12);
        let p = BoundParams::<f64>::monogamy(1.5, 2.0, 1.0).unwrap();
        let r = evaluate_bounds(&v, &p, Mode::Monogamy).unwrap();
        assert_eq!(r.inputs.len(), 6);
        if r.condition_holds {
            assert!(r.margin >= -1e-9);
        }
    }
}
