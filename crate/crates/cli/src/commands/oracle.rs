//! Convex-roof optimization of a two-qubit state next to the closed form.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use qmono_core::measures::{concurrence_of_assistance, concurrence_two_qubit_mixed, eof_two_qubit};
use qmono_core::roof::check_cardinality;
use qmono_core::{optimize_roof, Bipartition, DensityMatrix, Direction, MeasureKind, RoofConfig};
use serde::Serialize;
use serde_json::json;

use crate::commands::{Outcome, AGREEMENT_TOL};
use crate::error::{CliError, Result};
use crate::output::{manifest_path_for, to_json, RunManifest};
use crate::spec::{parse_measure, StateSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionArg {
    Min,
    Max,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Min => Direction::Min,
            DirectionArg::Max => Direction::Max,
        }
    }
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct OracleArgs {
    /// A two-qubit state: bell, mixed:SEED:RANK, or a reduction such as w@A,B2.
    #[arg(long)]
    pub state: StateSpec,
    #[arg(long, default_value = "concurrence", value_parser = parse_measure)]
    pub measure: MeasureKind,
    /// Defaults to the measure's own direction.
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    #[arg(long)]
    pub ensemble_size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rerun with a larger ensemble and report whether the value moved.
    #[arg(long)]
    pub cardinality: bool,
    /// Report file.
    #[arg(long)]
    pub out: PathBuf,
}

/// The closed form the roof of `kind` in direction `dir` should reach on a
/// two-qubit state. For two qubits every pure-state kernel except the
/// entropy is the concurrence, so minima are Wootters' concurrence and
/// maxima the concurrence of assistance (squared for the SCREN kinds).
pub fn closed_form_reference(kind: MeasureKind, dir: Direction, rho: &DensityMatrix<f64>) -> Result<Option<f64>> {
    let square = kind.is_squared_roof();
    let v = match (kind, dir) {
        (MeasureKind::EntanglementOfFormation, Direction::Min) => eof_two_qubit(rho)?.value,
        (MeasureKind::EntanglementOfFormation, Direction::Max) => return Ok(None),
        (_, Direction::Min) => concurrence_two_qubit_mixed(rho)?.value,
        (_, Direction::Max) => concurrence_of_assistance(rho)?.value,
    };
    Ok(Some(if square { v * v } else { v }))
}

pub fn run(args: &OracleArgs) -> Result<Outcome> {
    let rho = args.state.materialize()?.to_density();
    let n = rho.register().count();
    if n != 2 {
        return Err(CliError::usage(format!(
            "the oracle compares against two-qubit closed forms; `{}` has {n} qubits (reduce it with @A,B)",
            args.state
        )));
    }
    let kind = args.measure;
    let dir = args.direction.map_or(Direction::for_kind(kind), Direction::from);
    let cfg = RoofConfig {
        ensemble_size: args.ensemble_size,
        restarts: args.restarts,
        max_iters: args.max_iters,
        seed: args.seed,
        ..RoofConfig::default()
    };
    cfg.validate()?;
    let mut manifest = RunManifest::new("oracle", args, Some(args.seed))?;
    let cut = Bipartition::first_vs_rest(rho.register())?;
    let closed = closed_form_reference(kind, dir, &rho)?;
    let r = optimize_roof(&rho, kind, dir, &cut, &cfg)?;
    let diff = closed.map(|c| (r.value - c).abs());
    let cardinality = if args.cardinality {
        Some(check_cardinality(&rho, kind, dir, &cut, &cfg)?)
    } else {
        None
    };
    let doc = json!({
        "schema": crate::output::SCHEMA,
        "command": "oracle",
        "state": args.state,
        "measure": kind,
        "direction": if dir == Direction::Min { "min" } else { "max" },
        "closed_form": closed,
        "oracle": {
            "value": r.value,
            "spread": r.spread,
            "restart_values": r.restart_values,
            "ensemble_size": r.ensemble_size,
            "rank": r.rank,
            "weights": r.best.weights,
        },
        "abs_diff": diff,
        "agreement_tol": AGREEMENT_TOL,
        "agree": diff.map(|d| d <= AGREEMENT_TOL),
        "cardinality": cardinality.map(|c| json!({ "base": c.base.value, "raised": c.raised.value, "raised_size": c.raised.ensemble_size, "flagged": c.flagged })),
    });
    manifest.write(&args.out, &to_json(&doc)?)?;
    manifest.finish(&manifest_path_for(&args.out))?;
    Ok(Outcome::default())
}
