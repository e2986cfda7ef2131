//! SCRENoA of the W-class state `(|100⟩ + |010⟩)/2 + (√2/2)|001⟩` and the
//! polygamy surface over `(β, δ)`.

use std::path::PathBuf;

use clap::Args;
use qmono_core::inequalities::collect_values;
use qmono_core::{make_w_state, optimize_roof, Bipartition, Direction, MeasureKind, Mode, RoofConfig};
use serde::Serialize;
use serde_json::json;

use crate::commands::{Outcome, AGREEMENT_TOL};
use crate::error::Result;
use crate::output::{create_dir, fmt_bool, fmt_coord, fmt_float, to_json, CsvTable, RunManifest};
use crate::spec::{GridRange, KPolicy};
use crate::surface::evaluate_surface;

#[derive(Args, Clone, Debug, Serialize)]
pub struct Example3Args {
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// k for the surface: a number, `auto` (largest admissible) or `unit`.
    #[arg(long, default_value = "auto")]
    pub k: KPolicy,
    /// Seed for the convex-roof restarts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
}

pub const BETA_GRID: &str = "1:4:0.05";
pub const DELTA_GRID: &str = "0.02:1:0.02";

pub fn run(args: &Example3Args) -> Result<Outcome> {
    create_dir(&args.out)?;
    let mut manifest = RunManifest::new("example3", args, Some(args.seed))?;
    let kind = MeasureKind::Screnoa;
    let w = make_w_state::<f64>();
    let order = ["A", "B1", "B2"];
    let cfg = RoofConfig {
        restarts: args.restarts,
        seed: args.seed,
        ..RoofConfig::default()
    };
    cfg.validate()?;
    let values = collect_values(&w, kind, &order, &cfg)?;

    let rho = w.to_density();
    let cuts: [(&str, Vec<&str>, f64); 3] = [
        ("A|B1B2", vec!["A", "B1", "B2"], 0.75),
        ("AB1", vec!["A", "B1"], 0.25),
        ("AB2", vec!["A", "B2"], 0.5),
    ];
    let closed = [&values.joint, &values.pairs[0], &values.pairs[1]];
    let mut entries = serde_json::Map::new();
    for ((label, keep, exact), cf) in cuts.iter().zip(closed) {
        let red = rho.partial_trace(keep)?;
        let cut = Bipartition::new(red.register(), &["A"])?;
        let r = optimize_roof(&red, kind, Direction::Max, &cut, &cfg)?;
        let diff = (r.value - cf.value).abs();
        entries.insert(
            format!("N_a_{label}"),
            json!({
                "exact": exact,
                "closed_form": cf.value,
                "closed_form_raw": cf.raw,
                "oracle": r.value,
                "oracle_spread": r.spread,
                "oracle_ensemble_size": r.ensemble_size,
                "abs_diff": diff,
                "agree": diff <= AGREEMENT_TOL,
            }),
        );
    }
    let doc = json!({
        "schema": crate::output::SCHEMA,
        "measure": kind.name(),
        "state": { "family": "w", "register": order },
        "agreement_tol": AGREEMENT_TOL,
        "values": entries,
    });
    manifest.write(&args.out.join("values.json"), &to_json(&doc)?)?;

    let betas = BETA_GRID.parse::<GridRange>()?.points();
    let deltas = DELTA_GRID.parse::<GridRange>()?.points();
    let surface = evaluate_surface(&values, Mode::Polygamy, &betas, &deltas, args.k)?;
    let mut fig3 = CsvTable::new(
        format!(
            "beta, delta: exponents; lhs = N_a_A|B1B2^beta; bound_new: upper bound with k = {}; \
             condition_holds: branch hypothesis",
            args.k
        ),
        &["beta", "delta", "lhs", "bound_new", "condition_holds"],
    );
    for pt in &surface {
        fig3.push(vec![
            fmt_coord(pt.x1),
            fmt_coord(pt.x2),
            fmt_float(pt.report.lhs),
            fmt_float(pt.report.bound_new),
            fmt_bool(pt.report.condition_holds),
        ]);
    }
    manifest.write(&args.out.join("fig3.csv"), &fig3.render())?;
    manifest.finish(&args.out.join("manifest.json"))?;
    Ok(Outcome::default())
}
