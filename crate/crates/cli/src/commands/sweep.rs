//! The bound surface of an arbitrary pure state over a parameter grid.

use std::path::PathBuf;

use clap::Args;
use qmono_core::inequalities::{collect_values, MARGIN_SLACK};
use qmono_core::{MeasureKind, Mode, RoofConfig};
use serde::Serialize;

use crate::commands::Outcome;
use crate::error::Result;
use crate::output::{fmt_bool, fmt_coord, fmt_float, manifest_path_for, CsvTable, RunManifest};
use crate::spec::{parse_measure, party_order, GridRange, KPolicy, StateSpec};
use crate::surface::evaluate_surface;

#[derive(Args, Clone, Debug, Serialize)]
pub struct SweepArgs {
    /// gsd[:λ0,…,λ4[,φ]], w, ghz[:N], bell or random:SEED[:N].
    #[arg(long)]
    pub state: StateSpec,
    #[arg(long, default_value = "concurrence", value_parser = parse_measure)]
    pub measure: MeasureKind,
    /// α (monogamy) or β (polygamy) range, START:STOP:STEP.
    #[arg(long)]
    pub x1: GridRange,
    /// γ (monogamy) or δ (polygamy) range, START:STOP:STEP.
    #[arg(long)]
    pub x2: GridRange,
    /// A number, `auto` (largest admissible per point) or `unit`.
    #[arg(long, default_value = "auto")]
    pub k: KPolicy,
    /// Seed for convex-roof restarts on residual cuts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    /// CSV file.
    #[arg(long)]
    pub out: PathBuf,
}

/// Assisted measures obey polygamy bounds, the others monogamy bounds.
pub fn mode_for(kind: MeasureKind) -> Mode {
    if kind.is_assisted() {
        Mode::Polygamy
    } else {
        Mode::Monogamy
    }
}

/// The surface table and the number of points where the conditions hold
/// but the bound fails.
pub fn render(args: &SweepArgs) -> Result<(CsvTable, usize)> {
    let psi = args.state.pure()?;
    let order = party_order(psi.register())?;
    let roof = RoofConfig {
        restarts: args.restarts,
        seed: args.seed,
        ..RoofConfig::default()
    };
    roof.validate()?;
    let values = collect_values(&psi, args.measure, &order, &roof)?;
    let mode = mode_for(args.measure);
    let surface = evaluate_surface(&values, mode, &args.x1.points(), &args.x2.points(), args.k)?;
    let (x1, x2) = match mode {
        Mode::Monogamy => ("alpha", "gamma"),
        Mode::Polygamy => ("beta", "delta"),
    };
    let mut table = CsvTable::new(
        format!(
            "state {}, measure {}, {mode}; x1 = {x1}, x2 = {x2}; k policy {}; lhs = joint cut to the power x1; \
             bound_prior: same bound at k = 1; margin > 0 means the bound holds",
            args.state, args.measure, args.k
        ),
        &[
            "x1",
            "x2",
            "k",
            "lhs",
            "bound_new",
            "bound_prior",
            "margin",
            "condition_holds",
            "branch",
        ],
    );
    let violations = surface.iter().filter(|pt| pt.report.is_violation(MARGIN_SLACK)).count();
    for pt in &surface {
        let r = &pt.report;
        table.push(vec![
            fmt_coord(pt.x1),
            fmt_coord(pt.x2),
            fmt_float(r.k),
            fmt_float(r.lhs),
            fmt_float(r.bound_new),
            fmt_float(r.bound_prior),
            fmt_float(r.margin),
            fmt_bool(r.condition_holds),
            r.branch.to_string(),
        ]);
    }
    Ok((table, violations))
}

pub fn run(args: &SweepArgs) -> Result<Outcome> {
    let mut manifest = RunManifest::new("sweep", args, Some(args.seed))?;
    let (table, violations) = render(args)?;
    manifest.write(&args.out, &table.render())?;
    manifest.finish(&manifest_path_for(&args.out))?;
    Ok(Outcome { violations })
}
