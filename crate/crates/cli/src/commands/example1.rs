//! Concurrence of the generalized Schmidt state with `λ0 = λ3 = 1/2` and the
//! other coefficients `√6/6`, plus the data behind its two surfaces.

use std::path::PathBuf;

use clap::Args;
use qmono_core::inequalities::{coeff_l, coeff_prior, collect_values, max_admissible_k, prior_bound_zhu};
use qmono_core::{GsdParams, MeasureKind, Mode, RoofConfig};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::commands::Outcome;
use crate::error::Result;
use crate::output::{create_dir, fmt_bool, fmt_coord, fmt_float, to_json, CsvTable, RunManifest};
use crate::spec::{gsd_state, GridRange, KPolicy, GSD_REGISTER};
use crate::surface::evaluate_surface;

#[derive(Args, Clone, Debug, Serialize)]
pub struct Example1Args {
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

pub const ALPHA_GRID: &str = "0:2:0.02";
pub const GAMMA_GRID: &str = "2:5:0.05";

/// `√6/2`
pub fn example1_k() -> f64 {
    6f64.sqrt() / 2.0
}

pub fn run(args: &Example1Args) -> Result<Outcome> {
    create_dir(&args.out)?;
    let mut manifest = RunManifest::new("example1", args, None)?;
    let params = GsdParams::<f64>::example1();
    let psi = gsd_state(&params)?;
    let values = collect_values(&psi, MeasureKind::Concurrence, &["A", "B", "C"], &RoofConfig::default())?;
    let k = example1_k();
    let (joint, ab, ac) = (&values.joint, &values.pairs[0], &values.pairs[1]);
    let exact = [21f64.sqrt() / 6.0, 6f64.sqrt() / 6.0, 0.5];
    let entry = |v: &qmono_core::inequalities::LabeledValue<f64>, e: f64| json!({ "label": v.label, "value": v.value, "raw": v.raw, "exact": e, "abs_error": (v.value - e).abs() });
    let doc = json!({
        "schema": crate::output::SCHEMA,
        "measure": "concurrence",
        "state": {
            "family": "gsd",
            "lambda": params.lambda,
            "phi": params.phi,
            "register": GSD_REGISTER,
        },
        "k": k,
        "k_max_admissible": max_admissible_k(ab.value, ac.value, 2.0)?.value,
        "values": {
            "C_A|BC": entry(joint, exact[0]),
            "C_AB": entry(ab, exact[1]),
            "C_AC": entry(ac, exact[2]),
        },
    });
    manifest.write(&args.out.join("values.json"), &to_json(&doc)?)?;

    let alphas = ALPHA_GRID.parse::<GridRange>()?.points();
    let gammas = GAMMA_GRID.parse::<GridRange>()?.points();
    let surface = evaluate_surface(&values, Mode::Monogamy, &alphas, &gammas, KPolicy::Fixed(k))?;
    let mut fig1 = CsvTable::new(
        "alpha, gamma: exponents; lhs = C_A|BC^alpha; bound_new: lower bound at k = sqrt(6)/2; \
         bound_zhu = C_AB^alpha + (2^(alpha/gamma) - 1) C_AC^alpha; condition_holds: branch hypothesis",
        &["alpha", "gamma", "lhs", "bound_new", "bound_zhu", "condition_holds"],
    );
    for pt in &surface {
        let zhu = prior_bound_zhu(ab.value, ac.value, pt.x1, pt.x2);
        fig1.push(vec![
            fmt_coord(pt.x1),
            fmt_coord(pt.x2),
            fmt_float(pt.report.lhs),
            fmt_float(pt.report.bound_new),
            fmt_float(zhu),
            fmt_bool(pt.report.condition_holds),
        ]);
    }
    manifest.write(&args.out.join("fig1.csv"), &fig1.render())?;

    let grid: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| gammas.iter().map(move |&g| (a, g)))
        .collect();
    let rows: Vec<Vec<String>> = grid
        .par_iter()
        .map(|&(a, g)| {
            let x = if a == 0.0 { 0.0 } else { a / g };
            let z = (coeff_l(k, x)? - coeff_prior(x)) * ac.value.powf(a);
            Ok(vec![fmt_coord(a), fmt_coord(g), fmt_float(z)])
        })
        .collect::<Result<_>>()?;
    let mut fig2 = CsvTable::new(
        "alpha, gamma: exponents; z = (l(k, alpha/gamma) - (2^(alpha/gamma) - 1)) C_AC^alpha at k = sqrt(6)/2",
        &["alpha", "gamma", "z"],
    );
    for r in rows {
        fig2.push(r);
    }
    manifest.write(&args.out.join("fig2.csv"), &fig2.render())?;
    manifest.finish(&args.out.join("manifest.json"))?;
    Ok(Outcome::default())
}
