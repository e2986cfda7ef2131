//! Sampling campaigns: Haar-random pure states checked against the bounds,
//! or the scalar lemma grids.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use qmono_core::inequalities::{collect_values, evaluate_bounds, lemma_grid, run_lemma, Lemma, MARGIN_SLACK};
use qmono_core::random::sample_haar_pure;
use qmono_core::{seeded_rng, BoundReport, MeasureKind, Mode, PureState, QubitRegister, RoofConfig};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::commands::Outcome;
use crate::error::{CliError, Result};
use crate::output::{fmt_float, manifest_path_for, to_json, RunManifest};
use crate::spec::{parse_measure, party_order, KPolicy};
use crate::surface::{params_for, resolve_k};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FuzzMode {
    Monogamy,
    Polygamy,
    Lemma,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct FuzzArgs {
    #[arg(long, default_value = "concurrence", value_parser = parse_measure)]
    pub measure: MeasureKind,
    #[arg(long, value_enum)]
    pub mode: FuzzMode,
    /// Number of sampled states.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub qubits: usize,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// A number, `auto` (largest admissible per state) or `1`.
    #[arg(long, default_value = "1")]
    pub k: KPolicy,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Convex-roof restarts for residual cuts (four or more qubits).
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    /// Report file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub checked: usize,
    pub condition_held: usize,
    pub violations: usize,
}

/// A state that broke a bound whose hypotheses held.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub sample: u64,
    pub register: Vec<String>,
    /// `[re, im]` per basis state, 17 significant digits.
    pub amplitudes: Vec<[String; 2]>,
    pub report: BoundReport<f64>,
}

pub fn witness_amplitudes(psi: &PureState<f64>) -> Vec<[String; 2]> {
    psi.amplitudes()
        .iter()
        .map(|a| [fmt_float(a.re), fmt_float(a.im)])
        .collect()
}

/// Result of one sampled state.
#[derive(Clone, Debug)]
pub struct SampleOutcome {
    pub sample: u64,
    pub k: f64,
    pub report: BoundReport<f64>,
    pub state: PureState<f64>,
}

impl SampleOutcome {
    pub fn is_violation(&self) -> bool {
        self.report.is_violation(MARGIN_SLACK)
    }
}

/// Sample `sample` of a campaign: the Haar state drawn from stream
/// `sample` of `seed`.
pub fn campaign_state(seed: u64, sample: u64, qubits: usize) -> Result<PureState<f64>> {
    Ok(sample_haar_pure(
        QubitRegister::standard(qubits)?,
        &mut seeded_rng(seed, sample),
    ))
}

pub fn check_qubits(qubits: usize) -> Result<()> {
    if !(3..=8).contains(&qubits) {
        return Err(CliError::usage(format!("qubits must lie in [3, 8], got {qubits}")));
    }
    Ok(())
}

/// Measures and bounds one state.
pub fn check_state(
    psi: &PureState<f64>,
    kind: MeasureKind,
    mode: Mode,
    x: (f64, f64),
    policy: KPolicy,
    roof: &RoofConfig,
) -> Result<(f64, BoundReport<f64>)> {
    let order = party_order(psi.register())?;
    let values = collect_values(psi, kind, &order, roof)?;
    let k = resolve_k(policy, &values, x.1)?;
    let p = params_for(mode, x.0, x.1, k)?;
    Ok((k, evaluate_bounds(&values, &p, mode)?))
}

/// One sampling campaign: which bound to check on which states.
#[derive(Clone, Debug)]
pub struct Campaign {
    pub kind: MeasureKind,
    pub mode: Mode,
    /// `(α, γ)` or `(β, δ)`.
    pub x: (f64, f64),
    pub policy: KPolicy,
    pub qubits: usize,
    pub seed: u64,
    pub roof: RoofConfig,
}

impl Campaign {
    /// Samples `range` in parallel; outcomes come back in sample order.
    pub fn run(&self, range: std::ops::Range<u64>) -> Result<Vec<SampleOutcome>> {
        range
            .into_par_iter()
            .map(|sample| {
                let state = campaign_state(self.seed, sample, self.qubits)?;
                let (k, report) = check_state(&state, self.kind, self.mode, self.x, self.policy, &self.roof)?;
                Ok(SampleOutcome {
                    sample,
                    k,
                    report,
                    state,
                })
            })
            .collect()
    }
}

fn run_lemmas(args: &FuzzArgs) -> Result<Outcome> {
    let mut manifest = RunManifest::new("fuzz", args, Some(args.seed))?;
    let summaries = [Lemma::First, Lemma::Second]
        .par_iter()
        .map(|&l| run_lemma::<f64>(l, &lemma_grid(l)))
        .collect::<qmono_core::Result<Vec<_>>>()?;
    let counts = Counts {
        checked: summaries.iter().map(|s| s.checked).sum(),
        condition_held: summaries.iter().map(|s| s.checked).sum(),
        violations: summaries.iter().map(|s| s.violations).sum(),
    };
    let doc = json!({
        "schema": crate::output::SCHEMA,
        "command": "fuzz",
        "mode": "lemma",
        "counts": counts,
        "lemmas": summaries,
    });
    manifest.write(&args.out, &to_json(&doc)?)?;
    manifest.finish(&manifest_path_for(&args.out))?;
    Ok(Outcome {
        violations: counts.violations,
    })
}

pub fn run(args: &FuzzArgs) -> Result<Outcome> {
    let mode = match args.mode {
        FuzzMode::Lemma => return run_lemmas(args),
        FuzzMode::Monogamy => Mode::Monogamy,
        FuzzMode::Polygamy => Mode::Polygamy,
    };
    check_qubits(args.qubits)?;
    qmono_core::inequalities::check_mode_kind(mode, args.measure)?;
    let x = match mode {
        Mode::Monogamy => (args.alpha, args.gamma),
        Mode::Polygamy => (args.beta, args.delta),
    };
    let k0 = match args.k {
        KPolicy::Fixed(k) => k,
        _ => 1.0,
    };
    params_for(mode, x.0, x.1, k0)?;
    let roof = RoofConfig {
        restarts: args.restarts,
        seed: args.seed,
        ..RoofConfig::default()
    };
    roof.validate()?;
    let mut manifest = RunManifest::new("fuzz", args, Some(args.seed))?;

    let campaign = Campaign {
        kind: args.measure,
        mode,
        x,
        policy: args.k,
        qubits: args.qubits,
        seed: args.seed,
        roof,
    };
    let outcomes = campaign.run(0..args.n as u64)?;
    let mut counts = Counts::default();
    let mut worst: Option<f64> = None;
    let mut witnesses = Vec::new();
    for o in &outcomes {
        counts.checked += 1;
        if o.report.condition_holds {
            counts.condition_held += 1;
            worst = Some(worst.map_or(o.report.margin, |w: f64| w.min(o.report.margin)));
        }
        if o.is_violation() {
            counts.violations += 1;
            witnesses.push(Witness {
                sample: o.sample,
                register: o.state.register().labels().to_vec(),
                amplitudes: witness_amplitudes(&o.state),
                report: o.report.clone(),
            });
        }
    }
    let doc = json!({
        "schema": crate::output::SCHEMA,
        "command": "fuzz",
        "mode": mode,
        "measure": args.measure,
        "qubits": args.qubits,
        "seed": args.seed,
        "parameters": { "x1": x.0, "x2": x.1, "k": args.k },
        "margin_slack": MARGIN_SLACK,
        "counts": counts,
        "worst_margin": worst,
        "witnesses": witnesses,
    });
    manifest.write(&args.out, &to_json(&doc)?)?;
    manifest.finish(&manifest_path_for(&args.out))?;
    Ok(Outcome {
        violations: counts.violations,
    })
}
