//! Acceptance run: one PASS/FAIL line per criterion with its wall time.
//!
//! Runs without the libtest harness so the lines always reach stdout; exits
//! non-zero when any criterion fails.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use qmono_cli::commands::example1::{self, Example1Args};
use qmono_cli::commands::example3::{self, Example3Args};
use qmono_cli::commands::fuzz::{campaign_state, Campaign, SampleOutcome};
use qmono_cli::commands::sweep::{self, SweepArgs};
use qmono_cli::spec::KPolicy;
use qmono_core::inequalities::{
    collect_values, evaluate_bounds, lemma_grid, max_admissible_k, monogamy_bound_tripartite, prior_bound_zhu,
    run_lemma, Lemma, StateValues, MARGIN_SLACK,
};
use qmono_core::measures::{concurrence_of_assistance, concurrence_two_qubit_mixed};
use qmono_core::{
    optimize_roof, random_mixed, Bipartition, BoundParams, Direction, MeasureKind, Mode, QubitRegister, RoofConfig,
};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::Value;

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn read_json(p: &Path) -> std::result::Result<Value, String> {
    serde_json::from_str(&fs::read_to_string(p).map_err(err)?).map_err(err)
}

/// Rows of a CSV written by the tool, keyed by header name.
struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn read(p: &Path) -> std::result::Result<Self, String> {
        let text = fs::read_to_string(p).map_err(err)?;
        let mut lines = text.lines();
        let comment = lines.next().ok_or("empty csv")?;
        ensure!(comment.starts_with("# "), "missing schema comment in {}", p.display());
        let header = lines.next().ok_or("no header")?.split(',').map(String::from).collect();
        let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
        Ok(Self { header, rows })
    }

    fn col(&self, name: &str) -> usize {
        self.header.iter().position(|h| h == name).expect("column")
    }

    fn f(&self, row: &[String], name: &str) -> f64 {
        row[self.col(name)].parse().expect("number")
    }

    fn b(&self, row: &[String], name: &str) -> bool {
        row[self.col(name)] == "true"
    }
}

fn approx(v: &Value, path: &[&str]) -> f64 {
    let mut cur = v;
    for p in path {
        cur = &cur[*p];
    }
    cur.as_f64().unwrap_or(f64::NAN)
}

fn c1_schmidt_concurrences() -> Check {
    let dir = tempfile::tempdir().map_err(err)?;
    example1::run(&Example1Args {
        out: dir.path().to_path_buf(),
    })
    .map_err(err)?;
    let v = read_json(&dir.path().join("values.json"))?;
    let expect = [
        ("C_A|BC", 21f64.sqrt() / 6.0),
        ("C_AB", 6f64.sqrt() / 6.0),
        ("C_AC", 0.5),
    ];
    let mut worst = 0f64;
    for (key, e) in expect {
        let got = approx(&v, &["values", key, "value"]);
        ensure!((got - e).abs() <= 1e-10, "{key} = {got}, expected {e}");
        worst = worst.max((got - e).abs());
    }
    ensure!((approx(&v, &["k"]) - 6f64.sqrt() / 2.0).abs() < 1e-15, "k not √6/2");
    Ok(format!("max |error| {worst:.1e}"))
}

fn c2_coefficient_gap_surface() -> Check {
    let dir = tempfile::tempdir().map_err(err)?;
    example1::run(&Example1Args {
        out: dir.path().to_path_buf(),
    })
    .map_err(err)?;
    let csv = Csv::read(&dir.path().join("fig2.csv"))?;
    let k = 6f64.sqrt() / 2.0;
    let (mut diagonal, mut alpha_zero, mut positive) = (0, 0, 0);
    let mut max_dev = 0f64;
    for r in &csv.rows {
        let (a, g, z) = (csv.f(r, "alpha"), csv.f(r, "gamma"), csv.f(r, "z"));
        // direct evaluation of the definition
        let x = a / g;
        let reference = (((1.0 + k).powf(x) - 1.0) / k.powf(x) - (2f64.powf(x) - 1.0)) * 0.5f64.powf(a);
        max_dev = max_dev.max((z - reference).abs());
        ensure!((z - reference).abs() <= 1e-12, "z({a}, {g}) = {z}, direct {reference}");
        if a == g {
            diagonal += 1;
            ensure!(z.abs() <= 1e-12, "z({a}, {g}) = {z} on the diagonal");
        } else if a == 0.0 {
            alpha_zero += 1;
            ensure!(z.abs() <= 1e-12, "z(0, {g}) = {z}");
        } else {
            ensure!(z > 0.0, "z({a}, {g}) = {z} not positive");
            positive += 1;
        }
    }
    ensure!(csv.rows.len() == 101 * 61, "grid has {} points", csv.rows.len());
    ensure!(diagonal == 1, "expected one diagonal point, found {diagonal}");
    let fig1 = Csv::read(&dir.path().join("fig1.csv"))?;
    let row = fig1
        .rows
        .iter()
        .find(|r| fig1.f(r, "alpha") == 2.0 && fig1.f(r, "gamma") == 2.0)
        .ok_or("fig1 lacks (2, 2)")?;
    let ckw = 1.0 / 6.0 + 0.25;
    ensure!(
        (fig1.f(row, "bound_new") - ckw).abs() < 1e-12 && (fig1.f(row, "bound_zhu") - ckw).abs() < 1e-12,
        "fig1 (2, 2) bounds differ from C_AB² + C_AC²"
    );
    Ok(format!(
        "{} points: {positive} with z > 0, {diagonal} on α = γ, {alpha_zero} at α = 0 (z = 0); max dev from direct {max_dev:.1e}",
        csv.rows.len()
    ))
}

fn c3_w_class_values() -> Check {
    let dir = tempfile::tempdir().map_err(err)?;
    example3::run(&Example3Args {
        out: dir.path().to_path_buf(),
        k: KPolicy::AutoMax,
        seed: 0,
        restarts: 16,
    })
    .map_err(err)?;
    let v = read_json(&dir.path().join("values.json"))?;
    let mut oracle_worst = 0f64;
    for (key, e) in [("N_a_A|B1B2", 0.75), ("N_a_AB1", 0.25), ("N_a_AB2", 0.5)] {
        let cf = approx(&v, &["values", key, "closed_form"]);
        let or = approx(&v, &["values", key, "oracle"]);
        ensure!((cf - e).abs() <= 1e-10, "{key} closed form {cf}, expected {e}");
        ensure!((or - e).abs() <= 5e-3, "{key} oracle {or}, expected {e}");
        oracle_worst = oracle_worst.max((or - e).abs());
    }
    let csv = Csv::read(&dir.path().join("fig3.csv"))?;
    let mut held = 0;
    for r in &csv.rows {
        let beta = csv.f(r, "beta");
        let lhs = csv.f(r, "lhs");
        ensure!((lhs - 0.75f64.powf(beta)).abs() < 1e-12, "lhs at β = {beta} is {lhs}");
        if csv.b(r, "condition_holds") {
            held += 1;
            let bound = csv.f(r, "bound_new");
            ensure!(lhs <= bound + 1e-9, "fig3 ({beta}, {}) lhs {lhs} > bound {bound}", r[1]);
        }
    }
    ensure!(csv.rows.len() == 61 * 50, "fig3 has {} rows", csv.rows.len());
    Ok(format!(
        "oracle max |error| {oracle_worst:.1e}; fig3 condition held at {held}/{} points",
        csv.rows.len()
    ))
}

fn c4_lemmas() -> Check {
    let mut parts = Vec::new();
    for lemma in [Lemma::First, Lemma::Second] {
        let s = run_lemma::<f64>(lemma, &lemma_grid(lemma)).map_err(err)?;
        ensure!(
            s.violations == 0,
            "{lemma:?}: {} violations, first {:?}",
            s.violations,
            s.first_violation
        );
        parts.push(format!("{lemma:?}: {} points, min slack {:.1e}", s.checked, s.worst));
    }
    Ok(parts.join("; "))
}

const FUZZ_SEED: u64 = 2024;
const FUZZ_N: u64 = 10_000;

fn samples(
    kind: MeasureKind,
    mode: Mode,
    x: (f64, f64),
    policy: KPolicy,
    qubits: usize,
    range: std::ops::Range<u64>,
) -> std::result::Result<Vec<SampleOutcome>, String> {
    Campaign {
        kind,
        mode,
        x,
        policy,
        qubits,
        seed: FUZZ_SEED,
        roof: RoofConfig::default(),
    }
    .run(range)
    .map_err(err)
}

fn c5_base_relations() -> Check {
    let mono = samples(
        MeasureKind::Concurrence,
        Mode::Monogamy,
        (2.0, 2.0),
        KPolicy::Unit,
        3,
        0..FUZZ_N,
    )?;
    let poly = samples(
        MeasureKind::Screnoa,
        Mode::Polygamy,
        (1.0, 1.0),
        KPolicy::Unit,
        3,
        0..FUZZ_N,
    )?;
    let mut worst = (f64::INFINITY, f64::INFINITY);
    for o in &mono {
        // C²_{A|BC} − C²_AB − C²_AC from the raw inputs
        let v: Vec<f64> = o.report.inputs.iter().map(|i| i.value).collect();
        let gap = v[0] * v[0] - v[1] * v[1] - v[2] * v[2];
        ensure!(gap >= -1e-9, "CKW fails on sample {}: {gap}", o.sample);
        ensure!(
            (gap - o.report.margin).abs() < 1e-12,
            "sample {} margin mismatch",
            o.sample
        );
        worst.0 = worst.0.min(gap);
    }
    for o in &poly {
        let v: Vec<f64> = o.report.inputs.iter().map(|i| i.value).collect();
        let gap = v[1] + v[2] - v[0];
        ensure!(gap >= -1e-9, "N_a base fails on sample {}: {gap}", o.sample);
        worst.1 = worst.1.min(gap);
    }
    Ok(format!(
        "{FUZZ_N} states; min CKW gap {:.2e}, min N_a gap {:.2e}",
        worst.0, worst.1
    ))
}

fn c6_tripartite_bound_fuzz() -> Check {
    let order = ["A", "B1", "B2"];
    let cfg = RoofConfig::default();
    let values: Vec<(StateValues<f64>, StateValues<f64>)> = (0..FUZZ_N)
        .into_par_iter()
        .map(|i| {
            let psi = campaign_state(FUZZ_SEED, i, 3).map_err(err)?;
            Ok((
                collect_values(&psi, MeasureKind::Concurrence, &order, &cfg).map_err(err)?,
                collect_values(&psi, MeasureKind::Screnoa, &order, &cfg).map_err(err)?,
            ))
        })
        .collect::<std::result::Result<_, String>>()?;
    let mut rng = rand::rngs::StdRng::seed_from_u64(6);
    let mut tuples = Vec::new();
    for _ in 0..20 {
        let gamma = rng.gen_range(2.0..5.0);
        let alpha = rng.gen_range(0.0..=gamma);
        tuples.push((
            Mode::Monogamy,
            BoundParams::monogamy(alpha, gamma, rng.gen_range(1.0..4.0)).map_err(err)?,
        ));
    }
    for _ in 0..20 {
        let delta = rng.gen_range(0.05..=1.0);
        let beta = rng.gen_range(delta..4.0);
        tuples.push((
            Mode::Polygamy,
            BoundParams::polygamy(beta, delta, rng.gen_range(1.0..4.0)).map_err(err)?,
        ));
    }
    let results: Vec<(usize, usize)> = tuples
        .par_iter()
        .map(|(mode, p)| {
            let mut held = 0;
            let mut bad = 0;
            for (c, n) in &values {
                let v = if *mode == Mode::Monogamy { c } else { n };
                let r = evaluate_bounds(v, p, *mode).map_err(err)?;
                held += r.condition_holds as usize;
                bad += r.is_violation(MARGIN_SLACK) as usize;
            }
            Ok((held, bad))
        })
        .collect::<std::result::Result<_, String>>()?;
    for ((mode, p), (_, bad)) in tuples.iter().zip(&results) {
        ensure!(*bad == 0, "{bad} violations for {mode} {p:?}");
    }
    let held: usize = results.iter().map(|r| r.0).sum();
    Ok(format!(
        "40 parameter tuples × {FUZZ_N} states; condition held in {held} of {} evaluations, 0 violations",
        40 * FUZZ_N
    ))
}

fn c7_tightness() -> Check {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let (mut min_gap, mut max_eq, mut max_sat) = (f64::INFINITY, 0f64, 0f64);
    let mut strict = 0;
    for i in 0..1000 {
        let (a, b): (f64, f64) = (rng.gen_range(0.1..1.0), rng.gen_range(0.1..1.0));
        let (q_ab, q_ac) = (a.min(b), a.max(b));
        let gamma = rng.gen_range(2.0..5.0);
        // every tenth tuple on the diagonal α = γ
        let alpha = if i % 10 == 0 {
            gamma
        } else {
            gamma * rng.gen_range(0.02..0.98)
        };
        let km = max_admissible_k(q_ab, q_ac, gamma).map_err(err)?;
        ensure!(km.value > 1.0, "tuple {i}: k_max = {}", km.value);
        let p = BoundParams::monogamy(alpha, gamma, km.value).map_err(err)?;
        let r = monogamy_bound_tripartite(1.0, q_ab, q_ac, &p).map_err(err)?;
        let zhu = prior_bound_zhu(q_ab, q_ac, alpha, gamma);
        if alpha < gamma {
            ensure!(r.bound_new - zhu > 1e-12, "tuple {i}: gap {}", r.bound_new - zhu);
            min_gap = min_gap.min(r.bound_new - zhu);
            strict += 1;
        } else {
            ensure!(
                (r.bound_new - zhu).abs() <= 1e-12,
                "tuple {i}: diagonal gap {}",
                r.bound_new - zhu
            );
            max_eq = max_eq.max((r.bound_new - zhu).abs());
        }
        let sat = (q_ab.powf(gamma) + q_ac.powf(gamma)).powf(alpha / gamma);
        ensure!(
            (r.bound_new - sat).abs() <= 1e-9,
            "tuple {i}: saturation off by {}",
            r.bound_new - sat
        );
        max_sat = max_sat.max((r.bound_new - sat).abs());
    }
    Ok(format!(
        "{strict} strict tuples, min gap {min_gap:.2e}; diagonal max |gap| {max_eq:.1e}; saturation max dev {max_sat:.1e}"
    ))
}

fn c8_oracle() -> Check {
    let reg = QubitRegister::standard(2).map_err(err)?;
    let cfg = RoofConfig::default();
    let errs: Vec<(f64, f64)> = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let rank = 1 + (i % 4) as usize;
            let rho = random_mixed::<f64>(reg.clone(), rank, 1000 + i).map_err(err)?;
            let cut = Bipartition::first_vs_rest(&reg).map_err(err)?;
            let c = concurrence_two_qubit_mixed(&rho).map_err(err)?.value;
            let ca = concurrence_of_assistance(&rho).map_err(err)?.value;
            let lo = optimize_roof(&rho, MeasureKind::Concurrence, Direction::Min, &cut, &cfg).map_err(err)?;
            let hi = optimize_roof(&rho, MeasureKind::Negativity, Direction::Max, &cut, &cfg).map_err(err)?;
            Ok(((lo.value - c).abs(), (hi.value * hi.value - ca * ca).abs()))
        })
        .collect::<std::result::Result<_, String>>()?;
    let (mut e1, mut e2) = (0f64, 0f64);
    for (i, (a, b)) in errs.iter().enumerate() {
        ensure!(*a <= 5e-3, "state {i}: |oracle_min(C) − Wootters| = {a}");
        ensure!(*b <= 5e-3, "state {i}: |oracle_max(N)² − CoA²| = {b}");
        e1 = e1.max(*a);
        e2 = e2.max(*b);
    }
    Ok(format!("200 states; max errors {e1:.2e} (min C), {e2:.2e} (max N²)"))
}

/// Samples 4-qubit states in batches until `target` of them satisfy the
/// chain conditions; returns (accepted, violations among them, drawn).
fn chain_campaign(
    kind: MeasureKind,
    mode: Mode,
    x: (f64, f64),
    policy: KPolicy,
    target: usize,
) -> std::result::Result<(usize, usize, u64), String> {
    let (mut accepted, mut bad, mut drawn) = (0, 0, 0u64);
    while accepted < target && drawn < 40_000 {
        let batch = samples(kind, mode, x, policy, 4, drawn..drawn + 500)?;
        drawn += 500;
        for o in batch.iter().filter(|o| o.report.condition_holds) {
            if accepted == target {
                break;
            }
            accepted += 1;
            bad += o.is_violation() as usize;
        }
    }
    Ok((accepted, bad, drawn))
}

fn c9_chain() -> Check {
    let mono = chain_campaign(
        MeasureKind::Concurrence,
        Mode::Monogamy,
        (1.5, 2.0),
        KPolicy::Fixed(1.2),
        1000,
    )?;
    let poly = chain_campaign(MeasureKind::Screnoa, Mode::Polygamy, (1.5, 1.0), KPolicy::AutoMax, 1000)?;
    ensure!(mono.0 == 1000, "monogamy: only {} accepted of {} drawn", mono.0, mono.2);
    ensure!(poly.0 == 1000, "polygamy: only {} accepted of {} drawn", poly.0, poly.2);
    ensure!(mono.1 == 0, "monogamy chain: {} violations", mono.1);
    ensure!(poly.1 == 0, "polygamy chain: {} violations", poly.1);
    Ok(format!(
        "monogamy 1000 accepted of {} drawn, polygamy 1000 of {}; 0 violations",
        mono.2, poly.2
    ))
}

fn without_timestamp(p: &Path) -> std::result::Result<Value, String> {
    let mut v = read_json(p)?;
    v.as_object_mut()
        .ok_or("manifest is not an object")?
        .remove("timestamp");
    Ok(v)
}

/// Runs `f` twice on the same output path, once with one worker and once
/// with four, and compares the files it names.
fn twice<F>(files: &[&Path], manifest: &Path, f: F) -> std::result::Result<(), String>
where
    F: Fn() -> qmono_cli::Result<qmono_cli::Outcome> + Sync,
{
    let mut runs = Vec::new();
    for threads in [1, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(err)?;
        pool.install(&f).map_err(err)?;
        let bytes: Vec<Vec<u8>> = files
            .iter()
            .map(|p| fs::read(p).map_err(err))
            .collect::<std::result::Result<_, _>>()?;
        runs.push((bytes, without_timestamp(manifest)?));
        for p in files {
            fs::remove_file(p).map_err(err)?;
        }
    }
    ensure!(runs[0].1 == runs[1].1, "manifests differ beyond the timestamp");
    for (i, p) in files.iter().enumerate() {
        ensure!(runs[0].0[i] == runs[1].0[i], "{} differs between runs", p.display());
    }
    Ok(())
}

fn c10_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(err)?;
    let e1 = dir.path().join("e1");
    let args = Example1Args { out: e1.clone() };
    twice(
        &[&e1.join("fig1.csv"), &e1.join("fig2.csv"), &e1.join("values.json")],
        &e1.join("manifest.json"),
        || example1::run(&args),
    )?;
    let mut checked = 3;
    for (state, x1, x2, k) in [
        ("gsd", "0:2:0.02", "2:5:0.05", "1.224744871391589"),
        ("random:7", "0:2:0.05", "2:5:0.1", "auto"),
        ("random:11:4", "0:2:0.25", "2:3:0.5", "auto"),
        ("w", "1:4:0.1", "0.1:1:0.1", "auto"),
    ] {
        let out = dir.path().join(format!("{}.csv", state.replace(':', "_")));
        let args = SweepArgs {
            state: state.parse().map_err(err)?,
            measure: if state == "w" {
                MeasureKind::Screnoa
            } else {
                MeasureKind::Concurrence
            },
            x1: x1.parse().map_err(err)?,
            x2: x2.parse().map_err(err)?,
            k: k.parse().map_err(err)?,
            seed: 3,
            restarts: 4,
            out: out.clone(),
        };
        let manifest = qmono_cli::output::manifest_path_for(&out);
        twice(&[&out], &manifest, || sweep::run(&args))?;
        checked += 1;
    }
    Ok(format!(
        "{checked} outputs byte-identical across reruns with 1 and 4 workers"
    ))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "generalized Schmidt state concurrences",
            limit: Some(Duration::from_secs(1)),
            run: c1_schmidt_concurrences,
        },
        Criterion {
            id: 2,
            name: "coefficient gap surface (fig2.csv)",
            limit: Some(Duration::from_secs(5)),
            run: c2_coefficient_gap_surface,
        },
        Criterion {
            id: 3,
            name: "W-class SCRENoA values and polygamy surface (fig3.csv)",
            limit: Some(Duration::from_secs(60)),
            run: c3_w_class_values,
        },
        Criterion {
            id: 4,
            name: "lemma grids",
            limit: Some(Duration::from_secs(2)),
            run: c4_lemmas,
        },
        Criterion {
            id: 5,
            name: "base relations on 10^4 Haar states",
            limit: Some(Duration::from_secs(30)),
            run: c5_base_relations,
        },
        Criterion {
            id: 6,
            name: "tripartite bound fuzz",
            limit: Some(Duration::from_secs(180)),
            run: c6_tripartite_bound_fuzz,
        },
        Criterion {
            id: 7,
            name: "tightness and saturation",
            limit: None,
            run: c7_tightness,
        },
        Criterion {
            id: 8,
            name: "convex-roof oracle equivalence",
            limit: Some(Duration::from_secs(600)),
            run: c8_oracle,
        },
        Criterion {
            id: 9,
            name: "four-qubit chain bounds",
            limit: None,
            run: c9_chain,
        },
        Criterion {
            id: 10,
            name: "determinism",
            limit: None,
            run: c10_determinism,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took longer than {l:?}")),
            (r, _) => r,
        };
        let limit = c.limit.map(|l| format!(", limit {l:?}")).unwrap_or_default();
        match result {
            Ok(detail) => println!(
                "PASS [{:>2}] {} ({:.3}s{limit}): {detail}",
                c.id,
                c.name,
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "FAIL [{:>2}] {} ({:.3}s{limit}): {why}",
                    c.id,
                    c.name,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
