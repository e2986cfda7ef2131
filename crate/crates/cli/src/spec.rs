//! Parsing of state specs, grid ranges and k policies.

use std::fmt;
use std::str::FromStr;

use qmono_core::{
    bell_state, ghz_state, haar_random_pure, make_w_state, random_mixed, DensityMatrix, GsdParams, MeasureKind,
    PureState, QubitRegister,
};
use serde::Serialize;

use crate::error::{CliError, Result};

/// The register the generalized Schmidt state lives on. With the first
/// label as the most significant bit, ordering the partners (A, C, B) makes
/// the `λ1` coherence sit between A and B.
pub const GSD_REGISTER: [&str; 3] = ["A", "C", "B"];

#[derive(Clone, Debug, PartialEq)]
pub enum StateKind {
    Gsd { lambda: [f64; 5], phi: f64 },
    W,
    Ghz(usize),
    Bell,
    Random { seed: u64, qubits: usize },
    Mixed { seed: u64, rank: usize },
}

/// A catalog or seeded state, optionally reduced to some of its qubits
/// (`spec@A,B2`).
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpec {
    pub kind: StateKind,
    pub keep: Option<Vec<String>>,
    text: String,
}

pub enum Materialized {
    Pure(PureState<f64>),
    Mixed(DensityMatrix<f64>),
}

impl Materialized {
    pub fn to_density(&self) -> DensityMatrix<f64> {
        match self {
            Materialized::Pure(p) => p.to_density(),
            Materialized::Mixed(m) => m.clone(),
        }
    }

    pub fn register(&self) -> &QubitRegister {
        match self {
            Materialized::Pure(p) => p.register(),
            Materialized::Mixed(m) => m.register(),
        }
    }
}

fn bad(text: &str, why: impl fmt::Display) -> CliError {
    CliError::usage(format!("malformed state spec `{text}`: {why}"))
}

fn num<T: FromStr>(text: &str, field: &str, what: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| bad(text, format!("{what} `{field}` is not a number")))
}

impl FromStr for StateSpec {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self> {
        let (body, keep) = match text.split_once('@') {
            Some((b, k)) => {
                let labels: Vec<String> = k.split(',').map(|s| s.trim().to_string()).collect();
                if labels.iter().any(|l| l.is_empty()) {
                    return Err(bad(text, "empty label in reduction"));
                }
                (b, Some(labels))
            }
            None => (text, None),
        };
        let mut parts = body.split(':');
        let head = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        let kind = match (head, rest.as_slice()) {
            ("gsd", []) | ("gsd", ["example1"]) => {
                let p = GsdParams::<f64>::example1();
                StateKind::Gsd {
                    lambda: p.lambda,
                    phi: p.phi,
                }
            }
            ("gsd", [list]) => {
                let vals: Vec<f64> = list
                    .split(',')
                    .map(|f| num(text, f, "coefficient"))
                    .collect::<Result<_>>()?;
                let (lambda, phi) = match vals.len() {
                    5 => (&vals[..], 0.0),
                    6 => (&vals[..5], vals[5]),
                    n => {
                        return Err(bad(
                            text,
                            format!("expected five λ values and an optional φ, got {n} numbers"),
                        ))
                    }
                };
                let mut l = [0.0; 5];
                l.copy_from_slice(lambda);
                StateKind::Gsd { lambda: l, phi }
            }
            ("w", []) => StateKind::W,
            ("ghz", []) => StateKind::Ghz(3),
            ("ghz", [n]) => StateKind::Ghz(num(text, n, "qubit count")?),
            ("bell", []) => StateKind::Bell,
            ("random", [s]) => StateKind::Random {
                seed: num(text, s, "seed")?,
                qubits: 3,
            },
            ("random", [s, n]) => StateKind::Random {
                seed: num(text, s, "seed")?,
                qubits: num(text, n, "qubit count")?,
            },
            ("mixed", [s, r]) => StateKind::Mixed {
                seed: num(text, s, "seed")?,
                rank: num(text, r, "rank")?,
            },
            _ => {
                return Err(bad(
                    text,
                    "expected gsd[:λ0,…,λ4[,φ]], w, ghz[:N], bell, random:SEED[:N] or mixed:SEED:RANK",
                ))
            }
        };
        Ok(StateSpec {
            kind,
            keep,
            text: text.to_string(),
        })
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for StateSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

/// The generalized Schmidt state on [`GSD_REGISTER`].
pub fn gsd_state(p: &GsdParams<f64>) -> Result<PureState<f64>> {
    Ok(p.state_on(QubitRegister::new(GSD_REGISTER)?)?)
}

impl StateSpec {
    pub fn materialize(&self) -> Result<Materialized> {
        let state = match &self.kind {
            StateKind::Gsd { lambda, phi } => Materialized::Pure(gsd_state(&GsdParams::new(*lambda, *phi)?)?),
            StateKind::W => Materialized::Pure(make_w_state()),
            StateKind::Ghz(n) => Materialized::Pure(ghz_state(*n)?),
            StateKind::Bell => Materialized::Pure(bell_state()),
            StateKind::Random { seed, qubits } => {
                if !(2..=8).contains(qubits) {
                    return Err(bad(
                        &self.text,
                        format!("random states need 2 to 8 qubits, got {qubits}"),
                    ));
                }
                Materialized::Pure(haar_random_pure(QubitRegister::standard(*qubits)?, *seed))
            }
            StateKind::Mixed { seed, rank } => {
                Materialized::Mixed(random_mixed(QubitRegister::standard(2)?, *rank, *seed)?)
            }
        };
        match &self.keep {
            None => Ok(state),
            Some(keep) => Ok(Materialized::Mixed(state.to_density().partial_trace(keep)?)),
        }
    }

    /// The pure state, or a usage error for mixed specs.
    pub fn pure(&self) -> Result<PureState<f64>> {
        match self.materialize()? {
            Materialized::Pure(p) => Ok(p),
            Materialized::Mixed(_) => Err(CliError::usage(format!("`{}` is not a pure state", self.text))),
        }
    }
}

/// `A` first, then the remaining labels in lexicographic order.
pub fn party_order(register: &QubitRegister) -> Result<Vec<String>> {
    let labels = register.labels();
    if register.position("A").is_none() {
        return Err(CliError::usage("the register has no qubit labelled A"));
    }
    let mut rest: Vec<String> = labels.iter().filter(|l| *l != "A").cloned().collect();
    rest.sort();
    let mut order = vec!["A".to_string()];
    order.extend(rest);
    Ok(order)
}

pub fn parse_measure(s: &str) -> Result<MeasureKind> {
    MeasureKind::parse(s).ok_or_else(|| {
        CliError::usage(format!(
            "unknown measure `{s}` (concurrence, coa, negativity, scren, screnoa, eof)"
        ))
    })
}

/// `start:stop:step`, inclusive of `stop` when the steps land on it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(CliError::usage("grid bounds must be finite"));
        }
        if !(step > 0.0) {
            return Err(CliError::usage(format!("grid step must be positive, got {step}")));
        }
        if stop < start {
            return Err(CliError::usage(format!("grid stop {stop} is below start {start}")));
        }
        Ok(Self { start, stop, step })
    }

    /// `start + i·step` rounded to 12 decimals, so that e.g. `0.02·35`
    /// prints as 0.7 rather than 0.7000000000000001.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| {
                let v = self.start + i as f64 * self.step;
                (v * 1e12).round() / 1e12
            })
            .collect()
    }
}

impl FromStr for GridRange {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let f: Vec<&str> = s.split(':').collect();
        if f.len() != 3 {
            return Err(CliError::usage(format!("grid `{s}` must look like START:STOP:STEP")));
        }
        let p = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("grid `{s}`: `{x}` is not a number")))
        };
        GridRange::new(p(f[0])?, p(f[1])?, p(f[2])?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "policy", content = "value")]
pub enum KPolicy {
    Fixed(f64),
    /// The largest `k` for which the branch conditions hold at each point.
    AutoMax,
    Unit,
}

impl FromStr for KPolicy {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "auto" | "auto-max" => Ok(KPolicy::AutoMax),
            "unit" | "1" => Ok(KPolicy::Unit),
            "inf" => Ok(KPolicy::Fixed(f64::INFINITY)),
            v => {
                let k: f64 = v
                    .parse()
                    .map_err(|_| CliError::usage(format!("k `{v}` must be a number, `auto`, `unit` or `inf`")))?;
                if !(k >= 1.0) {
                    return Err(CliError::usage(format!("k must be at least 1, got {k}")));
                }
                Ok(KPolicy::Fixed(k))
            }
        }
    }
}

impl fmt::Display for KPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KPolicy::Fixed(k) => write!(f, "{k}"),
            KPolicy::AutoMax => f.write_str("auto"),
            KPolicy::Unit => f.write_str("unit"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_specs_parse() {
        let s: StateSpec = "gsd:0.5,0.4,0.4,0.5,0.4,0.1".parse().unwrap();
        assert_eq!(
            s.kind,
            StateKind::Gsd {
                lambda: [0.5, 0.4, 0.4, 0.5, 0.4],
                phi: 0.1
            }
        );
        assert_eq!("ghz:4".parse::<StateSpec>().unwrap().kind, StateKind::Ghz(4));
        assert_eq!(
            "random:7".parse::<StateSpec>().unwrap().kind,
            StateKind::Random { seed: 7, qubits: 3 }
        );
        let r: StateSpec = "w@A,B2".parse().unwrap();
        assert_eq!(r.keep, Some(vec!["A".to_string(), "B2".to_string()]));
        assert_eq!(r.to_string(), "w@A,B2");
        for bad in ["", "gsd:1,2", "random", "random:x", "mixed:1", "w@", "foo", "w:3"] {
            assert!(bad.parse::<StateSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn reduction_gives_two_qubits() {
        let r: StateSpec = "w@A,B2".parse().unwrap();
        let m = r.materialize().unwrap();
        assert_eq!(m.register().count(), 2);
        assert!(r.pure().is_err());
        assert!("mixed:3:2".parse::<StateSpec>().unwrap().pure().is_err());
        assert!("random:1:12".parse::<StateSpec>().unwrap().materialize().is_err());
    }

    #[test]
    fn gsd_order_names_pairs() {
        let psi = "gsd".parse::<StateSpec>().unwrap().pure().unwrap();
        assert_eq!(party_order(psi.register()).unwrap(), ["A", "B", "C"]);
    }

    #[test]
    fn grid_points() {
        let g: GridRange = "0:2:0.02".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 101);
        assert_eq!(p[35], 0.7);
        assert_eq!(p[100], 2.0);
        let d: GridRange = "0.02:1:0.02".parse().unwrap();
        assert_eq!(d.points().len(), 50);
        assert_eq!(*d.points().last().unwrap(), 1.0);
        assert_eq!("1:1:0.5".parse::<GridRange>().unwrap().points(), [1.0]);
        assert!("0:1:0".parse::<GridRange>().is_err());
        assert!("1:0:0.1".parse::<GridRange>().is_err());
        assert!("0:1".parse::<GridRange>().is_err());
    }

    #[test]
    fn k_policies() {
        assert_eq!("auto".parse::<KPolicy>().unwrap(), KPolicy::AutoMax);
        assert_eq!("1".parse::<KPolicy>().unwrap(), KPolicy::Unit);
        assert_eq!("1.2".parse::<KPolicy>().unwrap(), KPolicy::Fixed(1.2));
        assert_eq!("inf".parse::<KPolicy>().unwrap(), KPolicy::Fixed(f64::INFINITY));
        assert!("0.5".parse::<KPolicy>().is_err());
        assert!("lots".parse::<KPolicy>().is_err());
    }
}
