//! Closed-form bipartite correlation measures.
//!
//! Pure-state measures work on any cut of a pure register. Mixed-state
//! closed forms (Wootters concurrence, concurrence of assistance and their
//! derivatives) are only defined for two-qubit inputs; larger mixed inputs go
//! through [`crate::roof`].
//!
//! Negativity uses the unnormalized convention `N(ρ) = ‖ρ^{T_A}‖₁ − 1`, so a
//! two-qubit pure state has `N = C`.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{clip_psd, eigh, singular_values, CMatrix};
use crate::scalar::Real;
use crate::state::{Bipartition, DensityMatrix, PureState, SplitPlan};

/// Raw values this far outside `[0, ceiling]` are reported as errors rather
/// than clipped.
pub const RANGE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Concurrence,
    ConcurrenceOfAssistance,
    Negativity,
    Scren,
    Screnoa,
    EntanglementOfFormation,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 6] = [
        MeasureKind::Concurrence,
        MeasureKind::ConcurrenceOfAssistance,
        MeasureKind::Negativity,
        MeasureKind::Scren,
        MeasureKind::Screnoa,
        MeasureKind::EntanglementOfFormation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Concurrence => "concurrence",
            MeasureKind::ConcurrenceOfAssistance => "coa",
            MeasureKind::Negativity => "negativity",
            MeasureKind::Scren => "scren",
            MeasureKind::Screnoa => "screnoa",
            MeasureKind::EntanglementOfFormation => "eof",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.to_ascii_lowercase();
        Self::ALL.into_iter().find(|k| k.name() == s).or(match s.as_str() {
            "c" => Some(MeasureKind::Concurrence),
            "ca" | "concurrence_of_assistance" => Some(MeasureKind::ConcurrenceOfAssistance),
            "n" => Some(MeasureKind::Negativity),
            "nsc" => Some(MeasureKind::Scren),
            "na" => Some(MeasureKind::Screnoa),
            "ef" | "entanglement_of_formation" => Some(MeasureKind::EntanglementOfFormation),
            _ => None,
        })
    }

    /// Assisted measures are roof maxima; the rest are roof minima.
    pub fn is_assisted(self) -> bool {
        matches!(self, MeasureKind::ConcurrenceOfAssistance | MeasureKind::Screnoa)
    }

    /// Roof measures defined as the square of an averaged negativity.
    pub fn is_squared_roof(self) -> bool {
        matches!(self, MeasureKind::Scren | MeasureKind::Screnoa)
    }

    /// Largest value on a cut whose smaller side has dimension `d`.
    pub fn ceiling<T: Real>(self, d: usize) -> T {
        let d = T::lit(d as f64);
        match self {
            MeasureKind::Concurrence | MeasureKind::ConcurrenceOfAssistance => {
                (T::lit(2.0) * (d - T::one()) / d).sqrt()
            }
            MeasureKind::Negativity => d - T::one(),
            MeasureKind::Scren | MeasureKind::Screnoa => (d - T::one()) * (d - T::one()),
            MeasureKind::EntanglementOfFormation => d.log2(),
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputClass {
    PureCut,
    TwoQubitMixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue<T> {
    pub kind: MeasureKind,
    /// Clipped to `[0, ceiling]`.
    pub value: T,
    /// The formula's value before ceiling clipping.
    pub raw: T,
    pub input_class: InputClass,
}

fn finish<T: Real>(kind: MeasureKind, class: InputClass, raw: T, ceiling: T) -> Result<MeasureValue<T>> {
    let tol = T::tol(RANGE_TOL);
    if !(raw >= -tol && raw <= ceiling + tol) {
        return Err(Error::OutOfRange {
            kind: kind.name(),
            value: raw.as_f64(),
            ceiling: ceiling.as_f64(),
        });
    }
    Ok(MeasureValue {
        kind,
        value: raw.max(T::zero()).min(ceiling),
        raw,
        input_class: class,
    })
}

/// `−p log₂ p − (1−p) log₂(1−p)` with `0 log 0 = 0`.
pub fn binary_entropy<T: Real>(p: T) -> T {
    let term = |x: T| if x > T::zero() { -x * x.log2() } else { T::zero() };
    term(p) + term(T::one() - p)
}

/// Base-2 von Neumann entropy of a spectrum.
fn spectrum_entropy<T: Real>(values: &[T]) -> T {
    values.iter().filter(|&&w| w > T::zero()).map(|&w| -w * w.log2()).sum()
}

/// The three pure-state quantities the measures are built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum PureKernel {
    /// √(2(1 − Tr ρ_A²))
    Concurrence,
    /// (Tr √ρ_A)² − 1
    Negativity,
    /// S(ρ_A)
    Entropy,
}

impl PureKernel {
    pub fn for_kind(kind: MeasureKind) -> Self {
        match kind {
            MeasureKind::Concurrence | MeasureKind::ConcurrenceOfAssistance => PureKernel::Concurrence,
            MeasureKind::Negativity | MeasureKind::Scren | MeasureKind::Screnoa => PureKernel::Negativity,
            MeasureKind::EntanglementOfFormation => PureKernel::Entropy,
        }
    }

    /// Evaluates the kernel on `amps / √weight` where `weight = ‖amps‖²`;
    /// `plan` keeps the smaller side of the cut. Returns the unclipped value.
    pub fn eval<T: Real>(self, amps: &[Complex<T>], weight: T, plan: &SplitPlan) -> Result<T> {
        if plan.keep_base.len() == 2 && self != PureKernel::Entropy {
            // 2 √det ρ_A without forming the matrix
            let (b0, b1) = (plan.keep_base[0], plan.keep_base[1]);
            let (mut a, mut d) = (T::zero(), T::zero());
            let mut x = Complex::new(T::zero(), T::zero());
            for &t in &plan.trace_offset {
                let (u, v) = (amps[b0 | t], amps[b1 | t]);
                a = a + u.norm_sqr();
                d = d + v.norm_sqr();
                x = x + u * v.conj();
            }
            let det = (a * d - x.norm_sqr()).max(T::zero());
            return Ok(T::lit(2.0) * det.sqrt() / weight);
        }
        let red = plan.reduce_pure(amps).scale(T::one() / weight);
        self.eval_reduced(&red)
    }

    pub fn eval_reduced<T: Real>(self, red: &CMatrix<T>) -> Result<T> {
        let tol = T::tol(RANGE_TOL);
        if red.rows() == 2 {
            // Single-qubit side: everything follows from det ρ_A.
            let det = (red[(0, 0)].re * red[(1, 1)].re - red[(0, 1)].norm_sqr()).max(T::zero());
            let tr = red[(0, 0)].re + red[(1, 1)].re;
            return Ok(match self {
                PureKernel::Concurrence | PureKernel::Negativity => T::lit(2.0) * det.sqrt(),
                PureKernel::Entropy => {
                    let disc = (tr * tr - T::lit(4.0) * det).max(T::zero()).sqrt();
                    let l1 = (tr + disc) * T::lit(0.5);
                    spectrum_entropy(&[l1, tr - l1])
                }
            });
        }
        match self {
            PureKernel::Concurrence => {
                let purity: T = red.as_slice().iter().map(|z| z.norm_sqr()).sum();
                let s = T::lit(2.0) * (T::one() - purity);
                if s < -tol {
                    return Err(Error::OutOfRange {
                        kind: "concurrence",
                        value: s.as_f64(),
                        ceiling: 2.0,
                    });
                }
                Ok(s.max(T::zero()).sqrt())
            }
            PureKernel::Negativity => {
                let spec = clip_psd(&eigh(red)?.values)?;
                let root_sum: T = spec.iter().map(|w| w.sqrt()).sum();
                Ok(root_sum * root_sum - T::one())
            }
            PureKernel::Entropy => Ok(spectrum_entropy(&clip_psd(&eigh(red)?.values)?)),
        }
    }
}

fn pure_plan<T: Real>(psi: &PureState<T>, cut: &Bipartition) -> Result<SplitPlan> {
    let keep = cut.smaller_side_positions(psi.register())?;
    Ok(SplitPlan::new(psi.register().count(), &keep))
}

fn pure_kernel_value<T: Real>(psi: &PureState<T>, cut: &Bipartition, kernel: PureKernel) -> Result<T> {
    let plan = pure_plan(psi, cut)?;
    kernel.eval_reduced(&plan.reduce_pure(psi.amplitudes()))
}

/// `C(|ψ⟩) = √(2[1 − Tr ρ_A²])`
pub fn concurrence_pure<T: Real>(psi: &PureState<T>, cut: &Bipartition) -> Result<MeasureValue<T>> {
    let raw = pure_kernel_value(psi, cut, PureKernel::Concurrence)?;
    let kind = MeasureKind::Concurrence;
    finish(kind, InputClass::PureCut, raw, kind.ceiling(cut.min_dim()))
}

/// `N(|ψ⟩) = 2 Σ_{i<j} √(λ_i λ_j) = (Tr √ρ_A)² − 1`
pub fn negativity_pure<T: Real>(psi: &PureState<T>, cut: &Bipartition) -> Result<MeasureValue<T>> {
    let raw = pure_kernel_value(psi, cut, PureKernel::Negativity)?;
    let kind = MeasureKind::Negativity;
    finish(kind, InputClass::PureCut, raw, kind.ceiling(cut.min_dim()))
}

/// Squared negativity; on pure states SCREN and SCRENoA coincide with it.
pub fn scren_pure<T: Real>(psi: &PureState<T>, cut: &Bipartition) -> Result<MeasureValue<T>> {
    let n = negativity_pure(psi, cut)?;
    let kind = MeasureKind::Scren;
    finish(kind, InputClass::PureCut, n.raw * n.raw, kind.ceiling(cut.min_dim()))
}

/// Entanglement entropy of the cut, the pure-state value of E_f.
pub fn eof_pure<T: Real>(psi: &PureState<T>, cut: &Bipartition) -> Result<MeasureValue<T>> {
    let raw = pure_kernel_value(psi, cut, PureKernel::Entropy)?;
    let kind = MeasureKind::EntanglementOfFormation;
    finish(kind, InputClass::PureCut, raw, kind.ceiling(cut.min_dim()))
}

/// Any measure on a pure-state cut.
pub fn evaluate_pure<T: Real>(kind: MeasureKind, psi: &PureState<T>, cut: &Bipartition) -> Result<MeasureValue<T>> {
    let v = match kind {
        MeasureKind::Concurrence | MeasureKind::ConcurrenceOfAssistance => concurrence_pure(psi, cut)?,
        MeasureKind::Negativity => negativity_pure(psi, cut)?,
        MeasureKind::Scren | MeasureKind::Screnoa => scren_pure(psi, cut)?,
        MeasureKind::EntanglementOfFormation => eof_pure(psi, cut)?,
    };
    Ok(MeasureValue { kind, ..v })
}

fn require_two_qubit<T: Real>(rho: &DensityMatrix<T>, kind: &'static str) -> Result<()> {
    let q = rho.register().count();
    if q != 2 {
        return Err(Error::NotTwoQubit { kind, qubits: q });
    }
    Ok(())
}

/// `√μ_i` in descending order, `μ_i` the eigenvalues of `ρ (Y⊗Y) ρ* (Y⊗Y)`.
///
/// Computed as the singular values of `τ = Wᵀ (Y⊗Y) W` for a factor
/// `ρ = W W†`, which keeps the vanishing roots of rank-deficient inputs at
/// roundoff level instead of its square root.
pub fn spin_flip_roots<T: Real>(rho: &DensityMatrix<T>) -> Result<[T; 4]> {
    require_two_qubit(rho, "spin-flip spectrum")?;
    let e = eigh(rho.entries())?;
    let values = clip_psd(&e.values)?;
    let cutoff = T::epsilon() * T::lit(64.0) * values[0].max(T::one());
    let kept: Vec<usize> = (0..4).filter(|&i| values[i] > cutoff).collect();
    let w = CMatrix::from_fn(4, kept.len(), |i, j| e.vectors[(i, kept[j])] * values[kept[j]].sqrt());
    // (Y⊗Y) is real anti-diagonal with signs (-1, 1, 1, -1).
    let sign = [-T::one(), T::one(), T::one(), -T::one()];
    let yw = CMatrix::from_fn(4, kept.len(), |i, j| w[(3 - i, j)] * sign[i]);
    let tau = w.transpose().matmul(&yw);
    let sv = singular_values(&tau)?;
    let mut out = [T::zero(); 4];
    for (o, s) in out.iter_mut().zip(sv) {
        *o = s;
    }
    Ok(out)
}

/// Wootters concurrence `max(0, √μ1 − √μ2 − √μ3 − √μ4)`.
pub fn concurrence_two_qubit_mixed<T: Real>(rho: &DensityMatrix<T>) -> Result<MeasureValue<T>> {
    require_two_qubit(rho, "concurrence")?;
    let r = spin_flip_roots(rho)?;
    let raw = (r[0] - r[1] - r[2] - r[3]).max(T::zero());
    finish(MeasureKind::Concurrence, InputClass::TwoQubitMixed, raw, T::one())
}

/// `C_a = Σ √μ_i`
pub fn concurrence_of_assistance<T: Real>(rho: &DensityMatrix<T>) -> Result<MeasureValue<T>> {
    require_two_qubit(rho, "concurrence of assistance")?;
    let r = spin_flip_roots(rho)?;
    let raw = r.iter().copied().sum();
    finish(
        MeasureKind::ConcurrenceOfAssistance,
        InputClass::TwoQubitMixed,
        raw,
        T::one(),
    )
}

/// `‖ρ^{T_A}‖₁ − 1`, transposing side A of `cut`.
pub fn negativity<T: Real>(rho: &DensityMatrix<T>, cut: &Bipartition) -> Result<MeasureValue<T>> {
    cut.check_against(rho.register())?;
    let raw = rho.partial_transpose(cut.side_a())?.trace_norm()? - T::one();
    let class = if rho.register().count() == 2 {
        InputClass::TwoQubitMixed
    } else {
        InputClass::PureCut
    };
    let kind = MeasureKind::Negativity;
    finish(kind, class, raw, kind.ceiling(cut.min_dim()))
}

/// Two-qubit SCREN: the negativity roof equals the concurrence roof, so
/// this is `C²`.
pub fn scren_two_qubit<T: Real>(rho: &DensityMatrix<T>) -> Result<MeasureValue<T>> {
    let c = concurrence_two_qubit_mixed(rho)?;
    finish(MeasureKind::Scren, InputClass::TwoQubitMixed, c.raw * c.raw, T::one())
}

/// Two-qubit SCRENoA `= C_a²`.
pub fn screnoa_two_qubit<T: Real>(rho: &DensityMatrix<T>) -> Result<MeasureValue<T>> {
    let ca = concurrence_of_assistance(rho)?;
    finish(
        MeasureKind::Screnoa,
        InputClass::TwoQubitMixed,
        ca.raw * ca.raw,
        T::one(),
    )
}

/// `E_f = h((1 + √(1 − C²))/2)`
pub fn eof_two_qubit<T: Real>(rho: &DensityMatrix<T>) -> Result<MeasureValue<T>> {
    let c = concurrence_two_qubit_mixed(rho)?.value;
    let x = (T::one() + (T::one() - c * c).max(T::zero()).sqrt()) * T::lit(0.5);
    finish(
        MeasureKind::EntanglementOfFormation,
        InputClass::TwoQubitMixed,
        binary_entropy(x),
        T::one(),
    )
}

/// Any measure on a two-qubit mixed state (cut between the two qubits).
pub fn evaluate_two_qubit<T: Real>(kind: MeasureKind, rho: &DensityMatrix<T>) -> Result<MeasureValue<T>> {
    match kind {
        MeasureKind::Concurrence => concurrence_two_qubit_mixed(rho),
        MeasureKind::ConcurrenceOfAssistance => concurrence_of_assistance(rho),
        MeasureKind::Negativity => {
            require_two_qubit(rho, "negativity")?;
            negativity(rho, &Bipartition::first_vs_rest(rho.register())?)
        }
        MeasureKind::Scren => scren_two_qubit(rho),
        MeasureKind::Screnoa => screnoa_two_qubit(rho),
        MeasureKind::EntanglementOfFormation => eof_two_qubit(rho),
    }
}
