//! Brute-force convex and concave roofs over pure-state decompositions.
//!
//! Decompositions of `ρ = Σ w_i |e_i⟩⟨e_i|` are parameterized by an `m × m`
//! unitary `U`: member `j` is `ψ̃_j = Σ_i U_{ji} √w_i |e_i⟩` with weight
//! `‖ψ̃_j‖²`. The optimizer hill-climbs over `U` with small random unitary
//! steps and restarts from Haar-random points.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{clip_psd, eigh, haar_unitary, CMatrix};
use crate::measures::{MeasureKind, PureKernel};
use crate::random::seeded_rng;
use crate::scalar::Real;
use crate::state::{Bipartition, DensityMatrix, PureState, SplitPlan};

/// Max-entry error allowed between an ensemble and its target.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
pub const UNITARY_TOL: f64 = 1e-10;
/// Largest target rank the optimizer accepts.
pub const MAX_ROOF_RANK: usize = 16;

const INITIAL_STEP: f64 = 0.3;
const STEP_GROW: f64 = 1.3;
const STEP_SHRINK: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Min,
    Max,
}

impl Direction {
    /// The roof direction that defines `kind` on mixed states.
    pub fn for_kind(kind: MeasureKind) -> Self {
        if kind.is_assisted() {
            Direction::Max
        } else {
            Direction::Min
        }
    }

    fn better<T: Real>(self, candidate: T, incumbent: T) -> bool {
        match self {
            Direction::Min => candidate < incumbent,
            Direction::Max => candidate > incumbent,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoofConfig {
    /// Decomposition size `m`; `None` means twice the target rank.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    /// Step size below which a restart is considered converged; also the
    /// slack used when comparing optima.
    pub tol: f64,
    pub seed: u64,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 16,
            max_iters: 2000,
            tol: 1e-4,
            seed: 0,
        }
    }
}

impl RoofConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Domain("restarts must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!("tol must be positive, got {}", self.tol)));
        }
        if self.ensemble_size == Some(0) {
            return Err(Error::Domain("ensemble size must be positive".into()));
        }
        Ok(())
    }

    fn size_for(&self, rank: usize) -> Result<usize> {
        let m = self.ensemble_size.unwrap_or(2 * rank).max(1);
        if m < rank {
            return Err(Error::EnsembleTooSmall { size: m, rank });
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble<T> {
    pub weights: Vec<T>,
    pub members: Vec<PureState<T>>,
}

impl<T: Real> Ensemble<T> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ p_i |ψ_i⟩⟨ψ_i|`
    pub fn reconstruct(&self) -> CMatrix<T> {
        let d = self.members.first().map_or(0, |m| m.amplitudes().len());
        let mut out = CMatrix::zeros(d, d);
        for (&p, m) in self.weights.iter().zip(&self.members) {
            out.add_scaled_outer(p, m.amplitudes());
        }
        out
    }

    /// `Σ p_i f(ψ_i)` with `f` the pure kernel behind `kind` (unsquared).
    pub fn average(&self, kind: MeasureKind, cut: &Bipartition) -> Result<T> {
        let kernel = PureKernel::for_kind(kind);
        let mut acc = T::zero();
        for (&p, m) in self.weights.iter().zip(&self.members) {
            let plan = member_plan(m, cut)?;
            acc = acc + p * kernel.eval(m.amplitudes(), T::one(), &plan)?;
        }
        Ok(acc)
    }

    /// The roof objective for `kind`: the average, squared for SCREN-type
    /// measures.
    pub fn objective(&self, kind: MeasureKind, cut: &Bipartition) -> Result<T> {
        let avg = self.average(kind, cut)?;
        Ok(if kind.is_squared_roof() { avg * avg } else { avg })
    }
}

fn member_plan<T: Real>(psi: &PureState<T>, cut: &Bipartition) -> Result<SplitPlan> {
    let keep = cut.smaller_side_positions(psi.register())?;
    Ok(SplitPlan::new(psi.register().count(), &keep))
}

/// Eigen-decomposition of the target with negligible eigenvalues dropped:
/// the columns are `√w_i |e_i⟩`.
struct Factor<T> {
    columns: Vec<Vec<Complex<T>>>,
}

impl<T: Real> Factor<T> {
    fn of(rho: &DensityMatrix<T>) -> Result<Self> {
        let e = eigh(rho.entries())?;
        let values = clip_psd(&e.values)?;
        let cutoff = T::epsilon() * T::lit(64.0) * values[0].max(T::one());
        let columns = (0..values.len())
            .filter(|&i| values[i] > cutoff)
            .map(|i| {
                let s = values[i].sqrt();
                e.vectors.column(i).into_iter().map(|z| z * s).collect()
            })
            .collect();
        Ok(Self { columns })
    }

    fn rank(&self) -> usize {
        self.columns.len()
    }

    /// `Σ_i row_i · column_i`
    fn combine(&self, row: &[Complex<T>]) -> Vec<Complex<T>> {
        let d = self.columns.first().map_or(0, |c| c.len());
        let mut out = vec![Complex::new(T::zero(), T::zero()); d];
        for (u, col) in row.iter().zip(&self.columns) {
            for (o, &c) in out.iter_mut().zip(col) {
                *o = *o + *u * c;
            }
        }
        out
    }
}

/// Numerical rank used by the roof (eigenvalues below `64ε·max(1, λ_max)`
/// are treated as zero).
pub fn roof_rank<T: Real>(rho: &DensityMatrix<T>) -> Result<usize> {
    Ok(Factor::of(rho)?.rank())
}

fn norm_sqr<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn ensemble_from_members<T: Real>(rho: &DensityMatrix<T>, raw: Vec<Vec<Complex<T>>>) -> Result<Ensemble<T>> {
    let floor = T::min_positive_value().sqrt();
    let mut weights = Vec::with_capacity(raw.len());
    let mut members = Vec::with_capacity(raw.len());
    for v in raw {
        let p = norm_sqr(&v);
        if p <= floor {
            continue;
        }
        let s = T::one() / p.sqrt();
        weights.push(p);
        members.push(PureState::from_parts_unchecked(
            rho.register().clone(),
            v.into_iter().map(|z| z * s).collect(),
        ));
    }
    let ens = Ensemble { weights, members };
    let err = ens.reconstruct().max_abs_diff(rho.entries());
    if !(err <= T::tol(RECONSTRUCTION_TOL)) {
        return Err(Error::Reconstruction(err.as_f64()));
    }
    Ok(ens)
}

/// The decomposition of `rho` selected by the unitary `mixing` (`m × m`,
/// `m ≥ rank`). Zero-weight members are dropped.
pub fn enumerate_ensemble<T: Real>(rho: &DensityMatrix<T>, mixing: &CMatrix<T>) -> Result<Ensemble<T>> {
    if !mixing.is_square() {
        return Err(Error::DimensionMismatch {
            expected: mixing.rows(),
            got: mixing.cols(),
        });
    }
    let defect = mixing.unitarity_defect();
    if !(defect <= T::tol(UNITARY_TOL)) {
        return Err(Error::NotUnitary(defect.as_f64()));
    }
    let factor = Factor::of(rho)?;
    let m = mixing.rows();
    if m < factor.rank() {
        return Err(Error::EnsembleTooSmall {
            size: m,
            rank: factor.rank(),
        });
    }
    let raw = (0..m)
        .map(|j| {
            let row: Vec<_> = (0..factor.rank()).map(|i| mixing[(j, i)]).collect();
            factor.combine(&row)
        })
        .collect();
    ensemble_from_members(rho, raw)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoofResult<T> {
    /// Best objective over all restarts.
    pub value: T,
    pub best: Ensemble<T>,
    /// `|best − third best|` over restarts (or best − worst with fewer than
    /// three restarts).
    pub spread: T,
    /// Final objective of each restart, in restart order.
    pub restart_values: Vec<T>,
    pub ensemble_size: usize,
    pub rank: usize,
}

/// One hill-climbing run: tracks the mixing unitary, the unnormalized
/// members and their contributions `p_j f(ψ_j)`.
struct Climber<'a, T> {
    kernel: PureKernel,
    plan: &'a SplitPlan,
    mixing: CMatrix<T>,
    members: Vec<Vec<Complex<T>>>,
    contrib: Vec<T>,
}

impl<'a, T: Real> Climber<'a, T> {
    fn new(factor: &Factor<T>, mixing: CMatrix<T>, kernel: PureKernel, plan: &'a SplitPlan) -> Result<Self> {
        let r = factor.rank();
        let members: Vec<_> = (0..mixing.rows())
            .map(|j| {
                let row: Vec<_> = (0..r).map(|i| mixing[(j, i)]).collect();
                factor.combine(&row)
            })
            .collect();
        let mut c = Self {
            kernel,
            plan,
            mixing,
            members,
            contrib: Vec::new(),
        };
        c.contrib = c.members.iter().map(|v| c.contribution(v)).collect::<Result<_>>()?;
        Ok(c)
    }

    fn contribution(&self, v: &[Complex<T>]) -> Result<T> {
        let p = norm_sqr(v);
        if p <= T::min_positive_value().sqrt() {
            return Ok(T::zero());
        }
        Ok(p * self.kernel.eval(v, p, self.plan)?)
    }

    fn total(&self) -> T {
        self.contrib.iter().copied().sum()
    }

    /// Tries `G` on members `(a, b)`; keeps it if the objective improves.
    fn try_move(&mut self, a: usize, b: usize, g: Su2<T>, dir: Direction) -> Result<bool> {
        let mix = |x: &[Complex<T>], y: &[Complex<T>], c0: Complex<T>, c1: Complex<T>| -> Vec<Complex<T>> {
            x.iter().zip(y).map(|(&u, &v)| c0 * u + c1 * v).collect()
        };
        let na = mix(&self.members[a], &self.members[b], g[0][0], g[0][1]);
        let nb = mix(&self.members[a], &self.members[b], g[1][0], g[1][1]);
        let (ca, cb) = (self.contribution(&na)?, self.contribution(&nb)?);
        let before = self.contrib[a] + self.contrib[b];
        if !dir.better(ca + cb, before) {
            return Ok(false);
        }
        self.members[a] = na;
        self.members[b] = nb;
        self.contrib[a] = ca;
        self.contrib[b] = cb;
        let m = self.mixing.cols();
        for k in 0..m {
            let (x, y) = (self.mixing[(a, k)], self.mixing[(b, k)]);
            self.mixing[(a, k)] = g[0][0] * x + g[0][1] * y;
            self.mixing[(b, k)] = g[1][0] * x + g[1][1] * y;
        }
        Ok(true)
    }
}

/// `exp(iεH)` for a random traceless Hermitian `H` with unit Frobenius norm,
/// and its inverse.
/// A 2×2 unitary acting on a pair of members.
type Su2<T> = [[Complex<T>; 2]; 2];

fn random_su2<T: Real, R: Rng + ?Sized>(eps: T, rng: &mut R) -> (Su2<T>, Su2<T>) {
    let h: [f64; 3] = [
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    ];
    let r = (h[0] * h[0] + h[1] * h[1] + h[2] * h[2]).sqrt().max(f64::MIN_POSITIVE);
    // ‖H‖_F = √2·|h| for H = h·σ
    let n = [h[0] / r, h[1] / r, h[2] / r].map(|x| T::lit(x));
    let theta = eps * T::FRAC_1_SQRT_2();
    let (s, c) = theta.sin_cos();
    let z = |re: T, im: T| Complex::new(re, im);
    // cos θ I + i sin θ (n·σ)
    let g = [
        [z(c, s * n[2]), z(s * n[1], s * n[0])],
        [z(-s * n[1], s * n[0]), z(c, -s * n[2])],
    ];
    let inv = [[g[0][0].conj(), g[1][0].conj()], [g[0][1].conj(), g[1][1].conj()]];
    (g, inv)
}

fn climb<T: Real>(
    factor: &Factor<T>,
    plan: &SplitPlan,
    kernel: PureKernel,
    dir: Direction,
    m: usize,
    restart: usize,
    cfg: &RoofConfig,
) -> Result<(T, CMatrix<T>)> {
    let mut rng = seeded_rng(cfg.seed, restart as u64);
    let start = if restart == 0 {
        CMatrix::identity(m)
    } else {
        haar_unitary(m, &mut rng)
    };
    let mut c = Climber::new(factor, start, kernel, plan)?;
    if m < 2 {
        return Ok((c.total(), c.mixing));
    }
    let tol = T::lit(cfg.tol);
    let mut eps = T::lit(INITIAL_STEP);
    for _ in 0..cfg.max_iters {
        if eps < tol {
            break;
        }
        let a = rng.gen_range(0..m);
        let mut b = rng.gen_range(0..m - 1);
        if b >= a {
            b += 1;
        }
        let (g, inv) = random_su2(eps, &mut rng);
        let accepted = c.try_move(a, b, g, dir)? || c.try_move(a, b, inv, dir)?;
        eps = if accepted {
            (eps * T::lit(STEP_GROW)).min(T::PI())
        } else {
            eps * T::lit(STEP_SHRINK)
        };
    }
    // fresh sum, no incremental drift
    let total = c.members.iter().map(|v| c.contribution(v)).sum::<Result<T>>()?;
    Ok((total, c.mixing))
}

/// Best decomposition average of `kind` on `cut` in the given direction.
///
/// For SCREN-type measures the average negativity is optimized and the
/// result squared.
pub fn optimize_roof<T: Real>(
    rho: &DensityMatrix<T>,
    kind: MeasureKind,
    direction: Direction,
    cut: &Bipartition,
    cfg: &RoofConfig,
) -> Result<RoofResult<T>> {
    cfg.validate()?;
    let factor = Factor::of(rho)?;
    let rank = factor.rank();
    if rank > MAX_ROOF_RANK {
        return Err(Error::RoofTooLarge {
            rank,
            limit: MAX_ROOF_RANK,
        });
    }
    let m = cfg.size_for(rank)?;
    let keep = cut.smaller_side_positions(rho.register())?;
    let plan = SplitPlan::new(rho.register().count(), &keep);
    let kernel = PureKernel::for_kind(kind);

    let mut runs = Vec::with_capacity(cfg.restarts);
    for restart in 0..cfg.restarts {
        runs.push(climb(&factor, &plan, kernel, direction, m, restart, cfg)?);
    }
    let finish = |v: T| if kind.is_squared_roof() { v * v } else { v };
    let restart_values: Vec<T> = runs.iter().map(|(v, _)| finish(*v)).collect();

    let mut order: Vec<usize> = (0..runs.len()).collect();
    order.sort_by(|&i, &j| {
        let (x, y) = (restart_values[i], restart_values[j]);
        let o = x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal);
        match direction {
            Direction::Min => o,
            Direction::Max => o.reverse(),
        }
    });
    let best_idx = order[0];
    let third = order[order.len().min(3) - 1];
    let best = enumerate_ensemble(rho, &runs[best_idx].1)?;
    let value = best.objective(kind, cut)?;
    if (value - restart_values[best_idx]).abs() > T::lit(cfg.tol) {
        return Err(Error::Reconstruction((value - restart_values[best_idx]).as_f64()));
    }
    Ok(RoofResult {
        value,
        best,
        spread: (restart_values[best_idx] - restart_values[third]).abs(),
        restart_values,
        ensemble_size: m,
        rank,
    })
}

/// Result of re-running the roof with a larger decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct CardinalityCheck<T> {
    pub base: RoofResult<T>,
    pub raised: RoofResult<T>,
    /// Set when the larger decomposition moved the optimum by more than
    /// `cfg.tol`.
    pub flagged: bool,
}

/// Runs the roof at the configured size and again at `rank²` (at least one
/// more than the base size).
pub fn check_cardinality<T: Real>(
    rho: &DensityMatrix<T>,
    kind: MeasureKind,
    direction: Direction,
    cut: &Bipartition,
    cfg: &RoofConfig,
) -> Result<CardinalityCheck<T>> {
    let base = optimize_roof(rho, kind, direction, cut, cfg)?;
    let raised_size = (base.rank * base.rank).max(base.ensemble_size + 1);
    let raised_cfg = RoofConfig {
        ensemble_size: Some(raised_size),
        ..*cfg
    };
    let raised = optimize_roof(rho, kind, direction, cut, &raised_cfg)?;
    let flagged = (raised.value - base.value).abs() > T::lit(cfg.tol);
    Ok(CardinalityCheck { base, raised, flagged })
}
