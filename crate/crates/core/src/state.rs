//! Qubit registers, pure and mixed states, and the subsystem operations on
//! them.
//!
//! Basis ordering: index `i` of a register with labels `(q_0, …, q_{N-1})`
//! encodes `|q_0 q_1 … q_{N-1}⟩` with `q_0` as the most significant bit.

use std::fmt::Write as _;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{clip_psd, eigh, CMatrix, PSD_TOL};
use crate::scalar::Real;

/// Normalization and trace tolerance for state invariants.
pub const STATE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QubitRegister {
    labels: Vec<String>,
}

impl QubitRegister {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyRegister);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// `A, B1, …, B_{n-1}`.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        Self::new(std::iter::once("A".to_string()).chain((1..n).map(|i| format!("B{i}"))))
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Positions of `labels`, in register order, rejecting unknown labels.
    pub fn positions_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut pos = labels
            .iter()
            .map(|l| {
                self.position(l.as_ref())
                    .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        pos.sort_unstable();
        pos.dedup();
        Ok(pos)
    }

    fn sub_register(&self, positions: &[usize]) -> Self {
        Self {
            labels: positions.iter().map(|&p| self.labels[p].clone()).collect(),
        }
    }

    /// Bit mask (in basis-index space) of the qubits at `positions`.
    pub(crate) fn mask(&self, positions: &[usize]) -> usize {
        let n = self.count();
        positions.iter().fold(0, |m, &p| m | (1 << (n - 1 - p)))
    }

    pub fn bitstring(&self, index: usize) -> String {
        let n = self.count();
        (0..n)
            .map(|p| if index >> (n - 1 - p) & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

/// Precomputed index maps for splitting a register into kept and traced
/// qubits: full index = `keep_base[i] | trace_offset[t]`.
#[derive(Clone, Debug)]
pub(crate) struct SplitPlan {
    pub keep_base: Vec<usize>,
    pub trace_offset: Vec<usize>,
}

impl SplitPlan {
    pub fn new(n: usize, keep: &[usize]) -> Self {
        let traced: Vec<usize> = (0..n).filter(|p| !keep.contains(p)).collect();
        Self {
            keep_base: scatter_all(n, keep),
            trace_offset: scatter_all(n, &traced),
        }
    }

    /// Reduced density matrix of an (unnormalized) amplitude vector.
    pub fn reduce_pure<T: Real>(&self, amps: &[Complex<T>]) -> CMatrix<T> {
        let d = self.keep_base.len();
        let mut out = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let mut acc = Complex::new(T::zero(), T::zero());
                for &t in &self.trace_offset {
                    acc = acc + amps[self.keep_base[i] | t] * amps[self.keep_base[j] | t].conj();
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        out
    }

    pub fn reduce_mixed<T: Real>(&self, m: &CMatrix<T>) -> CMatrix<T> {
        let d = self.keep_base.len();
        CMatrix::from_fn(d, d, |i, j| {
            self.trace_offset
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, &t| {
                    acc + m[(self.keep_base[i] | t, self.keep_base[j] | t)]
                })
        })
    }
}

/// For every assignment of the qubits at `positions` (first position most
/// significant), the corresponding bit pattern in an `n`-qubit index.
fn scatter_all(n: usize, positions: &[usize]) -> Vec<usize> {
    let k = positions.len();
    (0..1usize << k)
        .map(|local| {
            positions.iter().enumerate().fold(0, |acc, (b, &p)| {
                if local >> (k - 1 - b) & 1 == 1 {
                    acc | (1 << (n - 1 - p))
                } else {
                    acc
                }
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T> {
    register: QubitRegister,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    pub fn new(register: QubitRegister, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != register.dim() {
            return Err(Error::DimensionMismatch {
                expected: register.dim(),
                got: amplitudes.len(),
            });
        }
        let norm: T = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - T::one()).abs() > T::tol(STATE_TOL) {
            return Err(Error::NotNormalized(norm.as_f64()));
        }
        Ok(Self { register, amplitudes })
    }

    /// Rescales to unit norm; rejects the zero vector.
    pub fn normalized(register: QubitRegister, mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm: T = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::zero()) {
            return Err(Error::NotNormalized(0.0));
        }
        for a in &mut amplitudes {
            *a = *a / norm;
        }
        Self::new(register, amplitudes)
    }

    pub fn from_real(register: QubitRegister, amplitudes: &[f64]) -> Result<Self> {
        Self::new(
            register,
            amplitudes.iter().map(|&a| Complex::new(T::lit(a), T::zero())).collect(),
        )
    }

    pub fn basis(register: QubitRegister, index: usize) -> Result<Self> {
        let dim = register.dim();
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: index,
            });
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self {
            register,
            amplitudes: amps,
        })
    }

    pub(crate) fn from_parts_unchecked(register: QubitRegister, amplitudes: Vec<Complex<T>>) -> Self {
        Self { register, amplitudes }
    }

    pub fn register(&self) -> &QubitRegister {
        &self.register
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Kronecker product; the combined register lists `self` first.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        for l in other.register.labels() {
            if self.register.position(l).is_some() {
                return Err(Error::OverlappingLabels(l.clone()));
            }
        }
        let register = QubitRegister {
            labels: self
                .register
                .labels
                .iter()
                .chain(other.register.labels.iter())
                .cloned()
                .collect(),
        };
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(Self { register, amplitudes })
    }

    /// `|ψ⟩⟨ψ|`
    pub fn to_density(&self) -> DensityMatrix<T> {
        DensityMatrix {
            register: self.register.clone(),
            entries: CMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }

    /// Reduced state on `keep` without forming the full projector.
    pub fn reduced<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix<T>> {
        if keep.is_empty() {
            return Err(Error::EmptyRegister);
        }
        let pos = self.register.positions_of(keep)?;
        let plan = SplitPlan::new(self.register.count(), &pos);
        Ok(DensityMatrix {
            register: self.register.sub_register(&pos),
            entries: plan.reduce_pure(&self.amplitudes),
        })
    }

    /// Applies a single-qubit unitary (2x2, row-major) to the qubit `label`.
    pub fn apply_local(&self, label: &str, u: &CMatrix<T>) -> Result<Self> {
        let p = self
            .register
            .position(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        if u.rows() != 2 || u.cols() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: u.rows(),
            });
        }
        let bit = 1 << (self.register.count() - 1 - p);
        let mut out = self.amplitudes.clone();
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[i | bit];
                out[i] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
                out[i | bit] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
            }
        }
        Ok(Self {
            register: self.register.clone(),
            amplitudes: out,
        })
    }

    /// Debug dump: `basis_index,bitstring,re,im`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("basis_index,bitstring,re,im\n");
        for (i, a) in self.amplitudes.iter().enumerate() {
            let _ = writeln!(
                s,
                "{},{},{:.16e},{:.16e}",
                i,
                self.register.bitstring(i),
                a.re.as_f64(),
                a.im.as_f64()
            );
        }
        s
    }
}

/// A register together with a square operator on it (used for partial
/// transposes, which are Hermitian but not necessarily positive).
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T> {
    pub register: QubitRegister,
    pub matrix: CMatrix<T>,
}

impl<T: Real> Operator<T> {
    pub fn partial_transpose<S: AsRef<str>>(&self, subsystem: &[S]) -> Result<Self> {
        if subsystem.is_empty() {
            return Err(Error::EmptyRegister);
        }
        let pos = self.register.positions_of(subsystem)?;
        let mask = self.register.mask(&pos);
        let m = &self.matrix;
        let matrix = CMatrix::from_fn(m.rows(), m.cols(), |i, j| {
            let i2 = (i & !mask) | (j & mask);
            let j2 = (j & !mask) | (i & mask);
            m[(i2, j2)]
        });
        Ok(Self {
            register: self.register.clone(),
            matrix,
        })
    }

    /// Sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> Result<T> {
        Ok(eigh(&self.matrix)?.values.iter().map(|w| w.abs()).sum())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    register: QubitRegister,
    entries: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(register: QubitRegister, entries: CMatrix<T>) -> Result<Self> {
        if entries.rows() != register.dim() || !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: register.dim(),
                got: entries.rows(),
            });
        }
        let rho = Self { register, entries };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_parts_unchecked(register: QubitRegister, entries: CMatrix<T>) -> Self {
        Self { register, entries }
    }

    pub fn validate(&self) -> Result<()> {
        let asym = self.entries.hermitian_asymmetry();
        if asym > T::tol(STATE_TOL) {
            return Err(Error::NotHermitian(asym.as_f64()));
        }
        let tr = self.entries.trace();
        if (tr.re - T::one()).abs() > T::tol(STATE_TOL) || tr.im.abs() > T::tol(STATE_TOL) {
            return Err(Error::InvalidTrace(tr.re.as_f64()));
        }
        let e = eigh(&self.entries)?;
        if let Some(&min) = e.values.last() {
            if min < -T::tol(PSD_TOL) {
                return Err(Error::NotPsd(min.as_f64()));
            }
        }
        Ok(())
    }

    pub fn maximally_mixed(register: QubitRegister) -> Self {
        let d = register.dim();
        let entries = CMatrix::identity(d).scale(T::one() / T::lit(d as f64));
        Self { register, entries }
    }

    /// Convex mixture `Σ w_i ρ_i` over a common register.
    pub fn mixture(parts: &[(T, &DensityMatrix<T>)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptyRegister)?.1;
        let mut acc = CMatrix::zeros(first.dim(), first.dim());
        for (w, rho) in parts {
            if rho.register != first.register {
                return Err(Error::InvalidBipartition("mixture over different registers".into()));
            }
            acc = acc.add(&rho.entries.scale(*w));
        }
        Self::new(first.register.clone(), acc)
    }

    pub fn register(&self) -> &QubitRegister {
        &self.register
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn as_operator(&self) -> Operator<T> {
        Operator {
            register: self.register.clone(),
            matrix: self.entries.clone(),
        }
    }

    pub fn purity(&self) -> T {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ
        self.entries.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues (descending) with roundoff negatives clipped to zero.
    pub fn spectrum(&self) -> Result<Vec<T>> {
        clip_psd(&eigh(&self.entries)?.values)
    }

    /// Trace out everything except `keep`; output labels keep register order.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyRegister);
        }
        let pos = self.register.positions_of(keep)?;
        let plan = SplitPlan::new(self.register.count(), &pos);
        Ok(Self {
            register: self.register.sub_register(&pos),
            entries: plan.reduce_mixed(&self.entries),
        })
    }

    pub fn partial_transpose<S: AsRef<str>>(&self, subsystem: &[S]) -> Result<Operator<T>> {
        self.as_operator().partial_transpose(subsystem)
    }
}

/// A cut of a register into two nonempty complementary label sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    side_a: Vec<String>,
    side_b: Vec<String>,
}

impl Bipartition {
    /// `side_a` against the rest of `register`.
    pub fn new<S: AsRef<str>>(register: &QubitRegister, side_a: &[S]) -> Result<Self> {
        let pos = register.positions_of(side_a)?;
        if pos.is_empty() {
            return Err(Error::InvalidBipartition("side A is empty".into()));
        }
        if pos.len() == register.count() {
            return Err(Error::InvalidBipartition("side B is empty".into()));
        }
        let side_a = pos.iter().map(|&p| register.labels[p].clone()).collect();
        let side_b = (0..register.count())
            .filter(|p| !pos.contains(p))
            .map(|p| register.labels[p].clone())
            .collect();
        Ok(Self { side_a, side_b })
    }

    /// The first qubit against the rest.
    pub fn first_vs_rest(register: &QubitRegister) -> Result<Self> {
        Self::new(register, &register.labels()[..1])
    }

    pub fn side_a(&self) -> &[String] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[String] {
        &self.side_b
    }

    pub(crate) fn check_against(&self, register: &QubitRegister) -> Result<()> {
        let total = self.side_a.len() + self.side_b.len();
        if total != register.count() {
            return Err(Error::InvalidBipartition(format!(
                "cut covers {total} labels, register has {}",
                register.count()
            )));
        }
        register.positions_of(&self.side_a)?;
        register.positions_of(&self.side_b)?;
        Ok(())
    }

    /// Positions of the smaller side (ties go to side A).
    pub(crate) fn smaller_side_positions(&self, register: &QubitRegister) -> Result<Vec<usize>> {
        self.check_against(register)?;
        if self.side_a.len() <= self.side_b.len() {
            register.positions_of(&self.side_a)
        } else {
            register.positions_of(&self.side_b)
        }
    }

    /// Local dimension of the smaller side.
    pub fn min_dim(&self) -> usize {
        1 << self.side_a.len().min(self.side_b.len())
    }
}

pub fn tensor_product<T: Real>(a: &PureState<T>, b: &PureState<T>) -> Result<PureState<T>> {
    a.tensor(b)
}

pub fn to_density<T: Real>(s: &PureState<T>) -> DensityMatrix<T> {
    s.to_density()
}

pub fn partial_trace<T: Real, S: AsRef<str>>(rho: &DensityMatrix<T>, keep: &[S]) -> Result<DensityMatrix<T>> {
    rho.partial_trace(keep)
}

pub fn partial_transpose<T: Real, S: AsRef<str>>(rho: &DensityMatrix<T>, subsystem: &[S]) -> Result<Operator<T>> {
    rho.partial_transpose(subsystem)
}
