//! Dense complex matrices and the cyclic Jacobi Hermitian eigensolver.
//!
//! Dimensions here never exceed a few hundred, so everything is a plain
//! row-major `Vec` with no blocking or BLAS.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Off-diagonal Frobenius norm (relative to the matrix norm) at which a
/// Jacobi sweep is considered converged.
pub const JACOBI_THRESHOLD: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Largest tolerated `max |h - h†|` for eigensolver input.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Negative eigenvalues above `-PSD_TOL` are treated as roundoff and clipped.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    /// `|v⟩⟨w|`
    pub fn outer(v: &[Complex<T>], w: &[Complex<T>]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn add_scaled_outer(&mut self, weight: T, v: &[Complex<T>]) {
        for i in 0..self.rows {
            let vi = v[i] * weight;
            for j in 0..self.cols {
                let idx = i * self.cols + j;
                self.data[idx] = self.data[idx] + vi * v[j].conj();
            }
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(row) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// `max |h - h†|` entrywise.
    pub fn hermitian_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `max |U†U - I|` entrywise.
    pub fn unitarity_defect(&self) -> T {
        let g = self.adjoint().matmul(self);
        g.max_abs_diff(&Self::identity(self.cols))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    /// Re-orthonormalizes the columns in place (modified Gram–Schmidt).
    pub fn orthonormalize_columns(&mut self) {
        let n = self.rows;
        for j in 0..self.cols {
            for p in 0..j {
                let mut dot = Complex::new(T::zero(), T::zero());
                for i in 0..n {
                    dot = dot + self[(i, p)].conj() * self[(i, j)];
                }
                for i in 0..n {
                    let v = self[(i, p)] * dot;
                    self[(i, j)] = self[(i, j)] - v;
                }
            }
            let norm = (0..n).map(|i| self[(i, j)].norm_sqr()).sum::<T>().sqrt();
            if norm > T::zero() {
                for i in 0..n {
                    self[(i, j)] = self[(i, j)] / norm;
                }
            }
        }
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn mul(self, rhs: Self) -> CMatrix<T> {
        self.matmul(rhs)
    }
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Eigh<T> {
    /// Eigenvalues, sorted descending.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: CMatrix<T>,
}

impl<T: Real> Eigh<T> {
    /// `V f(diag(w)) V†`
    pub fn map(&self, f: impl Fn(T) -> Complex<T>) -> CMatrix<T> {
        let n = self.values.len();
        let fw: Vec<Complex<T>> = self.values.iter().map(|&w| f(w)).collect();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    acc = acc + self.vectors[(i, k)] * fw[k] * self.vectors[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix<T> {
        self.map(|w| Complex::new(w, T::zero()))
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eigh<T: Real>(h: &CMatrix<T>) -> Result<Eigh<T>> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            got: h.cols(),
        });
    }
    let asym = h.hermitian_asymmetry();
    if asym > T::tol(HERMITIAN_TOL) {
        return Err(Error::NotHermitian(asym.as_f64()));
    }
    let n = h.rows();
    let half = T::lit(0.5);
    let mut a = CMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * half);
    let mut v = CMatrix::identity(n);
    let threshold = T::tol(JACOBI_THRESHOLD) * a.frobenius_norm().max(T::one());

    let off_norm = |a: &CMatrix<T>| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s + a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        if off_norm(&a) <= threshold {
            converged = true;
            break;
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                // Phase-rotate to a real symmetric 2x2 problem, then apply the
                // classic real Jacobi rotation.
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (T::lit(2.0) * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let e = phase.conj();
                // J = [[c, s], [-s e, c e]] on (p, q); A <- J† A J, V <- V J
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * e * s;
                    a[(k, q)] = akp * s + akq * e * c;
                }
                let ec = e.conj();
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * ec * s;
                    a[(q, k)] = apk * s + aqk * ec * c;
                }
                a[(p, q)] = Complex::new(T::zero(), T::zero());
                a[(q, p)] = Complex::new(T::zero(), T::zero());
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * e * s;
                    v[(k, q)] = vkp * s + vkq * e * c;
                }
            }
        }
    }
    if !converged {
        let off = off_norm(&a);
        if off > threshold {
            return Err(Error::NoConvergence {
                sweeps,
                off: off.as_f64(),
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Eigh { values, vectors })
}

/// Clips eigenvalues in `[-PSD_TOL, 0)` to zero; anything lower is an error.
pub fn clip_psd<T: Real>(values: &[T]) -> Result<Vec<T>> {
    let tol = T::tol(PSD_TOL);
    values
        .iter()
        .map(|&w| {
            if w >= T::zero() {
                Ok(w)
            } else if w >= -tol {
                Ok(T::zero())
            } else {
                Err(Error::NotPsd(w.as_f64()))
            }
        })
        .collect()
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
pub fn sqrt_psd<T: Real>(h: &CMatrix<T>) -> Result<CMatrix<T>> {
    let mut e = eigh(h)?;
    e.values = clip_psd(&e.values)?;
    Ok(e.map(|w| Complex::new(w.sqrt(), T::zero())))
}

/// Singular values in descending order by one-sided (Hestenes) Jacobi.
///
/// Small singular values keep high relative accuracy, which squaring into
/// `A†A` would destroy.
pub fn singular_values<T: Real>(a: &CMatrix<T>) -> Result<Vec<T>> {
    if a.cols() > a.rows() {
        return singular_values(&a.adjoint());
    }
    let (rows, n) = (a.rows(), a.cols());
    let floor = {
        let f = a.frobenius_norm() * T::epsilon();
        f * f
    };
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| a.column(j)).collect();
    let dot = |x: &[Complex<T>], y: &[Complex<T>]| -> Complex<T> {
        x.iter()
            .zip(y)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (p, q)| acc + p.conj() * q)
    };
    let eps = T::epsilon();
    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        converged = true;
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: T = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: T = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let g = dot(&cols[p], &cols[q]);
                let gabs = g.norm();
                if gabs <= eps * (alpha * beta).sqrt() || alpha.min(beta) <= floor {
                    continue;
                }
                converged = false;
                // rotate the phase of column q so the overlap is real
                let phase = g.conj() / gabs;
                for z in cols[q].iter_mut() {
                    *z = *z * phase;
                }
                let zeta = (beta - alpha) / (T::lit(2.0) * gabs);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (x, y) = (cols[p][i], cols[q][i]);
                    cols[p][i] = x * c - y * s;
                    cols[q][i] = x * s + y * c;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps, off: f64::NAN });
    }
    let mut out: Vec<T> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt())
        .collect();
    out.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

/// `exp(i·eps·H)` for Hermitian `H`.
pub fn expm_i_hermitian<T: Real>(h: &CMatrix<T>, eps: T) -> Result<CMatrix<T>> {
    let e = eigh(h)?;
    Ok(e.map(|w| Complex::from_polar(T::one(), eps * w)))
}

#[inline]
pub(crate) fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Random Hermitian matrix with unit Frobenius norm (GUE direction).
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    let mut h = CMatrix::zeros(n, n);
    for i in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        h[(i, i)] = Complex::new(T::lit(d), T::zero());
        for j in i + 1..n {
            let z = complex_normal::<T, R>(rng) * T::FRAC_1_SQRT_2();
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    let norm = h.frobenius_norm();
    if norm > T::zero() {
        h.scale(T::one() / norm)
    } else {
        h
    }
}

/// Haar-distributed unitary via Gram–Schmidt on a complex Ginibre matrix.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    let mut g = CMatrix::from_fn(n, n, |_, _| complex_normal::<T, R>(rng));
    g.orthonormalize_columns();
    g
}
