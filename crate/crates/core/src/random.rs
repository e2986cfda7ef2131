//! Seeded state generators.
//!
//! Every generator takes its randomness from an explicit [`SeedRng`]; the
//! `*_seeded` helpers derive one from `(seed, stream)` so that independent
//! shards of a campaign never share a stream.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::linalg::{complex_normal, CMatrix};
use crate::scalar::Real;
use crate::state::{DensityMatrix, PureState, QubitRegister};

/// Counter-based generator; `(seed, stream)` fully determines its output.
pub type SeedRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64, stream: u64) -> SeedRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Normalized complex Gaussian vector (unitarily invariant).
pub fn sample_haar_pure<T: Real, R: Rng + ?Sized>(register: QubitRegister, rng: &mut R) -> PureState<T> {
    loop {
        let amps: Vec<Complex<T>> = (0..register.dim()).map(|_| complex_normal(rng)).collect();
        if let Ok(s) = PureState::normalized(register.clone(), amps) {
            return s;
        }
    }
}

pub fn haar_random_pure<T: Real>(register: QubitRegister, seed: u64) -> PureState<T> {
    sample_haar_pure(register, &mut seeded_rng(seed, 0))
}

/// Mixture of `rank` Haar-random pure states with flat-Dirichlet weights.
pub fn sample_random_mixed<T: Real, R: Rng + ?Sized>(
    register: QubitRegister,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix<T>> {
    let dim = register.dim();
    if rank == 0 || rank > dim {
        return Err(Error::Domain(format!("rank {rank} outside [1, {dim}]")));
    }
    let raw: Vec<f64> = (0..rank).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let mut acc = CMatrix::zeros(dim, dim);
    for w in raw {
        let psi = sample_haar_pure::<T, R>(register.clone(), rng);
        acc.add_scaled_outer(T::lit(w / total), psi.amplitudes());
    }
    // Force exact Hermiticity; summation order can leave ulp-level asymmetry.
    let half = T::lit(0.5);
    let sym = CMatrix::from_fn(dim, dim, |i, j| (acc[(i, j)] + acc[(j, i)].conj()) * half);
    Ok(DensityMatrix::from_parts_unchecked(register, sym))
}

pub fn random_mixed<T: Real>(register: QubitRegister, rank: usize, seed: u64) -> Result<DensityMatrix<T>> {
    sample_random_mixed(register, rank, &mut seeded_rng(seed, 0))
}
