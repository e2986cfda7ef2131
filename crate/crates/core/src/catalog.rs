//! Named states used throughout the worked examples.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::{PureState, QubitRegister, STATE_TOL};

/// Five-amplitude three-qubit normal form
/// `λ0|000⟩ + λ1 e^{iφ}|100⟩ + λ2|101⟩ + λ3|110⟩ + λ4|111⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GsdParams<T> {
    pub lambda: [T; 5],
    pub phi: T,
}

impl<T: Real> GsdParams<T> {
    pub fn new(lambda: [T; 5], phi: T) -> Result<Self> {
        if lambda.iter().any(|&l| !(l >= T::zero())) {
            return Err(Error::Domain("λ_i must be non-negative".into()));
        }
        if !(phi >= T::zero() && phi < T::TAU()) {
            return Err(Error::Domain(format!("φ = {phi} outside [0, 2π)")));
        }
        let norm: T = lambda.iter().map(|&l| l * l).sum();
        if (norm - T::one()).abs() > T::tol(STATE_TOL) {
            return Err(Error::NotNormalized(norm.as_f64()));
        }
        Ok(Self { lambda, phi })
    }

    /// λ0 = λ3 = 1/2, λ1 = λ2 = λ4 = √6/6, φ = 0.
    pub fn example1() -> Self {
        let h = T::lit(0.5);
        let s = T::lit(6.0).sqrt() / T::lit(6.0);
        Self {
            lambda: [h, s, s, h, s],
            phi: T::zero(),
        }
    }

    /// The state on an arbitrary three-qubit register; the ket positions
    /// follow the register order.
    pub fn state_on(&self, register: QubitRegister) -> Result<PureState<T>> {
        if register.count() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: register.count(),
            });
        }
        let z = Complex::new(T::zero(), T::zero());
        let r = |x: T| Complex::new(x, T::zero());
        let [l0, l1, l2, l3, l4] = self.lambda;
        let mut amps = vec![z; 8];
        amps[0b000] = r(l0);
        amps[0b100] = Complex::from_polar(l1, self.phi);
        amps[0b101] = r(l2);
        amps[0b110] = r(l3);
        amps[0b111] = r(l4);
        PureState::new(register, amps)
    }
}

/// Generalized Schmidt decomposition state on register (A, B, C).
pub fn make_gsd_state<T: Real>(p: &GsdParams<T>) -> Result<PureState<T>> {
    p.state_on(QubitRegister::new(["A", "B", "C"])?)
}

/// `(|100⟩ + |010⟩)/2 + (√2/2)|001⟩` on (A, B1, B2).
pub fn make_w_state<T: Real>() -> PureState<T> {
    let z = Complex::new(T::zero(), T::zero());
    let mut amps = vec![z; 8];
    amps[0b100] = Complex::new(T::lit(0.5), T::zero());
    amps[0b010] = Complex::new(T::lit(0.5), T::zero());
    amps[0b001] = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    PureState::from_parts_unchecked(QubitRegister::new(["A", "B1", "B2"]).expect("static labels"), amps)
}

/// `(|0…0⟩ + |1…1⟩)/√2` on the standard register of `n ≥ 2` qubits.
pub fn ghz_state<T: Real>(n: usize) -> Result<PureState<T>> {
    if n < 2 {
        return Err(Error::Domain("GHZ needs at least two qubits".into()));
    }
    let register = QubitRegister::standard(n)?;
    let dim = register.dim();
    let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
    amps[0] = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    amps[dim - 1] = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    PureState::new(register, amps)
}

/// `(|00⟩ + |11⟩)/√2` on (A, B).
pub fn bell_state<T: Real>() -> PureState<T> {
    let mut amps = vec![Complex::new(T::zero(), T::zero()); 4];
    amps[0] = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    amps[3] = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    PureState::from_parts_unchecked(QubitRegister::new(["A", "B"]).expect("static labels"), amps)
}
