//! Monogamy and polygamy relations for multiqubit correlation measures.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the `*F64` / `*F32` aliases fix it.

// `!(x >= lo)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod error;
pub mod inequalities;
pub mod linalg;
pub mod measures;
pub mod random;
pub mod roof;
pub mod scalar;
pub mod state;

pub use catalog::{bell_state, ghz_state, make_gsd_state, make_w_state, GsdParams};
pub use error::{Error, Result};
pub use inequalities::{BoundParams, BoundReport, Branch, ChainSpec, Mode};
pub use linalg::CMatrix;
pub use measures::{MeasureKind, MeasureValue};
pub use random::{haar_random_pure, random_mixed, seeded_rng};
pub use roof::{optimize_roof, Direction, Ensemble, RoofConfig, RoofResult};
pub use scalar::Real;
pub use state::{Bipartition, DensityMatrix, Operator, PureState, QubitRegister};

pub type PureStateF64 = PureState<f64>;
pub type DensityMatrixF64 = DensityMatrix<f64>;
pub type CMatrixF64 = CMatrix<f64>;
pub type BoundParamsF64 = BoundParams<f64>;
pub type BoundReportF64 = BoundReport<f64>;
pub type RoofResultF64 = RoofResult<f64>;

pub type PureStateF32 = PureState<f32>;
pub type DensityMatrixF32 = DensityMatrix<f32>;
pub type CMatrixF32 = CMatrix<f32>;
pub type BoundParamsF32 = BoundParams<f32>;
pub type BoundReportF32 = BoundReport<f32>;
pub type RoofResultF32 = RoofResult<f32>;
