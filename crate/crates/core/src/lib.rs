//! Spectral functions of concrete eigenspace families, random matrix
//! randomization of eigenfunction series, and probabilistic Lebesgue norms.
//!
//! The special-function and quadrature layers are generic over the scalar
//! type through [`Real`]; the Monte Carlo layers work in `f64`.

pub mod calibrate;
pub mod constants;
pub mod mc;
pub mod measure;
pub mod plp;
pub mod randmat;
pub mod report;
pub mod series;
pub mod spectral;
pub mod specfun;
pub mod verify;

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar accepted by the generic numerical kernels.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

/// Converts an `f64` literal into `T`.
#[inline]
pub(crate) fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("literal representable in scalar type")
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("grid mismatch: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Quadrature rule in double precision.
pub type Rule = measure::QuadratureRule<f64>;
/// Quadrature rule in single precision.
pub type Rule32 = measure::QuadratureRule<f32>;
/// Sampled function in double precision.
pub type Sampled = measure::SampledFunction<f64>;
/// Sampled function in single precision.
pub type Sampled32 = measure::SampledFunction<f32>;
/// Gauss–Legendre rule in double precision.
pub type GaussLegendre64 = measure::GaussLegendre<f64>;
/// Adaptive integration result in double precision.
pub type Integral64 = measure::Integral<f64>;

pub use mc::MCEstimate;
pub use num_complex::Complex64;
