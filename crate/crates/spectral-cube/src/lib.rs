//! Constructive spectral embeddings for symmetric operators.
//!
//! The pipeline samples an operator by finite-dimensional symmetric
//! compressions with orthonormal eigenbases, attaches a geometrically biased
//! scale of vectors and weights, turns each level into a discrete probability
//! measure on its eigenbasis, embeds the eigenvectors into the Hilbert cube,
//! and measures how the resulting weighted point clouds converge: moment
//! traces, eigenvalue statistics against oracle laws, accumulation sets and
//! kernel estimates of the limiting multiplier.
//!
//! Two structured fixtures come with closed forms throughout and act as
//! ground truth: the cyclic shift average (limit: Fourier series on the
//! circle, multiplier `cos(2 pi t)`, arcsine eigenvalue law) and the grid
//! derivative (limit: normalized Fourier transform under a Gaussian weight,
//! multiplier `pi w`, standard normal eigenvalue law).
//!
//! The numeric kernels are generic over the base float via [`real::Real`];
//! the aliases below fix `f64`, which is what every documented tolerance
//! assumes.

pub mod acceptance;
pub mod embedding;
pub mod error;
pub mod limits;
pub mod linalg;
pub mod operators;
pub mod oracles;
pub mod real;
pub mod sampling;

pub use error::{Error, Result};
pub use real::Real;

/// Complex scalar at working precision.
pub type Scalar = num_complex::Complex<f64>;
/// Ambient vector at working precision.
pub type Vector = linalg::AmbientVector<f64>;
/// Dense Hermitian matrix at working precision.
pub type Matrix = linalg::HermitianMatrix<f64>;
/// Sampling level at working precision.
pub type Level = sampling::SamplingLevel<f64>;
/// Scale level at working precision.
pub type Scale = sampling::ScaleLevel<f64>;
/// Spectral cloud at working precision.
pub type Cloud = embedding::SpectralCloud<f64>;
/// Moment trace at working precision.
pub type Trace = limits::MomentTrace<f64>;
