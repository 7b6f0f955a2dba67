//! Ridge-function decompositions of functions on the cube `J^m = [-1, 1]^m`.
//!
//! The crate splits a multivariable function into one-variable ridge
//! components `x ↦ φ(w·x)` and measures what is left over. It is organised
//! around a handful of representations:
//!
//! - [`direction`]: rational projective direction classes (primitive integer
//!   vectors) and complete direction sets that partition `Z^m \ {0}`.
//! - [`spectrum`]: sparse lattice Fourier series in the basis `e^{iπ k·x}`,
//!   uniform midpoint grids, and the transforms between them.
//! - [`projection`]: orthogonal projection onto the span of ridge harmonics
//!   along a direction set, and the spectral annihilator test.
//! - [`radon`]: binned hyperplane-slice integrals and the Radon kernel test.
//! - [`annihilator`]: Fourier-side ("hat") constructions of functions that
//!   are orthogonal to every ridge function along given directions.
//! - [`shannon`]: cardinal-sinc interpolation of the Fourier transform from
//!   its lattice samples, and restriction to lines `t ↦ F̂(tw)`.
//! - [`stochastic`]: empirical composition and conditional-expectation
//!   operators for paired samples.
//! - [`format`]: the plain-text file formats shared with the CLI.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default) and sequentially otherwise. Results are identical either
//! way: every reduction merges partial results in a fixed order.

pub mod annihilator;
pub mod direction;
mod error;
pub mod format;
pub mod par;
pub mod projection;
pub mod quadrature;
pub mod radon;
pub mod reproduce;
pub mod shannon;
pub mod spectrum;
pub mod stochastic;

pub use error::{Error, Result};

pub use num_complex::Complex64;
