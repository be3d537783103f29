//! Sparse recovery by minimizing the scale-invariant ratio ‖x‖₁/‖x‖₂.
//!
//! - [`instancegen`]: seeded sensing matrices, sparse signals, the toy instance
//! - [`ratio_admm`]: signal-domain ADMM (plain and box-constrained) plus a basis-pursuit initializer
//! - [`grad2d`]: the ratio applied to image gradients for Fourier-subsampled reconstruction
//! - [`theory`]: coherence, null space properties, kernel ratio bound, L0 oracle
//! - [`bench`]: success-rate experiments and figure-style CSV drivers
//!
//! Numeric code is generic over [`Real`] (`f32`/`f64`); the aliases below fix
//! the double-precision types used by the CLI and the experiments.

pub mod bench;
pub mod error;
pub mod grad2d;
pub mod instancegen;
pub mod io;
pub mod linalg;
pub mod ratio_admm;
pub mod rng;
pub mod scalar;
pub mod theory;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SensingMatrix = instancegen::SensingMatrix<f64>;
pub type GroundTruth = instancegen::GroundTruth<f64>;
pub type Instance = instancegen::Instance<f64>;
pub type SolverConfig = ratio_admm::SolverConfig<f64>;
pub type SolveReport = ratio_admm::SolveReport<f64>;
pub type Image = grad2d::Image<f64>;
pub type GradSolverConfig = grad2d::GradSolverConfig<f64>;
pub type GradReport = grad2d::GradReport<f64>;

pub type SensingMatrix32 = instancegen::SensingMatrix<f32>;
pub type Instance32 = instancegen::Instance<f32>;
pub type SolverConfig32 = ratio_admm::SolverConfig<f32>;
pub type SolveReport32 = ratio_admm::SolveReport<f32>;
pub type Image32 = grad2d::Image<f32>;
