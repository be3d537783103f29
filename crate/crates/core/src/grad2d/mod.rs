//! Gradient-domain L1/L2 reconstruction from subsampled Fourier data.

mod fourier;
mod image;
mod mask;
mod phantom;
mod solver;

pub use fourier::{measure, Fft2, FreqData};
pub use image::{div_adjoint, grad, GradField, Image};
pub use mask::{radial_mask, FourierMask};
pub use phantom::{shepp_logan, Ellipse, MIN_PHANTOM_SIZE, SHEPP_LOGAN};
pub use solver::{solve_grad, solve_tv, GradReport, GradSolverConfig, WarmStart};
