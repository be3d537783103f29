//! Signal-domain L1/L2 minimization: proximal pieces, affine projection,
//! the ADMM solver (with optional box) and the basis-pursuit initializer.

mod basis_pursuit;
mod projection;
mod prox;
mod solver;

pub use basis_pursuit::solve_l1_init;
pub use projection::{project_affine, ProjectionCache};
pub use prox::{objective, shrink, solve_cubic_tau, y_update, z_update, BoxConstraint};
pub use solver::{solve, InitStrategy, SolveReport, SolverConfig, Status};

pub(crate) use basis_pursuit::solve_l1_counted;
pub(crate) use solver::solve_with_cache;
