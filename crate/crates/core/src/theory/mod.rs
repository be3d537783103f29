//! Recovery-condition verifiers for small instances.
//!
//! Everything here works in `f64`: the checks compare margins against fixed
//! absolute tolerances and rely on SVD-based null-space bases.

mod bound;
mod kernel;
mod local;
mod nsp;
mod oracle;

pub use bound::{coherence, kernel_min_ratio_exact, kernel_ratio_bound, BoundConfig, RatioBound, EXACT_RATIO_BUDGET};
pub use kernel::{kernel_vertices, null_space, rank};
pub use local::{verify_local_min, DECREASE_TOL, MIN_RADIUS};
pub use nsp::{
    check_nsp, check_nsp_with, check_snsp, check_snsp_with, Method, PropertyVerdict, Witness, MARGIN_TOL,
    MAX_NSP_COLUMNS, MAX_NSP_KERNEL_DIM,
};
pub use oracle::{l0_oracle, L0Solution, L0_BUDGET, L0_FREE_COLUMNS};
