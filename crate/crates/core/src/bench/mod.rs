//! Experiment drivers: success-rate sweeps, the toy landscape and ratio-vs-F.

mod experiment;
mod landscape;
mod ratio_vs_f;

pub use experiment::{
    classify, run_experiment, tie_tol, Classification, ExperimentConfig, ExperimentResult, MatrixSpec, SolverChoice,
    SummaryRow, Timing, TrialRecord, RECORD_HEADER, SOLVER_SEED_OFFSET, SUCCESS_TOL, SUMMARY_HEADER,
    TRUTH_SEED_OFFSET,
};
pub use landscape::{toy_landscape, Landscape, LandscapeRow};
pub use ratio_vs_f::{ratio_vs_f_csv, run_ratio_vs_f, RatioVsFConfig, RatioVsFRow};

use crate::error::{param, Result};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "RATIO_SPARSE_THREADS";

/// Explicit count, else `RATIO_SPARSE_THREADS`, else rayon's default.
pub fn resolve_threads(explicit: Option<usize>) -> Result<Option<usize>> {
    if explicit.is_some() {
        return Ok(explicit);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => param(format!("{THREADS_ENV} must be a positive integer, got {v:?}")),
        },
        Err(_) => Ok(None),
    }
}

pub(crate) fn thread_pool(explicit: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = resolve_threads(explicit)? {
        builder = builder.num_threads(k);
    }
    builder
        .build()
        .map_err(|e| crate::error::Error::Parameter(format!("thread pool: {e}")))
}
