use std::fmt::Write as _;
use std::time::Instant;

use ndarray::Array1;
use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::instancegen::{gen_dct, gen_gaussian, gen_sparse_signal, Instance, SensingMatrix};
use crate::linalg::{dist2, norm1, norm2};
use crate::ratio_admm::{objective, solve_l1_counted, solve_with_cache, BoxConstraint, InitStrategy, ProjectionCache, SolverConfig};

use super::thread_pool;

/// Relative error at or below which a trial counts as a success.
pub const SUCCESS_TOL: f64 = 1e-3;
/// Offset between the matrix seed and the ground-truth seed of a trial.
pub const TRUTH_SEED_OFFSET: u64 = 1_000_000;
/// Offset between the matrix seed and the solver seed of a trial.
pub const SOLVER_SEED_OFFSET: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixSpec {
    Dct { f: f64 },
    Gaussian { r: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverChoice {
    L1L2,
    L1L2Box { lower: f64, upper: f64 },
    L1,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub matrix: MatrixSpec,
    pub m: usize,
    pub n: usize,
    pub sparsity_grid: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub solver: SolverChoice,
    pub solver_params: SolverConfig<f64>,
    pub min_sep: Option<usize>,
    /// Worker count; `None` defers to `RATIO_SPARSE_THREADS`, then to rayon's default.
    pub threads: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            matrix: MatrixSpec::Dct { f: 5.0 },
            m: 64,
            n: 1024,
            sparsity_grid: (1..=15).map(|k| 2 * k).collect(),
            trials: 50,
            base_seed: 0,
            solver: SolverChoice::L1L2Box { lower: -1.0, upper: 1.0 },
            solver_params: SolverConfig::default(),
            min_sep: None,
            threads: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sparsity_grid.is_empty() {
            return param("sparsity grid is empty");
        }
        if self.sparsity_grid.windows(2).any(|w| w[0] >= w[1]) {
            return param("sparsity grid must be strictly ascending");
        }
        if self.sparsity_grid[0] == 0 || *self.sparsity_grid.last().unwrap() > self.n {
            return param(format!("sparsity levels must lie in 1..={}", self.n));
        }
        if self.trials == 0 {
            return param("trials must be at least 1");
        }
        if self.m == 0 || self.n == 0 {
            return param("m and n must be positive");
        }
        if let SolverChoice::L1L2Box { lower, upper } = self.solver {
            BoxConstraint::new(lower, upper)?;
        }
        if self.threads == Some(0) {
            return param("threads must be positive");
        }
        self.solver_params.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Success,
    ModelFailure,
    AlgorithmFailure,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Success => "success",
            Classification::ModelFailure => "model_failure",
            Classification::AlgorithmFailure => "algorithm_failure",
        }
    }
}

/// Success below [`SUCCESS_TOL`]; otherwise a model failure when the truth has
/// the larger objective, else an algorithm failure (ties included).
pub fn classify(objective_truth: f64, objective_sol: f64, rel_error: f64) -> Classification {
    if rel_error <= SUCCESS_TOL {
        Classification::Success
    } else if objective_truth > objective_sol + tie_tol(objective_truth) {
        Classification::ModelFailure
    } else {
        Classification::AlgorithmFailure
    }
}

pub fn tie_tol(objective_truth: f64) -> f64 {
    1e-9 * objective_truth.abs().max(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub sparsity: usize,
    pub trial: usize,
    /// Matrix seed; the truth and solver seeds follow by fixed offsets.
    pub seed: u64,
    pub rel_error: f64,
    /// `None` when the trial errored before producing a solution.
    pub classification: Option<Classification>,
    pub objective_truth: f64,
    pub objective_solution: f64,
    /// Objectives within the tie tolerance of each other.
    pub tie: bool,
    pub iterations: usize,
    pub seconds: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub sparsity: usize,
    pub trials: usize,
    pub success_rate: f64,
    pub model_failure_rate: f64,
    pub algorithm_failure_rate: f64,
    pub errored: usize,
    pub ties: usize,
    pub mean_iters: f64,
    pub mean_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
}

/// Whether wall-clock columns carry measured values or a fixed placeholder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    Include,
    Omit,
}

pub const SUMMARY_HEADER: &str =
    "sparsity,trials,success_rate,model_failure_rate,algorithm_failure_rate,errored,mean_iters,mean_seconds";
pub const RECORD_HEADER: &str =
    "sparsity,trial,seed,rel_error,classification,objective_truth,objective_solution,tie,iterations,seconds";

impl ExperimentResult {
    pub fn summary_csv(&self, timing: Timing) -> String {
        let mut out = String::from(SUMMARY_HEADER);
        out.push('\n');
        for r in &self.summary {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.sparsity,
                r.trials,
                r.success_rate,
                r.model_failure_rate,
                r.algorithm_failure_rate,
                r.errored,
                r.mean_iters,
                seconds_field(r.mean_seconds, timing)
            );
        }
        out
    }

    pub fn records_csv(&self, timing: Timing) -> String {
        let mut out = String::from(RECORD_HEADER);
        out.push('\n');
        for r in &self.records {
            let class = r.classification.map_or("errored", Classification::as_str);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.sparsity,
                r.trial,
                r.seed,
                r.rel_error,
                class,
                r.objective_truth,
                r.objective_solution,
                r.tie,
                r.iterations,
                seconds_field(r.seconds, timing)
            );
        }
        out
    }
}

fn seconds_field(v: f64, timing: Timing) -> String {
    match timing {
        Timing::Include => format!("{v:.6}"),
        Timing::Omit => "NA".to_string(),
    }
}

/// Runs every (sparsity, trial) pair and aggregates per sparsity level.
///
/// Trial `k` uses matrix seed `base + k`, truth seed `base + 10⁶ + k` and solver
/// seed `base + 2·10⁶ + k`, so the same matrices recur across sparsity levels.
/// The ratio solvers start from the basis-pursuit solution.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let jobs: Vec<(usize, usize)> = config
        .sparsity_grid
        .iter()
        .flat_map(|&s| (0..config.trials).map(move |k| (s, k)))
        .collect();
    let pool = thread_pool(config.threads)?;
    let mut records: Vec<TrialRecord> =
        pool.install(|| jobs.par_iter().map(|&(s, k)| run_trial(config, s, k)).collect());
    records.sort_by(|a, b| (a.sparsity, a.trial).cmp(&(b.sparsity, b.trial)));
    let summary = config
        .sparsity_grid
        .iter()
        .map(|&s| summarize(s, records.iter().filter(|r| r.sparsity == s)))
        .collect();
    Ok(ExperimentResult { records, summary })
}

fn summarize<'a>(sparsity: usize, records: impl Iterator<Item = &'a TrialRecord>) -> SummaryRow {
    let records: Vec<&TrialRecord> = records.collect();
    let done: Vec<&&TrialRecord> = records.iter().filter(|r| r.classification.is_some()).collect();
    let count = |c: Classification| done.iter().filter(|r| r.classification == Some(c)).count();
    let denom = done.len().max(1) as f64;
    let (successes, models) = (count(Classification::Success), count(Classification::ModelFailure));
    let algorithms = done.len() - successes - models;
    SummaryRow {
        sparsity,
        trials: records.len(),
        success_rate: successes as f64 / denom,
        model_failure_rate: models as f64 / denom,
        algorithm_failure_rate: algorithms as f64 / denom,
        errored: records.len() - done.len(),
        ties: done.iter().filter(|r| r.tie).count(),
        mean_iters: done.iter().map(|r| r.iterations as f64).sum::<f64>() / denom,
        mean_seconds: done.iter().map(|r| r.seconds).sum::<f64>() / denom,
    }
}

pub(crate) fn trial_instance(config: &ExperimentConfig, s: usize, k: usize) -> Result<Instance<f64>> {
    let seed = config.base_seed.wrapping_add(k as u64);
    let matrix: SensingMatrix<f64> = match config.matrix {
        MatrixSpec::Dct { f } => gen_dct(config.m, config.n, f, seed)?,
        MatrixSpec::Gaussian { r } => gen_gaussian(config.m, config.n, r, seed)?,
    };
    let truth = gen_sparse_signal(config.n, s, config.min_sep, seed.wrapping_add(TRUTH_SEED_OFFSET))?;
    Instance::from_truth(matrix, truth)
}

fn run_trial(config: &ExperimentConfig, s: usize, k: usize) -> TrialRecord {
    let seed = config.base_seed.wrapping_add(k as u64);
    let start = Instant::now();
    let outcome = solve_trial(config, s, k);
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok((truth, solution, iterations)) => {
            let model: fn(&Array1<f64>) -> f64 = match config.solver {
                SolverChoice::L1 => |x| norm1(x.view()),
                _ => |x| objective(x.view()),
            };
            let objective_truth = model(&truth);
            let objective_solution = model(&solution);
            let rel_error = dist2(solution.view(), truth.view()) / norm2(truth.view());
            TrialRecord {
                sparsity: s,
                trial: k,
                seed,
                rel_error,
                classification: Some(classify(objective_truth, objective_solution, rel_error)),
                objective_truth,
                objective_solution,
                tie: rel_error > SUCCESS_TOL
                    && (objective_truth - objective_solution).abs() <= tie_tol(objective_truth),
                iterations,
                seconds,
                error: None,
            }
        }
        Err(e) => TrialRecord {
            sparsity: s,
            trial: k,
            seed,
            rel_error: f64::NAN,
            classification: None,
            objective_truth: f64::NAN,
            objective_solution: f64::NAN,
            tie: false,
            iterations: 0,
            seconds,
            error: Some(e.to_string()),
        },
    }
}

fn solve_trial(config: &ExperimentConfig, s: usize, k: usize) -> Result<(Array1<f64>, Array1<f64>, usize)> {
    let instance = trial_instance(config, s, k)?;
    let truth = instance.truth.as_ref().map(|t| t.values.clone()).ok_or_else(|| {
        Error::Degenerate("generated instance lacks a ground truth".into())
    })?;
    let cache = ProjectionCache::new(instance.matrix.entries.view(), instance.rhs.view())?;
    let params = &config.solver_params;
    let (x_l1, l1_iters) = solve_l1_counted(&cache, params.l1_eps, params.l1_max_iter);
    let mut cfg = params.clone();
    cfg.seed = config.base_seed.wrapping_add(SOLVER_SEED_OFFSET + k as u64);
    cfg.init = InitStrategy::Explicit(x_l1.clone());
    let (solution, iterations) = match config.solver {
        SolverChoice::L1 => (x_l1, l1_iters),
        SolverChoice::L1L2 => {
            cfg.bounds = None;
            let r = solve_with_cache(&cache, &cfg)?;
            (r.solution, r.iterations)
        }
        SolverChoice::L1L2Box { lower, upper } => {
            cfg.bounds = Some(BoxConstraint::new(lower, upper)?);
            let r = solve_with_cache(&cache, &cfg)?;
            (r.solution, r.iterations)
        }
    };
    Ok((truth, solution, iterations))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        assert_eq!(classify(2.0, 1.0, 1e-4), Classification::Success);
        assert_eq!(classify(2.0, 1.5, 0.5), Classification::ModelFailure);
        assert_eq!(classify(1.5, 2.0, 0.5), Classification::AlgorithmFailure);
        assert_eq!(classify(1.5, 1.5, 0.5), Classification::AlgorithmFailure);
        assert_eq!(classify(1.5, 1.5 - 1e-12, 0.5), Classification::AlgorithmFailure);
        assert_eq!(classify(1.0, 1.0, SUCCESS_TOL), Classification::Success);
    }

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            m: 16,
            n: 64,
            sparsity_grid: vec![1, 3, 6],
            trials: 4,
            base_seed: 11,
            threads: Some(2),
            ..Default::default()
        }
    }

    #[test]
    fn rates_partition_and_rerun_matches() {
        let cfg = small_config();
        let a = run_experiment(&cfg).unwrap();
        for row in &a.summary {
            let total = row.success_rate + row.model_failure_rate + row.algorithm_failure_rate;
            assert!((total - 1.0).abs() <= 1e-12);
            assert_eq!(row.trials, 4);
        }
        let b = run_experiment(&ExperimentConfig { threads: Some(1), ..cfg }).unwrap();
        assert_eq!(a.summary_csv(Timing::Omit), b.summary_csv(Timing::Omit));
        assert_eq!(a.records_csv(Timing::Omit), b.records_csv(Timing::Omit));
        assert!(a.summary_csv(Timing::Include).starts_with(SUMMARY_HEADER));
    }

    #[test]
    fn invalid_configs() {
        let bad = |f: fn(&mut ExperimentConfig)| {
            let mut c = small_config();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.sparsity_grid.clear()));
        assert!(bad(|c| c.sparsity_grid = vec![3, 2]));
        assert!(bad(|c| c.trials = 0));
        assert!(bad(|c| c.solver = SolverChoice::L1L2Box { lower: 1.0, upper: -1.0 }));
        assert!(bad(|c| c.sparsity_grid = vec![65]));
    }

    #[test]
    fn rank_failures_are_counted_as_errored() {
        // More rows than columns cannot be factored.
        let cfg = ExperimentConfig {
            m: 8,
            n: 6,
            sparsity_grid: vec![1],
            trials: 2,
            ..small_config()
        };
        let res = run_experiment(&cfg).unwrap();
        assert_eq!(res.summary[0].errored, 2);
        assert!(res.records.iter().all(|r| r.error.is_some()));
    }
}
