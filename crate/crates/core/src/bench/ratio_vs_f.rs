use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::instancegen::gen_dct;
use crate::theory::{kernel_ratio_bound, BoundConfig};

use super::thread_pool;

#[derive(Debug, Clone)]
pub struct RatioVsFConfig {
    pub f_grid: Vec<f64>,
    pub realizations: usize,
    pub m: usize,
    pub n: usize,
    /// Realization `r` uses matrix seed `base_seed + r` at every F.
    pub base_seed: u64,
    pub bound: BoundConfig,
    pub threads: Option<usize>,
}

impl Default for RatioVsFConfig {
    fn default() -> Self {
        Self {
            f_grid: (1..=20).map(f64::from).collect(),
            realizations: 50,
            m: 64,
            n: 1024,
            base_seed: 0,
            bound: BoundConfig::default(),
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioVsFRow {
    pub f: f64,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub std: f64,
    /// Realizations skipped because the expanded system was rank deficient.
    pub errored: usize,
}

pub fn ratio_vs_f_csv(rows: &[RatioVsFRow]) -> String {
    let mut out = String::from("F,mean_bound,std_bound,errored\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.f, r.mean, r.std, r.errored);
    }
    out
}

/// Mean and spread of [`kernel_ratio_bound`] over seeded DCT matrices per F.
///
/// Rank-deficient realizations are counted in `errored` and left out of the
/// statistics (NaN when fewer than two remain); other errors abort the run.
pub fn run_ratio_vs_f(config: &RatioVsFConfig) -> Result<Vec<RatioVsFRow>> {
    if config.realizations < 2 {
        return param("realizations must be at least 2");
    }
    if config.f_grid.is_empty() || config.f_grid.iter().any(|f| !(*f > 0.0)) {
        return param("F grid must be nonempty and positive");
    }
    let pool = thread_pool(config.threads)?;
    let jobs: Vec<(usize, usize)> = (0..config.f_grid.len())
        .flat_map(|i| (0..config.realizations).map(move |r| (i, r)))
        .collect();
    let values: Vec<Option<f64>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, r)| {
                let seed = config.base_seed.wrapping_add(r as u64);
                let a = gen_dct::<f64>(config.m, config.n, config.f_grid[i], seed)?;
                let mut bound = config.bound.clone();
                bound.seed = bound.seed.wrapping_add(r as u64);
                match kernel_ratio_bound(a.entries.view(), &bound) {
                    Ok(b) => Ok(Some(b.value)),
                    Err(Error::Rank(_)) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<Vec<Option<f64>>>>()
    })?;
    Ok(config
        .f_grid
        .iter()
        .zip(values.chunks(config.realizations))
        .map(|(&f, vals)| {
            let ok: Vec<f64> = vals.iter().flatten().copied().collect();
            let errored = vals.len() - ok.len();
            if ok.len() < 2 {
                return RatioVsFRow { f, mean: f64::NAN, std: f64::NAN, errored };
            }
            let k = ok.len() as f64;
            let mean = ok.iter().sum::<f64>() / k;
            let var = ok.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
            RatioVsFRow { f, mean, std: var.sqrt(), errored }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_signs() {
        let cfg = RatioVsFConfig {
            f_grid: vec![1.0, 4.0],
            realizations: 3,
            m: 8,
            n: 24,
            bound: BoundConfig { restarts: 2, ..Default::default() },
            threads: Some(2),
            ..Default::default()
        };
        let rows = run_ratio_vs_f(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.std >= 0.0 && r.mean >= 1.0 && r.errored == 0));
        assert_eq!(ratio_vs_f_csv(&rows).lines().count(), 3);
        assert!(run_ratio_vs_f(&RatioVsFConfig { realizations: 1, ..cfg }).is_err());
    }
}
