use ndarray::{concatenate, Array1, ArrayView2, Axis};

use crate::error::{param, Result};
use crate::linalg::norm2;
use crate::ratio_admm::{objective, solve_with_cache, InitStrategy, ProjectionCache, SolverConfig};
use crate::rng::SplitMix64;
use crate::theory::kernel::{kernel_vertices, null_space};

/// Subset budget for [`kernel_min_ratio_exact`].
pub const EXACT_RATIO_BUDGET: u128 = 1_000_000;

/// Largest normalized inner product between distinct columns.
pub fn coherence(a: ArrayView2<f64>) -> Result<f64> {
    let norms: Vec<f64> = a.columns().into_iter().map(|c| norm2(c)).collect();
    if let Some(j) = norms.iter().position(|v| *v == 0.0) {
        return param(format!("column {j} is zero"));
    }
    let gram = a.t().dot(&a);
    let n = a.ncols();
    let mut mu = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            mu = mu.max(gram[[i, j]].abs() / (norms[i] * norms[j]));
        }
    }
    Ok(mu)
}

#[derive(Debug, Clone)]
pub struct BoundConfig {
    /// Total solves: the configured init first, then seeded random starts.
    pub restarts: usize,
    pub seed: u64,
    pub solver: SolverConfig<f64>,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            restarts: 5,
            seed: 0,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RatioBound {
    pub value: f64,
    /// Minimizer found, normalized to sum one.
    pub vector: Array1<f64>,
}

/// Upper estimate of `min{‖v‖₁/‖v‖₂ : Av = 0, v ≠ 0}` from the ratio solver
/// on `[A; 1ᵀ] x = [0; 1]`.
pub fn kernel_ratio_bound(a: ArrayView2<f64>, config: &BoundConfig) -> Result<RatioBound> {
    let (m, n) = a.dim();
    if n < m + 1 {
        return param(format!("need n ≥ m + 1, got {m}×{n}"));
    }
    if config.restarts == 0 {
        return param("restarts must be positive");
    }
    let expanded = concatenate(Axis(0), &[a, Array1::<f64>::ones(n).insert_axis(Axis(0)).view()])
        .expect("column counts agree");
    let mut rhs = Array1::zeros(m + 1);
    rhs[m] = 1.0;
    let cache = ProjectionCache::new(expanded.view(), rhs.view())?;
    let mut best: Option<RatioBound> = None;
    for r in 0..config.restarts {
        let mut cfg = config.solver.clone();
        cfg.seed = config.seed.wrapping_add(r as u64);
        if r > 0 {
            let mut rng = SplitMix64::new(config.seed.wrapping_add(1_000 + r as u64));
            let start = Array1::from_shape_fn(n, |_| rng.normal());
            cfg.init = InitStrategy::Explicit(start);
        }
        let report = solve_with_cache(&cache, &cfg)?;
        let value = objective(report.solution.view());
        if best.as_ref().map_or(true, |b| value < b.value) {
            best = Some(RatioBound {
                value,
                vector: report.solution,
            });
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Exact `min{‖v‖₁/‖v‖₂ : Av = 0, v ≠ 0}` by vertex enumeration.
///
/// Equals `1 / max ‖v‖₂` over the vertices of `ker A ∩ {‖v‖₁ ≤ 1}`. Returns
/// `None` when the kernel is trivial.
pub fn kernel_min_ratio_exact(a: ArrayView2<f64>) -> Result<Option<RatioBound>> {
    let basis = null_space(a);
    let vertices = kernel_vertices(basis.view(), EXACT_RATIO_BUDGET)?;
    Ok(vertices
        .into_iter()
        .map(|v| RatioBound {
            value: 1.0 / norm2(v.view()),
            vector: v,
        })
        .min_by(|x, y| x.value.total_cmp(&y.value)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instancegen::gen_dct;
    use ndarray::{array, Array2};

    #[test]
    fn coherence_examples() {
        let eye = Array2::<f64>::eye(3);
        assert_eq!(coherence(eye.view()).unwrap(), 0.0);
        let dup = array![[1.0, 1.0, 0.0], [2.0, 2.0, 1.0]];
        assert!((coherence(dup.view()).unwrap() - 1.0).abs() < 1e-12);
        let zero = array![[1.0, 0.0], [1.0, 0.0]];
        assert!(coherence(zero.view()).is_err());
    }

    #[test]
    fn coherence_grows_with_oversampling() {
        let mean = |f: f64| {
            (0..10)
                .map(|seed| coherence(gen_dct::<f64>(32, 256, f, seed).unwrap().entries.view()).unwrap())
                .sum::<f64>()
                / 10.0
        };
        assert!(mean(20.0) > mean(1.0));
    }

    #[test]
    fn bound_for_two_columns() {
        let a = array![[1.0, -1.0]];
        let b = kernel_ratio_bound(a.view(), &BoundConfig::default()).unwrap();
        assert!((b.value - 2f64.sqrt()).abs() < 1e-9);
        let exact = kernel_min_ratio_exact(a.view()).unwrap().unwrap();
        assert!((exact.value - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bound_with_one_dimensional_kernel() {
        let mut rng = SplitMix64::new(8);
        for _ in 0..5 {
            let a = Array2::from_shape_fn((4, 5), |_| rng.normal());
            let k = null_space(a.view());
            assert_eq!(k.ncols(), 1);
            let v = k.column(0);
            let expected = v.iter().map(|x| x.abs()).sum::<f64>() / norm2(v);
            let b = kernel_ratio_bound(a.view(), &BoundConfig::default()).unwrap();
            assert!((b.value - expected).abs() < 1e-6, "{} vs {expected}", b.value);
        }
    }

    #[test]
    fn exact_ratio_never_exceeds_solver_bound() {
        let mut rng = SplitMix64::new(21);
        for _ in 0..5 {
            let a = Array2::from_shape_fn((5, 9), |_| rng.normal());
            let exact = kernel_min_ratio_exact(a.view()).unwrap().unwrap();
            assert!(a.dot(&exact.vector).iter().all(|x| x.abs() < 1e-10));
            let bound = kernel_ratio_bound(a.view(), &BoundConfig::default()).unwrap();
            assert!(exact.value <= bound.value + 1e-9);
        }
    }

    #[test]
    fn rejects_square_systems() {
        assert!(kernel_ratio_bound(Array2::<f64>::eye(2).view(), &BoundConfig::default()).is_err());
    }
}
