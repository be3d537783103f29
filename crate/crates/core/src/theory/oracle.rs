use nalgebra::{DMatrix, DVector};
use ndarray::Array1;
use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::instancegen::Instance;
use crate::linalg::norm2;
use crate::theory::kernel::{binomial, Combinations};

/// Support budget beyond `n = 24`.
pub const L0_BUDGET: u128 = 1_000_000;
pub const L0_FREE_COLUMNS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct L0Solution {
    pub sparsity: usize,
    pub support: Vec<usize>,
    pub x: Array1<f64>,
}

/// Sparsest solution of `Ax = b` with at most `s_max` nonzeros, by trying every
/// support in increasing size and lexicographic order.
///
/// A support qualifies when its least-squares residual is at most `1e-9‖b‖₂`.
pub fn l0_oracle(instance: &Instance<f64>, s_max: usize) -> Result<L0Solution> {
    let a = &instance.matrix.entries;
    let b = &instance.rhs;
    let n = a.ncols();
    if s_max > n {
        return param(format!("s_max = {s_max} exceeds {n} columns"));
    }
    if n > L0_FREE_COLUMNS && binomial(n, s_max) > L0_BUDGET {
        return Err(Error::UnsupportedSize(format!(
            "C({n}, {s_max}) supports exceed the budget of {L0_BUDGET}"
        )));
    }
    let b_norm = norm2(b.view());
    if b_norm == 0.0 {
        return Ok(L0Solution {
            sparsity: 0,
            support: Vec::new(),
            x: Array1::zeros(n),
        });
    }
    let tol = 1e-9 * b_norm;
    let rhs = DVector::from_iterator(b.len(), b.iter().copied());
    for s in 1..=s_max {
        let supports: Vec<Vec<usize>> = Combinations::new(n, s).collect();
        let found = supports.par_iter().find_map_first(|support| {
            let sub = DMatrix::from_fn(a.nrows(), s, |i, j| a[[i, support[j]]]);
            let coef = sub.clone().svd(true, true).solve(&rhs, 1e-12).ok()?;
            let residual = (&sub * &coef - &rhs).norm();
            (residual <= tol).then(|| (support.clone(), coef))
        });
        if let Some((support, coef)) = found {
            let mut x = Array1::zeros(n);
            for (k, &j) in support.iter().enumerate() {
                x[j] = coef[k];
            }
            return Ok(L0Solution { sparsity: s, support, x });
        }
    }
    param(format!("no solution with at most {s_max} nonzeros"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instancegen::{gen_sparse_signal, toy_instance, toy_point, SensingMatrix};
    use crate::rng::SplitMix64;
    use ndarray::Array2;

    #[test]
    fn toy_is_three_sparse() {
        let inst = toy_instance::<f64>();
        let sol = l0_oracle(&inst, 4).unwrap();
        assert_eq!(sol.sparsity, 3);
        let expected = toy_point(0.0);
        assert!((&sol.x - &expected).iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn zero_rhs() {
        let m = SensingMatrix::explicit(Array2::<f64>::eye(3)).unwrap();
        let inst = Instance::from_rhs(m, Array1::zeros(3)).unwrap();
        let sol = l0_oracle(&inst, 2).unwrap();
        assert_eq!(sol.sparsity, 0);
        assert!(sol.x.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn random_two_sparse() {
        for seed in 0..5 {
            let mut rng = SplitMix64::new(seed);
            let a = Array2::from_shape_fn((6, 12), |_| rng.normal());
            let truth = gen_sparse_signal::<f64>(12, 2, None, 100 + seed).unwrap();
            let support = truth.support.clone();
            let inst = Instance::from_truth(SensingMatrix::explicit(a).unwrap(), truth).unwrap();
            let sol = l0_oracle(&inst, 3).unwrap();
            assert_eq!(sol.sparsity, 2);
            assert_eq!(sol.support, support);
        }
    }

    #[test]
    fn budget() {
        let a = Array2::<f64>::ones((2, 40));
        let inst = Instance::from_rhs(SensingMatrix::explicit(a).unwrap(), Array1::ones(2)).unwrap();
        assert!(matches!(l0_oracle(&inst, 10), Err(Error::UnsupportedSize(_))));
        assert!(l0_oracle(&inst, 1).is_ok());
    }
}
