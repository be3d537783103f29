//! Basis pursuit `min ‖x‖₁ s.t. Ax = b` by ADMM, used to initialize the ratio solver.

use ndarray::{Array1, Zip};

use crate::error::Result;
use crate::instancegen::Instance;
use crate::linalg::{dist2, norm1, norm2};
use crate::ratio_admm::projection::ProjectionCache;
use crate::ratio_admm::prox::shrink_scalar;
use crate::scalar::Real;

const RHO_INIT: f64 = 10.0;
const BALANCE_EVERY: usize = 10;
const BALANCE_RATIO: f64 = 10.0;

/// Approximate basis-pursuit solution.
///
/// Splits `x = z` with `x` confined to the affine set and `z` carrying the L1
/// term, and adapts the penalty by residual balancing. The problem is scaled so
/// the least-norm solution has unit peak magnitude. The returned point is the
/// feasible `x` iterate with the smallest L1 norm seen.
pub fn solve_l1_init<T: Real>(instance: &Instance<T>, eps: T, max_iter: usize) -> Result<Array1<T>> {
    let cache = ProjectionCache::new(instance.matrix.entries.view(), instance.rhs.view())?;
    Ok(solve_l1_with_cache(&cache, eps, max_iter))
}

pub(crate) fn solve_l1_with_cache<T: Real>(cache: &ProjectionCache<T>, eps: T, max_iter: usize) -> Array1<T> {
    solve_l1_counted(cache, eps, max_iter).0
}

/// As [`solve_l1_with_cache`], also returning the iteration count.
pub(crate) fn solve_l1_counted<T: Real>(cache: &ProjectionCache<T>, eps: T, max_iter: usize) -> (Array1<T>, usize) {
    let least_norm = cache.offset().clone();
    let peak = least_norm.iter().fold(T::zero(), |a, v| a.max(v.abs()));
    if peak == T::zero() {
        return (least_norm, 0);
    }
    let scale = T::one() / peak;
    let scaled = cache.with_rhs(cache.rhs().mapv(|v| v * scale).view());

    let n = least_norm.len();
    let mut x = scaled.offset().clone();
    let mut z = x.clone();
    let mut u = Array1::<T>::zeros(n);
    let mut rho = T::lit(RHO_INIT);
    let mut best = x.clone();
    let mut best_l1 = norm1(x.view());
    let mut target = Array1::<T>::zeros(n);
    let tiny = T::epsilon();
    let mut iterations = 0;

    for k in 1..=max_iter.max(1) {
        iterations = k;
        Zip::from(&mut target).and(&z).and(&u).for_each(|t, &zi, &ui| *t = zi - ui);
        x = scaled.project(target.view());
        let l1 = norm1(x.view());
        if l1 < best_l1 {
            best_l1 = l1;
            best.assign(&x);
        }

        let z_prev = z.clone();
        let mu = T::one() / rho;
        Zip::from(&mut z)
            .and(&x)
            .and(&u)
            .for_each(|zi, &xi, &ui| *zi = shrink_scalar(xi + ui, mu));
        Zip::from(&mut u).and(&x).and(&z).for_each(|ui, &xi, &zi| *ui = *ui + xi - zi);

        let primal = dist2(x.view(), z.view());
        let dual = rho * dist2(z.view(), z_prev.view());
        let scale_p = norm2(x.view()).max(norm2(z.view())).max(tiny);
        let scale_d = rho * norm2(u.view()).max(tiny);
        if primal <= eps * scale_p && dual <= eps * scale_d {
            break;
        }
        if k % BALANCE_EVERY == 0 {
            let ratio = T::lit(BALANCE_RATIO);
            if primal > ratio * dual {
                rho = rho * T::lit(2.0);
                u.mapv_inplace(|v| v / T::lit(2.0));
            } else if dual > ratio * primal {
                rho = rho / T::lit(2.0);
                u.mapv_inplace(|v| v * T::lit(2.0));
            }
        }
    }
    best.mapv_inplace(|v| v / scale);
    (best, iterations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instancegen::{gen_dct, gen_gaussian, gen_sparse_signal, toy_instance, toy_point, Instance};

    #[test]
    fn toy_instance_reaches_l1_minimum() {
        // min over t of 3|t| + |20−2t| + |40−4t| + 2|t−9| on a fine grid is 32 at t = 10.
        let grid_min = (0..=200_000)
            .map(|k| -50.0 + k as f64 * 5e-4)
            .map(|t: f64| 3.0 * t.abs() + (20.0 - 2.0 * t).abs() + (40.0 - 4.0 * t).abs() + 2.0 * (t - 9.0).abs())
            .fold(f64::INFINITY, f64::min);
        assert!((grid_min - 32.0).abs() < 1e-9);

        let inst = toy_instance::<f64>();
        let x = solve_l1_init(&inst, 1e-12, 20_000).unwrap();
        assert!((norm1(x.view()) - 32.0).abs() < 1e-6);
        assert!(dist2(x.view(), toy_point(10.0).view()) < 1e-5);
        assert!(inst.residual_norm(&x) < 1e-10);
    }

    #[test]
    fn l1_norm_not_above_feasible_generator() {
        let a = gen_gaussian::<f64>(20, 60, 0.1, 4).unwrap();
        let mut x0 = Array1::<f64>::zeros(60);
        for (i, v) in x0.iter_mut().enumerate() {
            *v = ((i * 7) % 11) as f64 - 5.0;
        }
        let b = a.entries.dot(&x0);
        let inst = Instance::from_rhs(a, b).unwrap();
        let x = solve_l1_init(&inst, 1e-10, 20_000).unwrap();
        assert!(norm1(x.view()) <= norm1(x0.view()) + 1e-6);
        assert!(inst.residual_norm(&x) <= 1e-8 * (1.0 + norm2(inst.rhs.view())));
    }

    #[test]
    fn recovers_sparse_dct_signal() {
        let a = gen_dct::<f64>(64, 256, 2.0, 17).unwrap();
        let truth = gen_sparse_signal::<f64>(256, 4, None, 17).unwrap();
        let inst = Instance::from_truth(a, truth.clone()).unwrap();
        let x = solve_l1_init(&inst, 1e-10, 20_000).unwrap();
        let err = dist2(x.view(), truth.values.view()) / norm2(truth.values.view());
        assert!(err < 1e-6, "relative error {err}");
    }

    #[test]
    fn zero_rhs_returns_zero() {
        let a = gen_gaussian::<f64>(3, 6, 0.0, 1).unwrap();
        let inst = Instance::from_rhs(a, Array1::zeros(3)).unwrap();
        let x = solve_l1_init(&inst, 1e-8, 100).unwrap();
        assert!(x.iter().all(|v| *v == 0.0));
    }
}
