use ndarray::Array1;

use crate::error::{param, Result};
use crate::instancegen::Instance;
use crate::linalg::norm2;
use crate::ratio_admm::objective;
use crate::rng::SplitMix64;
use crate::theory::kernel::null_space;
use crate::theory::nsp::{Method, PropertyVerdict, Witness};

/// Smallest step radius tried before a decrease counts as a violation.
pub const MIN_RADIUS: f64 = 1e-6;
/// Allowed objective decrease, absorbing roundoff.
pub const DECREASE_TOL: f64 = 1e-12;

/// Empirical check that `x` is a local minimizer of L1/L2 on `{Ax = b}`.
///
/// Samples `trials` random unit kernel directions `v` and evaluates
/// `x ± t·r·v` for every `t` in `t_grid`, where the radius `r` starts at a
/// quarter of the smallest nonzero `|xᵢ|`. A decrease halves `r` and restarts;
/// once `r` would drop below [`MIN_RADIUS`] the decreasing step is returned as
/// the witness (`vector` is the displacement, `margin` the objective change).
pub fn verify_local_min(
    instance: &Instance<f64>,
    x: &Array1<f64>,
    trials: usize,
    t_grid: &[f64],
    seed: u64,
) -> Result<PropertyVerdict> {
    let a = &instance.matrix.entries;
    if x.len() != a.ncols() {
        return param(format!("x has length {}, expected {}", x.len(), a.ncols()));
    }
    let scale = norm2(instance.rhs.view()).max(1.0);
    if instance.residual_norm(x) > 1e-10 * scale {
        return param("x is not feasible");
    }
    let Some(min_abs) = x.iter().map(|v| v.abs()).filter(|v| *v > 0.0).reduce(f64::min) else {
        return param("x must be nonzero");
    };
    if t_grid.iter().any(|t| !t.is_finite() || *t <= 0.0) {
        return param("t_grid entries must be positive");
    }
    let basis = null_space(a.view());
    if basis.ncols() == 0 {
        return Ok(PropertyVerdict { holds: true, witness: None, method: Method::Sampled });
    }
    let mut rng = SplitMix64::new(seed);
    let directions: Vec<Array1<f64>> = (0..trials)
        .map(|_| {
            let c = Array1::from(rng.unit_vector(basis.ncols()));
            let v = basis.dot(&c);
            let norm = norm2(v.view());
            v / norm
        })
        .collect();
    let support: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0.0).collect();
    let base = objective(x.view());
    let mut radius = min_abs / 4.0;
    loop {
        let violation = directions.iter().find_map(|v| {
            t_grid.iter().flat_map(|&t| [t, -t]).find_map(|t| {
                let step = v * (t * radius);
                let change = objective((x + &step).view()) - base;
                (change < -DECREASE_TOL).then_some((step, change))
            })
        });
        match violation {
            None => return Ok(PropertyVerdict { holds: true, witness: None, method: Method::Sampled }),
            Some((step, change)) if radius / 2.0 < MIN_RADIUS => {
                return Ok(PropertyVerdict {
                    holds: false,
                    witness: Some(Witness {
                        support,
                        vector: step,
                        margin: change,
                    }),
                    method: Method::Sampled,
                });
            }
            Some(_) => radius /= 2.0,
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::instancegen::{toy_instance, toy_kernel_direction, toy_point, SensingMatrix};
    use ndarray::array;

    fn grid() -> Vec<f64> {
        (1..=20).map(|k| k as f64 / 20.0).collect()
    }

    #[test]
    fn toy_sparse_point_is_local_min() {
        let inst = toy_instance::<f64>();
        let x0 = toy_point(0.0);
        let verdict = verify_local_min(&inst, &x0, 50, &grid(), 1).unwrap();
        assert!(verdict.holds);
        // Along the explicit kernel direction for |t| ≤ 0.1.
        let v = toy_kernel_direction::<f64>();
        let v = &v / norm2(v.view());
        let f0 = objective(x0.view());
        for k in -100..=100 {
            let t = k as f64 * 1e-3;
            assert!(objective((&x0 + &(&v * t)).view()) >= f0 - 1e-12);
        }
    }

    #[test]
    fn one_sparse_points_on_snsp_matrix() {
        let a = array![[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]];
        let m = SensingMatrix::explicit(a.clone()).unwrap();
        let dense: Vec<f64> = (1..=200).map(|k| k as f64 / 200.0).collect();
        for j in 0..3 {
            for amp in [1.0, -2.5] {
                let mut x = Array1::zeros(3);
                x[j] = amp;
                let inst = Instance::from_rhs(m.clone(), a.dot(&x)).unwrap();
                assert!(verify_local_min(&inst, &x, 10, &dense, 3).unwrap().holds);
            }
        }
    }

    #[test]
    fn dense_point_reports() {
        let inst = toy_instance::<f64>();
        let x = toy_point(5.0);
        let verdict = verify_local_min(&inst, &x, 20, &[1.0], 2).unwrap();
        if !verdict.holds {
            let w = verdict.witness.unwrap();
            assert!(w.margin < 0.0);
            assert!(inst.matrix.entries.dot(&w.vector).iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn rejects_bad_input() {
        let inst = toy_instance::<f64>();
        assert!(verify_local_min(&inst, &Array1::zeros(6), 5, &[0.5], 0).is_err());
        let mut x = toy_point(0.0);
        x[0] += 1.0;
        assert!(verify_local_min(&inst, &x, 5, &[0.5], 0).is_err());
    }
}
