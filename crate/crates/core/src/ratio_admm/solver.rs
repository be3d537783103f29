use ndarray::{Array1, Zip};

use crate::error::{param, Error, Result};
use crate::instancegen::Instance;
use crate::linalg::{dist2, norm1, norm2};
use crate::ratio_admm::basis_pursuit::solve_l1_with_cache;
use crate::ratio_admm::projection::ProjectionCache;
use crate::ratio_admm::prox::{objective, y_update, z_update_into, BoxConstraint};
use crate::rng::SplitMix64;
use crate::scalar::Real;

/// How the first iterate is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum InitStrategy<T> {
    /// Basis-pursuit solution from [`solve_l1_init`](super::solve_l1_init).
    L1BasisPursuit,
    /// Projected onto the feasible set before use.
    Explicit(Array1<T>),
    /// Projection of the origin.
    LeastNorm,
}

#[derive(Debug, Clone)]
pub struct SolverConfig<T> {
    pub rho1: T,
    pub rho2: T,
    /// Relative-change stopping tolerance.
    pub eps: T,
    /// `None` means ten times the signal length.
    pub max_iter: Option<usize>,
    pub bounds: Option<BoxConstraint<T>>,
    pub init: InitStrategy<T>,
    /// Seeds the random direction used when the y-subproblem is degenerate.
    pub seed: u64,
    pub l1_eps: T,
    pub l1_max_iter: usize,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            rho1: T::lit(100.0),
            rho2: T::lit(100.0),
            eps: T::lit(1e-8),
            max_iter: None,
            bounds: None,
            init: InitStrategy::L1BasisPursuit,
            seed: 0,
            l1_eps: T::lit(1e-8),
            l1_max_iter: 20_000,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn with_box(mut self, bounds: BoxConstraint<T>) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub fn with_init(mut self, init: InitStrategy<T>) -> Self {
        self.init = init;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho1 > T::zero() && self.rho2 > T::zero()) {
            return param("rho1 and rho2 must be positive");
        }
        if !(self.eps > T::zero()) {
            return param("eps must be positive");
        }
        if self.max_iter == Some(0) {
            return param("max_iter must be positive");
        }
        if let Some(b) = &self.bounds {
            if !(b.lower < b.upper) {
                return param("box constraint is empty");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIter,
}

/// Outcome of a ratio solve. Histories hold one entry per iteration.
#[derive(Debug, Clone)]
pub struct SolveReport<T> {
    /// Final `x`, the only iterate that is exactly feasible.
    pub solution: Array1<T>,
    pub y: Array1<T>,
    /// Final `z`; with a box constraint this is the iterate that lies in the box.
    pub z: Array1<T>,
    pub iterations: usize,
    pub status: Status,
    pub objective_history: Vec<T>,
    pub feasibility_history: Vec<T>,
    pub residual_y: Vec<T>,
    pub residual_z: Vec<T>,
}

/// L1/L2 minimization subject to `A x = b` (and optionally a box) by ADMM.
///
/// Each iteration projects a weighted average of `y − v/ρ₁` and `z − w/ρ₂` onto
/// the affine set, rescales `x + v/ρ₁` by the cubic-root rule, shrinks
/// `x + w/ρ₂` with threshold `1/(ρ₂‖y‖₂)` (clipping to the box when present)
/// and takes dual ascent steps.
///
/// The objective is scale invariant but the penalties are not, so the problem
/// is solved on `b / ‖x⁰‖₂` (box scaled alike) and the iterates are mapped
/// back; `ρ₁, ρ₂` are therefore relative to a unit-norm signal.
pub fn solve<T: Real>(instance: &Instance<T>, config: &SolverConfig<T>) -> Result<SolveReport<T>> {
    config.validate()?;
    if norm2(instance.rhs.view()) == T::zero() {
        return Err(Error::Degenerate("b = 0 admits only the trivial minimizer".into()));
    }
    let cache = ProjectionCache::new(instance.matrix.entries.view(), instance.rhs.view())?;
    solve_with_cache(&cache, config)
}

pub(crate) fn solve_with_cache<T: Real>(
    cache: &ProjectionCache<T>,
    config: &SolverConfig<T>,
) -> Result<SolveReport<T>> {
    let n = cache.matrix().ncols();
    let x0 = match &config.init {
        InitStrategy::L1BasisPursuit => solve_l1_with_cache(cache, config.l1_eps, config.l1_max_iter),
        InitStrategy::Explicit(v) => {
            if v.len() != n {
                return param(format!("initial vector has length {}, expected {n}", v.len()));
            }
            cache.project(v.view())
        }
        InitStrategy::LeastNorm => cache.offset().clone(),
    };
    let x0_norm = norm2(x0.view());
    let scale = if x0_norm > T::zero() { T::one() / x0_norm } else { T::one() };
    let unscale = T::one() / scale;
    let scaled = cache.with_rhs(cache.rhs().mapv(|v| v * scale).view());
    let bounds = config.bounds.map(|b| b.scaled(scale));

    let (rho1, rho2) = (config.rho1, config.rho2);
    let max_iter = config.max_iter.unwrap_or(10 * n);
    let mut rng = SplitMix64::new(config.seed);

    let mut x = x0.mapv(|v| v * scale);
    let mut y = x.clone();
    let mut z = x.clone();
    let mut v = Array1::<T>::zeros(n);
    let mut w = Array1::<T>::zeros(n);
    let mut f = Array1::<T>::zeros(n);
    let mut d = Array1::<T>::zeros(n);
    let mut r = Array1::<T>::zeros(n);

    let a = scaled.matrix();
    let b = scaled.rhs();
    let rho_sum = rho1 + rho2;
    let mut objective_history = Vec::with_capacity(max_iter.min(1 << 16));
    let mut feasibility_history = Vec::with_capacity(max_iter.min(1 << 16));
    let mut residual_y = Vec::with_capacity(max_iter.min(1 << 16));
    let mut residual_z = Vec::with_capacity(max_iter.min(1 << 16));
    let mut status = Status::MaxIter;
    let mut iterations = 0;

    for k in 1..=max_iter {
        let x_prev = x.clone();
        Zip::from(&mut f)
            .and(&y)
            .and(&z)
            .and(&v)
            .and(&w)
            .for_each(|fi, &yi, &zi, &vi, &wi| *fi = (rho1 * yi - vi + rho2 * zi - wi) / rho_sum);
        x = scaled.project(f.view());

        // y: argmin ‖z‖₁/‖y‖₂ + ρ₁/2 ‖y − d‖²
        let c = norm1(z.view());
        Zip::from(&mut d).and(&x).and(&v).for_each(|di, &xi, &vi| *di = xi + vi / rho1);
        y = y_update(c, d.view(), rho1, &mut rng)?;

        // z: shrink (and clip) x + w/ρ₂
        let y_norm = norm2(y.view());
        let nu = if y_norm > T::zero() { T::one() / (rho2 * y_norm) } else { T::infinity() };
        Zip::from(&mut r).and(&x).and(&w).for_each(|ri, &xi, &wi| *ri = xi + wi / rho2);
        z_update_into(r.view(), nu, bounds.as_ref(), &mut z);

        Zip::from(&mut v).and(&x).and(&y).for_each(|vi, &xi, &yi| *vi = *vi + rho1 * (xi - yi));
        Zip::from(&mut w).and(&x).and(&z).for_each(|wi, &xi, &zi| *wi = *wi + rho2 * (xi - zi));

        let feas = norm2((a.dot(&x) - b).view());
        objective_history.push(objective(x.view()));
        feasibility_history.push(feas * unscale);
        residual_y.push(dist2(x.view(), y.view()) * unscale);
        residual_z.push(dist2(x.view(), z.view()) * unscale);
        iterations = k;

        // The first step from a feasible start reproduces x⁰, so the test starts at k = 2.
        if k >= 2 {
            let change = dist2(x.view(), x_prev.view());
            let x_norm = norm2(x.view());
            let rel = if x_norm > T::zero() { change / x_norm } else { change };
            if rel <= config.eps {
                status = Status::Converged;
                break;
            }
        }
    }

    Ok(SolveReport {
        solution: x.mapv(|v| v * unscale),
        y: y.mapv(|v| v * unscale),
        z: z.mapv(|v| {
            let v = v * unscale;
            config.bounds.map_or(v, |b| b.clamp(v))
        }),
        iterations,
        status,
        objective_history,
        feasibility_history,
        residual_y,
        residual_z,
    })
}
