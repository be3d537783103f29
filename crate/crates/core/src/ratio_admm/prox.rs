//! Closed-form subproblem solutions used by both ADMM schemes.

use ndarray::{Array1, ArrayView1, Zip};

use crate::error::{param, Result};
use crate::linalg::{norm1, norm2};
use crate::rng::SplitMix64;
use crate::scalar::Real;

/// `‖x‖₁ / ‖x‖₂`, with the convention 0/0 = 0.
pub fn objective<T: Real>(x: ArrayView1<T>) -> T {
    let l2 = norm2(x);
    if l2 == T::zero() {
        T::zero()
    } else {
        norm1(x) / l2
    }
}

/// Soft shrinkage `sign(v_i) max(|v_i| − mu, 0)`.
pub fn shrink<T: Real>(v: ArrayView1<T>, mu: T) -> Result<Array1<T>> {
    if !(mu >= T::zero()) {
        return param(format!("shrink: threshold must be nonnegative, got {mu}"));
    }
    Ok(v.mapv(|x| shrink_scalar(x, mu)))
}

#[inline]
pub(crate) fn shrink_scalar<T: Real>(x: T, mu: T) -> T {
    let mag = x.abs() - mu;
    if mag > T::zero() {
        x.signum() * mag
    } else {
        T::zero()
    }
}

/// The real root τ ≥ 1 of `τ³ − τ² − D = 0`.
///
/// Uses the Cardano form `τ = 1/3 + (C + 1/C)/3` with
/// `C = ∛((27D + 2 + √((27D + 2)² − 4)) / 2)`. The discriminant is evaluated as
/// `27D (27D + 4)` to avoid cancellation for small D.
pub fn solve_cubic_tau<T: Real>(d: T) -> Result<T> {
    if !(d >= T::zero()) {
        return param(format!("cubic root: D must be nonnegative, got {d}"));
    }
    Ok(cubic_tau_unchecked(d))
}

pub(crate) fn cubic_tau_unchecked<T: Real>(d: T) -> T {
    let three = T::lit(3.0);
    let q = T::lit(27.0) * d;
    let c = ((q + T::lit(2.0) + (q * (q + T::lit(4.0))).sqrt()) / T::lit(2.0)).cbrt();
    T::one() / three + (c + T::one() / c) / three
}

/// Minimizer of `c / ‖y‖₂ + (ρ₁/2) ‖y − d‖₂²`.
///
/// With `d = 0` every vector of norm `∛(c/ρ₁)` is optimal; the returned one is
/// a uniformly random direction drawn from `rng`.
pub fn y_update<T: Real>(
    c: T,
    d: ArrayView1<T>,
    rho1: T,
    rng: &mut SplitMix64,
) -> Result<Array1<T>> {
    if !(rho1 > T::zero()) {
        return param(format!("y-update: rho1 must be positive, got {rho1}"));
    }
    if !(c >= T::zero()) {
        return param(format!("y-update: c must be nonnegative, got {c}"));
    }
    if c == T::zero() {
        return Ok(d.to_owned());
    }
    let eta = norm2(d);
    if eta == T::zero() {
        let radius = (c / rho1).cbrt();
        let dir = rng.unit_vector(d.len());
        return Ok(Array1::from_iter(dir.into_iter().map(|v| T::lit(v) * radius)));
    }
    let tau = cubic_tau_unchecked(c / (rho1 * eta * eta * eta));
    Ok(d.mapv(|v| v * tau))
}

/// Interval `[lower, upper]` applied componentwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxConstraint<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Real> BoxConstraint<T> {
    pub fn new(lower: T, upper: T) -> Result<Self> {
        if !(lower < upper) {
            return param(format!("box constraint [{lower}, {upper}] is empty"));
        }
        Ok(Self { lower, upper })
    }

    pub fn symmetric(half_width: T) -> Result<Self> {
        Self::new(-half_width, half_width)
    }

    #[inline]
    pub fn clamp(&self, v: T) -> T {
        v.max(self.lower).min(self.upper)
    }

    pub fn contains(&self, v: T) -> bool {
        v >= self.lower && v <= self.upper
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            lower: self.lower * factor,
            upper: self.upper * factor,
        }
    }
}

/// Shrinkage followed by projection onto the optional box.
pub fn z_update<T: Real>(
    r: ArrayView1<T>,
    nu: T,
    bounds: Option<&BoxConstraint<T>>,
) -> Result<Array1<T>> {
    if !(nu >= T::zero()) {
        return param(format!("z-update: nu must be nonnegative, got {nu}"));
    }
    if let Some(b) = bounds {
        if !(b.lower < b.upper) {
            return param("z-update: empty box");
        }
    }
    let mut out = Array1::zeros(r.len());
    z_update_into(r, nu, bounds, &mut out);
    Ok(out)
}

pub(crate) fn z_update_into<T: Real>(
    r: ArrayView1<T>,
    nu: T,
    bounds: Option<&BoxConstraint<T>>,
    out: &mut Array1<T>,
) {
    match bounds {
        None => Zip::from(out).and(r).for_each(|o, &x| *o = shrink_scalar(x, nu)),
        Some(b) => Zip::from(out)
            .and(r)
            .for_each(|o, &x| *o = b.clamp(shrink_scalar(x, nu))),
    }
}
