use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::scalar::Real;

/// Euclidean projection onto `{x : A x = b}`.
///
/// Holds `A` and a Cholesky factor of `A Aᵀ`; applying the projection costs
/// O(mn) instead of the O(n²) of the explicit projector
/// `I − Aᵀ(AAᵀ)⁻¹A`, which [`ProjectionCache::projector`] materializes on demand.
#[derive(Debug, Clone)]
pub struct ProjectionCache<T> {
    a: Array2<T>,
    gram: Cholesky<T>,
    rhs: Array1<T>,
    offset: Array1<T>,
}

impl<T: Real> ProjectionCache<T> {
    pub fn new(a: ArrayView2<T>, b: ArrayView1<T>) -> Result<Self> {
        if a.nrows() != b.len() {
            return Err(Error::Parameter(format!(
                "projection: A has {} rows but b has length {}",
                a.nrows(),
                b.len()
            )));
        }
        if a.nrows() > a.ncols() {
            return Err(Error::Rank(format!(
                "{}x{} matrix cannot have full row rank",
                a.nrows(),
                a.ncols()
            )));
        }
        let gram = a.dot(&a.t());
        let chol = Cholesky::factor(gram.view())?;
        let cond = chol.condition_estimate();
        let limit = T::lit(1e12).min(T::lit(1e-2) / T::epsilon());
        if !(cond <= limit) {
            return Err(Error::Rank(format!(
                "A Aᵀ is numerically singular (condition estimate {cond:e})"
            )));
        }
        let offset = a.t().dot(&chol.solve(b));
        Ok(Self {
            a: a.to_owned(),
            gram: chol,
            rhs: b.to_owned(),
            offset,
        })
    }

    /// Same matrix, different right-hand side; reuses the factorization.
    pub fn with_rhs(&self, b: ArrayView1<T>) -> Self {
        let offset = self.a.t().dot(&self.gram.solve(b));
        Self {
            a: self.a.clone(),
            gram: self.gram.clone(),
            rhs: b.to_owned(),
            offset,
        }
    }

    pub fn matrix(&self) -> &Array2<T> {
        &self.a
    }

    pub fn rhs(&self) -> &Array1<T> {
        &self.rhs
    }

    /// `Aᵀ(AAᵀ)⁻¹b`, the least-norm feasible point.
    pub fn offset(&self) -> &Array1<T> {
        &self.offset
    }

    /// Dense `I − Aᵀ(AAᵀ)⁻¹A`.
    pub fn projector(&self) -> Array2<T> {
        let n = self.a.ncols();
        let mut p = Array2::<T>::eye(n);
        for j in 0..n {
            let col = self.a.column(j);
            let coef = self.a.t().dot(&self.gram.solve(col));
            for i in 0..n {
                p[[i, j]] = p[[i, j]] - coef[i];
            }
        }
        p
    }

    /// Nearest point of the affine set to `f`.
    ///
    /// One refinement pass is applied so the feasibility error stays near
    /// machine precision even for moderately conditioned `A Aᵀ`.
    pub fn project(&self, f: ArrayView1<T>) -> Array1<T> {
        let mut x = f.to_owned();
        for _ in 0..2 {
            let r = self.a.dot(&x) - &self.rhs;
            let corr = self.a.t().dot(&self.gram.solve(r.view()));
            x -= &corr;
        }
        x
    }
}

/// Free-function form of [`ProjectionCache::project`].
pub fn project_affine<T: Real>(cache: &ProjectionCache<T>, f: ArrayView1<T>) -> Array1<T> {
    cache.project(f)
}
