//! Small dense kernels on `ndarray` containers.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn norm1<T: Real>(x: ArrayView1<T>) -> T {
    x.iter().fold(T::zero(), |acc, v| acc + v.abs())
}

pub fn norm2<T: Real>(x: ArrayView1<T>) -> T {
    // Scaled accumulation so that tiny and huge vectors neither underflow nor overflow.
    let scale = x.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    let ss = x.iter().fold(T::zero(), |acc, v| {
        let r = *v / scale;
        acc + r * r
    });
    scale * ss.sqrt()
}

pub fn dist2<T: Real>(a: ArrayView1<T>, b: ArrayView1<T>) -> T {
    let diff: Array1<T> = &a - &b;
    norm2(diff.view())
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    lower: Array2<T>,
}

impl<T: Real> Cholesky<T> {
    pub fn factor(a: ArrayView2<T>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Parameter(format!(
                "cholesky needs a square matrix, got {}x{}",
                n,
                a.ncols()
            )));
        }
        let mut l = Array2::<T>::zeros((n, n));
        for j in 0..n {
            let mut diag = a[[j, j]];
            for k in 0..j {
                diag = diag - l[[j, k]] * l[[j, k]];
            }
            if !(diag > T::zero()) {
                return Err(Error::Rank(format!(
                    "matrix is not positive definite (pivot {j} = {diag})"
                )));
            }
            let ljj = diag.sqrt();
            l[[j, j]] = ljj;
            for i in (j + 1)..n {
                let mut s = a[[i, j]];
                for k in 0..j {
                    s = s - l[[i, k]] * l[[j, k]];
                }
                l[[i, j]] = s / ljj;
            }
        }
        Ok(Self { lower: l })
    }

    /// Cheap condition estimate `(max L_ii / min L_ii)^2`; a lower bound on cond_2.
    pub fn condition_estimate(&self) -> T {
        let d = self.lower.diag();
        let max = d.iter().fold(T::zero(), |a, v| a.max(*v));
        let min = d.iter().fold(T::infinity(), |a, v| a.min(*v));
        let r = max / min;
        r * r
    }

    pub fn solve(&self, b: ArrayView1<T>) -> Array1<T> {
        let n = self.lower.nrows();
        let l = &self.lower;
        let mut y = b.to_owned();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s = s - l[[i, k]] * y[k];
            }
            y[i] = s / l[[i, i]];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s = s - l[[k, i]] * y[k];
            }
            y[i] = s / l[[i, i]];
        }
        y
    }

    pub fn lower(&self) -> &Array2<T> {
        &self.lower
    }
}
