use ndarray::{Array2, Zip};

use crate::error::{param, Result};
use crate::scalar::Real;

/// Real image stored row-major as `height × width`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<T> {
    pub pixels: Array2<T>,
}

impl<T: Real> Image<T> {
    pub fn new(pixels: Array2<T>) -> Result<Self> {
        if pixels.nrows() == 0 || pixels.ncols() == 0 {
            return param("image must be nonempty");
        }
        if pixels.iter().any(|v| !v.is_finite()) {
            return param("image pixels must be finite");
        }
        Ok(Self { pixels })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self {
            pixels: Array2::zeros((height, width)),
        }
    }

    pub fn height(&self) -> usize {
        self.pixels.nrows()
    }

    pub fn width(&self) -> usize {
        self.pixels.ncols()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.pixels.dim()
    }

    pub fn norm(&self) -> T {
        self.pixels.iter().fold(T::zero(), |a, v| a + *v * *v).sqrt()
    }

    /// `‖self − other‖₂ / ‖other‖₂`.
    pub fn relative_error(&self, reference: &Image<T>) -> T {
        let diff = self
            .pixels
            .iter()
            .zip(reference.pixels.iter())
            .fold(T::zero(), |a, (x, y)| a + (*x - *y) * (*x - *y))
            .sqrt();
        diff / reference.norm()
    }
}

/// Horizontal and vertical derivative channels of an image.
#[derive(Debug, Clone, PartialEq)]
pub struct GradField<T> {
    /// `u[i, j+1] − u[i, j]`, wrapping in j.
    pub dx: Array2<T>,
    /// `u[i+1, j] − u[i, j]`, wrapping in i.
    pub dy: Array2<T>,
}

impl<T: Real> GradField<T> {
    pub fn zeros(height: usize, width: usize) -> Self {
        Self {
            dx: Array2::zeros((height, width)),
            dy: Array2::zeros((height, width)),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dx.dim()
    }

    pub fn norm1(&self) -> T {
        self.dx.iter().chain(self.dy.iter()).fold(T::zero(), |a, v| a + v.abs())
    }

    /// Single L2 norm over both channels.
    pub fn norm2(&self) -> T {
        self.dx
            .iter()
            .chain(self.dy.iter())
            .fold(T::zero(), |a, v| a + *v * *v)
            .sqrt()
    }

    pub fn dot(&self, other: &GradField<T>) -> T {
        let sx = Zip::from(&self.dx).and(&other.dx).fold(T::zero(), |a, x, y| a + *x * *y);
        let sy = Zip::from(&self.dy).and(&other.dy).fold(T::zero(), |a, x, y| a + *x * *y);
        sx + sy
    }
}

/// Forward differences with periodic boundary.
pub fn grad<T: Real>(u: &Image<T>) -> GradField<T> {
    let mut g = GradField::zeros(u.height(), u.width());
    grad_into(&u.pixels, &mut g);
    g
}

pub(crate) fn grad_into<T: Real>(u: &Array2<T>, g: &mut GradField<T>) {
    let (n, m) = u.dim();
    for i in 0..n {
        let down = (i + 1) % n;
        for j in 0..m {
            let right = (j + 1) % m;
            let c = u[[i, j]];
            g.dx[[i, j]] = u[[i, right]] - c;
            g.dy[[i, j]] = u[[down, j]] - c;
        }
    }
}

/// Adjoint of [`grad`] (that is, `∇ᵀ`, the negative divergence).
pub fn div_adjoint<T: Real>(p: &GradField<T>) -> Result<Image<T>> {
    if p.dx.dim() != p.dy.dim() {
        return param(format!(
            "gradient channels differ in shape: {:?} vs {:?}",
            p.dx.dim(),
            p.dy.dim()
        ));
    }
    let (n, m) = p.dims();
    let mut out = Array2::zeros((n, m));
    div_adjoint_into(p, &mut out);
    Ok(Image { pixels: out })
}

pub(crate) fn div_adjoint_into<T: Real>(p: &GradField<T>, out: &mut Array2<T>) {
    let (n, m) = p.dims();
    for i in 0..n {
        let up = (i + n - 1) % n;
        for j in 0..m {
            let left = (j + m - 1) % m;
            out[[i, j]] = p.dx[[i, left]] - p.dx[[i, j]] + p.dy[[up, j]] - p.dy[[i, j]];
        }
    }
}
