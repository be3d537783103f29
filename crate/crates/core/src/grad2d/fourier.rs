//! 2D DFT plumbing and the subsampled Fourier measurement operator.
//!
//! Convention: the forward transform is unnormalized,
//! `X[k, l] = Σ_{i,j} u[i, j] e^{−2πi(ki/n + lj/m)}`, and the inverse carries
//! the full `1/(nm)` factor. Hence `AᴴA` for `A = S∘F` has Fourier symbol
//! `nm · mask`.

use std::sync::Arc;

use ndarray::{Array2, Zip};
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{param, Result};
use crate::grad2d::image::Image;
use crate::grad2d::mask::FourierMask;
use crate::scalar::Real;

pub struct Fft2<T: Real> {
    rows: usize,
    cols: usize,
    row_fwd: Arc<dyn Fft<T>>,
    row_inv: Arc<dyn Fft<T>>,
    col_fwd: Arc<dyn Fft<T>>,
    col_inv: Arc<dyn Fft<T>>,
}

impl<T: Real> Fft2<T> {
    pub fn new(rows: usize, cols: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            rows,
            cols,
            row_fwd: planner.plan_fft_forward(cols),
            row_inv: planner.plan_fft_inverse(cols),
            col_fwd: planner.plan_fft_forward(rows),
            col_inv: planner.plan_fft_inverse(rows),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn forward(&self, data: &mut Array2<Complex<T>>) {
        self.apply(data, &self.row_fwd, &self.col_fwd);
    }

    /// Inverse transform including the `1/(nm)` normalization.
    pub fn inverse(&self, data: &mut Array2<Complex<T>>) {
        self.apply(data, &self.row_inv, &self.col_inv);
        let scale = T::one() / T::lit((self.rows * self.cols) as f64);
        data.mapv_inplace(|c| c * scale);
    }

    fn apply(&self, data: &mut Array2<Complex<T>>, row: &Arc<dyn Fft<T>>, col: &Arc<dyn Fft<T>>) {
        assert_eq!(data.dim(), (self.rows, self.cols), "fft shape mismatch");
        let buf = data.as_slice_mut().expect("standard layout");
        row.process(buf);
        let mut column = vec![Complex::new(T::zero(), T::zero()); self.rows];
        for j in 0..self.cols {
            for i in 0..self.rows {
                column[i] = buf[i * self.cols + j];
            }
            col.process(&mut column);
            for i in 0..self.rows {
                buf[i * self.cols + j] = column[i];
            }
        }
    }

    pub fn forward_real(&self, u: &Array2<T>) -> Array2<Complex<T>> {
        let mut c = u.mapv(|v| Complex::new(v, T::zero()));
        self.forward(&mut c);
        c
    }

    /// Real part of the inverse transform.
    pub fn inverse_real(&self, mut spectrum: Array2<Complex<T>>) -> Array2<T> {
        self.inverse(&mut spectrum);
        spectrum.mapv(|c| c.re)
    }
}

/// Fourier samples on a mask, stored on the full frequency grid with zeros off the mask.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqData<T> {
    pub values: Array2<Complex<T>>,
}

impl<T: Real> FreqData<T> {
    pub fn dims(&self) -> (usize, usize) {
        self.values.dim()
    }

    pub fn norm(&self) -> T {
        self.values.iter().fold(T::zero(), |a, c| a + c.norm_sqr()).sqrt()
    }
}

/// `S F u`: the 2D DFT of `u` restricted to the kept frequencies.
pub fn measure<T: Real>(u: &Image<T>, mask: &FourierMask) -> Result<FreqData<T>> {
    if u.dims() != mask.dims() {
        return param(format!(
            "image {:?} and mask {:?} differ in shape",
            u.dims(),
            mask.dims()
        ));
    }
    let (n, m) = u.dims();
    let fft = Fft2::new(n, m);
    let mut values = fft.forward_real(&u.pixels);
    apply_mask(&mut values, mask);
    Ok(FreqData { values })
}

pub(crate) fn apply_mask<T: Real>(values: &mut Array2<Complex<T>>, mask: &FourierMask) {
    Zip::from(values).and(&mask.keep).for_each(|v, &k| {
        if !k {
            *v = Complex::new(T::zero(), T::zero());
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_image(seed: u64, n: usize, m: usize) -> Image<f64> {
        let mut rng = SplitMix64::new(seed);
        Image::new(Array2::from_shape_fn((n, m), |_| rng.uniform())).unwrap()
    }

    #[test]
    fn full_mask_round_trip() {
        let u = random_image(1, 12, 10);
        let mask = FourierMask::full(12, 10);
        let f = measure(&u, &mask).unwrap();
        let back = Fft2::new(12, 10).inverse_real(f.values);
        let err = (&back - &u.pixels).mapv(f64::abs).fold(0.0f64, |a, v| a.max(*v));
        assert!(err < 1e-12);
    }

    #[test]
    fn dc_only_is_pixel_sum() {
        let u = random_image(2, 8, 8);
        let mask = FourierMask::dc_only(8, 8);
        let f = measure(&u, &mask).unwrap();
        let total: f64 = u.pixels.sum();
        assert!((f.values[[0, 0]].re - total).abs() < 1e-12);
        assert!(f.values[[0, 0]].im.abs() < 1e-12);
        let others = f.values.iter().skip(1).all(|c| c.norm() == 0.0);
        assert!(others);
    }

    #[test]
    fn parseval() {
        for seed in 0..5 {
            let u = random_image(seed, 16, 9);
            let f = measure(&u, &FourierMask::full(16, 9)).unwrap();
            let energy: f64 = u.pixels.iter().map(|v| v * v).sum();
            let spectral = f.norm().powi(2) / (16.0 * 9.0);
            assert!((energy - spectral).abs() < 1e-10 * energy);
        }
    }

    #[test]
    fn matches_direct_dft() {
        let u = random_image(7, 5, 6);
        let f = measure(&u, &FourierMask::full(5, 6)).unwrap();
        for k in 0..5 {
            for l in 0..6 {
                let mut acc = Complex::new(0.0, 0.0);
                for i in 0..5 {
                    for j in 0..6 {
                        let phase = -2.0 * std::f64::consts::PI * ((k * i) as f64 / 5.0 + (l * j) as f64 / 6.0);
                        acc += Complex::from_polar(u.pixels[[i, j]], phase);
                    }
                }
                assert!((acc - f.values[[k, l]]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn shape_mismatch() {
        let u = random_image(3, 4, 4);
        assert!(measure(&u, &FourierMask::full(4, 5)).is_err());
    }
}
