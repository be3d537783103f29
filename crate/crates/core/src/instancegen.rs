//! Seeded sensing matrices, sparse ground truths and the 5x6 toy instance.
//!
//! Every generator is a pure function of its parameters and a `u64` seed; the
//! underlying stream is [`SplitMix64`]. Entries are produced in `f64` and then
//! converted to the requested scalar type.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};

use crate::error::{param, Result};
use crate::linalg::norm2;
use crate::rng::SplitMix64;
use crate::scalar::Real;

/// Retry cap for rejection sampling of separated supports.
pub const MIN_SEP_MAX_RETRIES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixKind {
    /// Oversampled DCT with oversampling factor `F`.
    OversampledDct { f: f64 },
    /// Rows drawn from N(0, Σ) with Σ_ii = 1, Σ_ij = r.
    CorrelatedGaussian { r: f64 },
    Explicit,
}

#[derive(Debug, Clone)]
pub struct SensingMatrix<T> {
    pub entries: Array2<T>,
    pub kind: MatrixKind,
    pub seed: u64,
}

impl<T: Real> SensingMatrix<T> {
    pub fn explicit(entries: Array2<T>) -> Result<Self> {
        if entries.nrows() == 0 || entries.ncols() == 0 {
            return param("matrix must have at least one row and one column");
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return param("matrix entries must be finite");
        }
        Ok(Self {
            entries,
            kind: MatrixKind::Explicit,
            seed: 0,
        })
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn cast<U: Real>(&self) -> SensingMatrix<U> {
        SensingMatrix {
            entries: self.entries.mapv(|v| U::lit(v.to_f64_lossy())),
            kind: self.kind,
            seed: self.seed,
        }
    }
}

/// Sparse ground-truth vector together with its sorted support.
#[derive(Debug, Clone)]
pub struct GroundTruth<T> {
    pub values: Array1<T>,
    pub support: Vec<usize>,
}

impl<T: Real> GroundTruth<T> {
    /// Builds a ground truth from a dense vector, reading the support off its nonzeros.
    pub fn from_dense(values: Array1<T>) -> Self {
        let support = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != T::zero())
            .map(|(i, _)| i)
            .collect();
        Self { values, support }
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }
}

/// A linear system `A x = b`, optionally with the vector that generated `b`.
#[derive(Debug, Clone)]
pub struct Instance<T> {
    pub matrix: SensingMatrix<T>,
    pub truth: Option<GroundTruth<T>>,
    pub rhs: Array1<T>,
}

impl<T: Real> Instance<T> {
    /// Instance with `b = A x` for the given truth.
    pub fn from_truth(matrix: SensingMatrix<T>, truth: GroundTruth<T>) -> Result<Self> {
        if truth.values.len() != matrix.cols() {
            return param(format!(
                "truth length {} does not match {} columns",
                truth.values.len(),
                matrix.cols()
            ));
        }
        let rhs = matrix.entries.dot(&truth.values);
        Ok(Self {
            matrix,
            truth: Some(truth),
            rhs,
        })
    }

    pub fn from_rhs(matrix: SensingMatrix<T>, rhs: Array1<T>) -> Result<Self> {
        if rhs.len() != matrix.rows() {
            return param(format!(
                "rhs length {} does not match {} rows",
                rhs.len(),
                matrix.rows()
            ));
        }
        Ok(Self {
            matrix,
            truth: None,
            rhs,
        })
    }

    /// `‖A x − b‖₂` for an arbitrary candidate.
    pub fn residual_norm(&self, x: &Array1<T>) -> T {
        let r = self.matrix.entries.dot(x) - &self.rhs;
        norm2(r.view())
    }
}

/// Oversampled DCT: column j (1-based) is `cos(2π w j / F) / √m` with one
/// frequency vector `w ~ U[0,1]^m` shared by all columns.
pub fn gen_dct<T: Real>(m: usize, n: usize, f: f64, seed: u64) -> Result<SensingMatrix<T>> {
    if m == 0 || n == 0 {
        return param("gen_dct: dimensions must be positive");
    }
    if !(f > 0.0) || !f.is_finite() {
        return param(format!("gen_dct: F must be positive, got {f}"));
    }
    let mut rng = SplitMix64::new(seed);
    let w: Vec<f64> = (0..m).map(|_| rng.uniform()).collect();
    let scale = 1.0 / (m as f64).sqrt();
    let entries = Array2::from_shape_fn((m, n), |(i, j)| {
        let col = (j + 1) as f64;
        T::lit(scale * (2.0 * PI * w[i] * col / f).cos())
    });
    Ok(SensingMatrix {
        entries,
        kind: MatrixKind::OversampledDct { f },
        seed,
    })
}

/// Gaussian rows with equicorrelated covariance, sampled as
/// `√(1−r)·g + √r·h·1` (g iid normal per entry, h one normal per row).
pub fn gen_gaussian<T: Real>(m: usize, n: usize, r: f64, seed: u64) -> Result<SensingMatrix<T>> {
    if m == 0 || n == 0 {
        return param("gen_gaussian: dimensions must be positive");
    }
    if !(0.0..1.0).contains(&r) {
        return param(format!("gen_gaussian: r must lie in [0, 1), got {r}"));
    }
    let mut rng = SplitMix64::new(seed);
    let a = (1.0 - r).sqrt();
    let c = r.sqrt();
    let mut entries = Array2::<T>::zeros((m, n));
    for i in 0..m {
        let shared = rng.normal();
        for j in 0..n {
            entries[[i, j]] = T::lit(a * rng.normal() + c * shared);
        }
    }
    Ok(SensingMatrix {
        entries,
        kind: MatrixKind::CorrelatedGaussian { r },
        seed,
    })
}

/// Random s-sparse vector with Gaussian nonzeros, scaled to `max |x_i| = 1`.
///
/// The support is drawn first (partial Fisher-Yates, then sorted); the s
/// normal values follow in ascending index order. With `min_sep`, supports
/// are redrawn until consecutive indices differ by at least `min_sep`.
pub fn gen_sparse_signal<T: Real>(
    n: usize,
    s: usize,
    min_sep: Option<usize>,
    seed: u64,
) -> Result<GroundTruth<T>> {
    if n == 0 || s == 0 {
        return param("gen_sparse_signal: n and s must be positive");
    }
    if s > n {
        return param(format!("gen_sparse_signal: s = {s} exceeds n = {n}"));
    }
    if let Some(sep) = min_sep {
        if sep == 0 {
            return param("gen_sparse_signal: min_sep must be positive");
        }
        if (s - 1) * sep >= n {
            return param(format!(
                "gen_sparse_signal: {s} spikes with separation {sep} do not fit in {n}"
            ));
        }
    }
    let mut rng = SplitMix64::new(seed);
    let mut support = draw_support(&mut rng, n, s);
    if let Some(sep) = min_sep {
        let mut tries = 1;
        while !is_separated(&support, sep) {
            if tries >= MIN_SEP_MAX_RETRIES {
                return param(format!(
                    "gen_sparse_signal: no support with separation {sep} after {MIN_SEP_MAX_RETRIES} draws"
                ));
            }
            support = draw_support(&mut rng, n, s);
            tries += 1;
        }
    }
    let raw: Vec<f64> = (0..s).map(|_| rng.normal()).collect();
    let peak = raw.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut values = Array1::<T>::zeros(n);
    for (&i, v) in support.iter().zip(&raw) {
        values[i] = T::lit(v / peak);
    }
    Ok(GroundTruth { values, support })
}

fn draw_support(rng: &mut SplitMix64, n: usize, s: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    for k in 0..s {
        let j = k + rng.index(n - k);
        idx.swap(k, j);
    }
    let mut support = idx[..s].to_vec();
    support.sort_unstable();
    support
}

fn is_separated(support: &[usize], sep: usize) -> bool {
    support.windows(2).all(|w| w[1] - w[0] >= sep)
}

/// The 5x6 example whose feasible set is the line
/// `x(t) = (t, t, t, 20−2t, 40−4t, 2(t−9))`.
pub fn toy_instance<T: Real>() -> Instance<T> {
    #[rustfmt::skip]
    let a = [
        1.0, -1.0,  0.0, 0.0, 0.0,  0.0,
        1.0,  0.0, -1.0, 0.0, 0.0,  0.0,
        0.0,  1.0,  1.0, 1.0, 0.0,  0.0,
        2.0,  2.0,  0.0, 0.0, 1.0,  0.0,
        1.0,  1.0,  0.0, 0.0, 0.0, -1.0,
    ];
    let entries = Array2::from_shape_vec((5, 6), a.iter().map(|v| T::lit(*v)).collect())
        .expect("5x6 literal");
    let rhs = Array1::from_iter([0.0, 0.0, 20.0, 40.0, 18.0].map(T::lit));
    Instance {
        matrix: SensingMatrix {
            entries,
            kind: MatrixKind::Explicit,
            seed: 0,
        },
        truth: Some(GroundTruth::from_dense(toy_point(T::zero()))),
        rhs,
    }
}

/// Point on the toy instance's feasible line.
pub fn toy_point<T: Real>(t: T) -> Array1<T> {
    let two = T::lit(2.0);
    Array1::from(vec![
        t,
        t,
        t,
        T::lit(20.0) - two * t,
        T::lit(40.0) - T::lit(4.0) * t,
        two * (t - T::lit(9.0)),
    ])
}

/// Kernel direction of the toy matrix (derivative of `toy_point` in t).
pub fn toy_kernel_direction<T: Real>() -> Array1<T> {
    Array1::from_iter([1.0, 1.0, 1.0, -2.0, -4.0, 2.0].map(T::lit))
}
