//! Null-space bases and vertex enumeration of `ker(A) ∩ {‖v‖₁ ≤ 1}`.

use nalgebra::DMatrix;
use ndarray::{Array1, Array2, ArrayView2};

use crate::error::{Error, Result};

/// Orthonormal basis of `ker(A)` as the columns of an `n × d` array.
///
/// Singular values below `max(m, n) · ε · σ_max` count as zero.
pub fn null_space(a: ArrayView2<f64>) -> Array2<f64> {
    let (m, n) = a.dim();
    // Pad to square so the SVD returns a full set of right singular vectors.
    let rows = m.max(n);
    let padded = DMatrix::from_fn(rows, n, |i, j| if i < m { a[[i, j]] } else { 0.0 });
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = rows as f64 * f64::EPSILON * sigma_max.max(f64::MIN_POSITIVE);
    let null_rows: Vec<usize> = (0..n).filter(|&k| svd.singular_values[k] <= tol).collect();
    Array2::from_shape_fn((n, null_rows.len()), |(i, c)| v_t[(null_rows[c], i)])
}

pub fn rank(a: ArrayView2<f64>) -> usize {
    a.ncols() - null_space(a).ncols()
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Lexicographic k-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Self { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Vertices of the polytope `{v ∈ ker(A) : ‖v‖₁ ≤ 1}`, one per antipodal pair.
///
/// With kernel basis `N` of dimension `d`, every vertex vanishes on some set
/// `Z` of `d − 1` coordinates whose rows `N_Z` have rank `d − 1`; the vertex is
/// the normalized one-dimensional kernel of `N_Z`. Candidate sets number
/// `C(n, d − 1)`; exceeding `budget` is an unsupported-size error.
pub fn kernel_vertices(basis: ArrayView2<f64>, budget: u128) -> Result<Vec<Array1<f64>>> {
    let (n, d) = basis.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    let count = binomial(n, d - 1);
    if count > budget {
        return Err(Error::UnsupportedSize(format!(
            "vertex enumeration needs C({n}, {}) = {count} subsets, budget is {budget}",
            d - 1
        )));
    }
    let mut out: Vec<Array1<f64>> = Vec::new();
    for zeros in Combinations::new(n, d - 1) {
        let Some(c) = one_dim_kernel(basis, &zeros) else {
            continue;
        };
        let mut v = basis.dot(&c);
        let l1: f64 = v.iter().map(|x| x.abs()).sum();
        if l1 <= 1e-12 {
            continue;
        }
        v.mapv_inplace(|x| x / l1);
        canonical_sign(&mut v);
        for x in v.iter_mut() {
            if x.abs() < 1e-13 {
                *x = 0.0;
            }
        }
        if !out.iter().any(|w| (w - &v).iter().all(|e| e.abs() < 1e-10)) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Unit `c` spanning `ker(N_Z)` when that kernel is exactly one-dimensional.
fn one_dim_kernel(basis: ArrayView2<f64>, zeros: &[usize]) -> Option<Array1<f64>> {
    let d = basis.ncols();
    if zeros.is_empty() {
        return Some(Array1::from_elem(1, 1.0));
    }
    let sub = Array2::from_shape_fn((zeros.len(), d), |(r, c)| basis[[zeros[r], c]]);
    let k = null_space(sub.view());
    (k.ncols() == 1).then(|| k.column(0).to_owned())
}

/// Flips `v` so its first entry of largest magnitude is positive.
fn canonical_sign(v: &mut Array1<f64>) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best + 1e-12 {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.mapv_inplace(|x| -x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn null_space_of_small_matrices() {
        let a = array![[1.0, 1.0]];
        let k = null_space(a.view());
        assert_eq!(k.dim(), (2, 1));
        assert!((k[[0, 0]] + k[[1, 0]]).abs() < 1e-14);
        let a = array![[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]];
        let k = null_space(a.view());
        assert_eq!(k.ncols(), 1);
        assert!(a.dot(&k).iter().all(|v| v.abs() < 1e-14));
        assert_eq!(rank(array![[1.0, 2.0], [2.0, 4.0]].view()), 1);
        assert_eq!(null_space(array![[1.0, 0.0], [0.0, 1.0]].view()).ncols(), 0);
    }

    #[test]
    fn combinations_enumerate_all() {
        let all: Vec<_> = Combinations::new(5, 2).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[9], vec![3, 4]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(binomial(12, 5), 792);
        assert_eq!(binomial(14, 7), 3432);
    }

    #[test]
    fn vertices_of_a_plane_in_r3() {
        // ker = {v : v1 + v2 + v3 = 0}; the L1 section is a hexagon with
        // vertices ±(1, −1, 0)/2 and its permutations.
        let basis = null_space(array![[1.0, 1.0, 1.0]].view());
        let verts = kernel_vertices(basis.view(), 1000).unwrap();
        assert_eq!(verts.len(), 3);
        for v in &verts {
            let zeros = v.iter().filter(|x| **x == 0.0).count();
            assert_eq!(zeros, 1);
            assert!(v.iter().all(|x| *x == 0.0 || (x.abs() - 0.5).abs() < 1e-12));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let basis = Array2::from_shape_fn((30, 10), |(i, j)| ((i * 7 + j * 3) % 11) as f64);
        assert!(matches!(kernel_vertices(basis.view(), 1000), Err(Error::UnsupportedSize(_))));
    }
}
