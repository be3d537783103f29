//! Null space property (NSP) and strong null space property (sNSP) of order `s`.
//!
//! Both reduce to the sign of `max_{v ∈ ker A} c·top_s(|v|) − ‖v‖₁`, where
//! `top_s` sums the `s` largest magnitudes (`c = 2` for NSP, `c = s + 2` for
//! sNSP). The function is convex and positively homogeneous, so over the
//! polytope `ker A ∩ {‖v‖₁ ≤ 1}` it peaks at a vertex.

use ndarray::{Array1, ArrayView1, ArrayView2};

use crate::error::{param, Error, Result};
use crate::theory::kernel::{kernel_vertices, null_space};

/// Largest instance accepted by the exhaustive checks.
pub const MAX_NSP_COLUMNS: usize = 14;
pub const MAX_NSP_KERNEL_DIM: usize = 3;

/// Margin tolerance separating NSP's strict inequality from sNSP's non-strict one.
pub const MARGIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Vertex enumeration of the kernel's L1 section.
    Exhaustive,
    /// 1° grid on the unit sphere of the kernel, refined by pattern search.
    GridRefine,
    /// Random kernel directions with an adaptive step radius.
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub support: Vec<usize>,
    pub vector: Array1<f64>,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyVerdict {
    pub holds: bool,
    /// Maximizer of the defining inequality (the violator when `holds` is false).
    pub witness: Option<Witness>,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Property {
    Nsp,
    Snsp,
}

impl Property {
    fn coefficient(self, s: usize) -> f64 {
        match self {
            Property::Nsp => 2.0,
            Property::Snsp => s as f64 + 2.0,
        }
    }

    fn holds(self, margin: f64) -> bool {
        match self {
            Property::Nsp => margin < -MARGIN_TOL,
            Property::Snsp => margin <= MARGIN_TOL,
        }
    }
}

/// `‖v_S‖₁ < ‖v_S̄‖₁` for every nonzero kernel vector and every `|S| ≤ s`.
pub fn check_nsp(a: ArrayView2<f64>, s: usize) -> Result<PropertyVerdict> {
    check(a, s, Property::Nsp, Method::Exhaustive)
}

/// `(s + 1)‖v_S‖₁ ≤ ‖v_S̄‖₁` for every kernel vector and every `|S| ≤ s`.
pub fn check_snsp(a: ArrayView2<f64>, s: usize) -> Result<PropertyVerdict> {
    check(a, s, Property::Snsp, Method::Exhaustive)
}

pub fn check_nsp_with(a: ArrayView2<f64>, s: usize, method: Method) -> Result<PropertyVerdict> {
    check(a, s, Property::Nsp, method)
}

pub fn check_snsp_with(a: ArrayView2<f64>, s: usize, method: Method) -> Result<PropertyVerdict> {
    check(a, s, Property::Snsp, method)
}

fn check(a: ArrayView2<f64>, s: usize, property: Property, method: Method) -> Result<PropertyVerdict> {
    let n = a.ncols();
    if s == 0 || s > n {
        return param(format!("order s must lie in 1..={n}, got {s}"));
    }
    if n > MAX_NSP_COLUMNS {
        return Err(Error::UnsupportedSize(format!(
            "{n} columns exceed the exhaustive limit of {MAX_NSP_COLUMNS}"
        )));
    }
    let basis = null_space(a);
    let d = basis.ncols();
    if d > MAX_NSP_KERNEL_DIM {
        return Err(Error::UnsupportedSize(format!(
            "kernel dimension {d} exceeds the exhaustive limit of {MAX_NSP_KERNEL_DIM}"
        )));
    }
    if d == 0 {
        return Ok(PropertyVerdict { holds: true, witness: None, method });
    }
    let coef = property.coefficient(s);
    let best = match method {
        Method::Exhaustive => kernel_vertices(basis.view(), u128::MAX)?
            .into_iter()
            .map(|v| {
                let unit = &v / v.dot(&v).sqrt();
                (gap(unit.view(), s, coef), unit)
            })
            .fold(None, keep_max),
        Method::GridRefine => Some(grid_refine(basis.view(), |v| gap(v, s, coef))),
        Method::Sampled => return param("sampling is not a valid method for NSP checks"),
    };
    let (margin, vector) = best.expect("nonempty kernel has a vertex");
    Ok(PropertyVerdict {
        holds: property.holds(margin),
        witness: Some(Witness {
            support: top_support(vector.view(), s),
            vector,
            margin,
        }),
        method,
    })
}

fn keep_max(acc: Option<(f64, Array1<f64>)>, item: (f64, Array1<f64>)) -> Option<(f64, Array1<f64>)> {
    match acc {
        Some(best) if best.0 >= item.0 => Some(best),
        _ => Some(item),
    }
}

/// `c · top_s(|v|) − ‖v‖₁`.
fn gap(v: ArrayView1<f64>, s: usize, coef: f64) -> f64 {
    let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    mags.sort_by(|x, y| y.total_cmp(x));
    let top: f64 = mags.iter().take(s).sum();
    let total: f64 = mags.iter().sum();
    coef * top - total
}

/// Indices of the `s` largest magnitudes, ascending.
fn top_support(v: ArrayView1<f64>, s: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[j].abs().total_cmp(&v[i].abs()).then(i.cmp(&j)));
    let mut out: Vec<usize> = idx.into_iter().take(s).collect();
    out.sort_unstable();
    out
}

fn sphere_point(d: usize, angles: &[f64]) -> Array1<f64> {
    match d {
        1 => Array1::from_elem(1, 1.0),
        2 => Array1::from(vec![angles[0].cos(), angles[0].sin()]),
        _ => {
            let (st, ct) = angles[0].sin_cos();
            let (sp, cp) = angles[1].sin_cos();
            Array1::from(vec![st * cp, st * sp, ct])
        }
    }
}

/// Maximizes `f(N c)` over unit `c` (dimension ≤ 3). Returns the value and `N c`.
pub(crate) fn grid_refine<F>(basis: ArrayView2<f64>, f: F) -> (f64, Array1<f64>)
where
    F: Fn(ArrayView1<f64>) -> f64,
{
    let d = basis.ncols();
    let eval = |angles: &[f64]| {
        let v = basis.dot(&sphere_point(d, angles));
        (f(v.view()), v)
    };
    let deg = std::f64::consts::PI / 180.0;
    let mut grid: Vec<(f64, Vec<f64>)> = match d {
        1 => vec![(eval(&[]).0, vec![])],
        2 => (0..180).map(|k| vec![k as f64 * deg]).map(|a| (eval(&a).0, a)).collect(),
        _ => (0..=90)
            .flat_map(|t| (0..360).map(move |p| vec![t as f64 * deg, p as f64 * deg]))
            .map(|a| (eval(&a).0, a))
            .collect(),
    };
    grid.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut best: Option<(f64, Array1<f64>)> = None;
    for (_, start) in grid.into_iter().take(8) {
        let mut angles = start;
        let mut value = eval(&angles).0;
        let mut step = deg;
        while step > 1e-11 {
            let mut improved = false;
            for i in 0..angles.len() {
                for dir in [1.0, -1.0] {
                    let mut trial = angles.clone();
                    trial[i] += dir * step;
                    let candidate = eval(&trial).0;
                    if candidate > value {
                        value = candidate;
                        angles = trial;
                        improved = true;
                    }
                }
            }
            if !improved {
                step /= 2.0;
            }
        }
        best = keep_max(best, eval(&angles));
    }
    best.expect("at least one grid point")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn hand_examples() {
        let a = array![[1.0, 1.0]];
        let nsp = check_nsp(a.view(), 1).unwrap();
        assert!(!nsp.holds);
        assert!(nsp.witness.unwrap().margin.abs() < 1e-12);

        let a = array![[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]];
        assert!(check_nsp(a.view(), 1).unwrap().holds);
        let snsp = check_snsp(a.view(), 1).unwrap();
        assert!(snsp.holds);
        assert!(snsp.witness.unwrap().margin.abs() < 1e-12);

        let a = array![[1.0, 2.0]];
        let nsp = check_nsp(a.view(), 1).unwrap();
        assert!(!nsp.holds);
        let w = nsp.witness.unwrap();
        assert_eq!(w.support, vec![0]);
        assert!(w.margin > 0.0);
        assert!((a.dot(&w.vector)[0]).abs() < 1e-10);
    }

    #[test]
    fn injective_matrix_holds_trivially() {
        let a = array![[1.0, 0.0], [0.0, 1.0]];
        let v = check_nsp(a.view(), 1).unwrap();
        assert!(v.holds && v.witness.is_none());
    }

    #[test]
    fn size_limits() {
        let wide = ndarray::Array2::from_shape_fn((1, 15), |(_, j)| j as f64 + 1.0);
        assert!(matches!(check_nsp(wide.view(), 1), Err(Error::UnsupportedSize(_))));
        let deep = ndarray::Array2::from_shape_fn((2, 8), |(i, j)| (i + j) as f64);
        assert!(matches!(check_snsp(deep.view(), 1), Err(Error::UnsupportedSize(_))));
        assert!(check_nsp(array![[1.0, 2.0]].view(), 0).is_err());
    }

    #[test]
    fn grid_refine_agrees_on_hand_examples() {
        let a = array![[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]];
        assert!(check_nsp_with(a.view(), 1, Method::GridRefine).unwrap().holds);
        let a = array![[1.0, 2.0, 0.5, -1.0]];
        for s in 1..=3 {
            let ex = check_nsp(a.view(), s).unwrap();
            let gr = check_nsp_with(a.view(), s, Method::GridRefine).unwrap();
            assert_eq!(ex.holds, gr.holds, "s = {s}");
        }
    }
}
