use std::fmt::Write as _;

use crate::error::{param, Result};
use crate::instancegen::toy_point;
use crate::linalg::norm1;
use crate::ratio_admm::objective;

#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeRow {
    pub t: f64,
    pub l1: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct Landscape {
    pub rows: Vec<LandscapeRow>,
    /// Grid point (t, value) minimizing the L1 norm; the first one on ties.
    pub argmin_l1: (f64, f64),
    pub argmin_ratio: (f64, f64),
}

impl Landscape {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,l1,l1_over_l2\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{}", r.t, r.l1, r.ratio);
        }
        out
    }
}

/// Both objectives along the toy line `x(t)` on `steps` equispaced points.
///
/// Grid points are formed as `(t_min (N−k) + t_max k) / N` with `N = steps − 1`
/// so that integer-valued points such as 0 and 10 are hit exactly.
pub fn toy_landscape(t_min: f64, t_max: f64, steps: usize) -> Result<Landscape> {
    if steps < 2 {
        return param("steps must be at least 2");
    }
    if !(t_min < t_max) || !t_min.is_finite() || !t_max.is_finite() {
        return param("need finite t_min < t_max");
    }
    let last = (steps - 1) as f64;
    let rows: Vec<LandscapeRow> = (0..steps)
        .map(|k| {
            let t = (t_min * (last - k as f64) + t_max * k as f64) / last;
            let x = toy_point(t);
            LandscapeRow {
                t,
                l1: norm1(x.view()),
                ratio: objective(x.view()),
            }
        })
        .collect();
    let argmin = |key: fn(&LandscapeRow) -> f64| {
        let best = rows
            .iter()
            .fold(None::<&LandscapeRow>, |acc, r| match acc {
                Some(b) if key(b) <= key(r) => Some(b),
                _ => Some(r),
            })
            .expect("at least two rows");
        (best.t, key(best))
    };
    Ok(Landscape {
        argmin_l1: argmin(|r| r.l1),
        argmin_ratio: argmin(|r| r.ratio),
        rows,
    })
}
