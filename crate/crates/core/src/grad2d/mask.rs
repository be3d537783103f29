use ndarray::Array2;

/// Kept DFT frequencies. Index `[k, l]` is the frequency pair in FFT order
/// (row frequency k, column frequency l, both taken modulo the dimensions).
#[derive(Debug, Clone, PartialEq)]
pub struct FourierMask {
    pub keep: Array2<bool>,
    pub line_count: usize,
}

impl FourierMask {
    pub fn full(n: usize, m: usize) -> Self {
        Self {
            keep: Array2::from_elem((n, m), true),
            line_count: 0,
        }
    }

    pub fn dc_only(n: usize, m: usize) -> Self {
        let mut keep = Array2::from_elem((n, m), false);
        keep[[0, 0]] = true;
        Self { keep, line_count: 0 }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.keep.dim()
    }

    pub fn count(&self) -> usize {
        self.keep.iter().filter(|k| **k).count()
    }

    pub fn fraction(&self) -> f64 {
        self.count() as f64 / self.keep.len() as f64
    }

    pub fn has_dc(&self) -> bool {
        self.keep[[0, 0]]
    }

    /// `keep(k) == keep(−k)` for every frequency.
    pub fn is_conjugate_symmetric(&self) -> bool {
        let (n, m) = self.dims();
        self.keep
            .indexed_iter()
            .all(|((i, j), &k)| k == self.keep[[(n - i) % n, (m - j) % m]])
    }

    pub fn symmetrize(&mut self) {
        let (n, m) = self.dims();
        for i in 0..n {
            for j in 0..m {
                if self.keep[[i, j]] {
                    self.keep[[(n - i) % n, (m - j) % m]] = true;
                }
            }
        }
    }
}

/// Straight lines through DC at angles `kπ/lines`, k = 0..lines−1.
///
/// Each line is rasterized by stepping the radius in half-pixel increments
/// across the centered frequency square and rounding to the nearest
/// frequency; the result is symmetrized and DC is always kept.
pub fn radial_mask(n: usize, m: usize, lines: usize) -> FourierMask {
    let mut keep = Array2::from_elem((n, m), false);
    let half_rows = n as f64 / 2.0;
    let half_cols = m as f64 / 2.0;
    let reach = half_rows.hypot(half_cols) + 1.0;
    let steps = (2.0 * reach / 0.5).ceil() as i64;
    for k in 0..lines {
        let theta = k as f64 * std::f64::consts::PI / lines as f64;
        let (sin, cos) = theta.sin_cos();
        for s in 0..=steps {
            let r = -reach + 0.5 * s as f64;
            let fx = (r * cos).round();
            let fy = (r * sin).round();
            if fx.abs() > half_cols || fy.abs() > half_rows {
                continue;
            }
            let col = (fx as i64).rem_euclid(m as i64) as usize;
            let row = (fy as i64).rem_euclid(n as i64) as usize;
            keep[[row, col]] = true;
        }
    }
    keep[[0, 0]] = true;
    let mut mask = FourierMask {
        keep,
        line_count: lines,
    };
    mask.symmetrize();
    mask
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_lines_fraction() {
        let mask = radial_mask(256, 256, 6);
        let frac = mask.fraction();
        assert!((0.02..=0.035).contains(&frac), "fraction {frac}");
    }

    #[test]
    fn symmetric_with_dc() {
        for (n, m, l) in [(64, 64, 6), (128, 128, 8), (33, 40, 5), (16, 20, 12)] {
            let mask = radial_mask(n, m, l);
            assert!(mask.has_dc());
            assert!(mask.is_conjugate_symmetric());
        }
    }

    #[test]
    fn single_line() {
        let mask = radial_mask(64, 48, 1);
        assert!(mask.count() <= 2 * 64);
        // angle 0 is the row-frequency-zero axis
        assert!((0..48).all(|j| mask.keep[[0, j]]));
        assert_eq!(mask.count(), 48);
    }

    #[test]
    fn more_lines_keep_more() {
        let a = radial_mask(128, 128, 6).count();
        let b = radial_mask(128, 128, 8).count();
        let c = radial_mask(128, 128, 12).count();
        assert!(a < b && b < c);
    }
}
