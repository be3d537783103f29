use ndarray::Array2;

use crate::error::{param, Result};
use crate::grad2d::image::Image;
use crate::scalar::Real;

/// One ellipse: additive intensity, semi-axes, center, rotation in degrees.
#[derive(Debug, Clone, Copy)]
pub struct Ellipse {
    pub intensity: f64,
    pub semi_x: f64,
    pub semi_y: f64,
    pub center_x: f64,
    pub center_y: f64,
    pub angle_deg: f64,
}

impl Ellipse {
    const fn new(intensity: f64, semi_x: f64, semi_y: f64, center_x: f64, center_y: f64, angle_deg: f64) -> Self {
        Self {
            intensity,
            semi_x,
            semi_y,
            center_x,
            center_y,
            angle_deg,
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (sin, cos) = self.angle_deg.to_radians().sin_cos();
        let dx = x - self.center_x;
        let dy = y - self.center_y;
        let u = dx * cos + dy * sin;
        let v = -dx * sin + dy * cos;
        (u / self.semi_x).powi(2) + (v / self.semi_y).powi(2) <= 1.0
    }
}

/// Shepp–Logan geometry with the contrast-enhanced intensities, whose sums
/// already lie in [0, 1].
pub const SHEPP_LOGAN: [Ellipse; 10] = [
    Ellipse::new(1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
    Ellipse::new(-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0),
    Ellipse::new(-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0),
    Ellipse::new(-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0),
    Ellipse::new(0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0),
    Ellipse::new(0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0),
    Ellipse::new(0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0),
    Ellipse::new(0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0),
    Ellipse::new(0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0),
    Ellipse::new(0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0),
];

pub const MIN_PHANTOM_SIZE: usize = 16;

/// Pixel-center coordinate in [−1, 1] for index `k` of `n`.
pub(crate) fn axis(k: usize, n: usize) -> f64 {
    let half = (n as f64 - 1.0) / 2.0;
    (k as f64 - half) / half
}

/// `n × n` Shepp–Logan phantom sampled at pixel centers, clamped to [0, 1].
/// Row 0 is the top of the head (y = +1).
pub fn shepp_logan<T: Real>(n: usize) -> Result<Image<T>> {
    if n < MIN_PHANTOM_SIZE {
        return param(format!("phantom size must be at least {MIN_PHANTOM_SIZE}, got {n}"));
    }
    let pixels = Array2::from_shape_fn((n, n), |(i, j)| {
        let x = axis(j, n);
        let y = -axis(i, n);
        let v: f64 = SHEPP_LOGAN
            .iter()
            .filter(|e| e.contains(x, y))
            .map(|e| e.intensity)
            .sum();
        T::lit(v.clamp(0.0, 1.0))
    });
    Ok(Image { pixels })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_and_corners() {
        let p = shepp_logan::<f64>(64).unwrap();
        assert!(p.pixels.iter().all(|v| (0.0..=1.0).contains(v)));
        for (i, j) in [(0, 0), (0, 63), (63, 0), (63, 63)] {
            assert_eq!(p.pixels[[i, j]], 0.0);
        }
        let max = p.pixels.iter().fold(0.0f64, |a, v| a.max(*v));
        assert_eq!(max, 1.0);
    }

    #[test]
    fn too_small() {
        assert!(shepp_logan::<f64>(15).is_err());
    }

    #[test]
    fn support_fraction_matches_reference_rasterization() {
        // Independent rasterization: implicit-form ellipse test with the rotation
        // applied to the ellipse axes instead of the point.
        let n = 128;
        let inside = |x: f64, y: f64, a: f64, b: f64, x0: f64, y0: f64, phi: f64| {
            let t = phi.to_radians();
            let (c, s) = (t.cos(), t.sin());
            let (px, py) = (x - x0, y - y0);
            let qa = (c / a).powi(2) + (s / b).powi(2);
            let qb = 2.0 * c * s * (1.0 / (a * a) - 1.0 / (b * b));
            let qc = (s / a).powi(2) + (c / b).powi(2);
            qa * px * px + qb * px * py + qc * py * py <= 1.0
        };
        let table = [
            (1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
            (-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0),
            (-0.2, 0.11, 0.31, 0.22, 0.0, -18.0),
            (-0.2, 0.16, 0.41, -0.22, 0.0, 18.0),
            (0.1, 0.21, 0.25, 0.0, 0.35, 0.0),
            (0.1, 0.046, 0.046, 0.0, 0.1, 0.0),
            (0.1, 0.046, 0.046, 0.0, -0.1, 0.0),
            (0.1, 0.046, 0.023, -0.08, -0.605, 0.0),
            (0.1, 0.023, 0.023, 0.0, -0.606, 0.0),
            (0.1, 0.023, 0.046, 0.06, -0.605, 0.0),
        ];
        let mut reference = 0usize;
        for i in 0..n {
            for j in 0..n {
                let x = -1.0 + 2.0 * j as f64 / (n - 1) as f64;
                let y = 1.0 - 2.0 * i as f64 / (n - 1) as f64;
                let v: f64 = table
                    .iter()
                    .filter(|e| inside(x, y, e.1, e.2, e.3, e.4, e.5))
                    .map(|e| e.0)
                    .sum();
                if v.clamp(0.0, 1.0) > 0.0 {
                    reference += 1;
                }
            }
        }
        let p = shepp_logan::<f64>(n).unwrap();
        let ours = p.pixels.iter().filter(|v| **v > 0.0).count();
        let total = (n * n) as f64;
        assert!(((ours as f64 - reference as f64) / total).abs() < 0.02);
    }
}
