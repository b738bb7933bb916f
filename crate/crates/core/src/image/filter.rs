//! Spatial filtering: convolution, separable box/min filters, and the PSF
//! builders shared by blur synthesis and deblurring.

use crate::error::{Error, Result};
use crate::image::FloatPlane;

/// Small dense 2-D kernel with odd side lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Kernel {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width % 2 == 0 || height % 2 == 0 {
            return Err(Error::domain("kernel sides must be odd"));
        }
        if data.len() != width * height {
            return Err(Error::dimension("kernel data size mismatch"));
        }
        Ok(Kernel { width, height, data })
    }

    pub fn identity() -> Self {
        Kernel { width: 1, height: 1, data: vec![1.0] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, kx: usize, ky: usize) -> f64 {
        self.data[ky * self.width + kx]
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    fn normalize(mut self) -> Self {
        let s = self.sum();
        if s != 0.0 {
            for v in &mut self.data {
                *v /= s;
            }
        }
        self
    }

    /// True when the only nonzero tap is a unit weight at the center.
    pub fn is_identity(&self) -> bool {
        let (cx, cy) = (self.width / 2, self.height / 2);
        self.data
            .iter()
            .enumerate()
            .all(|(i, &v)| {
                let at_center = i == cy * self.width + cx;
                (at_center && (v - 1.0).abs() < 1e-12) || (!at_center && v.abs() < 1e-12)
            })
    }
}

/// 2-D convolution (kernel flipped) with reflect-101 borders.
///
/// Output dimensions equal input dimensions.
pub fn convolve2d(plane: &FloatPlane, kernel: &Kernel) -> FloatPlane {
    let (w, h) = (plane.width(), plane.height());
    let (cx, cy) = (kernel.width / 2, kernel.height / 2);
    let mut out = FloatPlane::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for ky in 0..kernel.height {
                let sy = y as isize - (ky as isize - cy as isize);
                for kx in 0..kernel.width {
                    let sx = x as isize - (kx as isize - cx as isize);
                    acc += kernel.get(kx, ky) * plane.get_reflect(sx, sy);
                }
            }
            out.set(x, y, acc);
        }
    }
    out.debug_assert_finite();
    out
}

/// Isotropic Gaussian, side `2*ceil(3*sigma) + 1`, normalized to sum 1.
pub fn gaussian_kernel(sigma: f64) -> Result<Kernel> {
    if sigma <= 0.0 {
        return Err(Error::domain("sigma must be positive"));
    }
    let radius = (3.0 * sigma).ceil() as usize;
    let side = 2 * radius + 1;
    let mut data = Vec::with_capacity(side * side);
    let denom = 2.0 * sigma * sigma;
    for y in 0..side {
        let dy = y as f64 - radius as f64;
        for x in 0..side {
            let dx = x as f64 - radius as f64;
            data.push((-(dx * dx + dy * dy) / denom).exp());
        }
    }
    Ok(Kernel { width: side, height: side, data }.normalize())
}

/// Line PSF of `length` unit samples at `angle_deg` from horizontal.
///
/// Length 1 degenerates to the identity kernel.
pub fn motion_kernel(length: usize, angle_deg: f64) -> Result<Kernel> {
    if length == 0 {
        return Err(Error::domain("motion length must be at least 1"));
    }
    if length == 1 {
        return Ok(Kernel::identity());
    }
    let side = if length % 2 == 0 { length + 1 } else { length };
    let c = (side / 2) as f64;
    let theta = angle_deg.to_radians();
    let (dx, dy) = (theta.cos(), theta.sin());
    let half = (length as f64 - 1.0) / 2.0;
    let mut data = vec![0.0; side * side];
    for step in 0..length {
        let t = step as f64 - half;
        splat_bilinear(&mut data, side, c + t * dx, c + t * dy, 1.0);
    }
    Kernel::new(side, side, data).map(Kernel::normalize)
}

/// Disk PSF with anti-aliased rim via 4x4 subcell coverage.
///
/// Radius 0 degenerates to the identity kernel.
pub fn disk_kernel(radius: usize) -> Result<Kernel> {
    if radius == 0 {
        return Ok(Kernel::identity());
    }
    let side = 2 * radius + 1;
    let c = radius as f64;
    let r2 = (radius as f64) * (radius as f64);
    let mut data = vec![0.0; side * side];
    for y in 0..side {
        for x in 0..side {
            let mut cover = 0u32;
            for sy in 0..4 {
                for sx in 0..4 {
                    let px = x as f64 + (sx as f64 + 0.5) / 4.0 - 0.5 - c;
                    let py = y as f64 + (sy as f64 + 0.5) / 4.0 - 0.5 - c;
                    if px * px + py * py <= r2 {
                        cover += 1;
                    }
                }
            }
            data[y * side + x] = cover as f64 / 16.0;
        }
    }
    Kernel::new(side, side, data).map(Kernel::normalize)
}

fn splat_bilinear(data: &mut [f64], side: usize, x: f64, y: f64, value: f64) {
    let x0 = x.floor();
    let y0 = y.floor();
    let fx = x - x0;
    let fy = y - y0;
    let corners = [
        (x0 as isize, y0 as isize, (1.0 - fx) * (1.0 - fy)),
        (x0 as isize + 1, y0 as isize, fx * (1.0 - fy)),
        (x0 as isize, y0 as isize + 1, (1.0 - fx) * fy),
        (x0 as isize + 1, y0 as isize + 1, fx * fy),
    ];
    for (cx, cy, w) in corners {
        if w > 0.0 && cx >= 0 && cy >= 0 && (cx as usize) < side && (cy as usize) < side {
            data[cy as usize * side + cx as usize] += value * w;
        }
    }
}

/// Separable sliding box mean over a `(2r+1)^2` window, reflect-101 borders.
///
/// Every window has the full sample count, so this is an exact mean.
pub fn box_mean(plane: &FloatPlane, radius: usize) -> FloatPlane {
    let horizontal = box_mean_rows(plane, radius);
    let transposed = transpose(&horizontal);
    let vertical = box_mean_rows(&transposed, radius);
    transpose(&vertical)
}

fn box_mean_rows(plane: &FloatPlane, radius: usize) -> FloatPlane {
    let (w, h) = (plane.width(), plane.height());
    let window = 2 * radius + 1;
    let mut out = FloatPlane::zeros(w, h);
    let mut padded = vec![0.0; w + 2 * radius];
    let mut prefix = vec![0.0; w + 2 * radius + 1];
    for y in 0..h {
        for (i, slot) in padded.iter_mut().enumerate() {
            let x = i as isize - radius as isize;
            *slot = plane.get_reflect(x, y as isize);
        }
        prefix[0] = 0.0;
        for i in 0..padded.len() {
            prefix[i + 1] = prefix[i] + padded[i];
        }
        for x in 0..w {
            out.set(x, y, (prefix[x + window] - prefix[x]) / window as f64);
        }
    }
    out
}

/// Separable sliding minimum over a `(2r+1)^2` window, reflect-101 borders.
pub fn min_filter(plane: &FloatPlane, radius: usize) -> FloatPlane {
    let horizontal = min_filter_rows(plane, radius);
    let transposed = transpose(&horizontal);
    let vertical = min_filter_rows(&transposed, radius);
    transpose(&vertical)
}

fn min_filter_rows(plane: &FloatPlane, radius: usize) -> FloatPlane {
    let (w, h) = (plane.width(), plane.height());
    let mut out = FloatPlane::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut m = f64::INFINITY;
            for dx in -(radius as isize)..=(radius as isize) {
                m = m.min(plane.get_reflect(x as isize + dx, y as isize));
            }
            out.set(x, y, m);
        }
    }
    out
}

fn transpose(plane: &FloatPlane) -> FloatPlane {
    let (w, h) = (plane.width(), plane.height());
    let mut out = FloatPlane::zeros(h, w);
    for y in 0..h {
        for x in 0..w {
            out.set(y, x, plane.get(x, y));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(w: usize, h: usize, vals: &[f64]) -> FloatPlane {
        FloatPlane::new(w, h, vals.to_vec()).unwrap()
    }

    #[test]
    fn identity_kernel_preserves_plane() {
        let p = plane(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let out = convolve2d(&p, &Kernel::identity());
        assert_eq!(out.data(), p.data());
    }

    #[test]
    fn normalized_kernel_preserves_constants() {
        let p = FloatPlane::filled(5, 5, 42.0);
        let k = gaussian_kernel(1.3).unwrap();
        let out = convolve2d(&p, &k);
        for &v in out.data() {
            assert!((v - 42.0).abs() < 1e-9);
        }
    }

    #[test]
    fn box_blur_of_impulse() {
        let mut p = FloatPlane::zeros(3, 3);
        p.set(1, 1, 9.0);
        let k = Kernel::new(3, 3, vec![1.0 / 9.0; 9]).unwrap();
        let out = convolve2d(&p, &k);
        assert!((out.get(1, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn even_kernel_side_rejected() {
        assert!(matches!(Kernel::new(2, 3, vec![0.0; 6]), Err(Error::Domain(_))));
    }

    #[test]
    fn gaussian_properties() {
        let k = gaussian_kernel(1.0).unwrap();
        assert_eq!(k.width(), 7);
        assert!((k.sum() - 1.0).abs() < 1e-12);
        // Symmetric under horizontal and vertical flips.
        for y in 0..7 {
            for x in 0..7 {
                assert_eq!(k.get(x, y), k.get(6 - x, y));
                assert_eq!(k.get(x, y), k.get(x, 6 - y));
            }
        }
        assert!(gaussian_kernel(0.0).is_err());
    }

    #[test]
    fn degenerate_psfs_are_identity() {
        assert!(motion_kernel(1, 37.0).unwrap().is_identity());
        assert!(disk_kernel(0).unwrap().is_identity());
    }

    #[test]
    fn motion_kernel_horizontal_is_uniform_line() {
        let k = motion_kernel(5, 0.0).unwrap();
        assert_eq!(k.width(), 5);
        for x in 0..5 {
            assert!((k.get(x, 2) - 0.2).abs() < 1e-12);
        }
        assert!((k.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disk_kernel_normalized_and_symmetric() {
        let k = disk_kernel(3).unwrap();
        assert!((k.sum() - 1.0).abs() < 1e-12);
        for y in 0..7 {
            for x in 0..7 {
                assert!((k.get(x, y) - k.get(6 - x, 6 - y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn box_mean_matches_direct_window_average() {
        let vals: Vec<f64> = (0..20).map(|v| (v * v % 17) as f64).collect();
        let p = plane(5, 4, &vals);
        let r = 2;
        let out = box_mean(&p, r);
        for y in 0..4 {
            for x in 0..5 {
                let mut acc = 0.0;
                for dy in -(r as isize)..=(r as isize) {
                    for dx in -(r as isize)..=(r as isize) {
                        acc += p.get_reflect(x as isize + dx, y as isize + dy);
                    }
                }
                let expect = acc / ((2 * r + 1) * (2 * r + 1)) as f64;
                assert!((out.get(x, y) - expect).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn min_filter_matches_direct_window_min() {
        let vals: Vec<f64> = (0..30).map(|v| ((v * 7) % 23) as f64).collect();
        let p = plane(6, 5, &vals);
        let out = min_filter(&p, 1);
        for y in 0..5 {
            for x in 0..6 {
                let mut m = f64::INFINITY;
                for dy in -1..=1 {
                    for dx in -1..=1 {
                        m = m.min(p.get_reflect(x as isize + dx, y as isize + dy));
                    }
                }
                assert_eq!(out.get(x, y), m);
            }
        }
    }
}
