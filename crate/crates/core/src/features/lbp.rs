//! Rotation-invariant uniform local binary patterns (P=8, R=1, "riu2").

use crate::error::{Error, Result};
use crate::image::FloatPlane;

/// Number of riu2 labels: popcounts 0..=8 for uniform patterns plus one
/// catch-all for non-uniform ones.
pub const LBP_LABELS: usize = 10;

/// Catch-all label for patterns with more than two 0/1 transitions.
pub const LBP_NON_UNIFORM: u8 = 9;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Circle offsets for P=8, R=1, starting at angle 0 and walking
/// counter-clockwise (y axis points down, so -sin goes up).
const OFFSETS: [(f64, f64); 8] = [
    (1.0, 0.0),
    (SQRT_HALF, -SQRT_HALF),
    (0.0, -1.0),
    (-SQRT_HALF, -SQRT_HALF),
    (-1.0, 0.0),
    (-SQRT_HALF, SQRT_HALF),
    (0.0, 1.0),
    (SQRT_HALF, SQRT_HALF),
];

/// Per-pixel riu2 labels for the interior of `gray`.
///
/// Border pixels carry the non-uniform label but are excluded from
/// histograms. Diagonal circle samples are bilinearly interpolated; the
/// comparison convention is `neighbor >= center -> bit 1`.
#[derive(Debug, Clone)]
pub struct LbpPlane {
    width: usize,
    height: usize,
    labels: Vec<u8>,
}

impl LbpPlane {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn label(&self, x: usize, y: usize) -> u8 {
        self.labels[y * self.width + x]
    }

    /// Interior iterator: every pixel that actually has 8 in-bounds
    /// neighbors.
    pub fn interior_labels(&self) -> impl Iterator<Item = u8> + '_ {
        (1..self.height - 1).flat_map(move |y| {
            (1..self.width - 1).map(move |x| self.label(x, y))
        })
    }
}

/// Maps an 8-bit circular pattern to its riu2 label.
pub fn riu2_label(pattern: u8) -> u8 {
    let transitions = (pattern ^ pattern.rotate_left(1)).count_ones();
    if transitions <= 2 {
        pattern.count_ones() as u8
    } else {
        LBP_NON_UNIFORM
    }
}

/// Computes the riu2 label plane of `gray`.
pub fn compute_lbp(gray: &FloatPlane) -> Result<LbpPlane> {
    let (w, h) = (gray.width(), gray.height());
    if w < 3 || h < 3 {
        return Err(Error::domain("LBP needs at least a 3x3 plane"));
    }
    let mut labels = vec![LBP_NON_UNIFORM; w * h];
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let center = gray.get(x, y);
            let mut pattern = 0u8;
            for (bit, &(dx, dy)) in OFFSETS.iter().enumerate() {
                let v = sample_bilinear(gray, x as f64 + dx, y as f64 + dy);
                if v >= center {
                    pattern |= 1 << bit;
                }
            }
            labels[y * w + x] = riu2_label(pattern);
        }
    }
    Ok(LbpPlane { width: w, height: h, labels })
}

/// Bilinear sample in the "delta" form, which returns the corner value
/// exactly when all four corners agree — required so constant regions
/// compare as ties.
fn sample_bilinear(plane: &FloatPlane, x: f64, y: f64) -> f64 {
    let x0 = x.floor();
    let y0 = y.floor();
    let fx = x - x0;
    let fy = y - y0;
    let (xi, yi) = (x0 as usize, y0 as usize);
    // Zero-weight corners are never read; axis-aligned samples land on
    // integer coordinates, where xi+1/yi+1 may be out of bounds.
    let v00 = plane.get(xi, yi);
    let v10 = if fx > 0.0 { plane.get(xi + 1, yi) } else { v00 };
    let v01 = if fy > 0.0 { plane.get(xi, yi + 1) } else { v00 };
    let v11 = if fx > 0.0 && fy > 0.0 { plane.get(xi + 1, yi + 1) } else { v00 };
    v00 + fx * (v10 - v00) + fy * (v01 - v00) + fx * fy * (v00 - v10 - v01 + v11)
}

/// Normalized 10-bin histogram over a label plane's interior.
#[derive(Debug, Clone, PartialEq)]
pub struct LbpHistogram {
    bins: [f64; LBP_LABELS],
}

impl LbpHistogram {
    pub fn bins(&self) -> &[f64; LBP_LABELS] {
        &self.bins
    }
}

pub fn lbp_histogram(labels: &LbpPlane) -> LbpHistogram {
    let mut bins = [0.0; LBP_LABELS];
    let mut total = 0usize;
    for label in labels.interior_labels() {
        bins[label as usize] += 1.0;
        total += 1;
    }
    if total > 0 {
        for b in &mut bins {
            *b /= total as f64;
        }
    }
    LbpHistogram { bins }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riu2_label_table() {
        assert_eq!(riu2_label(0b0000_0000), 0);
        assert_eq!(riu2_label(0b1111_1111), 8);
        assert_eq!(riu2_label(0b0000_0001), 1);
        assert_eq!(riu2_label(0b0001_1000), 2);
        // Rotations share a label.
        assert_eq!(riu2_label(0b0000_0111), riu2_label(0b1110_0000));
        // Two separate runs -> four transitions -> non-uniform.
        assert_eq!(riu2_label(0b0101_0101), LBP_NON_UNIFORM);
        assert_eq!(riu2_label(0b0010_0100), LBP_NON_UNIFORM);
    }

    #[test]
    fn constant_plane_all_eights() {
        let plane = FloatPlane::filled(5, 5, 77.0);
        let lbp = compute_lbp(&plane).unwrap();
        for label in lbp.interior_labels() {
            assert_eq!(label, 8);
        }
        let hist = lbp_histogram(&lbp);
        assert!((hist.bins()[8] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bright_center_is_zero_label() {
        let mut plane = FloatPlane::zeros(3, 3);
        plane.set(1, 1, 200.0);
        let lbp = compute_lbp(&plane).unwrap();
        assert_eq!(lbp.label(1, 1), 0);
    }

    #[test]
    fn too_small_plane_rejected() {
        let plane = FloatPlane::zeros(2, 3);
        assert!(matches!(compute_lbp(&plane), Err(Error::Domain(_))));
    }

    #[test]
    fn histogram_sums_to_one() {
        let vals: Vec<f64> = (0..81).map(|i| ((i * 29) % 251) as f64).collect();
        let plane = FloatPlane::new(9, 9, vals).unwrap();
        let hist = lbp_histogram(&compute_lbp(&plane).unwrap());
        let sum: f64 = hist.bins().iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert!(hist.bins().iter().all(|&b| b >= 0.0));
    }
}
