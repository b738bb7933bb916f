//! Elliptical region placement for the local distortions (D8-D10).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::RegionMask;
use crate::rng::SplitMix64;

/// Feathered ellipse in relative image coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    /// Center, relative in [0,1].
    pub cx: f64,
    pub cy: f64,
    /// Half-axes, relative in (0, 0.5].
    pub rx: f64,
    pub ry: f64,
    /// Feather width in pixels.
    pub feather: f64,
}

impl RegionSpec {
    /// Validates and clamps so the ellipse fits inside the unit square.
    pub fn new(cx: f64, cy: f64, rx: f64, ry: f64, feather: f64) -> Result<Self> {
        for (name, v) in [("cx", cx), ("cy", cy), ("rx", rx), ("ry", ry), ("feather", feather)] {
            if !v.is_finite() {
                return Err(Error::domain(format!("region {name} must be finite")));
            }
        }
        if !(0.0..=1.0).contains(&cx) || !(0.0..=1.0).contains(&cy) {
            return Err(Error::domain("region center must lie in [0,1]^2"));
        }
        if rx <= 0.0 || ry <= 0.0 || feather < 0.0 {
            return Err(Error::domain("region half-axes must be positive, feather non-negative"));
        }
        let rx = rx.min(0.5).min(cx.min(1.0 - cx).max(1e-3));
        let ry = ry.min(0.5).min(cy.min(1.0 - cy).max(1e-3));
        Ok(RegionSpec { cx, cy, rx, ry, feather })
    }

    /// Deterministic random region: mid-image center and mid-size axes, used
    /// when a local distortion is requested without an explicit region.
    pub fn random(rng: &mut SplitMix64) -> Self {
        let cx = rng.next_range(0.3, 0.7);
        let cy = rng.next_range(0.3, 0.7);
        let rx = rng.next_range(0.12, 0.28);
        let ry = rng.next_range(0.12, 0.28);
        RegionSpec::new(cx, cy, rx, ry, 4.0).expect("generated region is always valid")
    }

    /// Rasterizes to per-pixel weights: 1 inside the ellipse, a linear
    /// feather ramp just outside it, 0 beyond.
    pub fn mask(&self, width: usize, height: usize) -> RegionMask {
        let cx = self.cx * (width as f64 - 1.0);
        let cy = self.cy * (height as f64 - 1.0);
        let rx = (self.rx * width as f64).max(1.0);
        let ry = (self.ry * height as f64).max(1.0);
        // Feather distance measured from the normalized radius, scaled by
        // the mean axis so the ramp width is roughly `feather` pixels.
        let edge_scale = 0.5 * (rx + ry);
        let mut weights = vec![0.0; width * height];
        for y in 0..height {
            for x in 0..width {
                let nx = (x as f64 - cx) / rx;
                let ny = (y as f64 - cy) / ry;
                let rho = (nx * nx + ny * ny).sqrt();
                let w = if rho <= 1.0 {
                    1.0
                } else if self.feather > 0.0 {
                    (1.0 - (rho - 1.0) * edge_scale / self.feather).max(0.0)
                } else {
                    0.0
                };
                weights[y * width + x] = w;
            }
        }
        RegionMask::new(width, height, weights).expect("weights are clamped to [0,1]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_is_one_inside_zero_far_outside() {
        let spec = RegionSpec::new(0.5, 0.5, 0.2, 0.2, 2.0).unwrap();
        let mask = spec.mask(64, 64);
        assert_eq!(mask.weight(32, 32), 1.0);
        assert_eq!(mask.weight(0, 0), 0.0);
        assert!(mask.weights().iter().all(|&w| (0.0..=1.0).contains(&w)));
    }

    #[test]
    fn zero_feather_is_hard_edge() {
        let spec = RegionSpec::new(0.5, 0.5, 0.25, 0.25, 0.0).unwrap();
        let mask = spec.mask(32, 32);
        assert!(mask.weights().iter().all(|&w| w == 0.0 || w == 1.0));
    }

    #[test]
    fn oversized_axes_are_clamped() {
        let spec = RegionSpec::new(0.9, 0.5, 0.4, 0.3, 1.0).unwrap();
        assert!(spec.rx <= 0.1 + 1e-12);
    }

    #[test]
    fn rejects_degenerate_regions() {
        assert!(RegionSpec::new(0.5, 0.5, 0.0, 0.2, 1.0).is_err());
        assert!(RegionSpec::new(1.5, 0.5, 0.2, 0.2, 1.0).is_err());
        assert!(RegionSpec::new(0.5, 0.5, 0.2, 0.2, -1.0).is_err());
    }

    #[test]
    fn random_regions_are_valid_and_seeded() {
        let mut a = SplitMix64::new(11);
        let mut b = SplitMix64::new(11);
        assert_eq!(RegionSpec::random(&mut a), RegionSpec::random(&mut b));
    }
}
