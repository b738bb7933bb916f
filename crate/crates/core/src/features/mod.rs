//! The 58-value combined texture descriptor.
//!
//! Layout contract: 48 GLCM values (6 properties x 4 angles x 2 distances,
//! property-major, then angle, then distance) followed by the 10-bin riu2
//! LBP histogram.

mod csv_io;
mod glcm;
mod lbp;

pub use csv_io::{read_features_csv, write_features_csv};
pub use glcm::{compute_glcm, glcm_features, Glcm, GlcmAngle, GlcmFeatures};
pub use lbp::{compute_lbp, lbp_histogram, riu2_label, LbpHistogram, LbpPlane, LBP_LABELS, LBP_NON_UNIFORM};

use crate::error::{Error, Result};
use crate::image::{quantize_levels, to_grayscale, Image};

/// Total descriptor length.
pub const FEATURE_LEN: usize = 58;

/// GLCM quantization level count used by the descriptor.
pub const GLCM_LEVELS: usize = 16;

/// Co-occurrence distances used by the descriptor.
pub const GLCM_DISTANCES: [usize; 2] = [1, 3];

/// Fixed-layout feature vector; always 58 finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    values: [f64; FEATURE_LEN],
}

impl FeatureVector {
    pub fn new(values: [f64; FEATURE_LEN]) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("feature vector contains non-finite values"));
        }
        Ok(FeatureVector { values })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        let arr: [f64; FEATURE_LEN] = values
            .try_into()
            .map_err(|_| Error::dimension(format!("expected {FEATURE_LEN} values, got {}", values.len())))?;
        FeatureVector::new(arr)
    }

    pub fn values(&self) -> &[f64; FEATURE_LEN] {
        &self.values
    }

    pub fn len(&self) -> usize {
        FEATURE_LEN
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of a GLCM slot in the layout.
    pub fn glcm_index(property: usize, angle: usize, distance: usize) -> usize {
        debug_assert!(property < 6 && angle < 4 && distance < 2);
        property * 8 + angle * 2 + distance
    }

    /// Index of an LBP bin in the layout.
    pub fn lbp_index(bin: usize) -> usize {
        debug_assert!(bin < LBP_LABELS);
        48 + bin
    }
}

impl AsRef<[f64]> for FeatureVector {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// Grayscale -> 16-level quantization -> GLCM properties over
/// 4 angles x distances {1, 3} -> concatenated with the LBP histogram.
pub fn extract_features(image: &Image) -> Result<FeatureVector> {
    if image.width() < 8 || image.height() < 8 {
        return Err(Error::domain("feature extraction needs at least an 8x8 image"));
    }
    let gray = to_grayscale(image);
    let quantized = quantize_levels(&gray, GLCM_LEVELS)?;

    let mut values = [0.0; FEATURE_LEN];
    for (ai, angle) in GlcmAngle::ALL.iter().enumerate() {
        for (di, &distance) in GLCM_DISTANCES.iter().enumerate() {
            let glcm = compute_glcm(&quantized, distance, *angle, GLCM_LEVELS)?;
            let props = glcm_features(&glcm).as_array();
            for (pi, &p) in props.iter().enumerate() {
                values[FeatureVector::glcm_index(pi, ai, di)] = p;
            }
        }
    }

    let labels = compute_lbp(&gray)?;
    let hist = lbp_histogram(&labels);
    for (bi, &b) in hist.bins().iter().enumerate() {
        values[FeatureVector::lbp_index(bi)] = b;
    }
    FeatureVector::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn always_58_values() {
        let img = Image::new(8, 8, 1, (0..64).map(|v| (v * 3) as u8).collect()).unwrap();
        let fv = extract_features(&img).unwrap();
        assert_eq!(fv.values().len(), 58);
        assert!(fv.values().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn constant_image_layout() {
        let img = Image::filled(16, 16, 1, 90).unwrap();
        let fv = extract_features(&img).unwrap();
        // Every (angle, distance) slot holds the constant-image property
        // values: contrast 0, dissimilarity 0, homogeneity 1, asm 1,
        // energy 1, correlation 1.
        let expect = [0.0, 0.0, 1.0, 1.0, 1.0, 1.0];
        for p in 0..6 {
            for a in 0..4 {
                for d in 0..2 {
                    let v = fv.values()[FeatureVector::glcm_index(p, a, d)];
                    assert!((v - expect[p]).abs() < 1e-9, "prop {p} angle {a} dist {d}: {v}");
                }
            }
        }
        // LBP: everything in the all-ones bin.
        for bin in 0..LBP_LABELS {
            let v = fv.values()[FeatureVector::lbp_index(bin)];
            let expect = if bin == 8 { 1.0 } else { 0.0 };
            assert!((v - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic() {
        let img = Image::new(12, 9, 3, (0..324).map(|v| (v * 7 % 256) as u8).collect()).unwrap();
        let a = extract_features(&img).unwrap();
        let b = extract_features(&img).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn small_image_rejected() {
        let img = Image::filled(7, 8, 1, 0).unwrap();
        assert!(matches!(extract_features(&img), Err(Error::Domain(_))));
    }
}
