//! Compression-artifact reduction: smoothing across 8x8 block boundaries.

use crate::defilters::DefilterConfig;
use crate::error::{Error, Result};
use crate::image::{FloatPlane, Image};

const BLOCK: usize = 8;

/// Median absolute step across all 8x8 block boundaries — the quantization
/// strength estimate that gates the filter.
fn estimate_qp(plane: &FloatPlane) -> f64 {
    let (w, h) = (plane.width(), plane.height());
    let mut steps = Vec::new();
    for x in (BLOCK..w).step_by(BLOCK) {
        for y in 0..h {
            steps.push((plane.get(x - 1, y) - plane.get(x, y)).abs());
        }
    }
    for y in (BLOCK..h).step_by(BLOCK) {
        for x in 0..w {
            steps.push((plane.get(x, y - 1) - plane.get(x, y)).abs());
        }
    }
    if steps.is_empty() {
        return 0.0;
    }
    steps.sort_by(|a, b| a.partial_cmp(b).expect("finite steps"));
    steps[steps.len() / 2]
}

/// Boundary step statistic used by tests: mean absolute step at block
/// boundaries minus the mean absolute step everywhere else.
pub fn blockiness(plane: &FloatPlane) -> f64 {
    let (w, h) = (plane.width(), plane.height());
    let (mut boundary, mut interior) = ((0.0, 0usize), (0.0, 0usize));
    for y in 0..h {
        for x in 1..w {
            let step = (plane.get(x - 1, y) - plane.get(x, y)).abs();
            if x % BLOCK == 0 {
                boundary = (boundary.0 + step, boundary.1 + 1);
            } else {
                interior = (interior.0 + step, interior.1 + 1);
            }
        }
    }
    for y in 1..h {
        for x in 0..w {
            let step = (plane.get(x, y - 1) - plane.get(x, y)).abs();
            if y % BLOCK == 0 {
                boundary = (boundary.0 + step, boundary.1 + 1);
            } else {
                interior = (interior.0 + step, interior.1 + 1);
            }
        }
    }
    boundary.0 / boundary.1.max(1) as f64 - interior.0 / interior.1.max(1) as f64
}

/// Weak 4-tap smoothing of the pixel pair straddling each block boundary,
/// applied when the step is below `2 * QP` (larger steps are treated as
/// real edges). Block interiors are untouched.
fn deblock_plane(plane: &FloatPlane, qp_factor: f64) -> FloatPlane {
    let qp = estimate_qp(plane);
    let threshold = qp_factor * qp;
    let (w, h) = (plane.width(), plane.height());
    let mut out = plane.clone();
    // Vertical boundaries (columns at multiples of 8).
    for x in (BLOCK..w).step_by(BLOCK) {
        if x + 1 >= w || x < 2 {
            continue;
        }
        for y in 0..h {
            let a2 = out.get(x - 2, y);
            let a = out.get(x - 1, y);
            let b = out.get(x, y);
            let b2 = out.get(x + 1, y);
            if (a - b).abs() < threshold {
                out.set(x - 1, y, (a2 + 2.0 * a + b) / 4.0);
                out.set(x, y, (a + 2.0 * b + b2) / 4.0);
            }
        }
    }
    // Horizontal boundaries (rows at multiples of 8).
    for y in (BLOCK..h).step_by(BLOCK) {
        if y + 1 >= h || y < 2 {
            continue;
        }
        for x in 0..w {
            let a2 = out.get(x, y - 2);
            let a = out.get(x, y - 1);
            let b = out.get(x, y);
            let b2 = out.get(x, y + 1);
            if (a - b).abs() < threshold {
                out.set(x, y - 1, (a2 + 2.0 * a + b) / 4.0);
                out.set(x, y, (a + 2.0 * b + b2) / 4.0);
            }
        }
    }
    out
}

pub fn deblock(image: &Image, config: &DefilterConfig) -> Result<Image> {
    if image.width() < 32 || image.height() < 32 {
        return Err(Error::domain("deblock needs at least a 32x32 image"));
    }
    let planes: Vec<FloatPlane> = image
        .planes()
        .iter()
        .map(|p| deblock_plane(p, config.deblock_qp_factor))
        .collect();
    Image::from_planes(&planes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distortion::{apply_distortion, DistortionKind, DistortionSpec};
    use crate::image::to_grayscale;
    use crate::scene::synth_scene;

    #[test]
    fn constant_image_is_identity() {
        let img = Image::filled(48, 48, 1, 99).unwrap();
        let out = deblock(&img, &DefilterConfig::default()).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn smooth_gradient_nearly_unchanged() {
        let data: Vec<u8> = (0..64 * 64).map(|i| ((i % 64) * 2) as u8).collect();
        let img = Image::new(64, 64, 1, data).unwrap();
        let out = deblock(&img, &DefilterConfig::default()).unwrap();
        let mad: f64 = img
            .data()
            .iter()
            .zip(out.data())
            .map(|(&a, &b)| (a as f64 - b as f64).abs())
            .sum::<f64>()
            / img.data().len() as f64;
        assert!(mad < 1.0, "mean abs diff {mad}");
    }

    #[test]
    fn blockiness_decreases_on_compressed_scene() {
        let clean = synth_scene(96, 96, 1, 40);
        let spec = DistortionSpec::new(DistortionKind::Compression, 5, 0, None).unwrap();
        let compressed = apply_distortion(&clean, &spec).unwrap();
        let out = deblock(&compressed, &DefilterConfig::default()).unwrap();
        let before = blockiness(&to_grayscale(&compressed));
        let after = blockiness(&to_grayscale(&out));
        assert!(after < before, "blockiness {before} -> {after}");
    }
}
