//! Contrast/illumination restoration: CLAHE on luminance followed by a
//! mean-anchored global gamma, with proportional chroma rescale.

use crate::defilters::DefilterConfig;
use crate::error::{Error, Result};
use crate::image::{to_grayscale, FloatPlane, Image};

/// Contrast-limited adaptive histogram equalization on an 8-bit plane.
///
/// Tile histograms are clipped at `clip * area / 256` with the excess
/// redistributed uniformly; per-pixel mappings blend the four nearest tile
/// LUTs bilinearly.
pub fn clahe(luma: &FloatPlane, tiles: usize, clip: f64) -> FloatPlane {
    let (w, h) = (luma.width(), luma.height());
    let tiles_x = tiles.min(w).max(1);
    let tiles_y = tiles.min(h).max(1);
    let tile_w = w.div_ceil(tiles_x);
    let tile_h = h.div_ceil(tiles_y);

    // Per-tile float LUTs from clipped CDFs.
    let mut luts = vec![vec![0.0f64; 256]; tiles_x * tiles_y];
    let mut centers_x = vec![0.0f64; tiles_x];
    let mut centers_y = vec![0.0f64; tiles_y];
    for ty in 0..tiles_y {
        let y0 = ty * tile_h;
        let y1 = ((ty + 1) * tile_h).min(h);
        centers_y[ty] = (y0 + y1) as f64 / 2.0 - 0.5;
        for tx in 0..tiles_x {
            let x0 = tx * tile_w;
            let x1 = ((tx + 1) * tile_w).min(w);
            centers_x[tx] = (x0 + x1) as f64 / 2.0 - 0.5;

            let mut hist = [0.0f64; 256];
            for y in y0..y1 {
                for x in x0..x1 {
                    let v = luma.get(x, y).round().clamp(0.0, 255.0) as usize;
                    hist[v] += 1.0;
                }
            }
            let area = ((x1 - x0) * (y1 - y0)) as f64;
            let limit = (clip * area / 256.0).max(1.0);
            let mut excess = 0.0;
            for b in hist.iter_mut() {
                if *b > limit {
                    excess += *b - limit;
                    *b = limit;
                }
            }
            let bonus = excess / 256.0;
            let lut = &mut luts[ty * tiles_x + tx];
            let mut cum = 0.0;
            for v in 0..256 {
                cum += hist[v] + bonus;
                lut[v] = 255.0 * cum / area;
            }
        }
    }

    // Bilinear blend of neighboring tile mappings.
    let mut out = FloatPlane::zeros(w, h);
    for y in 0..h {
        let (ty0, ty1, fy) = interp_coords(y as f64, &centers_y);
        for x in 0..w {
            let (tx0, tx1, fx) = interp_coords(x as f64, &centers_x);
            let v = luma.get(x, y).round().clamp(0.0, 255.0) as usize;
            let m00 = luts[ty0 * tiles_x + tx0][v];
            let m10 = luts[ty0 * tiles_x + tx1][v];
            let m01 = luts[ty1 * tiles_x + tx0][v];
            let m11 = luts[ty1 * tiles_x + tx1][v];
            let top = m00 + fx * (m10 - m00);
            let bottom = m01 + fx * (m11 - m01);
            out.set(x, y, (top + fy * (bottom - top)).clamp(0.0, 255.0));
        }
    }
    out
}

/// Finds the bracketing tile centers and the blend fraction for coordinate
/// `pos`; positions outside the center span clamp to the edge tile.
fn interp_coords(pos: f64, centers: &[f64]) -> (usize, usize, f64) {
    if centers.len() == 1 || pos <= centers[0] {
        return (0, 0, 0.0);
    }
    let last = centers.len() - 1;
    if pos >= centers[last] {
        return (last, last, 0.0);
    }
    let hi = centers.partition_point(|&c| c < pos).min(last);
    let lo = hi - 1;
    let f = (pos - centers[lo]) / (centers[hi] - centers[lo]);
    (lo, hi, f)
}

/// Gamma that drags `mean` to mid-gray: `log(0.5) / log(mean/255)`.
pub fn adaptive_gamma(mean_luma: f64, lo: f64, hi: f64) -> f64 {
    let ratio = (mean_luma / 255.0).clamp(1.0 / 255.0, 254.0 / 255.0);
    (0.5f64.ln() / ratio.ln()).clamp(lo, hi)
}

/// CLAHE + adaptive gamma on luminance; chroma rescaled proportionally.
pub fn enhance_contrast(image: &Image, config: &DefilterConfig) -> Result<Image> {
    if image.width() < 16 || image.height() < 16 {
        return Err(Error::domain("contrast enhancement needs at least a 16x16 image"));
    }
    let luma = to_grayscale(image);
    let equalized = clahe(&luma, config.clahe_tiles, config.clahe_clip);
    let gamma = adaptive_gamma(equalized.mean(), config.gamma_min, config.gamma_max);
    let target = equalized.map(|v| 255.0 * (v / 255.0).powf(gamma));

    let planes = image.planes();
    let restored: Vec<FloatPlane> = planes
        .iter()
        .map(|p| {
            let mut out = FloatPlane::zeros(p.width(), p.height());
            for i in 0..p.data().len() {
                let original = luma.data()[i];
                let scale = if original < 1e-9 {
                    1.0
                } else {
                    (target.data()[i] / original).clamp(0.0, 8.0)
                };
                out.data_mut()[i] = p.data()[i] * scale;
            }
            out
        })
        .collect();
    Image::from_planes(&restored)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_formula_matches_hand_value() {
        // log(0.5)/log(128/255) = 1.00571...
        let g = adaptive_gamma(128.0, 0.5, 2.5);
        assert!((g - 1.00571).abs() < 1e-4, "gamma {g}");
        assert_eq!(adaptive_gamma(10.0, 0.5, 2.5), 0.5);
        assert_eq!(adaptive_gamma(254.0, 0.5, 2.5), 2.5);
    }

    #[test]
    fn mid_gray_constant_nearly_unchanged() {
        let img = Image::filled(32, 32, 1, 128).unwrap();
        let out = enhance_contrast(&img, &DefilterConfig::default()).unwrap();
        for &v in out.data() {
            assert!((v as i32 - 128).abs() <= 2, "value {v}");
        }
    }

    #[test]
    fn output_stays_in_range_and_stretches_flat_input() {
        // Severity-5 style contrast compression: values hug mid-gray.
        let data: Vec<u8> = (0..64 * 64)
            .map(|i| (120 + ((i * 7) % 17)) as u8)
            .collect();
        let img = Image::new(64, 64, 1, data).unwrap();
        let out = enhance_contrast(&img, &DefilterConfig::default()).unwrap();
        let std = |img: &Image| {
            let n = img.data().len() as f64;
            let mean = img.data().iter().map(|&v| v as f64).sum::<f64>() / n;
            (img.data()
                .iter()
                .map(|&v| (v as f64 - mean) * (v as f64 - mean))
                .sum::<f64>()
                / n)
                .sqrt()
        };
        assert!(std(&out) > 1.5 * std(&img), "{} vs {}", std(&out), std(&img));
    }

    #[test]
    fn clahe_interp_coords_clamp() {
        let centers = [4.0, 12.0, 20.0];
        assert_eq!(interp_coords(0.0, &centers), (0, 0, 0.0));
        assert_eq!(interp_coords(25.0, &centers), (2, 2, 0.0));
        let (lo, hi, f) = interp_coords(8.0, &centers);
        assert_eq!((lo, hi), (0, 1));
        assert!((f - 0.5).abs() < 1e-12);
    }
}
