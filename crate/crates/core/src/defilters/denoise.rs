//! Noise-sigma estimation and non-local means denoising.

use crate::defilters::DefilterConfig;
use crate::error::{Error, Result};
use crate::image::{box_mean, to_grayscale, FloatPlane, Image};

/// Immerkaer's fast noise estimate.
///
/// `sigma = sqrt(pi/2) * sum |I * L| / (6 (W-2)(H-2))` with `L` the 3x3
/// Laplacian-difference mask; the sum runs over interior pixels only.
pub fn estimate_noise_sigma(gray: &FloatPlane) -> f64 {
    let (w, h) = (gray.width(), gray.height());
    if w < 3 || h < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let response = gray.get(x - 1, y - 1) - 2.0 * gray.get(x, y - 1) + gray.get(x + 1, y - 1)
                - 2.0 * gray.get(x - 1, y) + 4.0 * gray.get(x, y) - 2.0 * gray.get(x + 1, y)
                + gray.get(x - 1, y + 1) - 2.0 * gray.get(x, y + 1) + gray.get(x + 1, y + 1);
            acc += response.abs();
        }
    }
    (std::f64::consts::PI / 2.0).sqrt() * acc / (6.0 * ((w - 2) * (h - 2)) as f64)
}

/// Non-local means with patch-distance weights computed on luminance and
/// shared across channels. `h = nlm_h_factor * sigma_hat`; a zero estimate
/// short-circuits to the identity.
pub fn denoise(image: &Image, config: &DefilterConfig) -> Result<Image> {
    if image.width() < 16 || image.height() < 16 {
        return Err(Error::domain("denoise needs at least a 16x16 image"));
    }
    let gray = to_grayscale(image);
    let sigma = estimate_noise_sigma(&gray);
    if sigma < 1e-9 {
        return Ok(image.clone());
    }
    let h2 = (config.nlm_h_factor * sigma).powi(2);
    let noise_floor = 2.0 * sigma * sigma;

    let (w, ht) = (image.width(), image.height());
    let n = w * ht;
    let channels = image.planes();
    let wr = config.nlm_window_radius as isize;

    let mut weight_sum = vec![0.0f64; n];
    let mut accum = vec![vec![0.0f64; n]; channels.len()];
    let mut diff = FloatPlane::zeros(w, ht);

    for dy in -wr..=wr {
        for dx in -wr..=wr {
            for y in 0..ht {
                for x in 0..w {
                    let v = gray.get_reflect(x as isize + dx, y as isize + dy);
                    let d = v - gray.get(x, y);
                    diff.set(x, y, d * d);
                }
            }
            // Mean squared patch distance for this displacement.
            let dist = box_mean(&diff, config.nlm_patch_radius);
            for i in 0..n {
                let d2 = (dist.data()[i] - noise_floor).max(0.0);
                let weight = (-d2 / h2).exp();
                weight_sum[i] += weight;
                let (x, y) = ((i % w) as isize, (i / w) as isize);
                for (c, chan) in channels.iter().enumerate() {
                    accum[c][i] += weight * chan.get_reflect(x + dx, y + dy);
                }
            }
        }
    }

    let planes: Vec<FloatPlane> = accum
        .into_iter()
        .map(|acc| {
            let data = acc
                .iter()
                .zip(&weight_sum)
                .map(|(&a, &ws)| a / ws)
                .collect();
            FloatPlane::new(w, ht, data).expect("same dims")
        })
        .collect();
    Image::from_planes(&planes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distortion::{apply_distortion, DistortionKind, DistortionSpec};

    #[test]
    fn sigma_zero_on_constant() {
        let gray = FloatPlane::filled(32, 32, 128.0);
        assert_eq!(estimate_noise_sigma(&gray), 0.0);
    }

    #[test]
    fn constant_image_is_identity() {
        let img = Image::filled(32, 32, 1, 128).unwrap();
        let out = denoise(&img, &DefilterConfig::default()).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn sigma_recovers_known_noise_level() {
        let clean = Image::filled(256, 256, 1, 128).unwrap();
        let spec = DistortionSpec::new(DistortionKind::Noise, 3, 2024, None).unwrap();
        let noisy = apply_distortion(&clean, &spec).unwrap();
        let sigma = estimate_noise_sigma(&to_grayscale(&noisy));
        assert!((sigma - 15.0).abs() < 2.0, "sigma {sigma}");
    }

    #[test]
    fn too_small_rejected() {
        let img = Image::filled(15, 16, 1, 0).unwrap();
        assert!(denoise(&img, &DefilterConfig::default()).is_err());
    }
}
