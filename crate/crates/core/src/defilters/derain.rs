//! Deraining by base/detail decomposition and oriented-detail suppression.

use crate::defilters::DefilterConfig;
use crate::error::{Error, Result};
use crate::image::{guided_filter, to_grayscale, FloatPlane, Image};

/// Per-pixel Sobel gradient magnitude and line orientation in [0, 180).
///
/// Orientation is the direction a bright streak would run (gradient angle
/// rotated by 90 degrees).
fn gradient_field(gray: &FloatPlane) -> (Vec<f64>, Vec<f64>) {
    let (w, h) = (gray.width(), gray.height());
    let mut magnitude = vec![0.0; w * h];
    let mut orientation = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let (xi, yi) = (x as isize, y as isize);
            let s = |dx: isize, dy: isize| gray.get_reflect(xi + dx, yi + dy);
            let gx = s(1, -1) + 2.0 * s(1, 0) + s(1, 1) - s(-1, -1) - 2.0 * s(-1, 0) - s(-1, 1);
            let gy = s(-1, 1) + 2.0 * s(0, 1) + s(1, 1) - s(-1, -1) - 2.0 * s(0, -1) - s(1, -1);
            let idx = y * w + x;
            magnitude[idx] = (gx * gx + gy * gy).sqrt();
            let line_angle = gy.atan2(gx).to_degrees() + 90.0;
            orientation[idx] = line_angle.rem_euclid(180.0);
        }
    }
    (magnitude, orientation)
}

/// Magnitude-weighted orientation histogram peak restricted to the
/// near-vertical band [60, 120].
fn dominant_streak_angle(magnitude: &[f64], orientation: &[f64]) -> f64 {
    let mut hist = [0.0f64; 180];
    for (&m, &o) in magnitude.iter().zip(orientation) {
        let bin = (o as usize).min(179);
        hist[bin] += m;
    }
    let mut best = 60usize;
    for deg in 60..=120 {
        if hist[deg.min(179)] > hist[best] {
            best = deg;
        }
    }
    best as f64
}

fn angular_difference(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(180.0);
    d.min(180.0 - d)
}

/// Guided-filter base/detail split; positive detail aligned with the
/// dominant near-vertical orientation is treated as rain and zeroed.
pub fn derain(image: &Image, config: &DefilterConfig) -> Result<Image> {
    if image.width() < 32 || image.height() < 32 {
        return Err(Error::domain("derain needs at least a 32x32 image"));
    }
    let (w, h) = (image.width(), image.height());
    let gray = to_grayscale(image);
    let guide = gray.map(|v| v / 255.0);

    let planes = image.planes();
    let bases: Vec<FloatPlane> = planes
        .iter()
        .map(|p| {
            let scaled = p.map(|v| v / 255.0);
            guided_filter(&guide, &scaled, config.derain_guided_radius, config.derain_guided_eps)
                .map(|b| b.map(|v| v * 255.0))
        })
        .collect::<Result<_>>()?;

    let (magnitude, orientation) = gradient_field(&gray);
    let streak_angle = dominant_streak_angle(&magnitude, &orientation);

    let restored: Vec<FloatPlane> = planes
        .iter()
        .zip(&bases)
        .map(|(p, base)| {
            let mut out = FloatPlane::zeros(w, h);
            for i in 0..w * h {
                let detail = p.data()[i] - base.data()[i];
                let rain_oriented =
                    angular_difference(orientation[i], streak_angle) <= config.derain_angle_tolerance;
                let keep = if rain_oriented && detail > 0.0 { 0.0 } else { detail };
                out.data_mut()[i] = base.data()[i] + keep;
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
    fn constant_image_is_unchanged() {
        let img = Image::filled(48, 48, 1, 77).unwrap();
        let out = derain(&img, &DefilterConfig::default()).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn rain_free_image_barely_changes() {
        // Horizontal stripes: no near-vertical orientation dominates, so
        // suppression touches few pixels.
        let mut data = Vec::new();
        for y in 0..64u32 {
            for _x in 0..64u32 {
                data.push((100 + 40 * ((y / 4) % 2)) as u8);
            }
        }
        let img = Image::new(64, 64, 1, data).unwrap();
        let out = derain(&img, &DefilterConfig::default()).unwrap();
        let mad: f64 = img
            .data()
            .iter()
            .zip(out.data())
            .map(|(&a, &b)| (a as f64 - b as f64).abs())
            .sum::<f64>()
            / img.data().len() as f64;
        assert!(mad < 3.0, "mean abs diff {mad}");
    }

    #[test]
    fn vertical_orientation_detected() {
        // A bright vertical bar has orientation 90 everywhere along its
        // edges.
        let mut data = vec![50u8; 64 * 64];
        for y in 0..64 {
            for x in 30..34 {
                data[y * 64 + x] = 220;
            }
        }
        let img = Image::new(64, 64, 1, data).unwrap();
        let gray = to_grayscale(&img);
        let (m, o) = gradient_field(&gray);
        assert_eq!(dominant_streak_angle(&m, &o), 90.0);
    }

    #[test]
    fn too_small_rejected() {
        let img = Image::filled(31, 32, 1, 0).unwrap();
        assert!(derain(&img, &DefilterConfig::default()).is_err());
    }
}
