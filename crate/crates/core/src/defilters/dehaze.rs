//! Single-image dehazing with the dark channel prior.

use crate::defilters::DefilterConfig;
use crate::error::{Error, Result};
use crate::image::{guided_filter, min_filter, to_grayscale, FloatPlane, Image};

/// Dark channel: per-pixel channel minimum eroded by a square min filter.
pub fn dark_channel(planes: &[FloatPlane], radius: usize) -> FloatPlane {
    let (w, h) = (planes[0].width(), planes[0].height());
    let mut per_pixel_min = FloatPlane::zeros(w, h);
    for i in 0..w * h {
        let m = planes
            .iter()
            .map(|p| p.data()[i])
            .fold(f64::INFINITY, f64::min);
        per_pixel_min.data_mut()[i] = m;
    }
    min_filter(&per_pixel_min, radius)
}

/// Atmospheric light: mean color of the brightest `percentile` fraction of
/// dark-channel pixels (at least one), deterministic under ties.
fn atmospheric_light(planes: &[FloatPlane], dark: &FloatPlane, percentile: f64) -> [f64; 3] {
    let n = dark.data().len();
    let take = ((n as f64 * percentile).round() as usize).max(1);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        dark.data()[b]
            .partial_cmp(&dark.data()[a])
            .expect("finite dark channel")
            .then(a.cmp(&b))
    });
    let mut a = [0.0; 3];
    for &i in order.iter().take(take) {
        for (c, plane) in planes.iter().enumerate() {
            a[c] += plane.data()[i];
        }
    }
    for v in &mut a {
        *v = (*v / take as f64).max(1.0);
    }
    a
}

/// Dark-channel-prior dehazing:
/// transmission `t = 1 - omega * dark(I/A)`, refined by a guided filter on
/// the luminance, then `J = (I - A) / max(t, t0) + A`.
pub fn dehaze(image: &Image, config: &DefilterConfig) -> Result<Image> {
    if image.channels() != 3 {
        return Err(Error::domain("dehaze requires a 3-channel image"));
    }
    if image.width() < 32 || image.height() < 32 {
        return Err(Error::domain("dehaze needs at least a 32x32 image"));
    }
    let planes = image.planes();
    let (w, h) = (image.width(), image.height());

    let dark = dark_channel(&planes, config.dark_channel_radius);
    let airlight = atmospheric_light(&planes, &dark, config.airlight_percentile);

    let normalized: Vec<FloatPlane> = planes
        .iter()
        .zip(&airlight)
        .map(|(p, &a)| p.map(|v| v / a))
        .collect();
    let dark_norm = dark_channel(&normalized, config.dark_channel_radius);
    let mut t_raw = FloatPlane::zeros(w, h);
    for i in 0..w * h {
        t_raw.data_mut()[i] = (1.0 - config.dehaze_omega * dark_norm.data()[i]).clamp(0.0, 1.0);
    }

    let guide = to_grayscale(image).map(|v| v / 255.0);
    let t = guided_filter(&guide, &t_raw, config.dehaze_guided_radius, config.dehaze_guided_eps)?;

    let restored: Vec<FloatPlane> = planes
        .iter()
        .zip(&airlight)
        .map(|(p, &a)| {
            let mut out = FloatPlane::zeros(w, h);
            for i in 0..w * h {
                let tv = t.data()[i].clamp(config.dehaze_t0, 1.0);
                out.data_mut()[i] = (p.data()[i] - a) / tv + a;
            }
            out
        })
        .collect();
    Image::from_planes(&restored)
}
