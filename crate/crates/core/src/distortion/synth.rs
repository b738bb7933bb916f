//! The ten distortion synthesizers and their severity parameter tables.
//!
//! Every synthesizer is a pure function of (image, spec): randomness comes
//! only from the spec's seed, so outputs are reproducible across runs and
//! worker counts. Severity tables span mild (1) to severe (5); severity 0 is
//! reserved for the degenerate identity parameterizations used in tests.

use crate::distortion::dct::block_dct_quantize;
use crate::distortion::kinds::DistortionKind;
use crate::distortion::region::RegionSpec;
use crate::error::{Error, Result};
use crate::image::{clamp_u8, convolve2d, disk_kernel, motion_kernel, FloatPlane, Image, Kernel, RegionMask};
use crate::rng::SplitMix64;

use serde::{Deserialize, Serialize};

/// JPEG-style quality per severity.
pub const COMPRESSION_QUALITY: [u32; 5] = [90, 70, 50, 30, 10];
/// AWGN standard deviation per severity.
pub const NOISE_SIGMA: [f64; 5] = [5.0, 10.0, 15.0, 25.0, 35.0];
/// Linear contrast gain per severity.
pub const CONTRAST_ALPHA: [f64; 5] = [0.8, 0.65, 0.5, 0.4, 0.3];
/// Rain streak density per megapixel per severity.
pub const RAIN_PER_MEGAPIXEL: [f64; 5] = [100.0, 200.0, 400.0, 700.0, 1000.0];
/// Haze extinction coefficient per severity.
pub const HAZE_BETA: [f64; 5] = [0.4, 0.8, 1.2, 1.8, 2.5];
/// Motion blur PSF length per severity.
pub const MOTION_LENGTH: [usize; 5] = [5, 9, 13, 17, 21];
/// Defocus blur disk radius per severity.
pub const DEFOCUS_RADIUS: [usize; 5] = [2, 3, 4, 6, 8];
/// Backlight luminance gain per severity.
pub const BACKLIGHT_GAIN: [f64; 5] = [0.6, 0.5, 0.4, 0.3, 0.2];

/// Atmospheric light used by the haze synthesizer.
pub const HAZE_AIRLIGHT: f64 = 240.0;

/// Fully determines one synthetic distortion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionSpec {
    pub kind: DistortionKind,
    /// 1 (mild) to 5 (severe); 0 only via [`DistortionSpec::degenerate`].
    pub severity: u8,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionSpec>,
}

impl DistortionSpec {
    pub fn new(kind: DistortionKind, severity: u8, seed: u64, region: Option<RegionSpec>) -> Result<Self> {
        if !(1..=5).contains(&severity) {
            return Err(Error::domain(format!("severity {severity} outside 1..=5")));
        }
        let spec = DistortionSpec { kind, severity, seed, region };
        spec.validate()?;
        Ok(spec)
    }

    /// Severity-0 spec: the identity parameterization of D3 (gain 1), D6
    /// (length-1 PSF), or D7 (radius-0 disk). Test-only escape hatch.
    pub fn degenerate(kind: DistortionKind, seed: u64) -> Result<Self> {
        match kind {
            DistortionKind::Contrast | DistortionKind::MotionBlur | DistortionKind::DefocusBlur => {
                Ok(DistortionSpec { kind, severity: 0, seed, region: None })
            }
            other => Err(Error::domain(format!(
                "severity 0 has no identity meaning for {}",
                other.tag()
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.severity > 5 {
            return Err(Error::domain(format!("severity {} outside 0..=5", self.severity)));
        }
        if self.kind.is_local() && self.region.is_none() {
            return Err(Error::domain(format!("{} requires a region", self.kind.tag())));
        }
        if !self.kind.is_local() && self.region.is_some() {
            return Err(Error::domain(format!("{} does not take a region", self.kind.tag())));
        }
        Ok(())
    }

    fn severity_index(&self) -> usize {
        (self.severity.max(1) - 1) as usize
    }
}

/// Applies the distortion described by `spec`. Output dimensions always
/// equal input dimensions.
pub fn apply_distortion(image: &Image, spec: &DistortionSpec) -> Result<Image> {
    spec.validate()?;
    if image.width() < 16 || image.height() < 16 {
        return Err(Error::domain("distortion synthesis needs at least a 16x16 image"));
    }
    let mut rng = SplitMix64::new(spec.seed);
    let s = spec.severity_index();
    let out = match spec.kind {
        DistortionKind::Compression => apply_compression(image, COMPRESSION_QUALITY[s]),
        DistortionKind::Noise => apply_awgn(image, NOISE_SIGMA[s], &mut rng),
        DistortionKind::Contrast => {
            let alpha = if spec.severity == 0 { 1.0 } else { CONTRAST_ALPHA[s] };
            apply_contrast(image, alpha)
        }
        DistortionKind::Rain => apply_rain(image, RAIN_PER_MEGAPIXEL[s], &mut rng),
        DistortionKind::Haze => {
            let t = vertical_ramp_transmission(image.width(), image.height(), HAZE_BETA[s]);
            apply_haze_with(image, &t, HAZE_AIRLIGHT)
        }
        DistortionKind::MotionBlur => {
            let length = if spec.severity == 0 { 1 } else { MOTION_LENGTH[s] };
            let angle = rng.next_range(0.0, 180.0);
            blur_with(image, &motion_kernel(length, angle)?)
        }
        DistortionKind::DefocusBlur => {
            let radius = if spec.severity == 0 { 0 } else { DEFOCUS_RADIUS[s] };
            blur_with(image, &disk_kernel(radius)?)
        }
        DistortionKind::LocalBacklight => {
            let mask = spec.region.unwrap().mask(image.width(), image.height());
            apply_backlight(image, BACKLIGHT_GAIN[s], &mask)
        }
        DistortionKind::LocalMotionBlur => {
            let mask = spec.region.unwrap().mask(image.width(), image.height());
            let angle = rng.next_range(0.0, 180.0);
            let blurred = blur_with(image, &motion_kernel(MOTION_LENGTH[s], angle)?);
            blend_masked(image, &blurred, &mask)
        }
        DistortionKind::LocalDefocusBlur => {
            let mask = spec.region.unwrap().mask(image.width(), image.height());
            let blurred = blur_with(image, &disk_kernel(DEFOCUS_RADIUS[s])?);
            blend_masked(image, &blurred, &mask)
        }
    };
    debug_assert_eq!((out.width(), out.height()), (image.width(), image.height()));
    Ok(out)
}

/// D1: per-channel blockwise DCT quantization.
fn apply_compression(image: &Image, quality: u32) -> Image {
    let planes: Vec<FloatPlane> = image
        .planes()
        .iter()
        .map(|p| block_dct_quantize(p, quality))
        .collect();
    Image::from_planes(&planes).expect("plane count preserved")
}

/// D2: additive white Gaussian noise, clamped to [0,255].
///
/// Samples are perturbed in storage order so the stream layout is part of
/// the format contract.
fn apply_awgn(image: &Image, sigma: f64, rng: &mut SplitMix64) -> Image {
    let data = image
        .data()
        .iter()
        .map(|&v| clamp_u8(v as f64 + sigma * rng.next_gauss()))
        .collect();
    Image::new(image.width(), image.height(), image.channels(), data).expect("same dims")
}

/// D3: linear contrast about mid-gray.
fn apply_contrast(image: &Image, alpha: f64) -> Image {
    let data = image
        .data()
        .iter()
        .map(|&v| clamp_u8(alpha * (v as f64 - 128.0) + 128.0))
        .collect();
    Image::new(image.width(), image.height(), image.channels(), data).expect("same dims")
}

/// D4: additive near-vertical bright streaks, pre-blurred along their own
/// direction by a length-5 box PSF (drawn directly as a trapezoid profile).
fn apply_rain(image: &Image, per_megapixel: f64, rng: &mut SplitMix64) -> Image {
    let (w, h) = (image.width(), image.height());
    let count = ((per_megapixel * (w * h) as f64 / 1e6).round() as usize).max(1);
    let mut layer = FloatPlane::zeros(w, h);
    for _ in 0..count {
        let cx = rng.next_range(0.0, w as f64);
        let cy = rng.next_range(0.0, h as f64);
        let length = rng.next_range(15.0, 35.0);
        let angle = rng.next_range(70.0, 110.0).to_radians();
        let brightness = rng.next_range(40.0, 90.0);
        draw_streak(&mut layer, cx, cy, length, angle, brightness);
    }
    let planes: Vec<FloatPlane> = image
        .planes()
        .iter()
        .map(|p| {
            let mut out = p.clone();
            for (v, &s) in out.data_mut().iter_mut().zip(layer.data()) {
                *v += s;
            }
            out
        })
        .collect();
    Image::from_planes(&planes).expect("same dims")
}

/// Rasterizes one streak with a trapezoid intensity profile (the analytic
/// convolution of the segment with a length-5 box along its own angle).
/// Max-splatting keeps crossings from blowing out.
fn draw_streak(layer: &mut FloatPlane, cx: f64, cy: f64, length: f64, angle: f64, brightness: f64) {
    let (w, h) = (layer.width() as isize, layer.height() as isize);
    let (dx, dy) = (angle.cos(), angle.sin());
    let half_support = (length + 4.0) / 2.0;
    let mut t = -half_support;
    while t <= half_support {
        // Box(5) overlap with the segment extent at offset t.
        let overlap = ((t + 2.5).min(length / 2.0) - (t - 2.5).max(-length / 2.0)).clamp(0.0, 5.0);
        let value = brightness * overlap / 5.0;
        if value > 0.0 {
            let x = cx + t * dx;
            let y = cy + t * dy;
            let (x0, y0) = (x.floor(), y.floor());
            let (fx, fy) = (x - x0, y - y0);
            let corners = [
                (x0 as isize, y0 as isize, (1.0 - fx) * (1.0 - fy)),
                (x0 as isize + 1, y0 as isize, fx * (1.0 - fy)),
                (x0 as isize, y0 as isize + 1, (1.0 - fx) * fy),
                (x0 as isize + 1, y0 as isize + 1, fx * fy),
            ];
            for (px, py, cw) in corners {
                if px >= 0 && py >= 0 && px < w && py < h {
                    let idx = (py as usize) * layer.width() + px as usize;
                    let cur = layer.data()[idx];
                    layer.data_mut()[idx] = cur.max(value * cw);
                }
            }
        }
        t += 0.5;
    }
}

/// Transmission map for the haze synthesizer: `t = exp(-beta * d)` with a
/// vertical depth ramp, 1 at the top row and 0.2 at the bottom.
pub fn vertical_ramp_transmission(width: usize, height: usize, beta: f64) -> FloatPlane {
    let mut t = FloatPlane::zeros(width, height);
    for y in 0..height {
        let frac = if height > 1 { y as f64 / (height as f64 - 1.0) } else { 0.0 };
        let depth = 1.0 - 0.8 * frac;
        let ty = (-beta * depth).exp();
        for x in 0..width {
            t.set(x, y, ty);
        }
    }
    t
}

/// D5 core: atmospheric scattering model `I = J*t + A*(1-t)`.
///
/// Public so tests can drive it with a known transmission map.
pub fn apply_haze_with(image: &Image, transmission: &FloatPlane, airlight: f64) -> Image {
    assert_eq!(transmission.width(), image.width());
    assert_eq!(transmission.height(), image.height());
    let planes: Vec<FloatPlane> = image
        .planes()
        .iter()
        .map(|p| {
            let mut out = FloatPlane::zeros(p.width(), p.height());
            for i in 0..p.data().len() {
                let t = transmission.data()[i];
                out.data_mut()[i] = p.data()[i] * t + airlight * (1.0 - t);
            }
            out
        })
        .collect();
    Image::from_planes(&planes).expect("same dims")
}

/// Convolves every channel with the PSF; the degenerate identity kernel
/// short-circuits to a bit-exact copy.
fn blur_with(image: &Image, kernel: &Kernel) -> Image {
    if kernel.is_identity() {
        return image.clone();
    }
    let planes: Vec<FloatPlane> = image
        .planes()
        .iter()
        .map(|p| convolve2d(p, kernel))
        .collect();
    Image::from_planes(&planes).expect("same dims")
}

/// D8: in-region luminance gain with feathered blend. Pixels with zero mask
/// weight are copied bit-exactly.
fn apply_backlight(image: &Image, gain: f64, mask: &RegionMask) -> Image {
    let (w, h, c) = (image.width(), image.height(), image.channels());
    let mut data = Vec::with_capacity(w * h * c);
    for y in 0..h {
        for x in 0..w {
            let weight = mask.weight(x, y);
            for ch in 0..c {
                let v = image.sample(x, y, ch);
                if weight == 0.0 {
                    data.push(v);
                } else {
                    data.push(clamp_u8(v as f64 * (1.0 - weight * (1.0 - gain))));
                }
            }
        }
    }
    Image::new(w, h, c, data).expect("same dims")
}

/// D9/D10: feather-blend a globally blurred copy into the region. Pixels
/// with zero mask weight are copied bit-exactly.
fn blend_masked(sharp: &Image, processed: &Image, mask: &RegionMask) -> Image {
    let (w, h, c) = (sharp.width(), sharp.height(), sharp.channels());
    let mut data = Vec::with_capacity(w * h * c);
    for y in 0..h {
        for x in 0..w {
            let weight = mask.weight(x, y);
            for ch in 0..c {
                let a = sharp.sample(x, y, ch);
                if weight == 0.0 {
                    data.push(a);
                } else {
                    let b = processed.sample(x, y, ch);
                    data.push(clamp_u8(a as f64 * (1.0 - weight) + b as f64 * weight));
                }
            }
        }
    }
    Image::new(w, h, c, data).expect("same dims")
}
