//! Pixel buffers, file I/O, color conversion, quantization, and the
//! convolution primitives the rest of the crate builds on.
//!
//! Storage is 8-bit; all arithmetic happens on [`FloatPlane`] working copies.
//! Border handling is reflect-101 everywhere (`gfedcb|abcdefgh|gfedcba`).

mod filter;
mod guided;
mod pnm;
mod png_io;

pub use filter::{box_mean, convolve2d, disk_kernel, gaussian_kernel, min_filter, motion_kernel, Kernel};
pub use guided::guided_filter;

use std::path::Path;

use crate::error::{Error, Result};

/// BT.601 luma weights for RGB → gray conversion.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

/// 8-bit raster, 1 (gray) or 3 (RGB) channels, row-major and
/// channel-interleaved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::domain("image dimensions must be at least 1x1"));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::domain(format!("channels must be 1 or 3, got {channels}")));
        }
        if data.len() != width * height * channels {
            return Err(Error::dimension(format!(
                "data length {} != {}x{}x{}",
                data.len(),
                width,
                height,
                channels
            )));
        }
        Ok(Image { width, height, channels, data })
    }

    /// Solid image filled with `value`.
    pub fn filled(width: usize, height: usize, channels: usize, value: u8) -> Result<Self> {
        Image::new(width, height, channels, vec![value; width * height * channels])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn sample(&self, x: usize, y: usize, c: usize) -> u8 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// Splits into one float plane per channel.
    pub fn planes(&self) -> Vec<FloatPlane> {
        (0..self.channels)
            .map(|c| {
                let data = self
                    .data
                    .chunks_exact(self.channels)
                    .map(|px| px[c] as f64)
                    .collect();
                FloatPlane { width: self.width, height: self.height, data }
            })
            .collect()
    }

    /// Reassembles channel planes into an 8-bit image, rounding and clamping.
    pub fn from_planes(planes: &[FloatPlane]) -> Result<Self> {
        if planes.is_empty() || (planes.len() != 1 && planes.len() != 3) {
            return Err(Error::domain("expected 1 or 3 planes"));
        }
        let (w, h) = (planes[0].width, planes[0].height);
        for p in planes {
            if p.width != w || p.height != h {
                return Err(Error::dimension("plane sizes differ"));
            }
        }
        let channels = planes.len();
        let mut data = vec![0u8; w * h * channels];
        for (c, plane) in planes.iter().enumerate() {
            for (i, &v) in plane.data.iter().enumerate() {
                data[i * channels + c] = clamp_u8(v);
            }
        }
        Image::new(w, h, channels, data)
    }
}

/// Rounds to the nearest 8-bit level, saturating at the ends.
pub fn clamp_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Row-major real-valued working plane.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPlane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl FloatPlane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::domain("plane dimensions must be at least 1x1"));
        }
        if data.len() != width * height {
            return Err(Error::dimension(format!(
                "data length {} != {}x{}",
                data.len(),
                width,
                height
            )));
        }
        Ok(FloatPlane { width, height, data })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        FloatPlane { width, height, data: vec![0.0; width * height] }
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        FloatPlane { width, height, data: vec![value; width * height] }
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

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.data[y * self.width + x] = v;
    }

    /// Sample with reflect-101 coordinates, valid for any integer offset.
    #[inline]
    pub fn get_reflect(&self, x: isize, y: isize) -> f64 {
        let xi = reflect_101(x, self.width);
        let yi = reflect_101(y, self.height);
        self.data[yi * self.width + xi]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> FloatPlane {
        FloatPlane {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Quantizes to an 8-bit image plane.
    pub fn to_image(&self) -> Image {
        let data = self.data.iter().map(|&v| clamp_u8(v)).collect();
        Image { width: self.width, height: self.height, channels: 1, data }
    }

    #[cfg(debug_assertions)]
    pub(crate) fn debug_assert_finite(&self) {
        debug_assert!(self.data.iter().all(|v| v.is_finite()), "non-finite plane sample");
    }

    #[cfg(not(debug_assertions))]
    pub(crate) fn debug_assert_finite(&self) {}
}

/// Reflect-101 index fold: `-1 -> 1`, `n -> n-2`.
#[inline]
pub fn reflect_101(mut i: isize, n: usize) -> usize {
    let n = n as isize;
    if n == 1 {
        return 0;
    }
    let period = 2 * (n - 1);
    i = i.rem_euclid(period);
    if i >= n {
        i = period - i;
    }
    i as usize
}

/// Soft region weights in [0, 1] used by the local distortions.
#[derive(Debug, Clone)]
pub struct RegionMask {
    width: usize,
    height: usize,
    weights: Vec<f64>,
}

impl RegionMask {
    pub fn new(width: usize, height: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != width * height {
            return Err(Error::dimension("mask size mismatch"));
        }
        if weights.iter().any(|w| !(0.0..=1.0).contains(w)) {
            return Err(Error::domain("mask weights must lie in [0,1]"));
        }
        Ok(RegionMask { width, height, weights })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, x: usize, y: usize) -> f64 {
        self.weights[y * self.width + x]
    }
}

/// Quantized gray-level labels, the input representation for GLCM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedPlane {
    width: usize,
    height: usize,
    levels: usize,
    labels: Vec<u16>,
}

impl QuantizedPlane {
    pub fn new(width: usize, height: usize, levels: usize, labels: Vec<u16>) -> Result<Self> {
        if labels.len() != width * height {
            return Err(Error::dimension("label buffer size mismatch"));
        }
        if levels < 2 {
            return Err(Error::domain("need at least 2 levels"));
        }
        if labels.iter().any(|&l| l as usize >= levels) {
            return Err(Error::domain("label out of range"));
        }
        Ok(QuantizedPlane { width, height, levels, labels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn labels(&self) -> &[u16] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, x: usize, y: usize) -> u16 {
        self.labels[y * self.width + x]
    }
}

/// RGB → BT.601 luma; gray passes through as reals.
pub fn to_grayscale(image: &Image) -> FloatPlane {
    let (w, h) = (image.width, image.height);
    let data = if image.channels == 1 {
        image.data.iter().map(|&v| v as f64).collect()
    } else {
        image
            .data
            .chunks_exact(3)
            .map(|px| {
                LUMA_WEIGHTS[0] * px[0] as f64
                    + LUMA_WEIGHTS[1] * px[1] as f64
                    + LUMA_WEIGHTS[2] * px[2] as f64
            })
            .collect()
    };
    FloatPlane { width: w, height: h, data }
}

/// Uniform quantization of [0, 255] samples into `levels` labels.
///
/// `label = floor(sample * levels / 256)`, clamped to `levels - 1`.
pub fn quantize_levels(plane: &FloatPlane, levels: usize) -> Result<QuantizedPlane> {
    if levels < 2 {
        return Err(Error::domain("need at least 2 quantization levels"));
    }
    let mut labels = Vec::with_capacity(plane.data.len());
    for &v in &plane.data {
        if !(0.0..=255.0).contains(&v) {
            return Err(Error::domain(format!("sample {v} outside [0,255]")));
        }
        let label = ((v * levels as f64) / 256.0).floor() as usize;
        labels.push(label.min(levels - 1) as u16);
    }
    Ok(QuantizedPlane { width: plane.width, height: plane.height, levels, labels })
}

/// Decodes a PGM (P5), PPM (P6), or PNG file based on its magic bytes.
pub fn load_image(path: impl AsRef<Path>) -> Result<Image> {
    let bytes = std::fs::read(path.as_ref())?;
    if bytes.starts_with(b"P5") || bytes.starts_with(b"P6") {
        pnm::decode(&bytes)
    } else if bytes.starts_with(&[0x89, b'P', b'N', b'G']) {
        png_io::decode(&bytes)
    } else {
        Err(Error::format("unrecognized image format (expected P5/P6 PNM or PNG)"))
    }
}

/// Encodes as binary PNM (P5 for gray, P6 for RGB), or PNG when the path
/// extension asks for it.
pub fn save_image(image: &Image, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let is_png = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("png"))
        .unwrap_or(false);
    let bytes = if is_png { png_io::encode(image)? } else { pnm::encode(image) };
    std::fs::write(path, bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grayscale_white_is_255() {
        let img = Image::new(1, 1, 3, vec![255, 255, 255]).unwrap();
        let g = to_grayscale(&img);
        assert!((g.get(0, 0) - 255.0).abs() < 1e-9);
    }

    #[test]
    fn grayscale_pure_red() {
        let img = Image::new(1, 1, 3, vec![255, 0, 0]).unwrap();
        let g = to_grayscale(&img);
        assert!((g.get(0, 0) - 76.245).abs() < 1e-9);
    }

    #[test]
    fn grayscale_gray_passthrough() {
        let img = Image::new(2, 1, 1, vec![13, 200]).unwrap();
        let g = to_grayscale(&img);
        assert_eq!(g.data(), &[13.0, 200.0]);
    }

    #[test]
    fn quantize_examples() {
        let plane = FloatPlane::new(3, 1, vec![255.0, 0.0, 128.0]).unwrap();
        let q = quantize_levels(&plane, 16).unwrap();
        assert_eq!(q.labels(), &[15, 0, 8]);
    }

    #[test]
    fn quantize_rejects_out_of_range() {
        let plane = FloatPlane::new(1, 1, vec![-0.5]).unwrap();
        assert!(matches!(quantize_levels(&plane, 16), Err(Error::Domain(_))));
    }

    #[test]
    fn quantize_monotone_along_ramp() {
        let vals: Vec<f64> = (0..=255).map(|v| v as f64).collect();
        let plane = FloatPlane::new(256, 1, vals).unwrap();
        let q = quantize_levels(&plane, 7).unwrap();
        for pair in q.labels().windows(2) {
            assert!(pair[0] <= pair[1]);
        }
    }

    #[test]
    fn reflect_101_folds() {
        assert_eq!(reflect_101(-1, 5), 1);
        assert_eq!(reflect_101(-2, 5), 2);
        assert_eq!(reflect_101(5, 5), 3);
        assert_eq!(reflect_101(6, 5), 2);
        assert_eq!(reflect_101(0, 1), 0);
        assert_eq!(reflect_101(-7, 1), 0);
    }

    #[test]
    fn image_invariants_enforced() {
        assert!(Image::new(0, 1, 1, vec![]).is_err());
        assert!(Image::new(2, 2, 2, vec![0; 8]).is_err());
        assert!(Image::new(2, 2, 1, vec![0; 5]).is_err());
    }

    #[test]
    fn planes_roundtrip() {
        let img = Image::new(2, 2, 3, (0..12).collect()).unwrap();
        let back = Image::from_planes(&img.planes()).unwrap();
        assert_eq!(img, back);
    }
}
