//! Classical restoration, one defilter per distortion class, plus the
//! class -> defilter router.
//!
//! All defilters are deterministic (no RNG anywhere), preserve image
//! dimensions, and keep outputs in [0, 255].

mod contrast;
mod deblock;
mod deblur;
mod dehaze;
mod denoise;
mod derain;
mod fft;

pub use contrast::{adaptive_gamma, clahe, enhance_contrast};
pub use deblock::{blockiness, deblock};
pub use deblur::{deblur, select_psf, variance_of_laplacian, PsfChoice};
pub use dehaze::{dark_channel, dehaze};
pub use denoise::{denoise, estimate_noise_sigma};
pub use derain::derain;
pub use fft::wiener_deconvolve;

use crate::distortion::DistortionClass;
use crate::error::{Error, Result};
use crate::image::Image;

/// Tunable constants for every defilter; conventional literature defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct DefilterConfig {
    /// NLM patch radius (patch side 2r+1).
    pub nlm_patch_radius: usize,
    /// NLM search window radius.
    pub nlm_window_radius: usize,
    /// NLM filtering strength as a multiple of the estimated sigma.
    pub nlm_h_factor: f64,
    /// Wiener noise-to-signal ratio.
    pub wiener_nsr: f64,
    /// Weight of the overshoot term in the deblur grid-search score.
    pub deblur_ring_penalty: f64,
    /// Dark-channel min-filter radius (window side 2r+1).
    pub dark_channel_radius: usize,
    /// Haze retention factor.
    pub dehaze_omega: f64,
    /// Transmission floor.
    pub dehaze_t0: f64,
    pub dehaze_guided_radius: usize,
    pub dehaze_guided_eps: f64,
    /// Fraction of brightest dark-channel pixels that vote for airlight.
    pub airlight_percentile: f64,
    pub derain_guided_radius: usize,
    pub derain_guided_eps: f64,
    /// Orientation tolerance (degrees) around the dominant streak angle.
    pub derain_angle_tolerance: f64,
    /// CLAHE tile grid (tiles x tiles).
    pub clahe_tiles: usize,
    /// CLAHE clip limit as a multiple of the uniform bin height.
    pub clahe_clip: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
    /// Deblock threshold as a multiple of the estimated QP.
    pub deblock_qp_factor: f64,
}

impl Default for DefilterConfig {
    fn default() -> Self {
        DefilterConfig {
            nlm_patch_radius: 3,
            nlm_window_radius: 10,
            nlm_h_factor: 0.8,
            wiener_nsr: 0.01,
            deblur_ring_penalty: 2.0,
            dark_channel_radius: 7,
            dehaze_omega: 0.95,
            dehaze_t0: 0.1,
            dehaze_guided_radius: 40,
            dehaze_guided_eps: 1e-3,
            airlight_percentile: 0.001,
            derain_guided_radius: 8,
            derain_guided_eps: 0.02,
            derain_angle_tolerance: 10.0,
            clahe_tiles: 8,
            clahe_clip: 2.0,
            gamma_min: 0.5,
            gamma_max: 2.5,
            deblock_qp_factor: 2.0,
        }
    }
}

impl DefilterConfig {
    /// Applies one `key=value` override; rejects unknown keys.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let as_radius = |v: f64| -> Result<usize> {
            if v < 1.0 || v.fract() != 0.0 {
                return Err(Error::config(format!("{key} must be a positive integer, got {v}")));
            }
            Ok(v as usize)
        };
        match key {
            "nlm_patch_radius" => self.nlm_patch_radius = as_radius(value)?,
            "nlm_window_radius" => self.nlm_window_radius = as_radius(value)?,
            "nlm_h_factor" => self.nlm_h_factor = value,
            "wiener_nsr" => self.wiener_nsr = value,
            "deblur_ring_penalty" => self.deblur_ring_penalty = value,
            "dark_channel_radius" => self.dark_channel_radius = as_radius(value)?,
            "dehaze_omega" => self.dehaze_omega = value,
            "dehaze_t0" => self.dehaze_t0 = value,
            "dehaze_guided_radius" => self.dehaze_guided_radius = as_radius(value)?,
            "dehaze_guided_eps" => self.dehaze_guided_eps = value,
            "airlight_percentile" => self.airlight_percentile = value,
            "derain_guided_radius" => self.derain_guided_radius = as_radius(value)?,
            "derain_guided_eps" => self.derain_guided_eps = value,
            "derain_angle_tolerance" => self.derain_angle_tolerance = value,
            "clahe_tiles" => self.clahe_tiles = as_radius(value)?,
            "clahe_clip" => self.clahe_clip = value,
            "gamma_min" => self.gamma_min = value,
            "gamma_max" => self.gamma_max = value,
            "deblock_qp_factor" => self.deblock_qp_factor = value,
            other => return Err(Error::config(format!("unknown defilter parameter {other:?}"))),
        }
        Ok(())
    }
}

/// Name of the defilter that handles a class, as recorded in provenance.
pub fn defilter_name(class: DistortionClass) -> &'static str {
    match class {
        DistortionClass::Noise => "denoise",
        DistortionClass::Blur => "deblur",
        DistortionClass::Haze => "dehaze",
        DistortionClass::Rain => "derain",
        DistortionClass::ContrastIllumination => "enhance_contrast",
        DistortionClass::Compression => "deblock",
    }
}

/// Routes an image to the defilter matching its (predicted) class.
pub fn restore(image: &Image, class: DistortionClass, config: &DefilterConfig) -> Result<Image> {
    match class {
        DistortionClass::Noise => denoise(image, config),
        DistortionClass::Blur => deblur(image, config),
        DistortionClass::Haze => dehaze(image, config),
        DistortionClass::Rain => derain(image, config),
        DistortionClass::ContrastIllumination => enhance_contrast(image, config),
        DistortionClass::Compression => deblock(image, config),
    }
}
