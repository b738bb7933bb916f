//! Blind deblurring by grid search over candidate PSFs with Wiener
//! inversion.
//!
//! Candidates cover the motion-blur family (5 lengths x 12 angles) and the
//! defocus family (5 radii). Each candidate is inverted in the frequency
//! domain and scored by variance-of-Laplacian sharpness minus a ringing
//! penalty; the input keeps its place when nothing beats it.

use crate::defilters::fft::wiener_deconvolve;
use crate::defilters::DefilterConfig;
use crate::error::{Error, Result};
use crate::image::{disk_kernel, motion_kernel, to_grayscale, FloatPlane, Image, Kernel};

/// Candidate grid matching the blur synthesizer's PSF families.
pub const CANDIDATE_LENGTHS: [usize; 5] = [5, 9, 13, 17, 21];
pub const CANDIDATE_ANGLES: [f64; 12] = [
    0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0, 105.0, 120.0, 135.0, 150.0, 165.0,
];
pub const CANDIDATE_RADII: [usize; 5] = [2, 3, 4, 6, 8];

/// The PSF a grid search settled on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsfChoice {
    Identity,
    Motion { length: usize, angle: f64 },
    Defocus { radius: usize },
}

impl PsfChoice {
    fn kernel(&self) -> Result<Kernel> {
        match *self {
            PsfChoice::Identity => Ok(Kernel::identity()),
            PsfChoice::Motion { length, angle } => motion_kernel(length, angle),
            PsfChoice::Defocus { radius } => disk_kernel(radius),
        }
    }
}

/// Variance of the 3x3 Laplacian response over interior pixels.
pub fn variance_of_laplacian(plane: &FloatPlane) -> f64 {
    let (w, h) = (plane.width(), plane.height());
    if w < 3 || h < 3 {
        return 0.0;
    }
    let mut responses = Vec::with_capacity((w - 2) * (h - 2));
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let r = plane.get(x, y - 1) + plane.get(x - 1, y) + plane.get(x + 1, y)
                + plane.get(x, y + 1)
                - 4.0 * plane.get(x, y);
            responses.push(r);
        }
    }
    let n = responses.len() as f64;
    let mean = responses.iter().sum::<f64>() / n;
    responses.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n
}

/// Mean absolute excursion beyond the input's [lo, hi] value range —
/// wrong-PSF inversions ring hard and overshoot.
fn overshoot(plane: &FloatPlane, lo: f64, hi: f64) -> f64 {
    plane
        .data()
        .iter()
        .map(|&v| (v - hi).max(0.0) + (lo - v).max(0.0))
        .sum::<f64>()
        / plane.data().len() as f64
}

fn score(plane: &FloatPlane, lo: f64, hi: f64, ring_penalty: f64) -> f64 {
    (1.0 + variance_of_laplacian(plane)).ln() - ring_penalty * overshoot(plane, lo, hi)
}

/// Runs the candidate grid on the luminance plane and returns the winner
/// (identity when no candidate beats the input's own score).
pub fn select_psf(gray: &FloatPlane, config: &DefilterConfig) -> Result<(PsfChoice, f64)> {
    let lo = gray.data().iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = gray.data().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut best = (PsfChoice::Identity, score(gray, lo, hi, config.deblur_ring_penalty));

    let mut candidates = Vec::new();
    for &length in &CANDIDATE_LENGTHS {
        for &angle in &CANDIDATE_ANGLES {
            candidates.push(PsfChoice::Motion { length, angle });
        }
    }
    for &radius in &CANDIDATE_RADII {
        candidates.push(PsfChoice::Defocus { radius });
    }

    for cand in candidates {
        let kernel = cand.kernel()?;
        let restored = wiener_deconvolve(gray, &kernel, config.wiener_nsr);
        let s = score(&restored, lo, hi, config.deblur_ring_penalty);
        if s > best.1 {
            best = (cand, s);
        }
    }
    Ok(best)
}

/// Grid-searched Wiener deblurring.
pub fn deblur(image: &Image, config: &DefilterConfig) -> Result<Image> {
    if image.width() < 32 || image.height() < 32 {
        return Err(Error::domain("deblur needs at least a 32x32 image"));
    }
    let gray = to_grayscale(image);
    let (choice, _) = select_psf(&gray, config)?;
    match choice {
        PsfChoice::Identity => Ok(image.clone()),
        _ => {
            let kernel = choice.kernel()?;
            let planes: Vec<FloatPlane> = image
                .planes()
                .iter()
                .map(|p| wiener_deconvolve(p, &kernel, config.wiener_nsr))
                .collect();
            Image::from_planes(&planes)
        }
    }
}
