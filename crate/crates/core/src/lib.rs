//! Distortion triage pipeline: classify what is wrong with an image, then
//! route it to a matching classical restoration filter.
//!
//! The crate is organized around the stages of that pipeline:
//!
//! - [`image`] — pixel buffers, PNM/PNG I/O, convolution, guided filter.
//! - [`features`] — GLCM texture properties and LBP histograms packed into
//!   a fixed 58-value descriptor.
//! - [`distortion`] — seeded synthesizers for ten distortion types and the
//!   labeled-dataset builder.
//! - [`gbdt`] — from-scratch multiclass gradient-boosted trees in three
//!   variants, combined by mode voting.
//! - [`defilters`] — classical restoration (non-local means, Wiener
//!   deconvolution, dark channel dehazing, CLAHE, deraining, deblocking).
//! - [`pipeline`] — batch orchestration with per-image provenance records.
//! - [`eval`] — PSNR/SSIM, classification reports, and COCO-style mAP.

pub mod error;
pub mod rng;

pub mod defilters;
pub mod distortion;
pub mod features;
pub mod gbdt;
pub mod image;
pub mod scene;

pub use error::{Error, Result};
