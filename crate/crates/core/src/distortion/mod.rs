//! Seeded synthesis of the ten distortion types (D1-D10), their six-way
//! class grouping, and labeled dataset construction.

mod dataset;
mod dct;
mod kinds;
mod region;
mod synth;

pub use dataset::{build_dataset, LabeledDataset, ManifestEntry, RowProvenance};
pub use dct::{block_dct_quantize, quant_table};
pub use kinds::{class_of, DistortionClass, DistortionKind};
pub use region::RegionSpec;
pub use synth::{
    apply_distortion, apply_haze_with, vertical_ramp_transmission, DistortionSpec,
    BACKLIGHT_GAIN, COMPRESSION_QUALITY, CONTRAST_ALPHA, DEFOCUS_RADIUS, HAZE_AIRLIGHT, HAZE_BETA,
    MOTION_LENGTH, NOISE_SIGMA, RAIN_PER_MEGAPIXEL,
};
