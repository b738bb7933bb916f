//! The ten synthesizable distortion kinds and their six-way class grouping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed 10-member enumeration of synthesizable distortions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistortionKind {
    #[serde(rename = "D1")]
    Compression,
    #[serde(rename = "D2")]
    Noise,
    #[serde(rename = "D3")]
    Contrast,
    #[serde(rename = "D4")]
    Rain,
    #[serde(rename = "D5")]
    Haze,
    #[serde(rename = "D6")]
    MotionBlur,
    #[serde(rename = "D7")]
    DefocusBlur,
    #[serde(rename = "D8")]
    LocalBacklight,
    #[serde(rename = "D9")]
    LocalMotionBlur,
    #[serde(rename = "D10")]
    LocalDefocusBlur,
}

impl DistortionKind {
    pub const ALL: [DistortionKind; 10] = [
        DistortionKind::Compression,
        DistortionKind::Noise,
        DistortionKind::Contrast,
        DistortionKind::Rain,
        DistortionKind::Haze,
        DistortionKind::MotionBlur,
        DistortionKind::DefocusBlur,
        DistortionKind::LocalBacklight,
        DistortionKind::LocalMotionBlur,
        DistortionKind::LocalDefocusBlur,
    ];

    /// True for the kinds that act inside a region mask.
    pub fn is_local(self) -> bool {
        matches!(
            self,
            DistortionKind::LocalBacklight
                | DistortionKind::LocalMotionBlur
                | DistortionKind::LocalDefocusBlur
        )
    }

    /// Short `D1`..`D10` tag, matching the CLI flag values.
    pub fn tag(self) -> &'static str {
        match self {
            DistortionKind::Compression => "D1",
            DistortionKind::Noise => "D2",
            DistortionKind::Contrast => "D3",
            DistortionKind::Rain => "D4",
            DistortionKind::Haze => "D5",
            DistortionKind::MotionBlur => "D6",
            DistortionKind::DefocusBlur => "D7",
            DistortionKind::LocalBacklight => "D8",
            DistortionKind::LocalMotionBlur => "D9",
            DistortionKind::LocalDefocusBlur => "D10",
        }
    }

    pub fn parse_tag(tag: &str) -> Result<Self> {
        DistortionKind::ALL
            .iter()
            .copied()
            .find(|k| k.tag().eq_ignore_ascii_case(tag))
            .ok_or_else(|| Error::config(format!("unknown distortion kind {tag:?} (expected D1..D10)")))
    }
}

/// The six training classes; integer ids 0..5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistortionClass {
    Compression,
    Noise,
    ContrastIllumination,
    Rain,
    Haze,
    Blur,
}

impl DistortionClass {
    pub const COUNT: usize = 6;

    pub const ALL: [DistortionClass; 6] = [
        DistortionClass::Compression,
        DistortionClass::Noise,
        DistortionClass::ContrastIllumination,
        DistortionClass::Rain,
        DistortionClass::Haze,
        DistortionClass::Blur,
    ];

    pub fn id(self) -> u8 {
        match self {
            DistortionClass::Compression => 0,
            DistortionClass::Noise => 1,
            DistortionClass::ContrastIllumination => 2,
            DistortionClass::Rain => 3,
            DistortionClass::Haze => 4,
            DistortionClass::Blur => 5,
        }
    }

    pub fn from_id(id: u8) -> Result<Self> {
        DistortionClass::ALL
            .get(id as usize)
            .copied()
            .ok_or_else(|| Error::domain(format!("class id {id} out of range 0..5")))
    }

    /// Kinds that train this class.
    pub fn kinds(self) -> &'static [DistortionKind] {
        match self {
            DistortionClass::Compression => &[DistortionKind::Compression],
            DistortionClass::Noise => &[DistortionKind::Noise],
            DistortionClass::ContrastIllumination => {
                &[DistortionKind::Contrast, DistortionKind::LocalBacklight]
            }
            DistortionClass::Rain => &[DistortionKind::Rain],
            DistortionClass::Haze => &[DistortionKind::Haze],
            DistortionClass::Blur => &[
                DistortionKind::MotionBlur,
                DistortionKind::DefocusBlur,
                DistortionKind::LocalMotionBlur,
                DistortionKind::LocalDefocusBlur,
            ],
        }
    }
}

/// Maps each distortion kind to its training class: motion/defocus effects
/// (global and local) collapse into Blur, contrast changes and local
/// backlight into ContrastIllumination, the rest keep their own class.
pub fn class_of(kind: DistortionKind) -> DistortionClass {
    match kind {
        DistortionKind::Compression => DistortionClass::Compression,
        DistortionKind::Noise => DistortionClass::Noise,
        DistortionKind::Contrast | DistortionKind::LocalBacklight => {
            DistortionClass::ContrastIllumination
        }
        DistortionKind::Rain => DistortionClass::Rain,
        DistortionKind::Haze => DistortionClass::Haze,
        DistortionKind::MotionBlur
        | DistortionKind::DefocusBlur
        | DistortionKind::LocalMotionBlur
        | DistortionKind::LocalDefocusBlur => DistortionClass::Blur,
    }
}
