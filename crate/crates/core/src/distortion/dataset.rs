//! Labeled feature dataset construction from clean images.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distortion::kinds::{class_of, DistortionClass, DistortionKind};
use crate::distortion::region::RegionSpec;
use crate::distortion::synth::{apply_distortion, DistortionSpec};
use crate::error::{Error, Result};
use crate::features::{extract_features, FeatureVector};
use crate::image::Image;
use crate::rng::SplitMix64;

/// Stream tag for the final row shuffle, kept distinct from row indices.
const SHUFFLE_STREAM: u64 = u64::MAX;

/// Where one dataset row came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowProvenance {
    pub source_index: usize,
    pub spec: DistortionSpec,
}

/// Feature matrix X, labels y, and per-row provenance.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub features: Vec<FeatureVector>,
    pub labels: Vec<u8>,
    pub provenance: Vec<RowProvenance>,
}

impl LabeledDataset {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

/// Draws `per_class` (image, kind, severity) combinations for each of the
/// six classes, applies the distortions, and extracts features.
///
/// Per-row RNG streams are derived from `(seed, row_index)`, so the result
/// is identical for any worker count; rows are then shuffled by a dedicated
/// stream of the same seed.
pub fn build_dataset(clean_images: &[Image], per_class: usize, seed: u64) -> Result<LabeledDataset> {
    if clean_images.is_empty() {
        return Err(Error::domain("need at least one clean image"));
    }
    if per_class == 0 {
        return Err(Error::domain("per_class must be at least 1"));
    }

    let mut draws = Vec::with_capacity(DistortionClass::COUNT * per_class);
    for (class_idx, class) in DistortionClass::ALL.iter().enumerate() {
        for j in 0..per_class {
            let row_index = (class_idx * per_class + j) as u64;
            let mut rng = SplitMix64::derive(seed, row_index);
            let source_index = rng.next_below(clean_images.len() as u64) as usize;
            let kinds = class.kinds();
            let kind = kinds[rng.next_below(kinds.len() as u64) as usize];
            let severity = 1 + rng.next_below(5) as u8;
            let region = kind.is_local().then(|| RegionSpec::random(&mut rng));
            let spec = DistortionSpec::new(kind, severity, rng.next_u64(), region)?;
            draws.push((class.id(), RowProvenance { source_index, spec }));
        }
    }

    let rows: Result<Vec<(FeatureVector, u8, RowProvenance)>> = draws
        .par_iter()
        .map(|(label, prov)| {
            let distorted = apply_distortion(&clean_images[prov.source_index], &prov.spec)?;
            let features = extract_features(&distorted)?;
            Ok((features, *label, prov.clone()))
        })
        .collect();
    let rows = rows?;

    let mut order: Vec<usize> = (0..rows.len()).collect();
    SplitMix64::derive(seed, SHUFFLE_STREAM).shuffle(&mut order);
    let mut slots: Vec<Option<(FeatureVector, u8, RowProvenance)>> =
        rows.into_iter().map(Some).collect();
    let mut features = Vec::with_capacity(slots.len());
    let mut labels = Vec::with_capacity(slots.len());
    let mut provenance = Vec::with_capacity(slots.len());
    for &i in &order {
        let (f, l, p) = slots[i].take().expect("permutation visits each index once");
        features.push(f);
        labels.push(l);
        provenance.push(p);
    }
    Ok(LabeledDataset { features, labels, provenance })
}

/// One dataset-manifest line: what was synthesized and where it went.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub source: String,
    pub kind: DistortionKind,
    pub severity: u8,
    pub seed: u64,
    pub class: DistortionClass,
    pub output_path: String,
}

impl ManifestEntry {
    pub fn new(source: String, spec: &DistortionSpec, output_path: String) -> Self {
        ManifestEntry {
            source,
            kind: spec.kind,
            severity: spec.severity,
            seed: spec.seed,
            class: class_of(spec.kind),
            output_path,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clean_images(n: usize) -> Vec<Image> {
        (0..n)
            .map(|k| {
                let data: Vec<u8> = (0..32 * 32)
                    .map(|i| ((i * (k + 3) + i / 32 * 11) % 256) as u8)
                    .collect();
                Image::new(32, 32, 1, data).unwrap()
            })
            .collect()
    }

    #[test]
    fn six_rows_cover_all_classes() {
        let imgs = clean_images(1);
        let ds = build_dataset(&imgs, 1, 99).unwrap();
        assert_eq!(ds.len(), 6);
        let mut seen: Vec<u8> = ds.labels.clone();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn row_counts_per_label() {
        let imgs = clean_images(4);
        let ds = build_dataset(&imgs, 5, 3).unwrap();
        assert_eq!(ds.len(), 30);
        for class in 0..6u8 {
            assert_eq!(ds.labels.iter().filter(|&&l| l == class).count(), 5);
        }
    }

    #[test]
    fn deterministic_across_calls() {
        let imgs = clean_images(3);
        let a = build_dataset(&imgs, 4, 1234).unwrap();
        let b = build_dataset(&imgs, 4, 1234).unwrap();
        assert_eq!(a.features, b.features);
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.provenance, b.provenance);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(build_dataset(&[], 1, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn provenance_class_matches_label() {
        let imgs = clean_images(2);
        let ds = build_dataset(&imgs, 3, 8).unwrap();
        for (label, prov) in ds.labels.iter().zip(&ds.provenance) {
            assert_eq!(*label, class_of(prov.spec.kind).id());
        }
    }
}
