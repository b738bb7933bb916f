//! Trained boosted-tree models: scoring, softmax probabilities, and the
//! versioned JSON file format.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gbdt::train::Variant;
use crate::gbdt::tree::Tree;

/// File format version written by [`save_model`] / [`save_ensemble`].
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// One trained booster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbdtModel {
    pub variant: Variant,
    pub num_classes: usize,
    pub feature_dim: usize,
    pub learning_rate: f64,
    /// Per-class prior log-probabilities added to every raw score.
    pub base_score: Vec<f64>,
    /// `rounds[r][class]` is the class-th tree of boosting round r.
    pub rounds: Vec<Vec<Tree>>,
}

impl GbdtModel {
    pub fn new(
        variant: Variant,
        num_classes: usize,
        feature_dim: usize,
        learning_rate: f64,
        base_score: Vec<f64>,
        rounds: Vec<Vec<Tree>>,
    ) -> Result<Self> {
        if base_score.len() != num_classes {
            return Err(Error::dimension("base_score length != num_classes"));
        }
        if !(learning_rate > 0.0 && learning_rate <= 1.0) {
            return Err(Error::config("learning_rate must lie in (0,1]"));
        }
        if let Some(bad) = rounds.iter().position(|r| r.len() != num_classes) {
            return Err(Error::dimension(format!(
                "round {bad} has {} trees, expected {num_classes}",
                rounds[bad].len()
            )));
        }
        Ok(GbdtModel { variant, num_classes, feature_dim, learning_rate, base_score, rounds })
    }

    /// Model with no boosting rounds: softmax of the priors.
    pub fn prior_only(num_classes: usize, feature_dim: usize, base_score: Vec<f64>) -> Result<Self> {
        GbdtModel::new(Variant::LevelWiseExact, num_classes, feature_dim, 0.1, base_score, vec![])
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.feature_dim {
            return Err(Error::dimension(format!(
                "input has {} features, model expects {}",
                x.len(),
                self.feature_dim
            )));
        }
        Ok(())
    }

    /// Pre-softmax scores: base plus shrunken tree outputs, summed in round
    /// order then class order.
    pub fn raw_scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let mut scores = self.base_score.clone();
        for round in &self.rounds {
            for (class, tree) in round.iter().enumerate() {
                scores[class] += self.learning_rate * tree.predict(x);
            }
        }
        Ok(scores)
    }

    /// Softmax class probabilities; always sums to 1.
    pub fn predict_proba(&self, x: &[f64]) -> Result<Vec<f64>> {
        let scores = self.raw_scores(x)?;
        Ok(softmax(&scores))
    }

    /// Argmax class; ties resolve to the lowest class id.
    pub fn predict_label(&self, x: &[f64]) -> Result<usize> {
        let scores = self.raw_scores(x)?;
        Ok(argmax(&scores))
    }
}

pub(crate) fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|&s| (s - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|&e| e / sum).collect()
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    version: u32,
    model: GbdtModel,
}

/// Writes the model as versioned JSON (single line plus trailing newline, so
/// identical models produce identical bytes).
pub fn save_model(model: &GbdtModel, path: impl AsRef<Path>) -> Result<()> {
    let file = ModelFile { version: MODEL_FORMAT_VERSION, model: model.clone() };
    let json = serde_json::to_string(&file).map_err(|e| Error::format(e.to_string()))?;
    std::fs::write(path, json + "\n")?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<GbdtModel> {
    let bytes = std::fs::read(path)?;
    let value: serde_json::Value =
        serde_json::from_slice(&bytes).map_err(|e| Error::format(format!("model file: {e}")))?;
    check_version(&value)?;
    let file: ModelFile =
        serde_json::from_value(value).map_err(|e| Error::format(format!("model file: {e}")))?;
    Ok(file.model)
}

pub(crate) fn check_version(value: &serde_json::Value) -> Result<()> {
    let version = value
        .get("version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::format("model file: missing version tag"))?;
    if version != MODEL_FORMAT_VERSION as u64 {
        return Err(Error::Version(version as u32));
    }
    Ok(())
}
