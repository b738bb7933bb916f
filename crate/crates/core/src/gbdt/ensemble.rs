//! The three-model ensemble and its mode-voting rule.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distortion::DistortionClass;
use crate::error::{Error, Result};
use crate::gbdt::model::{argmax, check_version, GbdtModel, MODEL_FORMAT_VERSION};
use crate::gbdt::train::{train_gbdt, TrainConfig, TrainOutput, Variant};

/// Exactly three models, one per training variant, sharing class and
/// feature dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbdtEnsemble {
    models: [GbdtModel; 3],
}

impl GbdtEnsemble {
    pub fn new(models: [GbdtModel; 3]) -> Result<Self> {
        let (k, d) = (models[0].num_classes, models[0].feature_dim);
        if k != DistortionClass::COUNT {
            return Err(Error::config(format!(
                "ensemble is {}-class; got {k}",
                DistortionClass::COUNT
            )));
        }
        if models.iter().any(|m| m.num_classes != k || m.feature_dim != d) {
            return Err(Error::dimension("ensemble models disagree on dimensions"));
        }
        Ok(GbdtEnsemble { models })
    }

    pub fn models(&self) -> &[GbdtModel; 3] {
        &self.models
    }

    pub fn feature_dim(&self) -> usize {
        self.models[0].feature_dim
    }
}

/// One classification with full voting detail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassPrediction {
    pub label: DistortionClass,
    pub per_model_labels: [DistortionClass; 3],
    pub per_model_probabilities: [[f64; DistortionClass::COUNT]; 3],
}

/// Majority label of the three votes. A three-way split goes to the label
/// whose model is most confident (its winning probability), with the lowest
/// class id breaking exact probability ties.
pub fn resolve_mode_vote(votes: [usize; 3], winning_probs: [f64; 3]) -> usize {
    for &v in &votes {
        if votes.iter().filter(|&&other| other == v).count() >= 2 {
            return v;
        }
    }
    // Three distinct labels: most confident model wins, exact probability
    // ties resolve to the lowest class id.
    let mut best = 0;
    for i in 1..3 {
        let better_prob = winning_probs[i] > winning_probs[best];
        let tie_lower_label = winning_probs[i] == winning_probs[best] && votes[i] < votes[best];
        if better_prob || tie_lower_label {
            best = i;
        }
    }
    votes[best]
}

/// Runs all three models and resolves the mode vote.
pub fn predict_mode(ensemble: &GbdtEnsemble, x: &[f64]) -> Result<ClassPrediction> {
    let mut per_model_labels = [DistortionClass::Compression; 3];
    let mut per_model_probabilities = [[0.0; DistortionClass::COUNT]; 3];
    let mut votes = [0usize; 3];
    let mut winning = [0.0f64; 3];
    for (m, model) in ensemble.models.iter().enumerate() {
        let probs = model.predict_proba(x)?;
        let vote = argmax(&probs);
        votes[m] = vote;
        winning[m] = probs[vote];
        per_model_labels[m] = DistortionClass::from_id(vote as u8)?;
        per_model_probabilities[m].copy_from_slice(&probs);
    }
    let label = DistortionClass::from_id(resolve_mode_vote(votes, winning) as u8)?;
    Ok(ClassPrediction { label, per_model_labels, per_model_probabilities })
}

/// Trains the three variants on the same data (in parallel) and wires them
/// into an ensemble. Returns the per-variant loss traces alongside.
pub fn train_ensemble<S: AsRef<[f64]> + Sync>(
    rows: &[S],
    labels: &[u8],
    seed: u64,
) -> Result<(GbdtEnsemble, Vec<TrainOutput>)> {
    let outputs: Result<Vec<TrainOutput>> = Variant::ALL
        .par_iter()
        .map(|&variant| {
            let mut config = TrainConfig::for_variant(variant);
            config.seed = seed;
            train_gbdt(rows, labels, &config)
        })
        .collect();
    let outputs = outputs?;
    let models: Vec<GbdtModel> = outputs.iter().map(|o| o.model.clone()).collect();
    let ensemble = GbdtEnsemble::new(models.try_into().expect("three variants"))?;
    Ok((ensemble, outputs))
}

#[derive(Serialize, Deserialize)]
struct EnsembleFile {
    version: u32,
    models: Vec<GbdtModel>,
}

/// Versioned single-line JSON, bit-identical for identical ensembles.
pub fn save_ensemble(ensemble: &GbdtEnsemble, path: impl AsRef<Path>) -> Result<()> {
    let file = EnsembleFile {
        version: MODEL_FORMAT_VERSION,
        models: ensemble.models.to_vec(),
    };
    let json = serde_json::to_string(&file).map_err(|e| Error::format(e.to_string()))?;
    std::fs::write(path, json + "\n")?;
    Ok(())
}

pub fn load_ensemble(path: impl AsRef<Path>) -> Result<GbdtEnsemble> {
    let bytes = std::fs::read(path)?;
    let value: serde_json::Value =
        serde_json::from_slice(&bytes).map_err(|e| Error::format(format!("ensemble file: {e}")))?;
    check_version(&value)?;
    let file: EnsembleFile =
        serde_json::from_value(value).map_err(|e| Error::format(format!("ensemble file: {e}")))?;
    let models: [GbdtModel; 3] = file
        .models
        .try_into()
        .map_err(|v: Vec<GbdtModel>| Error::format(format!("expected 3 models, found {}", v.len())))?;
    GbdtEnsemble::new(models)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majority_vote_wins() {
        assert_eq!(resolve_mode_vote([2, 2, 4], [0.9, 0.8, 0.99]), 2);
        assert_eq!(resolve_mode_vote([4, 2, 2], [0.99, 0.5, 0.5]), 2);
        assert_eq!(resolve_mode_vote([3, 3, 3], [0.5, 0.5, 0.5]), 3);
    }

    #[test]
    fn three_way_tie_goes_to_most_confident() {
        // Votes (A, B, C) with winning probabilities (0.40, 0.55, 0.41) -> B.
        assert_eq!(resolve_mode_vote([0, 1, 2], [0.40, 0.55, 0.41]), 1);
    }

    #[test]
    fn exact_probability_tie_goes_to_lowest_class_id() {
        assert_eq!(resolve_mode_vote([5, 1, 3], [0.4, 0.4, 0.4]), 1);
    }
}
