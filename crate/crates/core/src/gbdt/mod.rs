//! From-scratch multiclass gradient-boosted decision trees, three
//! configuration variants deep, combined by mode voting.

mod ensemble;
mod model;
mod train;
mod tree;

pub use ensemble::{
    load_ensemble, predict_mode, resolve_mode_vote, save_ensemble, train_ensemble,
    ClassPrediction, GbdtEnsemble,
};
pub use model::{load_model, save_model, GbdtModel, MODEL_FORMAT_VERSION};
pub use train::{softmax_loss, train_gbdt, TrainConfig, TrainOutput, Variant};
pub use tree::{Tree, TreeNode};
