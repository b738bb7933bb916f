//! Multiclass softmax boosting with three tree-construction variants.
//!
//! All variants share the same loop: per round, per class, fit a regression
//! tree to the first/second-order statistics of the softmax cross-entropy
//! and apply it with shrinkage. They differ in how trees are grown:
//!
//! - `LevelWiseExact`: exact greedy splits on sorted feature values,
//!   level-wise growth, Newton leaves `-G/(H+lambda)`.
//! - `LeafWiseHistogram`: 32-bin feature histograms, best-first leaf-wise
//!   growth, Newton leaves.
//! - `ResidualFit`: exact greedy splits fit to the negative gradient with
//!   unit Hessians, so leaves are plain residual means.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gbdt::model::GbdtModel;
use crate::gbdt::tree::{Tree, TreeNode};

/// Minimum gain for a split to be accepted.
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    LevelWiseExact,
    LeafWiseHistogram,
    ResidualFit,
}

impl Variant {
    pub const ALL: [Variant; 3] = [
        Variant::LevelWiseExact,
        Variant::LeafWiseHistogram,
        Variant::ResidualFit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::LevelWiseExact => "level_wise_exact",
            Variant::LeafWiseHistogram => "leaf_wise_histogram",
            Variant::ResidualFit => "residual_fit",
        }
    }
}

/// Hyperparameters; `for_variant` gives each variant its defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub variant: Variant,
    pub num_classes: usize,
    pub rounds: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub max_leaves: usize,
    pub min_samples_leaf: usize,
    pub lambda: f64,
    pub histogram_bins: usize,
    /// Reserved for stochastic extensions (none of the shipped variants
    /// subsample), kept so the training interface is stable.
    pub seed: u64,
}

impl TrainConfig {
    pub fn for_variant(variant: Variant) -> Self {
        let base = TrainConfig {
            variant,
            num_classes: 6,
            rounds: 100,
            learning_rate: 0.1,
            max_depth: 4,
            max_leaves: 15,
            min_samples_leaf: 1,
            lambda: 1.0,
            histogram_bins: 32,
            seed: 0,
        };
        match variant {
            Variant::LevelWiseExact => base,
            Variant::LeafWiseHistogram => TrainConfig { min_samples_leaf: 5, ..base },
            Variant::ResidualFit => TrainConfig { max_depth: 3, lambda: 0.0, ..base },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_classes < 2 {
            return Err(Error::config("num_classes must be at least 2"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return Err(Error::config("learning_rate must lie in (0,1]"));
        }
        if self.max_depth == 0 {
            return Err(Error::config("max_depth must be at least 1"));
        }
        if self.max_leaves < 2 {
            return Err(Error::config("max_leaves must be at least 2"));
        }
        if self.min_samples_leaf == 0 {
            return Err(Error::config("min_samples_leaf must be at least 1"));
        }
        if self.lambda < 0.0 {
            return Err(Error::config("lambda must be non-negative"));
        }
        if self.histogram_bins < 2 {
            return Err(Error::config("histogram_bins must be at least 2"));
        }
        Ok(())
    }
}

/// Trained model plus the training-loss trace.
///
/// `round_losses[0]` is the loss of the prior-only model; entry `r+1` is the
/// loss after round `r`.
#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub model: GbdtModel,
    pub round_losses: Vec<f64>,
}

/// Column-major training matrix with per-feature sort orders.
struct TrainData {
    columns: Vec<Vec<f64>>,
    sorted: Vec<Vec<u32>>,
    n_samples: usize,
    n_features: usize,
}

impl TrainData {
    fn build<S: AsRef<[f64]>>(rows: &[S]) -> Result<Self> {
        let n_samples = rows.len();
        let n_features = rows[0].as_ref().len();
        if n_features == 0 {
            return Err(Error::domain("feature dimension must be at least 1"));
        }
        let mut columns = vec![Vec::with_capacity(n_samples); n_features];
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_features {
                return Err(Error::dimension(format!(
                    "row {i} has {} features, expected {n_features}",
                    row.len()
                )));
            }
            for (f, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::domain(format!("non-finite feature at row {i}, column {f}")));
                }
                columns[f].push(v);
            }
        }
        let sorted = columns
            .iter()
            .map(|col| {
                let mut idx: Vec<u32> = (0..n_samples as u32).collect();
                idx.sort_by(|&a, &b| {
                    col[a as usize]
                        .partial_cmp(&col[b as usize])
                        .expect("finite values")
                        .then(a.cmp(&b))
                });
                idx
            })
            .collect();
        Ok(TrainData { columns, sorted, n_samples, n_features })
    }
}

/// Trains one model; see [`TrainOutput`] for the loss trace.
pub fn train_gbdt<S: AsRef<[f64]> + Sync>(
    rows: &[S],
    labels: &[u8],
    config: &TrainConfig,
) -> Result<TrainOutput> {
    config.validate()?;
    if rows.is_empty() {
        return Err(Error::domain("empty training set"));
    }
    if rows.len() != labels.len() {
        return Err(Error::dimension("row and label counts differ"));
    }
    let k = config.num_classes;
    if let Some(&bad) = labels.iter().find(|&&l| l as usize >= k) {
        return Err(Error::domain(format!("label {bad} outside 0..{k}")));
    }
    let distinct = {
        let mut seen = vec![false; k];
        labels.iter().for_each(|&l| seen[l as usize] = true);
        seen.iter().filter(|&&s| s).count()
    };
    if distinct < 2 {
        return Err(Error::domain("need >= 2 classes in the training labels"));
    }

    let data = TrainData::build(rows)?;
    let n = data.n_samples;

    // Laplace-smoothed prior log-probabilities keep absent classes finite.
    let mut counts = vec![0usize; k];
    labels.iter().for_each(|&l| counts[l as usize] += 1);
    let base_score: Vec<f64> = counts
        .iter()
        .map(|&c| (((c + 1) as f64) / ((n + k) as f64)).ln())
        .collect();

    let mut scores = vec![0.0f64; n * k];
    for i in 0..n {
        scores[i * k..(i + 1) * k].copy_from_slice(&base_score);
    }

    let mut rounds: Vec<Vec<Tree>> = Vec::with_capacity(config.rounds);
    let mut round_losses = Vec::with_capacity(config.rounds + 1);
    round_losses.push(softmax_loss(&scores, labels, k));

    let hist_bins = if config.variant == Variant::LeafWiseHistogram {
        Some(BinnedColumns::build(&data, config.histogram_bins))
    } else {
        None
    };

    let mut probs = vec![0.0f64; n * k];
    for _round in 0..config.rounds {
        softmax_rows(&scores, k, &mut probs);
        let class_trees: Vec<Tree> = (0..k)
            .into_par_iter()
            .map(|class| {
                let mut grad = Vec::with_capacity(n);
                let mut hess = Vec::with_capacity(n);
                for i in 0..n {
                    let p = probs[i * k + class];
                    let y = if labels[i] as usize == class { 1.0 } else { 0.0 };
                    grad.push(p - y);
                    match config.variant {
                        Variant::ResidualFit => hess.push(1.0),
                        _ => hess.push((p * (1.0 - p)).max(1e-16)),
                    }
                }
                match config.variant {
                    Variant::LeafWiseHistogram => build_histogram_tree(
                        &data,
                        hist_bins.as_ref().expect("bins built for histogram variant"),
                        &grad,
                        &hess,
                        config,
                    ),
                    _ => build_exact_tree(&data, &grad, &hess, config),
                }
            })
            .collect();
        for (class, tree) in class_trees.iter().enumerate() {
            for i in 0..n {
                let row = rows[i].as_ref();
                scores[i * k + class] += config.learning_rate * tree.predict(row);
            }
        }
        rounds.push(class_trees);
        round_losses.push(softmax_loss(&scores, labels, k));
    }

    let model = GbdtModel::new(
        config.variant,
        k,
        data.n_features,
        config.learning_rate,
        base_score,
        rounds,
    )?;
    Ok(TrainOutput { model, round_losses })
}

/// Mean softmax cross-entropy over the training set.
pub fn softmax_loss(scores: &[f64], labels: &[u8], k: usize) -> f64 {
    let n = labels.len();
    let mut loss = 0.0;
    for i in 0..n {
        let row = &scores[i * k..(i + 1) * k];
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let log_sum = row.iter().map(|&s| (s - max).exp()).sum::<f64>().ln() + max;
        loss += log_sum - row[labels[i] as usize];
    }
    loss / n as f64
}

fn softmax_rows(scores: &[f64], k: usize, out: &mut [f64]) {
    for (row, out_row) in scores.chunks_exact(k).zip(out.chunks_exact_mut(k)) {
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for (o, &s) in out_row.iter_mut().zip(row) {
            *o = (s - max).exp();
            sum += *o;
        }
        for o in out_row.iter_mut() {
            *o /= sum;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Split {
    gain: f64,
    feature: usize,
    threshold: f64,
}

impl Split {
    /// Deterministic total order: higher gain, then lower feature index,
    /// then lower threshold.
    fn better_than(&self, other: &Option<Split>) -> bool {
        match other {
            None => true,
            Some(o) => {
                self.gain > o.gain
                    || (self.gain == o.gain
                        && (self.feature < o.feature
                            || (self.feature == o.feature && self.threshold < o.threshold)))
            }
        }
    }
}

fn newton_gain(gl: f64, hl: f64, gr: f64, hr: f64, lambda: f64) -> f64 {
    0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda)
        - (gl + gr) * (gl + gr) / (hl + hr + lambda))
}

fn leaf_weight(g: f64, h: f64, lambda: f64) -> f64 {
    -g / (h + lambda)
}

/// Exact greedy level-wise builder (serves both `LevelWiseExact` and, with
/// unit Hessians and lambda 0, `ResidualFit`).
fn build_exact_tree(data: &TrainData, grad: &[f64], hess: &[f64], config: &TrainConfig) -> Tree {
    struct ActiveNode {
        arena_idx: usize,
        g_sum: f64,
        h_sum: f64,
        count: usize,
    }

    let n = data.n_samples;
    let lambda = config.lambda;
    let min_leaf = config.min_samples_leaf;

    let (g0, h0) = (grad.iter().sum::<f64>(), hess.iter().sum::<f64>());
    let mut arena = vec![TreeNode::Leaf { weight: leaf_weight(g0, h0, lambda) }];
    // slot_of_sample[i]: index into `active` or -1 once retired.
    let mut slot_of_sample: Vec<i32> = vec![0; n];
    let mut active = vec![ActiveNode { arena_idx: 0, g_sum: g0, h_sum: h0, count: n }];

    for _depth in 0..config.max_depth {
        if active.is_empty() {
            break;
        }
        let mut best: Vec<Option<Split>> = vec![None; active.len()];

        struct Scan {
            g_left: f64,
            h_left: f64,
            count_left: usize,
            last_value: f64,
            seen: bool,
        }
        for f in 0..data.n_features {
            let col = &data.columns[f];
            let mut scans: Vec<Scan> = active
                .iter()
                .map(|_| Scan { g_left: 0.0, h_left: 0.0, count_left: 0, last_value: 0.0, seen: false })
                .collect();
            for &s in &data.sorted[f] {
                let s = s as usize;
                let slot = slot_of_sample[s];
                if slot < 0 {
                    continue;
                }
                let slot = slot as usize;
                let node = &active[slot];
                let scan = &mut scans[slot];
                let v = col[s];
                if scan.seen && v > scan.last_value {
                    let count_right = node.count - scan.count_left;
                    if scan.count_left >= min_leaf && count_right >= min_leaf {
                        let mut threshold = 0.5 * (scan.last_value + v);
                        if threshold >= v {
                            threshold = scan.last_value;
                        }
                        let gain = newton_gain(
                            scan.g_left,
                            scan.h_left,
                            node.g_sum - scan.g_left,
                            node.h_sum - scan.h_left,
                            lambda,
                        );
                        let split = Split { gain, feature: f, threshold };
                        if gain > MIN_GAIN && split.better_than(&best[slot]) {
                            best[slot] = Some(split);
                        }
                    }
                }
                scan.g_left += grad[s];
                scan.h_left += hess[s];
                scan.count_left += 1;
                scan.last_value = v;
                scan.seen = true;
            }
        }

        // Materialize the accepted splits and reassign samples.
        let mut next_active = Vec::new();
        let mut slot_children: Vec<Option<(usize, usize)>> = vec![None; active.len()];
        for (slot, node) in active.iter().enumerate() {
            if let Some(split) = best[slot] {
                let left_arena = arena.len();
                arena.push(TreeNode::Leaf { weight: 0.0 });
                let right_arena = arena.len();
                arena.push(TreeNode::Leaf { weight: 0.0 });
                arena[node.arena_idx] = TreeNode::Internal {
                    feature: split.feature,
                    threshold: split.threshold,
                    left: left_arena,
                    right: right_arena,
                };
                let left_slot = next_active.len();
                next_active.push(ActiveNode { arena_idx: left_arena, g_sum: 0.0, h_sum: 0.0, count: 0 });
                let right_slot = next_active.len();
                next_active.push(ActiveNode { arena_idx: right_arena, g_sum: 0.0, h_sum: 0.0, count: 0 });
                slot_children[slot] = Some((left_slot, right_slot));
            }
        }
        let splits: Vec<Option<Split>> = best;
        for s in 0..n {
            let slot = slot_of_sample[s];
            if slot < 0 {
                continue;
            }
            let slot = slot as usize;
            match (splits[slot], slot_children[slot]) {
                (Some(split), Some((left_slot, right_slot))) => {
                    let goes_left = data.columns[split.feature][s] <= split.threshold;
                    let child = if goes_left { left_slot } else { right_slot };
                    let cn = &mut next_active[child];
                    cn.g_sum += grad[s];
                    cn.h_sum += hess[s];
                    cn.count += 1;
                    slot_of_sample[s] = child as i32;
                }
                _ => {
                    // Retired: node stays a leaf.
                    slot_of_sample[s] = -1;
                }
            }
        }
        for (slot, node) in active.iter().enumerate() {
            if splits[slot].is_none() {
                arena[node.arena_idx] =
                    TreeNode::Leaf { weight: leaf_weight(node.g_sum, node.h_sum, lambda) };
            }
        }
        active = next_active;
    }

    // Depth limit reached: finalize whatever is still active.
    for node in &active {
        arena[node.arena_idx] = TreeNode::Leaf { weight: leaf_weight(node.g_sum, node.h_sum, lambda) };
    }
    Tree { nodes: arena }
}

/// Per-feature quantile bin edges plus the per-sample bin assignment.
struct BinnedColumns {
    /// Ascending upper edges per feature; split thresholds come from here.
    edges: Vec<Vec<f64>>,
    /// bin index per (feature, sample).
    bins: Vec<Vec<u16>>,
}

impl BinnedColumns {
    fn build(data: &TrainData, max_bins: usize) -> Self {
        let n = data.n_samples;
        let mut edges = Vec::with_capacity(data.n_features);
        let mut bins = Vec::with_capacity(data.n_features);
        for f in 0..data.n_features {
            let col = &data.columns[f];
            let order = &data.sorted[f];
            let mut feature_edges: Vec<f64> = Vec::new();
            for b in 1..=max_bins {
                let pos = (b * n).div_ceil(max_bins) - 1;
                let v = col[order[pos] as usize];
                if feature_edges.last().is_none_or(|&last| v > last) {
                    feature_edges.push(v);
                }
            }
            let mut feature_bins = vec![0u16; n];
            for s in 0..n {
                let idx = feature_edges.partition_point(|&e| e < col[s]);
                feature_bins[s] = idx.min(feature_edges.len() - 1) as u16;
            }
            edges.push(feature_edges);
            bins.push(feature_bins);
        }
        BinnedColumns { edges, bins }
    }
}

/// Best-first leaf-wise builder over feature histograms.
fn build_histogram_tree(
    data: &TrainData,
    binned: &BinnedColumns,
    grad: &[f64],
    hess: &[f64],
    config: &TrainConfig,
) -> Tree {
    struct LeafCand {
        arena_idx: usize,
        samples: Vec<u32>,
        g_sum: f64,
        h_sum: f64,
        best: Option<(Split, u16)>,
    }

    let lambda = config.lambda;
    let min_leaf = config.min_samples_leaf;

    let find_best = |samples: &[u32], g_sum: f64, h_sum: f64| -> Option<(Split, u16)> {
        let total = samples.len();
        if total < 2 * min_leaf {
            return None;
        }
        let mut best: Option<Split> = None;
        let mut best_bin = 0u16;
        for f in 0..data.n_features {
            let edges = &binned.edges[f];
            if edges.len() < 2 {
                continue;
            }
            let nbins = edges.len();
            let mut hist_g = vec![0.0f64; nbins];
            let mut hist_h = vec![0.0f64; nbins];
            let mut hist_c = vec![0usize; nbins];
            let fbins = &binned.bins[f];
            for &s in samples {
                let b = fbins[s as usize] as usize;
                hist_g[b] += grad[s as usize];
                hist_h[b] += hess[s as usize];
                hist_c[b] += 1;
            }
            let mut gl = 0.0;
            let mut hl = 0.0;
            let mut cl = 0usize;
            for b in 0..nbins - 1 {
                gl += hist_g[b];
                hl += hist_h[b];
                cl += hist_c[b];
                let cr = total - cl;
                if cl < min_leaf || cr < min_leaf || cl == 0 || cr == 0 {
                    continue;
                }
                let gain = newton_gain(gl, hl, g_sum - gl, h_sum - hl, lambda);
                let split = Split { gain, feature: f, threshold: edges[b] };
                if gain > MIN_GAIN && split.better_than(&best) {
                    best = Some(split);
                    best_bin = b as u16;
                }
            }
        }
        best.map(|s| (s, best_bin))
    };

    let n = data.n_samples;
    let (g0, h0) = (grad.iter().sum::<f64>(), hess.iter().sum::<f64>());
    let root_samples: Vec<u32> = (0..n as u32).collect();
    let mut arena = vec![TreeNode::Leaf { weight: leaf_weight(g0, h0, lambda) }];
    let mut leaves = vec![LeafCand {
        arena_idx: 0,
        samples: root_samples.clone(),
        g_sum: g0,
        h_sum: h0,
        best: find_best(&root_samples, g0, h0),
    }];

    let mut leaf_count = 1;
    while leaf_count < config.max_leaves {
        // Best-first: highest gain, ties broken by creation order.
        let candidate = leaves
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.best.map(|(s, _)| (i, s.gain)))
            .fold(None::<(usize, f64)>, |acc, (i, gain)| match acc {
                Some((_, best_gain)) if best_gain >= gain => acc,
                _ => Some((i, gain)),
            });
        let Some((leaf_idx, _)) = candidate else { break };

        let (split, split_bin) = leaves[leaf_idx].best.expect("candidate has a split");
        let samples = std::mem::take(&mut leaves[leaf_idx].samples);
        let fbins = &binned.bins[split.feature];
        let mut left_samples = Vec::new();
        let mut right_samples = Vec::new();
        let (mut gl, mut hl) = (0.0, 0.0);
        for &s in &samples {
            if fbins[s as usize] <= split_bin {
                gl += grad[s as usize];
                hl += hess[s as usize];
                left_samples.push(s);
            } else {
                right_samples.push(s);
            }
        }
        let gr = leaves[leaf_idx].g_sum - gl;
        let hr = leaves[leaf_idx].h_sum - hl;

        let left_arena = arena.len();
        arena.push(TreeNode::Leaf { weight: leaf_weight(gl, hl, lambda) });
        let right_arena = arena.len();
        arena.push(TreeNode::Leaf { weight: leaf_weight(gr, hr, lambda) });
        arena[leaves[leaf_idx].arena_idx] = TreeNode::Internal {
            feature: split.feature,
            threshold: split.threshold,
            left: left_arena,
            right: right_arena,
        };

        let left_best = find_best(&left_samples, gl, hl);
        let right_best = find_best(&right_samples, gr, hr);
        leaves[leaf_idx] = LeafCand {
            arena_idx: left_arena,
            samples: left_samples,
            g_sum: gl,
            h_sum: hl,
            best: left_best,
        };
        leaves.push(LeafCand {
            arena_idx: right_arena,
            samples: right_samples,
            g_sum: gr,
            h_sum: hr,
            best: right_best,
        });
        leaf_count += 1;
    }

    Tree { nodes: arena }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn separable_1d(per_side: usize) -> (Vec<Vec<f64>>, Vec<u8>) {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..per_side {
            rows.push(vec![-1.0 - i as f64 / per_side as f64]);
            labels.push(0);
            rows.push(vec![1.0 + i as f64 / per_side as f64]);
            labels.push(1);
        }
        (rows, labels)
    }

    #[test]
    fn separable_fixture_reaches_perfect_accuracy_fast() {
        let (rows, labels) = separable_1d(50);
        for variant in Variant::ALL {
            let mut config = TrainConfig::for_variant(variant);
            config.rounds = 10;
            let out = train_gbdt(&rows, &labels, &config).unwrap();
            let correct = rows
                .iter()
                .zip(&labels)
                .filter(|(row, &label)| {
                    out.model.predict_label(row).unwrap() == label as usize
                })
                .count();
            assert_eq!(correct, rows.len(), "{variant:?} not perfect within 10 rounds");
        }
    }

    #[test]
    fn depth_one_oracle_agrees_on_first_split() {
        // Brute-force reasoning for the separable fixture: any threshold
        // between -1 and 1 separates perfectly, so the trees for the two
        // present classes must split there. The four absent classes see a
        // constant gradient and grow no split at all.
        let (rows, labels) = separable_1d(50);
        let mut config = TrainConfig::for_variant(Variant::LevelWiseExact);
        config.rounds = 1;
        config.max_depth = 1;
        let out = train_gbdt(&rows, &labels, &config).unwrap();
        for (class, tree) in out.model.rounds[0].iter().enumerate() {
            let thresholds = tree.thresholds();
            if class < 2 {
                assert_eq!(thresholds.len(), 1, "class {class}");
                let (f, thr) = thresholds[0];
                assert_eq!(f, 0);
                assert!(thr > -1.0 && thr < 1.0, "threshold {thr}");
            } else {
                assert!(thresholds.is_empty(), "class {class} should stay a single leaf");
            }
        }
    }

    #[test]
    fn identical_rows_converge_to_prior() {
        // No split gain exists, so boosting must converge to the class
        // prior; every class is represented so the softmax can reach it.
        let counts = [90usize, 60, 50, 40, 35, 25];
        let n: usize = counts.iter().sum();
        let rows: Vec<Vec<f64>> = (0..n).map(|_| vec![1.5, -2.0]).collect();
        let mut labels = Vec::new();
        for (class, &c) in counts.iter().enumerate() {
            labels.extend(std::iter::repeat_n(class as u8, c));
        }
        for variant in Variant::ALL {
            let config = TrainConfig::for_variant(variant);
            let out = train_gbdt(&rows, &labels, &config).unwrap();
            let probs = out.model.predict_proba(&[1.5, -2.0]).unwrap();
            for (class, &c) in counts.iter().enumerate() {
                let prior = c as f64 / n as f64;
                assert!(
                    (probs[class] - prior).abs() < 1e-3,
                    "{variant:?} class {class}: {} vs {prior}",
                    probs[class]
                );
            }
        }
    }

    #[test]
    fn loss_trace_non_increasing_on_separable_data() {
        let (rows, labels) = separable_1d(30);
        for variant in Variant::ALL {
            let mut config = TrainConfig::for_variant(variant);
            config.rounds = 50;
            let out = train_gbdt(&rows, &labels, &config).unwrap();
            assert_eq!(out.round_losses.len(), 51);
            for w in out.round_losses.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "{variant:?}: {} -> {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn single_class_rejected() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let labels = vec![2u8; 10];
        let config = TrainConfig::for_variant(Variant::LevelWiseExact);
        let err = train_gbdt(&rows, &labels, &config).unwrap_err();
        assert!(err.to_string().contains(">= 2 classes"), "{err}");
    }

    #[test]
    fn invalid_hyperparameters_rejected() {
        let mut config = TrainConfig::for_variant(Variant::LevelWiseExact);
        config.learning_rate = 0.0;
        assert!(matches!(config.validate(), Err(Error::Config(_))));
        config = TrainConfig::for_variant(Variant::LeafWiseHistogram);
        config.max_leaves = 1;
        assert!(matches!(config.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn histogram_thresholds_lie_on_bin_edges() {
        let mut rng = crate::rng::SplitMix64::new(17);
        let rows: Vec<Vec<f64>> = (0..200)
            .map(|_| (0..4).map(|_| rng.next_range(-3.0, 3.0)).collect())
            .collect();
        let labels: Vec<u8> = rows
            .iter()
            .map(|r| if r[0] + 0.3 * r[2] > 0.0 { 1 } else { 0 })
            .collect();
        let mut config = TrainConfig::for_variant(Variant::LeafWiseHistogram);
        config.rounds = 5;
        let out = train_gbdt(&rows, &labels, &config).unwrap();

        let data = TrainData::build(&rows).unwrap();
        let binned = BinnedColumns::build(&data, config.histogram_bins);
        for round in &out.model.rounds {
            for tree in round {
                for (f, thr) in tree.thresholds() {
                    assert!(
                        binned.edges[f].iter().any(|&e| e == thr),
                        "threshold {thr} for feature {f} not on a bin edge"
                    );
                }
            }
        }
    }

    #[test]
    fn histogram_respects_leaf_budget() {
        let mut rng = crate::rng::SplitMix64::new(3);
        let rows: Vec<Vec<f64>> = (0..400)
            .map(|_| (0..6).map(|_| rng.next_range(0.0, 1.0)).collect())
            .collect();
        let labels: Vec<u8> = rows.iter().map(|r| ((r[0] * 4.0) as u8).min(3)).collect();
        let mut config = TrainConfig::for_variant(Variant::LeafWiseHistogram);
        config.rounds = 3;
        let out = train_gbdt(&rows, &labels, &config).unwrap();
        for round in &out.model.rounds {
            for tree in round {
                assert!(tree.leaf_count() <= config.max_leaves);
            }
        }
    }

    #[test]
    fn exact_respects_depth_budget() {
        let mut rng = crate::rng::SplitMix64::new(4);
        let rows: Vec<Vec<f64>> = (0..300)
            .map(|_| (0..5).map(|_| rng.next_range(0.0, 1.0)).collect())
            .collect();
        let labels: Vec<u8> = rows.iter().map(|r| ((r[1] * 3.0) as u8).min(2)).collect();
        for variant in [Variant::LevelWiseExact, Variant::ResidualFit] {
            let mut config = TrainConfig::for_variant(variant);
            config.rounds = 3;
            let out = train_gbdt(&rows, &labels, &config).unwrap();
            for round in &out.model.rounds {
                for tree in round {
                    assert!(tree.depth() <= config.max_depth);
                }
            }
        }
    }
}
