//! Regression tree substrate shared by all three boosting variants.

use serde::{Deserialize, Serialize};

/// Arena node; the root lives at index 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node")]
pub enum TreeNode {
    #[serde(rename = "split")]
    Internal {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    #[serde(rename = "leaf")]
    Leaf { weight: f64 },
}

/// Regression tree over a fixed feature dimension.
///
/// Routing rule: `x[feature] <= threshold` goes left, otherwise right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn single_leaf(weight: f64) -> Self {
        Tree { nodes: vec![TreeNode::Leaf { weight }] }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                TreeNode::Leaf { weight } => return *weight,
                TreeNode::Internal { feature, threshold, left, right } => {
                    idx = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    /// Number of leaves (used by growth-limit tests).
    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], idx: usize) -> usize {
            match &nodes[idx] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Internal { left, right, .. } => {
                    1 + walk(nodes, *left).max(walk(nodes, *right))
                }
            }
        }
        walk(&self.nodes, 0)
    }

    /// Every internal node's split thresholds, for structural assertions.
    pub fn thresholds(&self) -> Vec<(usize, f64)> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                TreeNode::Internal { feature, threshold, .. } => Some((*feature, *threshold)),
                TreeNode::Leaf { .. } => None,
            })
            .collect()
    }
}
