//! Decision tree grown greedily by maximum information gain.
//!
//! Splits are `x <= threshold` with thresholds at midpoints between
//! consecutive distinct feature values; gain is parent entropy minus the
//! weighted child entropies (base-2). Growth stops at max depth, purity,
//! the min-samples-leaf floor, or when no split has positive gain. Equal
//! gains keep the lowest feature index, then the lowest threshold, because
//! candidates are scanned in that order and only a strictly better gain
//! replaces the incumbent.

use serde::{Deserialize, Serialize};

use crate::preprocess::FeatureMatrix;
use crate::tiering::TierLabel;

use super::majority_class;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_samples_leaf: usize,
}

/// Flat node arena; the root is node 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        /// Information gain realized by this split.
        gain: f64,
        n_samples: usize,
        left: usize,
        right: usize,
    },
    Leaf {
        class: TierLabel,
        n_samples: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeState {
    pub nodes: Vec<TreeNode>,
}

impl TreeState {
    /// Longest root-to-leaf edge count; a lone leaf has depth 0.
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], id: usize) -> usize {
            match &nodes[id] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => {
                    1 + walk(nodes, *left).max(walk(nodes, *right))
                }
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn n_root_samples(&self) -> usize {
        match &self.nodes[0] {
            TreeNode::Leaf { n_samples, .. } | TreeNode::Split { n_samples, .. } => *n_samples,
        }
    }
}

/// Base-2 entropy of a class-count vector.
pub fn entropy(counts: &[usize; 3]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / total as f64;
            h -= p * p.log2();
        }
    }
    h
}

fn class_counts(labels: &[TierLabel], rows: &[usize]) -> [usize; 3] {
    let mut counts = [0usize; 3];
    for &i in rows {
        counts[labels[i].index()] += 1;
    }
    counts
}

/// Provides the candidate feature indices for one split, sorted ascending.
pub(super) trait FeaturePool {
    fn candidates(&mut self, n_features: usize) -> Vec<usize>;
}

/// Plain trees consider every feature at every split.
pub(super) struct AllFeatures;

impl FeaturePool for AllFeatures {
    fn candidates(&mut self, n_features: usize) -> Vec<usize> {
        (0..n_features).collect()
    }
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
    left_rows: Vec<usize>,
    right_rows: Vec<usize>,
}

pub(super) fn grow(
    m: &FeatureMatrix,
    labels: &[TierLabel],
    rows: Vec<usize>,
    params: &TreeParams,
    pool: &mut dyn FeaturePool,
) -> TreeState {
    let mut nodes = Vec::new();
    grow_node(m, labels, rows, 0, params, pool, &mut nodes);
    TreeState { nodes }
}

fn grow_node(
    m: &FeatureMatrix,
    labels: &[TierLabel],
    rows: Vec<usize>,
    depth: usize,
    params: &TreeParams,
    pool: &mut dyn FeaturePool,
    nodes: &mut Vec<TreeNode>,
) -> usize {
    let counts = class_counts(labels, &rows);
    let n_samples = rows.len();
    let make_leaf = |nodes: &mut Vec<TreeNode>| {
        let id = nodes.len();
        nodes.push(TreeNode::Leaf {
            class: crate::tiering::TIERS[majority_class(&counts)],
            n_samples,
        });
        id
    };

    let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
    if pure || depth >= params.max_depth || n_samples < 2 * params.min_samples_leaf {
        return make_leaf(nodes);
    }
    let Some(best) = find_best_split(m, labels, &rows, counts, params, pool) else {
        return make_leaf(nodes);
    };

    let id = nodes.len();
    nodes.push(TreeNode::Split {
        feature: best.feature,
        threshold: best.threshold,
        gain: best.gain,
        n_samples,
        left: usize::MAX,
        right: usize::MAX,
    });
    let left = grow_node(m, labels, best.left_rows, depth + 1, params, pool, nodes);
    let right = grow_node(m, labels, best.right_rows, depth + 1, params, pool, nodes);
    if let TreeNode::Split {
        left: l, right: r, ..
    } = &mut nodes[id]
    {
        *l = left;
        *r = right;
    }
    id
}

fn find_best_split(
    m: &FeatureMatrix,
    labels: &[TierLabel],
    rows: &[usize],
    parent_counts: [usize; 3],
    params: &TreeParams,
    pool: &mut dyn FeaturePool,
) -> Option<BestSplit> {
    let n = rows.len();
    let parent_entropy = entropy(&parent_counts);
    let mut best: Option<(usize, f64, f64)> = None; // (feature, threshold, gain)

    for feature in pool.candidates(m.n_cols()) {
        let mut order: Vec<usize> = rows.to_vec();
        order.sort_by(|&a, &b| m.get(a, feature).total_cmp(&m.get(b, feature)).then(a.cmp(&b)));

        let mut left_counts = [0usize; 3];
        for (i, &row) in order.iter().enumerate().take(n - 1) {
            left_counts[labels[row].index()] += 1;
            let here = m.get(row, feature);
            let next = m.get(order[i + 1], feature);
            if here == next {
                continue;
            }
            let n_left = i + 1;
            let n_right = n - n_left;
            if n_left < params.min_samples_leaf || n_right < params.min_samples_leaf {
                continue;
            }
            let mut right_counts = [0usize; 3];
            for c in 0..3 {
                right_counts[c] = parent_counts[c] - left_counts[c];
            }
            let weighted = (n_left as f64 * entropy(&left_counts)
                + n_right as f64 * entropy(&right_counts))
                / n as f64;
            let gain = parent_entropy - weighted;
            let threshold = (here + next) / 2.0;
            if gain > 0.0 && best.map_or(true, |(_, _, g)| gain > g) {
                best = Some((feature, threshold, gain));
            }
        }
    }

    best.map(|(feature, threshold, gain)| {
        let mut left_rows = Vec::new();
        let mut right_rows = Vec::new();
        for &row in rows {
            if m.get(row, feature) <= threshold {
                left_rows.push(row);
            } else {
                right_rows.push(row);
            }
        }
        BestSplit {
            feature,
            threshold,
            gain,
            left_rows,
            right_rows,
        }
    })
}

pub(super) fn fit(params: &TreeParams, m: &FeatureMatrix, labels: &[TierLabel]) -> TreeState {
    grow(m, labels, (0..m.n_rows()).collect(), params, &mut AllFeatures)
}

pub(super) fn predict_row(state: &TreeState, row: &[f64]) -> usize {
    let mut id = 0;
    loop {
        match &state.nodes[id] {
            TreeNode::Leaf { class, .. } => return class.index(),
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
                ..
            } => {
                id = if row[*feature] <= *threshold {
                    *left
                } else {
                    *right
                };
            }
        }
    }
}
