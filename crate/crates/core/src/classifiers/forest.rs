//! Random forest: bagged information-gain trees with per-split feature
//! subsampling and majority voting.
//!
//! Tree seeds derive from the master seed and the tree index, so training
//! order can never change the ensemble.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::preprocess::FeatureMatrix;
use crate::seeding::{stream_rng, tags};
use crate::tiering::TierLabel;

use super::majority_class;
use super::tree::{self, AllFeatures, FeaturePool, TreeNode, TreeParams, TreeState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureSubsample {
    /// max(1, floor(sqrt(d))) features per split.
    Sqrt,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub tree: TreeParams,
    pub feature_subsample: FeatureSubsample,
    pub bootstrap: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestState {
    pub trees: Vec<TreeState>,
    pub tree_seeds: Vec<u64>,
}

struct SqrtFeatures<R: Rng> {
    rng: R,
}

impl<R: Rng> FeaturePool for SqrtFeatures<R> {
    fn candidates(&mut self, n_features: usize) -> Vec<usize> {
        let k = ((n_features as f64).sqrt().floor() as usize).max(1);
        let mut picked = rand::seq::index::sample(&mut self.rng, n_features, k).into_vec();
        picked.sort_unstable();
        picked
    }
}

pub(super) fn fit(
    params: &ForestParams,
    m: &FeatureMatrix,
    labels: &[TierLabel],
    seed: u64,
) -> ForestState {
    let n = m.n_rows();
    let mut trees = Vec::with_capacity(params.n_trees);
    let mut tree_seeds = Vec::with_capacity(params.n_trees);
    for t in 0..params.n_trees {
        let tree_seed = crate::seeding::derive_seed(seed, tags::FOREST_TREE_BASE + t as u64);
        tree_seeds.push(tree_seed);
        let mut rng = stream_rng(tree_seed, 0);
        let rows: Vec<usize> = if params.bootstrap {
            (0..n).map(|_| rng.gen_range(0..n)).collect()
        } else {
            (0..n).collect()
        };
        let state = match params.feature_subsample {
            FeatureSubsample::All => tree::grow(m, labels, rows, &params.tree, &mut AllFeatures),
            FeatureSubsample::Sqrt => {
                tree::grow(m, labels, rows, &params.tree, &mut SqrtFeatures { rng })
            }
        };
        trees.push(state);
    }
    ForestState { trees, tree_seeds }
}

pub(super) fn predict_row(state: &ForestState, row: &[f64]) -> usize {
    let mut votes = [0usize; 3];
    for tree_state in &state.trees {
        votes[tree::predict_row(tree_state, row)] += 1;
    }
    majority_class(&votes)
}

/// Per-feature mean impurity decrease, weighted by node size and normalized
/// to sum to one; uniform when no tree split at all.
pub(super) fn importances(state: &ForestState, n_features: usize) -> Vec<f64> {
    let mut totals = vec![0.0; n_features];
    for tree_state in &state.trees {
        let root_n = tree_state.n_root_samples() as f64;
        if root_n == 0.0 {
            continue;
        }
        for node in &tree_state.nodes {
            if let TreeNode::Split {
                feature,
                gain,
                n_samples,
                ..
            } = node
            {
                totals[*feature] += (*n_samples as f64 / root_n) * gain;
            }
        }
    }
    let n_trees = state.trees.len().max(1) as f64;
    for v in &mut totals {
        *v /= n_trees;
    }
    let sum: f64 = totals.iter().sum();
    if sum == 0.0 {
        vec![1.0 / n_features as f64; n_features]
    } else {
        totals.into_iter().map(|v| v / sum).collect()
    }
}
