//! Five classifier families behind one fit/predict contract.
//!
//! All families predict one of the three tiers. Fitting is deterministic
//! for a given (data, hyperparameters, seed) triple, and every tie — votes,
//! posteriors, scores, split candidates — resolves by a fixed rule: the
//! earliest tier in (A, B, C) order, or the lowest feature index and then
//! the lowest threshold for tree splits. No decision ever depends on the
//! iteration order of an unordered container.

mod forest;
mod knn;
mod naive_bayes;
mod svm;
mod tree;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::FeatureMatrix;
use crate::tiering::{TierLabel, TIERS};

pub use forest::{FeatureSubsample, ForestParams, ForestState};
pub use knn::{KnnParams, KnnState};
pub use naive_bayes::{log_posteriors, posteriors, NaiveBayesParams, NaiveBayesState};
pub use svm::{SvmParams, SvmState};
pub use tree::{TreeNode, TreeParams, TreeState};

/// Classifier family tags, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Knn,
    NaiveBayes,
    DecisionTree,
    Svm,
    RandomForest,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Knn,
        Family::NaiveBayes,
        Family::DecisionTree,
        Family::Svm,
        Family::RandomForest,
    ];

    /// Short identifier used in file names and CLI flags.
    pub fn id(self) -> &'static str {
        match self {
            Family::Knn => "knn",
            Family::NaiveBayes => "nb",
            Family::DecisionTree => "dt",
            Family::Svm => "svm",
            Family::RandomForest => "rf",
        }
    }

    /// Human-readable name used in reports.
    pub fn display_name(self) -> &'static str {
        match self {
            Family::Knn => "KNN",
            Family::NaiveBayes => "Naive Bayes",
            Family::DecisionTree => "Decision Tree",
            Family::Svm => "SVM",
            Family::RandomForest => "Random Forest",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_lowercase().as_str() {
            "knn" => Some(Family::Knn),
            "nb" | "naive_bayes" | "naive-bayes" => Some(Family::NaiveBayes),
            "dt" | "decision_tree" | "decision-tree" | "tree" => Some(Family::DecisionTree),
            "svm" => Some(Family::Svm),
            "rf" | "random_forest" | "random-forest" | "forest" => Some(Family::RandomForest),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

/// Hyperparameters, tagged by family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Hyperparams {
    Knn(KnnParams),
    NaiveBayes(NaiveBayesParams),
    Svm(SvmParams),
    DecisionTree(TreeParams),
    RandomForest(ForestParams),
}

impl Hyperparams {
    pub fn family(&self) -> Family {
        match self {
            Hyperparams::Knn(_) => Family::Knn,
            Hyperparams::NaiveBayes(_) => Family::NaiveBayes,
            Hyperparams::Svm(_) => Family::Svm,
            Hyperparams::DecisionTree(_) => Family::DecisionTree,
            Hyperparams::RandomForest(_) => Family::RandomForest,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::InvalidHyperparams { reason });
        match self {
            Hyperparams::Knn(p) if p.k < 1 => fail("k must be at least 1".to_string()),
            Hyperparams::NaiveBayes(p) if p.variance_smoothing <= 0.0 => {
                fail("variance_smoothing must be positive".to_string())
            }
            Hyperparams::Svm(p) if p.c <= 0.0 => fail("C must be positive".to_string()),
            Hyperparams::Svm(p) if p.epochs < 1 => fail("epochs must be at least 1".to_string()),
            Hyperparams::DecisionTree(p) | Hyperparams::RandomForest(ForestParams { tree: p, .. })
                if p.max_depth < 1 || p.min_samples_leaf < 1 =>
            {
                fail("max_depth and min_samples_leaf must be at least 1".to_string())
            }
            Hyperparams::RandomForest(p) if p.n_trees < 1 => {
                fail("n_trees must be at least 1".to_string())
            }
            _ => Ok(()),
        }
    }

    /// Compact `key=value` rendering for grid-search logs.
    pub fn describe(&self) -> String {
        match self {
            Hyperparams::Knn(p) => format!("k={}", p.k),
            Hyperparams::NaiveBayes(p) => format!("variance_smoothing={:e}", p.variance_smoothing),
            Hyperparams::Svm(p) => format!("c={} epochs={}", p.c, p.epochs),
            Hyperparams::DecisionTree(p) => format!(
                "max_depth={} min_samples_leaf={}",
                p.max_depth, p.min_samples_leaf
            ),
            Hyperparams::RandomForest(p) => format!(
                "n_trees={} max_depth={} min_samples_leaf={} features={} bootstrap={}",
                p.n_trees,
                p.tree.max_depth,
                p.tree.min_samples_leaf,
                match p.feature_subsample {
                    FeatureSubsample::Sqrt => "sqrt",
                    FeatureSubsample::All => "all",
                },
                p.bootstrap
            ),
        }
    }
}

/// Fitted state per family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ModelState {
    Knn(KnnState),
    NaiveBayes(NaiveBayesState),
    Svm(SvmState),
    DecisionTree(TreeState),
    RandomForest(ForestState),
}

/// A fitted classifier bound to its feature schema, class list, and seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    feature_names: Vec<String>,
    classes: [TierLabel; 3],
    seed: u64,
    hyperparams: Hyperparams,
    state: ModelState,
}

/// Fits `params` on a labeled feature matrix.
///
/// Single-class data is not an error; every family then degenerates to a
/// constant predictor for that class.
pub fn fit(params: &Hyperparams, m: &FeatureMatrix, seed: u64) -> Result<TrainedModel> {
    params.validate()?;
    if m.n_rows() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let labels = m.labels().ok_or_else(|| Error::LabelMismatch {
        reason: "training matrix has no labels".to_string(),
    })?;
    debug_assert_eq!(labels.len(), m.n_rows());
    let state = match params {
        Hyperparams::Knn(p) => ModelState::Knn(knn::fit(p, m, labels)),
        Hyperparams::NaiveBayes(p) => ModelState::NaiveBayes(naive_bayes::fit(p, m, labels)),
        Hyperparams::Svm(p) => ModelState::Svm(svm::fit(p, m, labels, seed)),
        Hyperparams::DecisionTree(p) => ModelState::DecisionTree(tree::fit(p, m, labels)),
        Hyperparams::RandomForest(p) => ModelState::RandomForest(forest::fit(p, m, labels, seed)),
    };
    Ok(TrainedModel {
        feature_names: m.column_names().to_vec(),
        classes: TIERS,
        seed,
        hyperparams: params.clone(),
        state,
    })
}

impl TrainedModel {
    pub fn family(&self) -> Family {
        self.hyperparams.family()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn classes(&self) -> &[TierLabel; 3] {
        &self.classes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn hyperparams(&self) -> &Hyperparams {
        &self.hyperparams
    }

    #[cfg(test)]
    pub(crate) fn state(&self) -> &ModelState {
        &self.state
    }

    /// Predicts one tier per row. Row columns must match the fitted schema
    /// name-for-name, in order.
    pub fn predict(&self, rows: &FeatureMatrix) -> Result<Vec<TierLabel>> {
        if rows.column_names() != self.feature_names.as_slice() {
            let missing: Vec<String> = self
                .feature_names
                .iter()
                .filter(|n| rows.column_index(n).is_none())
                .cloned()
                .collect();
            return Err(Error::SchemaMismatch {
                reason: if missing.is_empty() {
                    format!(
                        "expected columns [{}], found [{}]",
                        self.feature_names.join(", "),
                        rows.column_names().join(", ")
                    )
                } else {
                    format!("missing columns [{}]", missing.join(", "))
                },
            });
        }
        let predictions = (0..rows.n_rows())
            .map(|i| self.predict_row(rows.row(i)))
            .collect();
        Ok(predictions)
    }

    fn predict_row(&self, row: &[f64]) -> TierLabel {
        let class_idx = match &self.state {
            ModelState::Knn(s) => knn::predict_row(s, row),
            ModelState::NaiveBayes(s) => naive_bayes::predict_row(s, row),
            ModelState::Svm(s) => svm::predict_row(s, row),
            ModelState::DecisionTree(s) => tree::predict_row(s, row),
            ModelState::RandomForest(s) => forest::predict_row(s, row),
        };
        TIERS[class_idx]
    }

    /// Mean impurity decrease per feature across the forest's trees,
    /// normalized to sum to one (uniform when no tree ever split).
    pub fn feature_importances(&self) -> Result<BTreeMap<String, f64>> {
        let ModelState::RandomForest(state) = &self.state else {
            return Err(Error::NotAForest);
        };
        let weights = forest::importances(state, self.feature_names.len());
        Ok(self
            .feature_names
            .iter()
            .cloned()
            .zip(weights)
            .collect())
    }
}

/// Class scores to a winning class index; ties go to the earliest class.
pub(crate) fn argmax_class(scores: &[f64; 3]) -> usize {
    let mut best = 0;
    for i in 1..3 {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    best
}

/// Vote counts to a winning class index; ties go to the earliest class.
pub(crate) fn majority_class(counts: &[usize; 3]) -> usize {
    let mut best = 0;
    for i in 1..3 {
        if counts[i] > counts[best] {
            best = i;
        }
    }
    best
}

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelEnvelope {
    format: String,
    format_version: u32,
    model: TrainedModel,
}

impl TrainedModel {
    /// Self-describing versioned JSON; `from_json` reproduces a model whose
    /// predictions match the original exactly.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelEnvelope {
            format: "tiercast-model".to_string(),
            format_version: MODEL_FORMAT_VERSION,
            model: self.clone(),
        })
        .expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<TrainedModel> {
        let envelope: ModelEnvelope =
            serde_json::from_str(text).map_err(|e| Error::ModelFormat(e.to_string()))?;
        if envelope.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::ModelVersion {
                found: envelope.format_version,
                expected: MODEL_FORMAT_VERSION,
            });
        }
        Ok(envelope.model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<TrainedModel> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// Labeled matrix from rows and labels, with synthetic ids.
    pub fn labeled_matrix(names: &[&str], rows: &[Vec<f64>], labels: &[TierLabel]) -> FeatureMatrix {
        let values: Vec<f64> = rows.iter().flatten().copied().collect();
        FeatureMatrix::new(
            names.iter().map(|s| s.to_string()).collect(),
            (0..rows.len()).map(|i| format!("r{i}")).collect(),
            values,
        )
        .with_labels(labels.to_vec())
        .unwrap()
    }

    pub fn unlabeled_matrix(names: &[&str], rows: &[Vec<f64>]) -> FeatureMatrix {
        let values: Vec<f64> = rows.iter().flatten().copied().collect();
        FeatureMatrix::new(
            names.iter().map(|s| s.to_string()).collect(),
            (0..rows.len()).map(|i| format!("q{i}")).collect(),
            values,
        )
    }

    pub fn default_grid_params() -> Vec<Hyperparams> {
        vec![
            Hyperparams::Knn(KnnParams { k: 3 }),
            Hyperparams::NaiveBayes(NaiveBayesParams {
                variance_smoothing: 1e-9,
            }),
            Hyperparams::Svm(SvmParams { c: 1.0, epochs: 50 }),
            Hyperparams::DecisionTree(TreeParams {
                max_depth: 4,
                min_samples_leaf: 1,
            }),
            Hyperparams::RandomForest(ForestParams {
                n_trees: 7,
                tree: TreeParams {
                    max_depth: 4,
                    min_samples_leaf: 1,
                },
                feature_subsample: FeatureSubsample::Sqrt,
                bootstrap: true,
            }),
        ]
    }
}
