//! Linear SVM: three one-vs-rest hinge-loss separators trained by seeded
//! epoch-wise subgradient descent (Pegasos schedule) with L2 regularization
//! `lambda = 1 / (C * n)`.
//!
//! The bias rides along as an augmented constant feature, so it is
//! regularized with the weights; the learning rate is `1 / (lambda * t)`
//! and iterates project onto the `1/sqrt(lambda)` ball. Prediction takes
//! the class with the highest score, earliest tier on ties.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::preprocess::FeatureMatrix;
use crate::seeding::{stream_rng, tags};
use crate::tiering::TierLabel;

use super::argmax_class;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    /// Inverse regularization strength; larger C fits the data harder.
    pub c: f64,
    pub epochs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvmState {
    /// One weight vector per tier (one-vs-rest).
    pub weights: [Vec<f64>; 3],
    pub biases: [f64; 3],
}

pub(super) fn fit(
    params: &SvmParams,
    m: &FeatureMatrix,
    labels: &[TierLabel],
    seed: u64,
) -> SvmState {
    let n = m.n_rows();
    let d = m.n_cols();
    let lambda = 1.0 / (params.c * n as f64);
    let radius = 1.0 / lambda.sqrt();

    let mut weights: [Vec<f64>; 3] = [vec![0.0; d], vec![0.0; d], vec![0.0; d]];
    let mut biases = [0.0; 3];

    for class in 0..3 {
        let mut rng = stream_rng(seed, tags::SVM_CLASS_BASE + class as u64);
        let y: Vec<f64> = labels
            .iter()
            .map(|l| if l.index() == class { 1.0 } else { -1.0 })
            .collect();
        let w = &mut weights[class];
        let b = &mut biases[class];
        let mut order: Vec<usize> = (0..n).collect();
        let mut t = 0u64;
        for _ in 0..params.epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                t += 1;
                let eta = 1.0 / (lambda * t as f64);
                let row = m.row(i);
                let margin = y[i] * (dot(w, row) + *b);
                let shrink = 1.0 - eta * lambda; // = 1 - 1/t
                for v in w.iter_mut() {
                    *v *= shrink;
                }
                *b *= shrink;
                if margin < 1.0 {
                    let step = eta * y[i];
                    for (v, &x) in w.iter_mut().zip(row) {
                        *v += step * x;
                    }
                    *b += step;
                }
                // projection onto the ball of radius 1/sqrt(lambda)
                let norm = (dot(w, w) + *b * *b).sqrt();
                if norm > radius {
                    let scale = radius / norm;
                    for v in w.iter_mut() {
                        *v *= scale;
                    }
                    *b *= scale;
                }
            }
        }
    }
    SvmState { weights, biases }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(super) fn predict_row(state: &SvmState, row: &[f64]) -> usize {
    let scores = [
        dot(&state.weights[0], row) + state.biases[0],
        dot(&state.weights[1], row) + state.biases[1],
        dot(&state.weights[2], row) + state.biases[2],
    ];
    argmax_class(&scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::test_support::{labeled_matrix, unlabeled_matrix};
    use crate::classifiers::{fit as fit_model, Hyperparams};
    use crate::tiering::TierLabel::{A, B};

    /// Linearly separable two-class set with a comfortable margin.
    fn separable() -> (Vec<Vec<f64>>, Vec<TierLabel>) {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..10 {
            let t = i as f64 / 10.0;
            rows.push(vec![0.05 + 0.02 * t, 0.1 + 0.03 * t]);
            labels.push(A);
            rows.push(vec![0.85 + 0.01 * t, 0.9 - 0.02 * t]);
            labels.push(B);
        }
        (rows, labels)
    }

    #[test]
    fn some_grid_c_separates_a_separable_set_perfectly() {
        let (rows, labels) = separable();
        let m = labeled_matrix(&["x", "y"], &rows, &labels);
        let train_queries = unlabeled_matrix(&["x", "y"], &rows);
        let perfect = [0.1, 1.0, 10.0, 100.0].iter().any(|&c| {
            let model = fit_model(
                &Hyperparams::Svm(SvmParams { c, epochs: 200 }),
                &m,
                13,
            )
            .unwrap();
            model.predict(&train_queries).unwrap() == labels
        });
        assert!(perfect, "no grid C reached 100% training accuracy");
    }

    #[test]
    fn scores_tie_breaks_to_the_earlier_tier() {
        let state = SvmState {
            weights: [vec![0.0], vec![0.0], vec![0.0]],
            biases: [0.5, 0.5, 0.1],
        };
        assert_eq!(predict_row(&state, &[1.0]), 0);
    }

    #[test]
    fn training_is_seed_deterministic() {
        let (rows, labels) = separable();
        let m = labeled_matrix(&["x", "y"], &rows, &labels);
        let params = Hyperparams::Svm(SvmParams { c: 1.0, epochs: 30 });
        let q = unlabeled_matrix(&["x", "y"], &[vec![0.2, 0.3], vec![0.7, 0.8]]);
        let a = fit_model(&params, &m, 5).unwrap().predict(&q).unwrap();
        let b = fit_model(&params, &m, 5).unwrap().predict(&q).unwrap();
        assert_eq!(a, b);
    }
}
