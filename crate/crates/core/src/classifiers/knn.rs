//! k-nearest-neighbors by Euclidean distance on the normalized features.
//!
//! Neighbors rank by (distance, training-row index), so distance ties have
//! a deterministic winner; vote ties go to the earliest tier.

use serde::{Deserialize, Serialize};

use crate::preprocess::FeatureMatrix;
use crate::tiering::TierLabel;

use super::majority_class;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
}

/// The training matrix, memorized. `k` is clamped to the number of stored
/// rows at prediction time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnnState {
    pub k: usize,
    pub n_cols: usize,
    pub data: Vec<f64>,
    pub labels: Vec<TierLabel>,
}

pub(super) fn fit(params: &KnnParams, m: &FeatureMatrix, labels: &[TierLabel]) -> KnnState {
    let mut data = Vec::with_capacity(m.n_rows() * m.n_cols());
    for i in 0..m.n_rows() {
        data.extend_from_slice(m.row(i));
    }
    KnnState {
        k: params.k,
        n_cols: m.n_cols(),
        data,
        labels: labels.to_vec(),
    }
}

pub(super) fn predict_row(state: &KnnState, row: &[f64]) -> usize {
    let n = state.labels.len();
    let mut ranked: Vec<(f64, usize)> = (0..n)
        .map(|i| {
            let start = i * state.n_cols;
            let train = &state.data[start..start + state.n_cols];
            let d2: f64 = train
                .iter()
                .zip(row)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            (d2, i)
        })
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut votes = [0usize; 3];
    for &(_, i) in ranked.iter().take(state.k.min(n)) {
        votes[state.labels[i].index()] += 1;
    }
    majority_class(&votes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::test_support::{labeled_matrix, unlabeled_matrix};
    use crate::classifiers::{fit as fit_model, Hyperparams};
    use crate::tiering::TierLabel::{A, B};
    use rand::Rng;

    #[test]
    fn k1_returns_the_label_of_an_exact_match() {
        let m = labeled_matrix(
            &["x", "y"],
            &[vec![0.1, 0.2], vec![0.8, 0.9], vec![0.4, 0.5]],
            &[A, B, A],
        );
        let model = fit_model(&Hyperparams::Knn(KnnParams { k: 1 }), &m, 0).unwrap();
        let q = unlabeled_matrix(&["x", "y"], &[vec![0.8, 0.9]]);
        assert_eq!(model.predict(&q).unwrap(), vec![B]);
    }

    #[test]
    fn k3_majority_matches_a_brute_force_ranking() {
        // points 0.0 -> A, 0.1 -> A, 1.0 -> B; query 0.05
        let m = labeled_matrix(&["x"], &[vec![0.0], vec![0.1], vec![1.0]], &[A, A, B]);
        let model = fit_model(&Hyperparams::Knn(KnnParams { k: 3 }), &m, 0).unwrap();
        let q = unlabeled_matrix(&["x"], &[vec![0.05]]);
        // oracle: rank (|0.05|, |0.05-0.1|, |0.05-1.0|) -> two A votes, one B
        assert_eq!(model.predict(&q).unwrap(), vec![A]);
    }

    #[test]
    fn equidistant_vote_tie_resolves_to_the_earlier_tier() {
        let m = labeled_matrix(&["x"], &[vec![0.0], vec![1.0]], &[B, A]);
        let model = fit_model(&Hyperparams::Knn(KnnParams { k: 2 }), &m, 0).unwrap();
        let q = unlabeled_matrix(&["x"], &[vec![0.5]]);
        assert_eq!(model.predict(&q).unwrap(), vec![A]);
    }

    #[test]
    fn oversized_k_uses_all_rows() {
        let m = labeled_matrix(&["x"], &[vec![0.0], vec![0.2], vec![0.3]], &[B, B, A]);
        let model = fit_model(&Hyperparams::Knn(KnnParams { k: 50 }), &m, 0).unwrap();
        let q = unlabeled_matrix(&["x"], &[vec![0.9]]);
        assert_eq!(model.predict(&q).unwrap(), vec![B]);
    }

    #[test]
    fn k1_memorizes_distinct_training_rows() {
        let mut rng = crate::seeding::stream_rng(4, 9);
        for trial in 0..100 {
            let rows: Vec<Vec<f64>> = (0..30)
                .map(|i| vec![i as f64 / 30.0 + rng.gen::<f64>() * 1e-3, rng.gen()])
                .collect();
            let labels: Vec<TierLabel> = (0..30)
                .map(|_| crate::tiering::TIERS[rng.gen_range(0..3)])
                .collect();
            let m = labeled_matrix(&["x", "y"], &rows, &labels);
            let model = fit_model(&Hyperparams::Knn(KnnParams { k: 1 }), &m, 0).unwrap();
            let q = unlabeled_matrix(&["x", "y"], &rows);
            assert_eq!(model.predict(&q).unwrap(), labels, "trial {trial}");
        }
    }
}
