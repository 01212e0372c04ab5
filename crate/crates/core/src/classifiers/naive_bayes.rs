//! Gaussian naive Bayes.
//!
//! One Gaussian per (class, feature) under the conditional-independence
//! assumption; prediction maximizes log prior plus summed log likelihoods.
//! Every variance gets `variance_smoothing * max overall feature variance`
//! added, which keeps likelihoods finite on constant features.

use serde::{Deserialize, Serialize};

use crate::preprocess::FeatureMatrix;
use crate::tiering::TierLabel;

use super::argmax_class;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesParams {
    /// Relative variance floor; the effective epsilon scales with the
    /// largest overall feature variance.
    pub variance_smoothing: f64,
}

/// Per-class priors and per-(class, feature) Gaussian moments. Classes
/// absent from the training data keep a zero prior and are never selected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesState {
    pub priors: [f64; 3],
    /// `[class][feature]` means; zero for absent classes.
    pub means: [Vec<f64>; 3],
    /// `[class][feature]` smoothed variances, always >= the epsilon used.
    pub variances: [Vec<f64>; 3],
    pub epsilon: f64,
}

pub(super) fn fit(
    params: &NaiveBayesParams,
    m: &FeatureMatrix,
    labels: &[TierLabel],
) -> NaiveBayesState {
    let n = m.n_rows();
    let d = m.n_cols();

    // epsilon from the largest population variance over all rows
    let mut max_var = 0.0f64;
    for j in 0..d {
        let mean = (0..n).map(|i| m.get(i, j)).sum::<f64>() / n as f64;
        let var = (0..n).map(|i| (m.get(i, j) - mean).powi(2)).sum::<f64>() / n as f64;
        max_var = max_var.max(var);
    }
    let mut epsilon = params.variance_smoothing * max_var;
    if epsilon <= 0.0 {
        // all features constant; fall back to the smoothing value itself
        epsilon = params.variance_smoothing;
    }

    let mut counts = [0usize; 3];
    for &l in labels {
        counts[l.index()] += 1;
    }
    let mut priors = [0.0; 3];
    let mut means: [Vec<f64>; 3] = [vec![0.0; d], vec![0.0; d], vec![0.0; d]];
    let mut variances: [Vec<f64>; 3] = [vec![epsilon; d], vec![epsilon; d], vec![epsilon; d]];
    for c in 0..3 {
        priors[c] = counts[c] as f64 / n as f64;
        if counts[c] == 0 {
            continue;
        }
        let rows: Vec<usize> = (0..n).filter(|&i| labels[i].index() == c).collect();
        for j in 0..d {
            let mean = rows.iter().map(|&i| m.get(i, j)).sum::<f64>() / counts[c] as f64;
            let var = rows
                .iter()
                .map(|&i| (m.get(i, j) - mean).powi(2))
                .sum::<f64>()
                / counts[c] as f64;
            means[c][j] = mean;
            variances[c][j] = var + epsilon;
        }
    }
    NaiveBayesState {
        priors,
        means,
        variances,
        epsilon,
    }
}

/// Unnormalized class log posteriors for one row.
pub fn log_posteriors(state: &NaiveBayesState, row: &[f64]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for c in 0..3 {
        if state.priors[c] == 0.0 {
            out[c] = f64::NEG_INFINITY;
            continue;
        }
        let mut lp = state.priors[c].ln();
        for (j, &x) in row.iter().enumerate() {
            let var = state.variances[c][j];
            let diff = x - state.means[c][j];
            lp += -0.5 * (2.0 * std::f64::consts::PI * var).ln() - diff * diff / (2.0 * var);
        }
        out[c] = lp;
    }
    out
}

/// Normalized posterior probabilities (log-sum-exp over the finite entries).
pub fn posteriors(state: &NaiveBayesState, row: &[f64]) -> [f64; 3] {
    let lp = log_posteriors(state, row);
    let max = lp.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = [0.0; 3];
    let mut total = 0.0;
    for c in 0..3 {
        let e = (lp[c] - max).exp();
        out[c] = e;
        total += e;
    }
    for v in &mut out {
        *v /= total;
    }
    out
}

pub(super) fn predict_row(state: &NaiveBayesState, row: &[f64]) -> usize {
    argmax_class(&log_posteriors(state, row))
}
