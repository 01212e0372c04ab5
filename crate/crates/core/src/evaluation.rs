//! Evaluation protocol: 60/20/20 split, 10-fold cross-validation, grid
//! search, learning curves, and the four classification metrics over a
//! 3x3 confusion matrix (rows = predicted tier, columns = actual tier).

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::classifiers::{fit, Hyperparams};
use crate::error::{Error, Result};
use crate::preprocess::FeatureMatrix;
use crate::seeding::{stream_rng, tags};
use crate::tiering::{TierLabel, TIERS};

/// The train/validation/test fractions.
pub const SPLIT_FRACTIONS: [f64; 3] = [0.6, 0.2, 0.2];

/// Disjoint train/validation/test row indices covering every row, each
/// part sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
    pub stratified: bool,
}

/// Integer apportionment of `n` over `fractions` (floors plus largest
/// remainders, ties to the earlier part). Every part lands within one of
/// its exact quota and the parts sum to `n`.
fn apportion(n: usize, fractions: &[f64]) -> Vec<usize> {
    let quotas: Vec<f64> = fractions.iter().map(|f| f * n as f64).collect();
    let mut sizes: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = sizes.iter().sum();
    let mut order: Vec<usize> = (0..fractions.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = quotas[a] - quotas[a].floor();
        let fb = quotas[b] - quotas[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in order.iter().take(n - assigned) {
        sizes[i] += 1;
    }
    sizes
}

/// 0/1 rounding of the class-by-part quota table: row sums hit the class
/// counts exactly, column sums hit `part_targets`, and every cell stays
/// within one of its quota. With three classes and three parts the choice
/// space is tiny, so the feasible rounding is found by enumeration
/// (earliest combination wins, keeping the result deterministic).
fn stratified_allocation(
    class_counts: [usize; 3],
    part_targets: [usize; 3],
) -> [[usize; 3]; 3] {
    let mut base = [[0usize; 3]; 3];
    let mut row_residue = [0usize; 3];
    for c in 0..3 {
        let mut assigned = 0;
        for p in 0..3 {
            base[c][p] = (SPLIT_FRACTIONS[p] * class_counts[c] as f64).floor() as usize;
            assigned += base[c][p];
        }
        row_residue[c] = class_counts[c] - assigned;
    }
    let mut col_residue = [0i64; 3];
    for p in 0..3 {
        let col_base: usize = (0..3).map(|c| base[c][p]).sum();
        col_residue[p] = part_targets[p] as i64 - col_base as i64;
    }

    // all ways to hand one class's residue to distinct parts, in order
    fn combos(k: usize) -> Vec<[bool; 3]> {
        match k {
            0 => vec![[false, false, false]],
            1 => vec![
                [true, false, false],
                [false, true, false],
                [false, false, true],
            ],
            2 => vec![
                [true, true, false],
                [true, false, true],
                [false, true, true],
            ],
            _ => vec![[true, true, true]],
        }
    }

    let choices: Vec<Vec<[bool; 3]>> = row_residue.iter().map(|&r| combos(r)).collect();
    let mut best: Option<([usize; 3], i64)> = None; // (combo ids, deviation)
    for (i0, c0) in choices[0].iter().enumerate() {
        for (i1, c1) in choices[1].iter().enumerate() {
            for (i2, c2) in choices[2].iter().enumerate() {
                let mut dev = 0i64;
                for p in 0..3 {
                    let extra = usize::from(c0[p]) + usize::from(c1[p]) + usize::from(c2[p]);
                    dev += (extra as i64 - col_residue[p]).abs();
                }
                if best.as_ref().map_or(true, |(_, d)| dev < *d) {
                    best = Some(([i0, i1, i2], dev));
                }
                if dev == 0 {
                    break;
                }
            }
        }
    }
    let (ids, dev) = best.expect("at least one combination");
    debug_assert_eq!(dev, 0, "no exact stratified rounding found");
    let mut alloc = base;
    for c in 0..3 {
        let combo = choices[c][ids[c]];
        for p in 0..3 {
            alloc[c][p] += usize::from(combo[p]);
        }
    }
    alloc
}

/// Seeded 60/20/20 split. Stratified splitting keeps each tier's share of
/// every part within one row of exact proportionality.
pub fn split(
    n_rows: usize,
    labels: &[TierLabel],
    seed: u64,
    stratified: bool,
) -> Result<SplitIndices> {
    if n_rows < 5 {
        return Err(Error::TooFewRows {
            required: 5,
            found: n_rows,
        });
    }
    if stratified && labels.len() != n_rows {
        return Err(Error::LabelMismatch {
            reason: format!("{} labels for {} rows", labels.len(), n_rows),
        });
    }
    let targets = apportion(n_rows, &SPLIT_FRACTIONS);
    let mut indices: Vec<usize> = (0..n_rows).collect();
    let mut rng = stream_rng(seed, tags::SPLIT_SHUFFLE);
    indices.shuffle(&mut rng);

    let (mut train, mut validation, mut test) = (Vec::new(), Vec::new(), Vec::new());
    if stratified {
        let mut class_counts = [0usize; 3];
        for &l in labels {
            class_counts[l.index()] += 1;
        }
        let alloc = stratified_allocation(class_counts, [targets[0], targets[1], targets[2]]);
        for (c, _) in TIERS.iter().enumerate() {
            let members: Vec<usize> = indices
                .iter()
                .copied()
                .filter(|&i| labels[i].index() == c)
                .collect();
            let (a, b) = (alloc[c][0], alloc[c][0] + alloc[c][1]);
            train.extend_from_slice(&members[..a]);
            validation.extend_from_slice(&members[a..b]);
            test.extend_from_slice(&members[b..]);
        }
    } else {
        train.extend_from_slice(&indices[..targets[0]]);
        validation.extend_from_slice(&indices[targets[0]..targets[0] + targets[1]]);
        test.extend_from_slice(&indices[targets[0] + targets[1]..]);
    }
    train.sort_unstable();
    validation.sort_unstable();
    test.sort_unstable();
    Ok(SplitIndices {
        train,
        validation,
        test,
        seed,
        stratified,
    })
}

/// Seeded k-fold partition; fold sizes differ by at most one and each fold
/// is sorted ascending.
pub fn kfold(n_rows: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k == 0 || k > n_rows {
        return Err(Error::BadFoldCount { k, rows: n_rows });
    }
    let mut indices: Vec<usize> = (0..n_rows).collect();
    let mut rng = stream_rng(seed, tags::FOLD_SHUFFLE);
    indices.shuffle(&mut rng);
    let base = n_rows / k;
    let extra = n_rows % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        let mut fold = indices[start..start + size].to_vec();
        fold.sort_unstable();
        folds.push(fold);
        start += size;
    }
    Ok(folds)
}

/// 3x3 tier confusion counts; `counts[p][a]` is the number of rows
/// predicted as tier `p` whose actual tier is `a`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[usize; 3]; 3],
}

/// One-vs-rest counts for a single tier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OvrCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..3).map(|i| self.counts[i][i]).sum()
    }

    /// Per-tier predicted counts.
    pub fn row_sums(&self) -> [usize; 3] {
        let mut out = [0; 3];
        for (p, row) in self.counts.iter().enumerate() {
            out[p] = row.iter().sum();
        }
        out
    }

    /// Per-tier actual counts.
    pub fn col_sums(&self) -> [usize; 3] {
        let mut out = [0; 3];
        for row in &self.counts {
            for (a, &v) in row.iter().enumerate() {
                out[a] += v;
            }
        }
        out
    }

    pub fn class_counts(&self, class: TierLabel) -> OvrCounts {
        let c = class.index();
        let tp = self.counts[c][c];
        let fp = self.row_sums()[c] - tp;
        let fn_ = self.col_sums()[c] - tp;
        let tn = self.total() - tp - fp - fn_;
        OvrCounts { tp, fp, fn_, tn }
    }

    /// CSV rendering with predicted tiers as rows and actual as columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("predicted\\actual,A,B,C\n");
        for (p, tier) in TIERS.iter().enumerate() {
            out.push_str(tier.as_str());
            for a in 0..3 {
                out.push_str(&format!(",{}", self.counts[p][a]));
            }
            out.push('\n');
        }
        out
    }
}

/// Tabulates predictions against actual tiers.
pub fn confusion(actual: &[TierLabel], predicted: &[TierLabel]) -> Result<ConfusionMatrix> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::EmptyConfusion);
    }
    let mut cm = ConfusionMatrix::default();
    for (&a, &p) in actual.iter().zip(predicted) {
        cm.counts[p.index()][a.index()] += 1;
    }
    Ok(cm)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Averaging {
    /// Unweighted mean of per-tier one-vs-rest precision/recall.
    Macro,
    /// Single positive class (the binary reading of the formulas).
    Binary,
}

/// Accuracy, precision, recall, and F-measure in [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub averaging: Averaging,
    /// Set when some per-class denominator was zero and contributed 0.
    pub zero_division: bool,
}

impl EvalMetrics {
    /// The four metrics from raw binary counts:
    /// accuracy (TP+TN)/(TP+TN+FP+FN), recall TP/(TP+FN),
    /// precision TP/(TP+FP), F = 2*R*P/(R+P).
    pub fn from_binary_counts(tp: usize, tn: usize, fp: usize, fn_: usize) -> Result<EvalMetrics> {
        let total = tp + tn + fp + fn_;
        if total == 0 {
            return Err(Error::EmptyConfusion);
        }
        let mut zero_division = false;
        let mut ratio = |num: usize, den: usize| -> f64 {
            if den == 0 {
                zero_division = true;
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let accuracy = (tp + tn) as f64 / total as f64;
        let recall = ratio(tp, tp + fn_);
        let precision = ratio(tp, tp + fp);
        let f_measure = if recall + precision > 0.0 {
            2.0 * recall * precision / (recall + precision)
        } else {
            zero_division = true;
            0.0
        };
        Ok(EvalMetrics {
            accuracy,
            precision,
            recall,
            f_measure,
            averaging: Averaging::Binary,
            zero_division,
        })
    }
}

/// Multiclass metrics: global accuracy is trace over total; precision and
/// recall are macro-averaged one-vs-rest; the F-measure applies the binary
/// formula to the macro pair. Zero-denominator classes contribute 0 and
/// raise the `zero_division` flag.
pub fn metrics(cm: &ConfusionMatrix) -> Result<EvalMetrics> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyConfusion);
    }
    let accuracy = cm.trace() as f64 / total as f64;
    let mut zero_division = false;
    let mut precision_sum = 0.0;
    let mut recall_sum = 0.0;
    for tier in TIERS {
        let c = cm.class_counts(tier);
        if c.tp + c.fp == 0 {
            zero_division = true;
        } else {
            precision_sum += c.tp as f64 / (c.tp + c.fp) as f64;
        }
        if c.tp + c.fn_ == 0 {
            zero_division = true;
        } else {
            recall_sum += c.tp as f64 / (c.tp + c.fn_) as f64;
        }
    }
    let precision = precision_sum / 3.0;
    let recall = recall_sum / 3.0;
    let f_measure = if precision + recall > 0.0 {
        2.0 * recall * precision / (recall + precision)
    } else {
        zero_division = true;
        0.0
    };
    Ok(EvalMetrics {
        accuracy,
        precision,
        recall,
        f_measure,
        averaging: Averaging::Macro,
        zero_division,
    })
}

/// Fraction of positions where the two label vectors agree.
pub fn accuracy_of(actual: &[TierLabel], predicted: &[TierLabel]) -> Result<f64> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::EmptyConfusion);
    }
    let hits = actual
        .iter()
        .zip(predicted)
        .filter(|(a, p)| a == p)
        .count();
    Ok(hits as f64 / actual.len() as f64)
}

/// One evaluated grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub params: Hyperparams,
    pub validation_accuracy: f64,
}

/// Every evaluated configuration in enumeration order plus the index of
/// the best one (first wins on accuracy ties).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub evaluated: Vec<GridPoint>,
    pub best: usize,
}

impl GridSearchResult {
    pub fn best_params(&self) -> &Hyperparams {
        &self.evaluated[self.best].params
    }

    pub fn best_accuracy(&self) -> f64 {
        self.evaluated[self.best].validation_accuracy
    }
}

/// Fits every configuration on `train` and scores it on `validation` by
/// accuracy. Model fits use `seed` directly, so the winning configuration
/// refit with the same seed reproduces the scored model exactly.
pub fn grid_search(
    grid: &[Hyperparams],
    train: &FeatureMatrix,
    validation: &FeatureMatrix,
    seed: u64,
) -> Result<GridSearchResult> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let val_labels = validation.labels().ok_or_else(|| Error::LabelMismatch {
        reason: "validation matrix has no labels".to_string(),
    })?;
    let mut evaluated = Vec::with_capacity(grid.len());
    let mut best = 0usize;
    for (i, params) in grid.iter().enumerate() {
        let model = fit(params, train, seed)?;
        let predicted = model.predict(validation)?;
        let validation_accuracy = accuracy_of(val_labels, &predicted)?;
        evaluated.push(GridPoint {
            params: params.clone(),
            validation_accuracy,
        });
        if validation_accuracy > evaluated[best].validation_accuracy {
            best = i;
        }
    }
    Ok(GridSearchResult { evaluated, best })
}

/// Mean and population standard deviation of one metric across folds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricMoments {
    pub mean: f64,
    pub std: f64,
}

fn moments(values: &[f64]) -> MetricMoments {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    MetricMoments {
        mean,
        std: var.sqrt(),
    }
}

/// Cross-validation outcome: per-fold metrics and their moments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvStats {
    pub accuracy: MetricMoments,
    pub precision: MetricMoments,
    pub recall: MetricMoments,
    pub f_measure: MetricMoments,
    pub per_fold: Vec<EvalMetrics>,
}

/// k-fold cross-validation of one configuration: each fold is held out
/// once while the model fits on the rest (model seed = `seed` each time;
/// the fold shuffle has its own derived stream).
pub fn cross_validate(
    params: &Hyperparams,
    m: &FeatureMatrix,
    k: usize,
    seed: u64,
) -> Result<CvStats> {
    let labels = m.labels().ok_or_else(|| Error::LabelMismatch {
        reason: "cross-validation needs labels".to_string(),
    })?;
    let folds = kfold(m.n_rows(), k, seed)?;
    let mut per_fold = Vec::with_capacity(k);
    for fold in &folds {
        let train_rows: Vec<usize> = (0..m.n_rows()).filter(|i| !fold.contains(i)).collect();
        let train = m.select_rows(&train_rows);
        let held_out = m.select_rows(fold);
        let model = fit(params, &train, seed)?;
        let predicted = model.predict(&held_out)?;
        let actual: Vec<TierLabel> = fold.iter().map(|&i| labels[i]).collect();
        per_fold.push(metrics(&confusion(&actual, &predicted)?)?);
    }
    let collect = |f: fn(&EvalMetrics) -> f64| -> Vec<f64> { per_fold.iter().map(f).collect() };
    Ok(CvStats {
        accuracy: moments(&collect(|m| m.accuracy)),
        precision: moments(&collect(|m| m.precision)),
        recall: moments(&collect(|m| m.recall)),
        f_measure: moments(&collect(|m| m.f_measure)),
        per_fold,
    })
}

/// Validation accuracy at growing training-set fractions.
///
/// One seeded permutation is drawn; each fraction trains on the sorted
/// prefix of that permutation (so fraction 1.0 is exactly the full
/// training set) with model seed = `seed`.
pub fn learning_curve(
    params: &Hyperparams,
    train: &FeatureMatrix,
    fractions: &[f64],
    validation: &FeatureMatrix,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    if fractions.is_empty() {
        return Err(Error::EmptyFractions);
    }
    let val_labels = validation.labels().ok_or_else(|| Error::LabelMismatch {
        reason: "validation matrix has no labels".to_string(),
    })?;
    let n = train.n_rows();
    for &f in fractions {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::InvalidFraction {
                fraction: f,
                reason: "must lie in (0, 1]".to_string(),
            });
        }
        if (f * n as f64).floor() < 1.0 {
            return Err(Error::InvalidFraction {
                fraction: f,
                reason: format!("selects no rows out of {n}"),
            });
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = stream_rng(seed, tags::CURVE_SHUFFLE);
    perm.shuffle(&mut rng);

    let mut points = Vec::with_capacity(fractions.len());
    for &f in fractions {
        let take = (f * n as f64).floor() as usize;
        let mut rows = perm[..take].to_vec();
        rows.sort_unstable();
        let subset = train.select_rows(&rows);
        let model = fit(params, &subset, seed)?;
        let predicted = model.predict(validation)?;
        points.push((f, accuracy_of(val_labels, &predicted)?));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::test_support::labeled_matrix;
    use crate::classifiers::KnnParams;
    use crate::tiering::TierLabel::{A, B, C};
    use rand::Rng;

    #[test]
    fn ten_rows_split_six_two_two() {
        let s = split(10, &[], 1, false).unwrap();
        assert_eq!(s.train.len(), 6);
        assert_eq!(s.validation.len(), 2);
        assert_eq!(s.test.len(), 2);
    }

    #[test]
    fn same_seed_reproduces_the_partition() {
        let a = split(97, &[], 9, false).unwrap();
        let b = split(97, &[], 9, false).unwrap();
        assert_eq!(a, b);
        let c = split(97, &[], 10, false).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn split_is_a_partition() {
        for n in [5usize, 10, 23, 101] {
            let s = split(n, &[], 3, false).unwrap();
            let mut all: Vec<usize> = s
                .train
                .iter()
                .chain(&s.validation)
                .chain(&s.test)
                .copied()
                .collect();
            all.sort_unstable();
            assert_eq!(all, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn minority_classes_land_in_exactly_one_part() {
        let labels = [A, A, A, A, A, A, A, A, B, C];
        let s = split(10, &labels, 7, true).unwrap();
        for minority in [B, C] {
            let idx = labels.iter().position(|&l| l == minority).unwrap();
            let homes = [&s.train, &s.validation, &s.test]
                .iter()
                .filter(|part| part.contains(&idx))
                .count();
            assert_eq!(homes, 1);
        }
        // the majority class still fills every part proportionally
        let a_train = s.train.iter().filter(|&&i| labels[i] == A).count();
        assert!((a_train as f64 - 4.8).abs() <= 1.0);
    }

    #[test]
    fn too_few_rows_is_an_error() {
        assert!(matches!(
            split(4, &[], 0, false),
            Err(Error::TooFewRows { .. })
        ));
    }

    #[test]
    fn stratified_split_keeps_class_proportions_within_one_row() {
        let mut rng = crate::seeding::stream_rng(31, 5);
        for _ in 0..300 {
            let n = rng.gen_range(5..200);
            let labels: Vec<TierLabel> = (0..n).map(|_| TIERS[rng.gen_range(0..3)]).collect();
            let s = split(n, &labels, rng.gen(), true).unwrap();
            for (part, frac) in [(&s.train, 0.6), (&s.validation, 0.2), (&s.test, 0.2)] {
                for tier in TIERS {
                    let class_total = labels.iter().filter(|&&l| l == tier).count();
                    let in_part = part.iter().filter(|&&i| labels[i] == tier).count();
                    let quota = class_total as f64 * frac;
                    assert!(
                        (in_part as f64 - quota).abs() <= 1.0,
                        "n={n} tier={tier} part quota {quota} got {in_part}"
                    );
                }
            }
            // global sizes stay within one of the exact fractions
            for (part, frac) in [(&s.train, 0.6), (&s.validation, 0.2), (&s.test, 0.2)] {
                assert!((part.len() as f64 - frac * n as f64).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn kfold_singletons_when_k_equals_n() {
        let folds = kfold(10, 10, 0).unwrap();
        assert_eq!(folds.len(), 10);
        assert!(folds.iter().all(|f| f.len() == 1));
    }

    #[test]
    fn kfold_balances_the_remainder() {
        let folds = kfold(23, 10, 4).unwrap();
        let mut sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 2, 2, 2, 2, 2, 3, 3, 3]);
    }

    #[test]
    fn kfold_is_a_partition() {
        let folds = kfold(57, 10, 11).unwrap();
        let mut all: Vec<usize> = folds.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..57).collect::<Vec<_>>());
        assert!(matches!(kfold(5, 6, 0), Err(Error::BadFoldCount { .. })));
    }

    #[test]
    fn perfect_predictions_give_a_diagonal_matrix() {
        let v = [A, B, C, A, B];
        let cm = confusion(&v, &v).unwrap();
        assert_eq!(cm.trace(), 5);
        assert_eq!(cm.total(), 5);
        let m = metrics(&cm).unwrap();
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.precision, 1.0);
        assert_eq!(m.recall, 1.0);
        assert_eq!(m.f_measure, 1.0);
    }

    /// Pairs realizing the published Class-1 matrix: rows predicted,
    /// columns actual, counts [[14,2,0],[6,18,0],[2,6,2]].
    pub(crate) fn class1_pairs() -> (Vec<TierLabel>, Vec<TierLabel>) {
        let cells: [(TierLabel, TierLabel, usize); 7] = [
            (A, A, 14),
            (A, B, 2),
            (B, A, 6),
            (B, B, 18),
            (C, A, 2),
            (C, B, 6),
            (C, C, 2),
        ];
        let mut predicted = Vec::new();
        let mut actual = Vec::new();
        for (p, a, count) in cells {
            for _ in 0..count {
                predicted.push(p);
                actual.push(a);
            }
        }
        (predicted, actual)
    }

    #[test]
    fn class1_fixture_tabulates_to_the_published_matrix() {
        let (predicted, actual) = class1_pairs();
        let cm = confusion(&actual, &predicted).unwrap();
        assert_eq!(cm.counts, [[14, 2, 0], [6, 18, 0], [2, 6, 2]]);
        assert_eq!(cm.row_sums(), [16, 24, 10]);
        assert_eq!(cm.col_sums(), [22, 26, 2]);
        assert_eq!(cm.total(), 50);
        let m = metrics(&cm).unwrap();
        assert_eq!(m.accuracy, 34.0 / 50.0);
    }

    #[test]
    fn a_single_pair_lands_in_the_right_cell() {
        let cm = confusion(&[A], &[B]).unwrap();
        assert_eq!(cm.counts[B.index()][A.index()], 1);
        assert_eq!(cm.total(), 1);
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        assert!(matches!(
            confusion(&[A, B], &[A]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(confusion(&[], &[]), Err(Error::EmptyConfusion)));
    }

    #[test]
    fn binary_fixture_matches_the_formula_oracle() {
        let m = EvalMetrics::from_binary_counts(3, 2, 1, 4).unwrap();
        assert!((m.accuracy - 0.5).abs() < 1e-9);
        assert!((m.recall - 3.0 / 7.0).abs() < 1e-9);
        assert!((m.precision - 0.75).abs() < 1e-9);
        assert!((m.f_measure - 0.5454545454545454).abs() < 1e-9);
        assert!(!m.zero_division);
    }

    #[test]
    fn zero_denominators_contribute_zero_and_raise_the_flag() {
        // nothing predicted as A and nothing actually C
        let cm = confusion(&[B, B, A], &[B, C, B]).unwrap();
        let m = metrics(&cm).unwrap();
        assert!(m.zero_division);
        assert!(m.precision >= 0.0 && m.recall >= 0.0);
    }

    #[test]
    fn ovr_counts_always_total_the_matrix() {
        let mut rng = crate::seeding::stream_rng(2, 6);
        for _ in 0..200 {
            let mut cm = ConfusionMatrix::default();
            for p in 0..3 {
                for a in 0..3 {
                    cm.counts[p][a] = rng.gen_range(0..30);
                }
            }
            if cm.total() == 0 {
                continue;
            }
            for tier in TIERS {
                let c = cm.class_counts(tier);
                assert_eq!(c.tp + c.fp + c.fn_ + c.tn, cm.total());
            }
            let m = metrics(&cm).unwrap();
            assert_eq!(m.accuracy, cm.trace() as f64 / cm.total() as f64);
            let lo = m.precision.min(m.recall);
            let hi = m.precision.max(m.recall);
            assert!(m.f_measure >= lo - 1e-12 || m.f_measure == 0.0);
            assert!(m.f_measure <= hi + 1e-12);
        }
    }

    fn toy_matrix(n: usize, seed: u64) -> FeatureMatrix {
        let mut rng = crate::seeding::stream_rng(seed, 77);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.gen(), rng.gen()]).collect();
        let labels: Vec<TierLabel> = rows
            .iter()
            .map(|r| {
                if r[0] > 0.66 {
                    A
                } else if r[0] > 0.33 {
                    B
                } else {
                    C
                }
            })
            .collect();
        labeled_matrix(&["x", "y"], &rows, &labels)
    }

    #[test]
    fn single_config_grid_returns_it_as_best() {
        let train = toy_matrix(40, 1);
        let val = toy_matrix(20, 2);
        let grid = vec![Hyperparams::Knn(KnnParams { k: 3 })];
        let r = grid_search(&grid, &train, &val, 5).unwrap();
        assert_eq!(r.best, 0);
        assert_eq!(r.evaluated.len(), 1);
    }

    #[test]
    fn grid_ties_keep_the_first_configuration() {
        let train = toy_matrix(30, 3);
        let val = toy_matrix(15, 4);
        // identical configs guarantee identical accuracy
        let grid = vec![
            Hyperparams::Knn(KnnParams { k: 3 }),
            Hyperparams::Knn(KnnParams { k: 3 }),
        ];
        let r = grid_search(&grid, &train, &val, 5).unwrap();
        assert_eq!(
            r.evaluated[0].validation_accuracy,
            r.evaluated[1].validation_accuracy
        );
        assert_eq!(r.best, 0);
        assert!(matches!(
            grid_search(&[], &train, &val, 5),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn knn_grid_search_is_reproducible() {
        let train = toy_matrix(60, 6);
        let val = toy_matrix(30, 7);
        let grid: Vec<Hyperparams> = [1usize, 3, 5]
            .iter()
            .map(|&k| Hyperparams::Knn(KnnParams { k }))
            .collect();
        let a = grid_search(&grid, &train, &val, 9).unwrap();
        let b = grid_search(&grid, &train, &val, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn constant_labels_cross_validate_perfectly() {
        let rows: Vec<Vec<f64>> = (0..12).map(|i| vec![i as f64 / 12.0]).collect();
        let m = labeled_matrix(&["x"], &rows, &[B; 12]);
        let stats = cross_validate(&Hyperparams::Knn(KnnParams { k: 1 }), &m, 10, 3).unwrap();
        assert_eq!(stats.accuracy.mean, 1.0);
        assert_eq!(stats.accuracy.std, 0.0);
    }

    #[test]
    fn leave_one_out_runs_one_fold_per_row() {
        let m = toy_matrix(10, 8);
        let stats = cross_validate(&Hyperparams::Knn(KnnParams { k: 1 }), &m, 10, 3).unwrap();
        assert_eq!(stats.per_fold.len(), 10);
    }

    #[test]
    fn cross_validation_is_seed_deterministic() {
        let m = toy_matrix(25, 9);
        let params = Hyperparams::Knn(KnnParams { k: 3 });
        let a = cross_validate(&params, &m, 5, 4).unwrap();
        let b = cross_validate(&params, &m, 5, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn full_fraction_point_equals_a_full_train_fit() {
        let train = toy_matrix(40, 10);
        let val = toy_matrix(20, 11);
        let params = Hyperparams::Knn(KnnParams { k: 3 });
        let curve = learning_curve(&params, &train, &[1.0], &val, 6).unwrap();
        let model = fit(&params, &train, 6).unwrap();
        let full = accuracy_of(val.labels().unwrap(), &model.predict(&val).unwrap()).unwrap();
        assert_eq!(curve, vec![(1.0, full)]);
    }

    #[test]
    fn duplicate_fractions_give_identical_points() {
        let train = toy_matrix(40, 12);
        let val = toy_matrix(20, 13);
        let params = Hyperparams::Knn(KnnParams { k: 1 });
        let curve = learning_curve(&params, &train, &[0.5, 0.5], &val, 2).unwrap();
        assert_eq!(curve[0], curve[1]);
    }

    #[test]
    fn curve_points_stay_in_range() {
        let train = toy_matrix(40, 14);
        let val = toy_matrix(20, 15);
        let params = Hyperparams::Knn(KnnParams { k: 3 });
        let curve = learning_curve(&params, &train, &[0.25, 0.5, 1.0], &val, 2).unwrap();
        assert_eq!(curve.len(), 3);
        for (f, acc) in curve {
            assert!(f > 0.0 && f <= 1.0);
            assert!((0.0..=1.0).contains(&acc));
        }
        assert!(matches!(
            learning_curve(&params, &train, &[], &val, 2),
            Err(Error::EmptyFractions)
        ));
        assert!(matches!(
            learning_curve(&params, &train, &[0.001], &val, 2),
            Err(Error::InvalidFraction { .. })
        ));
        assert!(matches!(
            learning_curve(&params, &train, &[1.5], &val, 2),
            Err(Error::InvalidFraction { .. })
        ));
    }
}
