//! Pearson correlation analysis and threshold feature selection.

mod heatmap;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, OBSERVABLE_COLUMNS, TARGET_COLUMN};
use crate::error::{Error, Result};
use crate::preprocess::FeatureMatrix;

pub use heatmap::{emit_heatmap, ramp_color};

/// Pearson product-moment correlation of two equal-length vectors.
///
/// Both vectors need at least two entries and nonzero variance. The result
/// is clamped into [-1, 1] against rounding spill.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewRows {
            required: 2,
            found: x.len(),
        });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 {
        return Err(Error::ConstantColumn {
            name: "x".to_string(),
        });
    }
    if syy == 0.0 {
        return Err(Error::ConstantColumn {
            name: "y".to_string(),
        });
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Symmetric matrix of pairwise correlations with a unit diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    columns: Vec<String>,
    /// Row-major k*k entries in [-1, 1].
    values: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn size(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.size() + j]
    }

    pub fn by_name(&self, a: &str, b: &str) -> Result<f64> {
        let i = self.index_of(a)?;
        let j = self.index_of(b)?;
        Ok(self.get(i, j))
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownColumn {
                name: name.to_string(),
            })
    }
}

/// Correlation matrix plus the constant columns that had to be left out.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationAnalysis {
    pub matrix: CorrelationMatrix,
    pub excluded_constant: Vec<String>,
}

/// Pairwise correlations over every column of `m`. Constant columns are
/// excluded and reported; fewer than two rows is an error.
pub fn correlation_matrix(m: &FeatureMatrix) -> Result<CorrelationAnalysis> {
    if m.n_rows() < 2 {
        return Err(Error::TooFewRows {
            required: 2,
            found: m.n_rows(),
        });
    }
    let mut usable = Vec::new();
    let mut excluded = Vec::new();
    let mut columns_data: Vec<Vec<f64>> = Vec::new();
    for name in m.column_names() {
        let col = m.column(name)?;
        let constant = col.iter().all(|&v| v == col[0]);
        if constant {
            excluded.push(name.clone());
        } else {
            usable.push(name.clone());
            columns_data.push(col);
        }
    }
    let k = usable.len();
    let mut values = vec![0.0; k * k];
    for i in 0..k {
        values[i * k + i] = 1.0;
        for j in (i + 1)..k {
            let r = pearson(&columns_data[i], &columns_data[j])?;
            values[i * k + j] = r;
            values[j * k + i] = r;
        }
    }
    Ok(CorrelationAnalysis {
        matrix: CorrelationMatrix {
            columns: usable,
            values,
        },
        excluded_constant: excluded,
    })
}

/// Outcome of threshold selection against the target column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Selected columns with their correlation against the target, ordered
    /// by descending |r| and then name (override lists keep their order).
    pub selected: Vec<(String, f64)>,
    pub threshold: f64,
    pub target: String,
}

impl SelectionResult {
    pub fn names(&self) -> Vec<String> {
        self.selected.iter().map(|(n, _)| n.clone()).collect()
    }
}

/// Keeps the columns whose |r| against `target` reaches `threshold`. An
/// explicit `override_list` bypasses the threshold and is returned verbatim
/// with its correlation values.
pub fn select_features(
    cm: &CorrelationMatrix,
    target: &str,
    threshold: f64,
    override_list: Option<&[String]>,
) -> Result<SelectionResult> {
    if !cm.columns().iter().any(|c| c == target) {
        return Err(Error::UnknownTarget {
            name: target.to_string(),
        });
    }
    let selected = match override_list {
        Some(names) => names
            .iter()
            .map(|name| Ok((name.clone(), cm.by_name(name, target)?)))
            .collect::<Result<Vec<_>>>()?,
        None => {
            let mut picked: Vec<(String, f64)> = cm
                .columns()
                .iter()
                .filter(|c| c.as_str() != target)
                .map(|c| (c.clone(), cm.by_name(c, target).expect("column present")))
                .filter(|(_, r)| r.abs() >= threshold)
                .collect();
            picked.sort_by(|a, b| {
                b.1.abs()
                    .partial_cmp(&a.1.abs())
                    .expect("finite r")
                    .then_with(|| a.0.cmp(&b.0))
            });
            picked
        }
    };
    Ok(SelectionResult {
        selected,
        threshold,
        target: target.to_string(),
    })
}

/// Mean-imputed numeric view of a cohort for correlation analysis: gender
/// as its 0/1 coding, every numeric observable, and the target when any
/// record carries one. Columns with no values at all are dropped and
/// returned alongside the matrix.
pub fn analysis_matrix(ds: &Dataset) -> Result<(FeatureMatrix, Vec<String>)> {
    let mut names: Vec<&str> = OBSERVABLE_COLUMNS.to_vec();
    if ds.records().iter().any(|r| r.microcomputer.is_some()) {
        names.push(TARGET_COLUMN);
    }
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for name in names {
        let raw: Vec<Option<f64>> = ds
            .records()
            .iter()
            .map(|r| r.numeric_value(name))
            .collect::<Result<_>>()?;
        let present: Vec<f64> = raw.iter().flatten().copied().collect();
        if present.is_empty() {
            dropped.push(name.to_string());
            continue;
        }
        let mean = present.iter().sum::<f64>() / present.len() as f64;
        columns.push(raw.into_iter().map(|v| v.unwrap_or(mean)).collect());
        kept.push(name.to_string());
    }
    let n_rows = ds.len();
    let mut values = Vec::with_capacity(n_rows * kept.len());
    for row in 0..n_rows {
        values.extend(columns.iter().map(|c| c[row]));
    }
    let ids = ds.records().iter().map(|r| r.student_id.clone()).collect();
    Ok((FeatureMatrix::new(kept, ids, values), dropped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_synthetic, GeneratorConfig};

    /// One-pass raw-sums form of the product-moment formula; algebraically
    /// equal to `pearson` but computed by a different route.
    fn pearson_oracle(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let sx: f64 = x.iter().sum();
        let sy: f64 = y.iter().sum();
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        let sxx: f64 = x.iter().map(|a| a * a).sum();
        let syy: f64 = y.iter().map(|b| b * b).sum();
        (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
    }

    #[test]
    fn self_correlation_is_one() {
        let x = [1.0, 2.0, 5.0, 3.0];
        assert_eq!(pearson(&x, &x).unwrap(), 1.0);
    }

    #[test]
    fn negation_gives_minus_one() {
        let x = [1.0, 2.0, 5.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(pearson(&x, &y).unwrap(), -1.0);
    }

    #[test]
    fn small_fixture_matches_the_product_moment_formula() {
        let x = [1.0, 2.0, 3.0];
        let y = [2.0, 4.0, 7.0];
        let r = pearson(&x, &y).unwrap();
        assert!((r - 0.993399267798783).abs() < 1e-6);
        assert!((r - pearson_oracle(&x, &y)).abs() < 1e-6);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            pearson(&[1.0], &[1.0]),
            Err(Error::TooFewRows { .. })
        ));
        assert!(matches!(
            pearson(&[2.0, 2.0], &[1.0, 3.0]),
            Err(Error::ConstantColumn { name }) if name == "x"
        ));
        assert!(matches!(
            pearson(&[1.0, 3.0], &[5.0, 5.0]),
            Err(Error::ConstantColumn { name }) if name == "y"
        ));
    }

    fn matrix(names: &[&str], rows: &[&[f64]]) -> FeatureMatrix {
        let values: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        FeatureMatrix::new(
            names.iter().map(|s| s.to_string()).collect(),
            (0..rows.len()).map(|i| format!("r{i}")).collect(),
            values,
        )
    }

    #[test]
    fn identical_columns_correlate_at_one() {
        let m = matrix(&["a", "b"], &[&[1.0, 1.0], &[2.0, 2.0], &[5.0, 5.0]]);
        let out = correlation_matrix(&m).unwrap();
        assert_eq!(out.matrix.by_name("a", "b").unwrap(), 1.0);
    }

    #[test]
    fn matrix_is_square_with_unit_diagonal() {
        let m = matrix(
            &["a", "b", "c"],
            &[&[1.0, 5.0, 2.0], &[2.0, 4.0, 2.5], &[3.0, 9.0, 1.0]],
        );
        let out = correlation_matrix(&m).unwrap().matrix;
        assert_eq!(out.size(), 3);
        for i in 0..3 {
            assert_eq!(out.get(i, i), 1.0);
            for j in 0..3 {
                assert_eq!(out.get(i, j), out.get(j, i));
                assert!(out.get(i, j).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn constant_columns_are_excluded_not_fatal() {
        let m = matrix(&["a", "k"], &[&[1.0, 7.0], &[2.0, 7.0], &[3.0, 7.0]]);
        let out = correlation_matrix(&m).unwrap();
        assert_eq!(out.excluded_constant, vec!["k".to_string()]);
        assert_eq!(out.matrix.columns(), ["a"]);
    }

    #[test]
    fn one_row_is_too_few() {
        let m = matrix(&["a", "b"], &[&[1.0, 2.0]]);
        assert!(matches!(
            correlation_matrix(&m),
            Err(Error::TooFewRows { .. })
        ));
    }

    #[test]
    fn default_cohort_correlations_mirror_the_feature_study() {
        let ds = generate_synthetic(&GeneratorConfig::default()).unwrap();
        let (m, dropped) = analysis_matrix(&ds).unwrap();
        assert!(dropped.is_empty());
        let cm = correlation_matrix(&m).unwrap().matrix;
        assert!(cm.by_name("java", "microcomputer").unwrap() >= 0.6);
        assert!(cm.by_name("attendance", "microcomputer").unwrap() < 0.0);
    }

    #[test]
    fn threshold_selection_keeps_the_six_study_features() {
        let ds = generate_synthetic(&GeneratorConfig::default()).unwrap();
        let (m, _) = analysis_matrix(&ds).unwrap();
        let cm = correlation_matrix(&m).unwrap().matrix;
        let sel = select_features(&cm, "microcomputer", 0.3, None).unwrap();
        let mut names = sel.names();
        names.sort();
        assert_eq!(
            names,
            vec![
                "attendance",
                "computer_network",
                "database",
                "java",
                "mathematics",
                "study_time"
            ]
        );
    }

    #[test]
    fn impossible_threshold_selects_nothing() {
        let m = matrix(
            &["a", "t"],
            &[&[1.0, 5.0], &[2.0, 4.5], &[3.0, 9.0], &[0.5, 2.0]],
        );
        let cm = correlation_matrix(&m).unwrap().matrix;
        let sel = select_features(&cm, "t", 1.0, None).unwrap();
        assert!(sel.selected.is_empty());
    }

    #[test]
    fn override_returns_exactly_the_requested_columns() {
        let ds = generate_synthetic(&GeneratorConfig {
            n: 200,
            ..GeneratorConfig::default()
        })
        .unwrap();
        let (m, _) = analysis_matrix(&ds).unwrap();
        let cm = correlation_matrix(&m).unwrap().matrix;
        let wanted = vec!["java".to_string()];
        let sel = select_features(&cm, "microcomputer", 0.3, Some(&wanted)).unwrap();
        assert_eq!(sel.names(), wanted);
        assert_eq!(
            sel.selected[0].1,
            cm.by_name("java", "microcomputer").unwrap()
        );
        assert!(matches!(
            select_features(&cm, "microcomputer", 0.3, Some(&["nope".to_string()])),
            Err(Error::UnknownColumn { .. })
        ));
    }

    #[test]
    fn unknown_target_is_rejected() {
        let m = matrix(&["a", "b"], &[&[1.0, 2.0], &[2.0, 1.0]]);
        let cm = correlation_matrix(&m).unwrap().matrix;
        assert!(matches!(
            select_features(&cm, "zzz", 0.3, None),
            Err(Error::UnknownTarget { .. })
        ));
    }

    #[test]
    fn selection_is_invariant_to_column_order() {
        let rows_a: &[&[f64]] = &[
            &[1.0, 9.0, 4.0, 10.0],
            &[2.0, 7.5, 1.0, 12.0],
            &[3.0, 5.0, 3.0, 18.0],
            &[4.0, 4.5, 2.0, 20.0],
        ];
        let m1 = matrix(&["a", "b", "c", "t"], rows_a);
        let rows_b: &[&[f64]] = &[
            &[10.0, 4.0, 9.0, 1.0],
            &[12.0, 1.0, 7.5, 2.0],
            &[18.0, 3.0, 5.0, 3.0],
            &[20.0, 2.0, 4.5, 4.0],
        ];
        let m2 = matrix(&["t", "c", "b", "a"], rows_b);
        let s1 = select_features(&correlation_matrix(&m1).unwrap().matrix, "t", 0.3, None).unwrap();
        let s2 = select_features(&correlation_matrix(&m2).unwrap().matrix, "t", 0.3, None).unwrap();
        assert_eq!(s1.names(), s2.names());
    }
}
