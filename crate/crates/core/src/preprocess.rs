//! Cleaning and transformation: mean imputation, gender one-hot encoding,
//! and min-max normalization to [0, 1].
//!
//! Transform parameters are fitted once (on training rows) and re-applied
//! to later cohorts, so validation and test data never leak into the
//! fitted statistics. Values outside the fitted range clip to [0, 1].

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Gender, StudentRecord};
use crate::error::{Error, Result};
use crate::tiering::{TierLabel, TierThresholds};

/// Numeric matrix with named columns and rows aligned to student ids.
/// Entries are finite; after normalization they lie in [0, 1].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    column_names: Vec<String>,
    row_ids: Vec<String>,
    values: Vec<f64>,
    labels: Option<Vec<TierLabel>>,
}

impl FeatureMatrix {
    pub fn new(column_names: Vec<String>, row_ids: Vec<String>, values: Vec<f64>) -> FeatureMatrix {
        assert_eq!(values.len(), column_names.len() * row_ids.len());
        FeatureMatrix {
            column_names,
            row_ids,
            values,
            labels: None,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn n_cols(&self) -> usize {
        self.column_names.len()
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.n_cols();
        &self.values[i * w..(i + 1) * w]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_cols() + col]
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.column_names.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self.column_index(name).ok_or_else(|| Error::UnknownColumn {
            name: name.to_string(),
        })?;
        Ok((0..self.n_rows()).map(|r| self.get(r, idx)).collect())
    }

    pub fn labels(&self) -> Option<&[TierLabel]> {
        self.labels.as_deref()
    }

    /// Attaches one label per row.
    pub fn with_labels(mut self, labels: Vec<TierLabel>) -> Result<FeatureMatrix> {
        if labels.len() != self.n_rows() {
            return Err(Error::LabelMismatch {
                reason: format!("{} labels for {} rows", labels.len(), self.n_rows()),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Projection onto `names`, in the given order. Labels carry over.
    pub fn select_columns(&self, names: &[String]) -> Result<FeatureMatrix> {
        let indices: Vec<usize> = names
            .iter()
            .map(|n| {
                self.column_index(n).ok_or_else(|| Error::UnknownColumn {
                    name: n.to_string(),
                })
            })
            .collect::<Result<_>>()?;
        let mut values = Vec::with_capacity(self.n_rows() * indices.len());
        for r in 0..self.n_rows() {
            values.extend(indices.iter().map(|&c| self.get(r, c)));
        }
        Ok(FeatureMatrix {
            column_names: names.to_vec(),
            row_ids: self.row_ids.clone(),
            values,
            labels: self.labels.clone(),
        })
    }

    /// Rows at `indices`, preserving the given order. Labels carry over.
    pub fn select_rows(&self, indices: &[usize]) -> FeatureMatrix {
        let mut values = Vec::with_capacity(indices.len() * self.n_cols());
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        FeatureMatrix {
            column_names: self.column_names.clone(),
            row_ids: indices.iter().map(|&i| self.row_ids[i].clone()).collect(),
            values,
            labels: self
                .labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i]).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct ColumnStats {
    name: String,
    mean: f64,
    min: f64,
    max: f64,
}

/// Fitted preprocessing parameters: imputation means and normalization
/// ranges per numeric column, plus the fixed gender encoding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedTransform {
    source_columns: Vec<String>,
    stats: Vec<ColumnStats>,
    output_columns: Vec<String>,
    /// Code -> one-hot row, e.g. `M -> (1, 0)`, `F -> (0, 1)`.
    gender_encoding: Vec<(String, [f64; 2])>,
    warnings: Vec<String>,
}

pub const GENDER_ONE_HOT_COLUMNS: [&str; 2] = ["gender_m", "gender_f"];

impl FittedTransform {
    pub fn source_columns(&self) -> &[String] {
        &self.source_columns
    }

    pub fn output_columns(&self) -> &[String] {
        &self.output_columns
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Output columns produced by source column `name` (gender expands to
    /// its two one-hot columns).
    pub fn expand_column(&self, name: &str) -> Vec<String> {
        if name == "gender" && self.source_columns.iter().any(|c| c == "gender") {
            GENDER_ONE_HOT_COLUMNS.map(str::to_string).to_vec()
        } else {
            vec![name.to_string()]
        }
    }
}

/// Fits imputation and normalization on `ds` and returns the transform with
/// the transformed matrix.
///
/// Each numeric column needs at least one non-missing value; its mean fills
/// the holes and its observed min/max define the [0, 1] scaling. A constant
/// column maps to all zeros and is recorded as a warning on the transform.
pub fn fit_transform(ds: &Dataset, columns: &[&str]) -> Result<(FittedTransform, FeatureMatrix)> {
    let mut stats = Vec::new();
    let mut output_columns = Vec::new();
    let mut warnings = Vec::new();
    for &column in columns {
        if column == "gender" {
            output_columns.extend(GENDER_ONE_HOT_COLUMNS.map(str::to_string));
            continue;
        }
        let mut sum = 0.0;
        let mut count = 0usize;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for r in ds.records() {
            if let Some(v) = r.numeric_value(column)? {
                sum += v;
                count += 1;
                min = min.min(v);
                max = max.max(v);
            }
        }
        if count == 0 {
            return Err(Error::EmptyColumn {
                name: column.to_string(),
            });
        }
        if min == max {
            warnings.push(format!("column `{column}` is constant; normalized to 0"));
        }
        stats.push(ColumnStats {
            name: column.to_string(),
            mean: sum / count as f64,
            min,
            max,
        });
        output_columns.push(column.to_string());
    }
    let transform = FittedTransform {
        source_columns: columns.iter().map(|c| c.to_string()).collect(),
        stats,
        output_columns,
        gender_encoding: vec![
            ("M".to_string(), [1.0, 0.0]),
            ("F".to_string(), [0.0, 1.0]),
        ],
        warnings,
    };
    let matrix = apply_transform(&transform, ds)?;
    Ok((transform, matrix))
}

/// Applies a fitted transform to a (possibly different) cohort. Imputation
/// uses the stored means, scaling the stored ranges; values outside the
/// fitted range clip to [0, 1].
pub fn apply_transform(t: &FittedTransform, ds: &Dataset) -> Result<FeatureMatrix> {
    let mut values = Vec::with_capacity(ds.len() * t.output_columns.len());
    let mut row_ids = Vec::with_capacity(ds.len());
    for r in ds.records() {
        row_ids.push(r.student_id.clone());
        let mut stat_idx = 0;
        for column in &t.source_columns {
            if column == "gender" {
                values.extend(one_hot(t, r.gender));
                continue;
            }
            let stat = &t.stats[stat_idx];
            stat_idx += 1;
            debug_assert_eq!(&stat.name, column);
            let raw = r.numeric_value(column)?.unwrap_or(stat.mean);
            values.push(normalize(raw, stat));
        }
    }
    Ok(FeatureMatrix::new(
        t.output_columns.clone(),
        row_ids,
        values,
    ))
}

fn one_hot(t: &FittedTransform, gender: Gender) -> [f64; 2] {
    let code = gender.as_code();
    t.gender_encoding
        .iter()
        .find(|(c, _)| c == code)
        .map(|(_, row)| *row)
        .expect("gender code in encoding map")
}

fn normalize(v: f64, stat: &ColumnStats) -> f64 {
    if stat.max == stat.min {
        0.0
    } else {
        ((v - stat.min) / (stat.max - stat.min)).clamp(0.0, 1.0)
    }
}

/// Tier label per record from its target score; every record must carry one.
pub fn derive_labels(ds: &Dataset, thresholds: &TierThresholds) -> Result<Vec<TierLabel>> {
    ds.records().iter().map(|r| label_for(r, thresholds)).collect()
}

fn label_for(r: &StudentRecord, thresholds: &TierThresholds) -> Result<TierLabel> {
    let score = r.microcomputer.ok_or_else(|| Error::MissingTarget {
        id: r.student_id.clone(),
    })?;
    thresholds.assign(score)
}
