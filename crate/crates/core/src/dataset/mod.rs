//! Student cohort schema, CSV ingestion, and synthetic cohorts.
//!
//! A [`Dataset`] is an ordered, immutable sequence of [`StudentRecord`]s
//! with unique ids. Cohorts come from CSV files ([`load_csv`]) or from the
//! seeded generator ([`generate_synthetic`]).

mod csv;
mod generator;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use csv::{load_csv, parse_csv, write_csv, write_csv_string, CSV_HEADER};
pub use generator::{generate_synthetic, ColumnWeights, GeneratorConfig, TargetWeights};

/// Score columns plus the behavioral numerics, in canonical file order.
/// Gender is handled separately (categorical); `microcomputer` is the target.
pub const NUMERIC_COLUMNS: [&str; 10] = [
    "language",
    "mathematics",
    "english",
    "pe",
    "database",
    "java",
    "computer_network",
    "study_time",
    "attendance",
    "microcomputer",
];

/// Every observable (non-target) column, in canonical file order.
pub const OBSERVABLE_COLUMNS: [&str; 10] = [
    "gender",
    "language",
    "mathematics",
    "english",
    "pe",
    "database",
    "java",
    "computer_network",
    "study_time",
    "attendance",
];

pub const TARGET_COLUMN: &str = "microcomputer";

/// The seven course-score columns (values in [0, 100]).
pub const COURSE_COLUMNS: [&str; 7] = [
    "language",
    "mathematics",
    "english",
    "pe",
    "database",
    "java",
    "computer_network",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gender {
    Male,
    Female,
}

impl Gender {
    pub fn as_code(self) -> &'static str {
        match self {
            Gender::Male => "M",
            Gender::Female => "F",
        }
    }

    /// Numeric coding used for correlation analysis: male 0, female 1.
    pub fn as_numeric(self) -> f64 {
        match self {
            Gender::Male => 0.0,
            Gender::Female => 1.0,
        }
    }
}

/// One student's raw attributes. Scores live in [0, 100]; `study_time` is
/// weekly after-class hours; `attendance` counts late arrivals (higher is
/// worse). Any of them may be missing. `microcomputer` is the target score
/// and is absent for prediction-only records.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudentRecord {
    pub student_id: String,
    pub gender: Gender,
    pub language: Option<f64>,
    pub mathematics: Option<f64>,
    pub english: Option<f64>,
    pub pe: Option<f64>,
    pub database: Option<f64>,
    pub java: Option<f64>,
    pub computer_network: Option<f64>,
    pub study_time: Option<f64>,
    pub attendance: Option<u32>,
    pub microcomputer: Option<f64>,
}

impl StudentRecord {
    /// Numeric view of a column by name; gender maps to its 0/1 coding and
    /// attendance to a float count.
    pub fn numeric_value(&self, column: &str) -> Result<Option<f64>> {
        Ok(match column {
            "gender" => Some(self.gender.as_numeric()),
            "language" => self.language,
            "mathematics" => self.mathematics,
            "english" => self.english,
            "pe" => self.pe,
            "database" => self.database,
            "java" => self.java,
            "computer_network" => self.computer_network,
            "study_time" => self.study_time,
            "attendance" => self.attendance.map(f64::from),
            "microcomputer" => self.microcomputer,
            other => {
                return Err(Error::UnknownColumn {
                    name: other.to_string(),
                })
            }
        })
    }
}

/// Where a dataset came from. Synthetic cohorts remember the seed and a
/// digest of the generating config so provenance survives in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Loaded,
    Synthetic { seed: u64, config_digest: String },
}

/// An ordered student cohort with unique ids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    records: Vec<StudentRecord>,
    provenance: Provenance,
}

impl Dataset {
    /// Builds a cohort from records, rejecting duplicate or empty ids.
    pub fn new(records: Vec<StudentRecord>, provenance: Provenance) -> Result<Dataset> {
        let mut seen = HashSet::new();
        for (i, r) in records.iter().enumerate() {
            if r.student_id.is_empty() {
                return Err(Error::EmptyId { row: i + 1 });
            }
            if !seen.insert(r.student_id.as_str()) {
                return Err(Error::DuplicateId {
                    id: r.student_id.clone(),
                });
            }
        }
        Ok(Dataset {
            records,
            provenance,
        })
    }

    pub fn records(&self) -> &[StudentRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// New cohort holding the rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            records: indices.iter().map(|&i| self.records[i].clone()).collect(),
            provenance: self.provenance.clone(),
        }
    }
}

/// A range or duplicate-id violation found by [`validate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub row: usize,
    pub column: String,
    pub detail: String,
}

/// Data-quality report: per-column missing counts plus any invariant
/// violations. Producing the report never fails; problems are listed.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// (column, missing count) for every column with at least one hole.
    pub missing: Vec<(String, usize)>,
    pub range_violations: Vec<Finding>,
    pub duplicate_ids: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.missing.iter().all(|(_, n)| *n == 0)
            && self.range_violations.is_empty()
            && self.duplicate_ids.is_empty()
    }

    pub fn missing_count(&self, column: &str) -> usize {
        self.missing
            .iter()
            .find(|(c, _)| c == column)
            .map(|(_, n)| *n)
            .unwrap_or(0)
    }
}

/// Checks every record against the schema invariants. Rows are numbered
/// from 1 in report findings.
pub fn validate(ds: &Dataset) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut missing: Vec<(String, usize)> = Vec::new();
    let mut seen: HashSet<&str> = HashSet::new();
    let mut duplicates: Vec<String> = Vec::new();

    for column in NUMERIC_COLUMNS {
        let mut holes = 0;
        for (i, r) in ds.records.iter().enumerate() {
            let row = i + 1;
            match r.numeric_value(column).expect("known column") {
                None => holes += 1,
                Some(v) => {
                    let bounds = column_bounds(column);
                    if let Some((min, max)) = bounds {
                        if !(min..=max).contains(&v) {
                            report.range_violations.push(Finding {
                                row,
                                column: column.to_string(),
                                detail: format!("value {v} outside [{min}, {max}]"),
                            });
                        }
                    } else if v < 0.0 {
                        report.range_violations.push(Finding {
                            row,
                            column: column.to_string(),
                            detail: format!("value {v} is negative"),
                        });
                    }
                }
            }
        }
        if holes > 0 {
            missing.push((column.to_string(), holes));
        }
    }

    for r in &ds.records {
        if !seen.insert(r.student_id.as_str()) && !duplicates.contains(&r.student_id) {
            duplicates.push(r.student_id.clone());
        }
    }

    report.missing = missing;
    report.duplicate_ids = duplicates;
    report
}

/// [0, 100] for score columns; open-ended columns return `None`.
fn column_bounds(column: &str) -> Option<(f64, f64)> {
    if COURSE_COLUMNS.contains(&column) || column == TARGET_COLUMN {
        Some((0.0, 100.0))
    } else {
        None
    }
}
