//! Cohort CSV format.
//!
//! Comma-separated, UTF-8, one student per row, no quoting. The header is
//! fixed and ordered; the trailing `microcomputer` column may be absent for
//! prediction-only cohorts. Missing cells are empty strings; gender cells
//! are `M` or `F`. Floats are written in shortest round-trip form, so
//! write-then-load reproduces a dataset exactly.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::{Dataset, Gender, Provenance, StudentRecord, COURSE_COLUMNS, TARGET_COLUMN};

/// The full 12-column header, as written by [`write_csv`].
pub const CSV_HEADER: &str = "student_id,gender,language,mathematics,english,pe,database,java,computer_network,study_time,attendance,microcomputer";

const COLUMN_NAMES: [&str; 12] = [
    "student_id",
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
    "microcomputer",
];

/// Loads a cohort from `path`. See [`parse_csv`] for the format rules.
pub fn load_csv(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path)?;
    parse_csv(&text)
}

/// Parses cohort CSV text. The header must match the canonical schema
/// exactly, with or without the final `microcomputer` column. Rows are
/// reported 1-based, counting data rows only.
pub fn parse_csv(text: &str) -> Result<Dataset> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    let fields: Vec<&str> = header.split(',').collect();
    let with_target = match fields.len() {
        12 => true,
        11 => false,
        _ => {
            return Err(Error::FieldCount {
                row: 0,
                expected: 12,
                found: fields.len(),
            })
        }
    };
    for (i, (found, expected)) in fields.iter().zip(COLUMN_NAMES).enumerate() {
        if *found != expected {
            return Err(Error::HeaderMismatch {
                position: i + 1,
                expected: expected.to_string(),
                found: found.to_string(),
            });
        }
    }

    let expected_fields = if with_target { 12 } else { 11 };
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = i + 1;
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != expected_fields {
            return Err(Error::FieldCount {
                row,
                expected: expected_fields,
                found: cells.len(),
            });
        }
        let student_id = cells[0].to_string();
        if student_id.is_empty() {
            return Err(Error::EmptyId { row });
        }
        let gender = match cells[1] {
            "M" => Gender::Male,
            "F" => Gender::Female,
            other => {
                return Err(Error::UnparsableCell {
                    row,
                    column: "gender".to_string(),
                    cell: other.to_string(),
                    expected: "`M` or `F`",
                })
            }
        };
        let mut scores = [None; 7];
        for (slot, (cell, column)) in scores
            .iter_mut()
            .zip(cells[2..9].iter().zip(COURSE_COLUMNS))
        {
            *slot = parse_score(cell, row, column, 0.0, 100.0)?;
        }
        let study_time = parse_nonneg_float(cells[9], row, "study_time")?;
        let attendance = parse_count(cells[10], row, "attendance")?;
        let microcomputer = if with_target {
            parse_score(cells[11], row, TARGET_COLUMN, 0.0, 100.0)?
        } else {
            None
        };
        records.push(StudentRecord {
            student_id,
            gender,
            language: scores[0],
            mathematics: scores[1],
            english: scores[2],
            pe: scores[3],
            database: scores[4],
            java: scores[5],
            computer_network: scores[6],
            study_time,
            attendance,
            microcomputer,
        });
    }
    Dataset::new(records, Provenance::Loaded)
}

fn parse_score(cell: &str, row: usize, column: &str, min: f64, max: f64) -> Result<Option<f64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    let value: f64 = cell.parse().map_err(|_| Error::UnparsableCell {
        row,
        column: column.to_string(),
        cell: cell.to_string(),
        expected: "a number",
    })?;
    if !value.is_finite() || !(min..=max).contains(&value) {
        return Err(Error::OutOfRange {
            row,
            column: column.to_string(),
            value,
            min,
            max,
        });
    }
    Ok(Some(value))
}

fn parse_nonneg_float(cell: &str, row: usize, column: &str) -> Result<Option<f64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    let value: f64 = cell.parse().map_err(|_| Error::UnparsableCell {
        row,
        column: column.to_string(),
        cell: cell.to_string(),
        expected: "a number",
    })?;
    if !value.is_finite() || value < 0.0 {
        return Err(Error::OutOfRange {
            row,
            column: column.to_string(),
            value,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    Ok(Some(value))
}

fn parse_count(cell: &str, row: usize, column: &str) -> Result<Option<u32>> {
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse::<u32>()
        .map(Some)
        .map_err(|_| Error::UnparsableCell {
            row,
            column: column.to_string(),
            cell: cell.to_string(),
            expected: "a non-negative integer",
        })
}

/// Renders a cohort in the canonical 12-column layout. Ids may not contain
/// commas, quotes, or line breaks (the format does no quoting).
pub fn write_csv_string(ds: &Dataset) -> Result<String> {
    let mut out = String::with_capacity(64 * (ds.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in ds.records() {
        if r.student_id
            .contains(|c| c == ',' || c == '"' || c == '\n' || c == '\r')
        {
            return Err(Error::UnwritableId {
                id: r.student_id.clone(),
            });
        }
        out.push_str(&r.student_id);
        out.push(',');
        out.push_str(r.gender.as_code());
        for score in [
            r.language,
            r.mathematics,
            r.english,
            r.pe,
            r.database,
            r.java,
            r.computer_network,
            r.study_time,
        ] {
            out.push(',');
            if let Some(v) = score {
                out.push_str(&format_float(v));
            }
        }
        out.push(',');
        if let Some(n) = r.attendance {
            out.push_str(&n.to_string());
        }
        out.push(',');
        if let Some(v) = r.microcomputer {
            out.push_str(&format_float(v));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes a cohort to `path`; see [`write_csv_string`].
pub fn write_csv(ds: &Dataset, path: &Path) -> Result<()> {
    let text = write_csv_string(ds)?;
    std::fs::write(path, text)?;
    Ok(())
}

fn format_float(v: f64) -> String {
    // shortest round-trip representation; parses back to the same bits
    format!("{v}")
}
