//! Tier assignment and reporting.
//!
//! Scores in [0, 100] map onto three levels: A for 80 and above, B for
//! [60, 80), C for below 60. This module owns the tier type, the per-level
//! instruction plans, the predicted-vs-actual cohort comparison, and the
//! questionnaire tally.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::ConfusionMatrix;

/// Student performance level. `A` is the strongest tier.
///
/// The enum order (A, B, C) doubles as the deterministic tie-break order
/// used throughout the crate: whenever votes, posteriors, or scores tie,
/// the earliest tier in this order wins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TierLabel {
    A,
    B,
    C,
}

/// All tiers, in fixed (A, B, C) order.
pub const TIERS: [TierLabel; 3] = [TierLabel::A, TierLabel::B, TierLabel::C];

impl TierLabel {
    /// Position in the fixed (A, B, C) order.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<TierLabel> {
        TIERS.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TierLabel::A => "A",
            TierLabel::B => "B",
            TierLabel::C => "C",
        }
    }

    pub fn parse(s: &str) -> Option<TierLabel> {
        match s.trim() {
            "A" | "a" => Some(TierLabel::A),
            "B" | "b" => Some(TierLabel::B),
            "C" | "c" => Some(TierLabel::C),
            _ => None,
        }
    }
}

impl fmt::Display for TierLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Score cut points defining the tiers. `a_min` and `b_min` partition
/// [0, 100] into A = [a_min, 100], B = [b_min, a_min), C = [0, b_min).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TierThresholds {
    pub a_min: f64,
    pub b_min: f64,
}

impl Default for TierThresholds {
    fn default() -> Self {
        TierThresholds {
            a_min: 80.0,
            b_min: 60.0,
        }
    }
}

impl TierThresholds {
    /// Tier for `score`. Errors when the score falls outside [0, 100].
    pub fn assign(&self, score: f64) -> Result<TierLabel> {
        if !(0.0..=100.0).contains(&score) {
            return Err(Error::ScoreOutOfRange { score });
        }
        Ok(if score >= self.a_min {
            TierLabel::A
        } else if score >= self.b_min {
            TierLabel::B
        } else {
            TierLabel::C
        })
    }
}

/// Tier for `score` under the standard 80/60 cut points.
pub fn assign_tier(score: f64) -> Result<TierLabel> {
    TierThresholds::default().assign(score)
}

/// One level's teaching objective, content, and assignment texts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TierPlan {
    pub level: TierLabel,
    pub objective: String,
    pub content: String,
    pub assignment: String,
}

impl TierPlan {
    /// Plain-text rendering, one block per field.
    pub fn render(&self) -> String {
        format!(
            "Level {}\n\nTeaching objective:\n{}\n\nTeaching content:\n{}\n\nAssignment:\n{}\n",
            self.level, self.objective, self.content, self.assignment
        )
    }
}

#[derive(Clone, Debug, Deserialize)]
struct PlanEntry {
    objective: String,
    content: String,
    assignment: String,
}

/// The per-level plan template set, loaded from a TOML document with one
/// `[A]`/`[B]`/`[C]` table each carrying `objective`, `content`, and
/// `assignment` strings.
#[derive(Clone, Debug)]
pub struct PlanTemplates {
    plans: [TierPlan; 3],
}

const BUILTIN_PLANS: &str = include_str!("../templates/tier_plans.toml");

impl PlanTemplates {
    /// The template set shipped with the crate.
    pub fn builtin() -> PlanTemplates {
        Self::from_toml(BUILTIN_PLANS).expect("builtin plan templates are valid")
    }

    pub fn from_toml(doc: &str) -> Result<PlanTemplates> {
        let raw: BTreeMap<String, PlanEntry> =
            toml::from_str(doc).map_err(|e| Error::BadPlanTemplate {
                reason: e.to_string(),
            })?;
        let mut plans = Vec::with_capacity(3);
        for level in TIERS {
            let entry = raw.get(level.as_str()).ok_or(Error::BadPlanTemplate {
                reason: format!("missing level {level}"),
            })?;
            for (field, text) in [
                ("objective", &entry.objective),
                ("content", &entry.content),
                ("assignment", &entry.assignment),
            ] {
                if text.trim().is_empty() {
                    return Err(Error::BadPlanTemplate {
                        reason: format!("level {level}: empty {field}"),
                    });
                }
            }
            plans.push(TierPlan {
                level,
                objective: entry.objective.clone(),
                content: entry.content.clone(),
                assignment: entry.assignment.clone(),
            });
        }
        Ok(PlanTemplates {
            plans: plans.try_into().expect("three levels"),
        })
    }

    pub fn plan(&self, level: TierLabel) -> &TierPlan {
        &self.plans[level.index()]
    }
}

/// Plan for `level` from the built-in template set.
pub fn generate_plan(level: TierLabel) -> TierPlan {
    PlanTemplates::builtin().plan(level).clone()
}

/// Per-tier counts with integer percentages that always total 100.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TierBreakdown {
    pub counts: [usize; 3],
    pub percentages: [u32; 3],
}

impl TierBreakdown {
    /// Tallies a label vector and derives percentages.
    ///
    /// Each percentage is 100*count/total rounded half-up; the tier with the
    /// largest count (earliest tier on ties) is then set to 100 minus the
    /// others so the row always totals exactly 100.
    pub fn from_labels(labels: &[TierLabel]) -> TierBreakdown {
        let mut counts = [0usize; 3];
        for &l in labels {
            counts[l.index()] += 1;
        }
        TierBreakdown {
            counts,
            percentages: percentages_totaling_100(&counts),
        }
    }
}

fn percentages_totaling_100(counts: &[usize; 3]) -> [u32; 3] {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return [0, 0, 0];
    }
    let mut pct = [0u32; 3];
    for (p, &c) in pct.iter_mut().zip(counts) {
        // round half-up on an exact rational: floor((200c + total) / (2 total))
        *p = ((200 * c + total) / (2 * total)) as u32;
    }
    let largest = (0..3)
        .max_by(|&i, &j| counts[i].cmp(&counts[j]).then(j.cmp(&i)))
        .unwrap();
    let others: u32 = (0..3).filter(|&i| i != largest).map(|i| pct[i]).sum();
    pct[largest] = 100 - others;
    pct
}

/// Predicted-vs-actual summary for one cohort.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohortComparison {
    pub predicted: TierBreakdown,
    pub actual: TierBreakdown,
    pub confusion: ConfusionMatrix,
}

/// Compares predicted tiers with the observed ones, pairwise by position.
pub fn compare_cohorts(predicted: &[TierLabel], actual: &[TierLabel]) -> Result<CohortComparison> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: actual.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::EmptyConfusion);
    }
    Ok(CohortComparison {
        predicted: TierBreakdown::from_labels(predicted),
        actual: TierBreakdown::from_labels(actual),
        confusion: crate::evaluation::confusion(actual, predicted)?,
    })
}

/// Likert agreement levels, strongest agreement first. Display order for
/// tallies runs 5 down to 1.
pub const LIKERT_LEVELS: [u8; 5] = [5, 4, 3, 2, 1];

pub const LIKERT_NAMES: [&str; 5] = [
    "strongly agree",
    "agree",
    "neutral",
    "disagree",
    "strongly disagree",
];

/// Tally for one question: counts and percentages indexed by
/// [`LIKERT_LEVELS`] order (level 5 first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionSummary {
    pub question_id: String,
    pub counts: [usize; 5],
    pub percentages: [u32; 5],
    /// Set when the question received no responses at all.
    pub zero_responses: bool,
}

/// Per-question questionnaire tallies, ordered by question id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveySummary {
    pub questions: Vec<QuestionSummary>,
    pub total_responses: usize,
}

/// Aggregates `(question id, likert level)` responses.
///
/// `expected_questions` extends the output with questions that received no
/// responses; those rows carry zero counts and the `zero_responses` flag.
pub fn aggregate_survey(
    responses: &[(String, u8)],
    expected_questions: &[String],
) -> Result<SurveySummary> {
    if responses.is_empty() {
        return Err(Error::EmptySurvey);
    }
    let mut tallies: BTreeMap<String, [usize; 5]> = BTreeMap::new();
    for q in expected_questions {
        tallies.entry(q.clone()).or_insert([0; 5]);
    }
    for (question, level) in responses {
        if !(1..=5).contains(level) {
            return Err(Error::BadLikertLevel {
                level: *level as i64,
            });
        }
        // index 0 holds level 5, index 4 holds level 1
        tallies.entry(question.clone()).or_insert([0; 5])[(5 - level) as usize] += 1;
    }
    let questions = tallies
        .into_iter()
        .map(|(question_id, counts)| {
            let total: usize = counts.iter().sum();
            QuestionSummary {
                question_id,
                counts,
                percentages: likert_percentages(&counts),
                zero_responses: total == 0,
            }
        })
        .collect();
    Ok(SurveySummary {
        questions,
        total_responses: responses.len(),
    })
}

fn likert_percentages(counts: &[usize; 5]) -> [u32; 5] {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return [0; 5];
    }
    let mut pct = [0u32; 5];
    for (p, &c) in pct.iter_mut().zip(counts) {
        *p = ((200 * c + total) / (2 * total)) as u32;
    }
    let largest = (0..5)
        .max_by(|&i, &j| counts[i].cmp(&counts[j]).then(j.cmp(&i)))
        .unwrap();
    let others: u32 = (0..5).filter(|&i| i != largest).map(|i| pct[i]).sum();
    pct[largest] = 100 - others;
    pct
}
