//! Crate-wide error type.

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("csv header mismatch at column {position}: expected `{expected}`, found `{found}`")]
    HeaderMismatch {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("row {row}, column `{column}`: value {value} outside [{min}, {max}]")]
    OutOfRange {
        row: usize,
        column: String,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("row {row}, column `{column}`: cannot parse `{cell}` as {expected}")]
    UnparsableCell {
        row: usize,
        column: String,
        cell: String,
        expected: &'static str,
    },
    #[error("row {row}: expected {expected} fields, found {found}")]
    FieldCount {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate student_id `{id}`")]
    DuplicateId { id: String },
    #[error("row {row}: student_id is empty")]
    EmptyId { row: usize },
    #[error("student_id `{id}` contains a character not allowed in csv output")]
    UnwritableId { id: String },
    #[error("invalid generator config: {reason}")]
    InvalidConfig { reason: String },
    #[error("unknown column `{name}`")]
    UnknownColumn { name: String },
    #[error("column `{name}` has no non-missing values")]
    EmptyColumn { name: String },
    #[error("dataset schema incompatible with fitted transform: {reason}")]
    SchemaMismatch { reason: String },
    #[error("record `{id}` is missing the target score")]
    MissingTarget { id: String },
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("column `{name}` is constant; correlation is undefined")]
    ConstantColumn { name: String },
    #[error("need at least {required} rows, found {found}")]
    TooFewRows { required: usize, found: usize },
    #[error("target column `{name}` not present in correlation matrix")]
    UnknownTarget { name: String },
    #[error("empty feature matrix")]
    EmptyMatrix,
    #[error("labels missing or misaligned: {reason}")]
    LabelMismatch { reason: String },
    #[error("invalid hyperparameters: {reason}")]
    InvalidHyperparams { reason: String },
    #[error("feature importances require a random forest model")]
    NotAForest,
    #[error("fold count {k} exceeds row count {rows}")]
    BadFoldCount { k: usize, rows: usize },
    #[error("grid is empty")]
    EmptyGrid,
    #[error("fraction list is empty")]
    EmptyFractions,
    #[error("invalid training fraction {fraction}: {reason}")]
    InvalidFraction { fraction: f64, reason: String },
    #[error("confusion matrix has no entries")]
    EmptyConfusion,
    #[error("score {score} outside [0, 100]")]
    ScoreOutOfRange { score: f64 },
    #[error("likert level {level} outside 1..=5")]
    BadLikertLevel { level: i64 },
    #[error("no survey responses supplied")]
    EmptySurvey,
    #[error("plan template error: {reason}")]
    BadPlanTemplate { reason: String },
    #[error("unsupported model file version {found} (expected {expected})")]
    ModelVersion { found: u32, expected: u32 },
    #[error("model file is malformed: {0}")]
    ModelFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
