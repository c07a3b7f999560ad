use std::fmt;

use thiserror::Error;

/// A single violated metric axiom, with the offending indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    NotSquare {
        row: usize,
        len: usize,
    },
    NonFinite(usize, usize),
    Asymmetric(usize, usize),
    NonzeroDiagonal(usize),
    NegativeEntry(usize, usize),
    /// Off-diagonal zero in a space that must be a metric, not a pseudometric.
    ZeroDistance(usize, usize),
    /// `d(i, j) > d(i, k) + d(k, j)` beyond tolerance.
    TriangleViolation(usize, usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NotSquare { row, len } => write!(f, "NotSquare(row {row} has {len} entries)"),
            Violation::NonFinite(i, j) => write!(f, "NonFinite({i},{j})"),
            Violation::Asymmetric(i, j) => write!(f, "Asymmetric({i},{j})"),
            Violation::NonzeroDiagonal(i) => write!(f, "NonzeroDiagonal({i})"),
            Violation::NegativeEntry(i, j) => write!(f, "NegativeEntry({i},{j})"),
            Violation::ZeroDistance(i, j) => write!(f, "ZeroDistance({i},{j})"),
            Violation::TriangleViolation(i, j, k) => write!(f, "TriangleViolation({i},{j},{k})"),
        }
    }
}

/// Every axiom violation found while validating one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, v) in self.violations.iter().enumerate() {
            if idx > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty space: a metric space needs at least one point")]
    EmptySpace,

    #[error("label count {labels} does not match matrix size {size}")]
    LabelMismatch { labels: usize, size: usize },

    #[error("invalid metric space `{name}`: {source}")]
    Invalid {
        name: String,
        #[source]
        source: ValidationError,
    },

    #[error("duplicate space name `{0}`")]
    DuplicateName(String),

    #[error("quotient is not a metric: {0}")]
    QuotientNotMetric(ValidationError),

    #[error("correspondence search space too large: {size:.3e} exceeds cap {cap}")]
    SearchSpaceTooLarge { size: f64, cap: u64 },

    #[error("too many terminals: {k} exceeds cap {cap}")]
    TooManyTerminals { k: usize, cap: usize },

    #[error("invalid correspondence: {0}")]
    InvalidCorrespondence(String),

    #[error("edge program infeasible")]
    Infeasible,

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("edge {edge} has no usable correspondence")]
    MissingCorrespondence { edge: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by the caller's data rather than by a computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::EmptySpace
                | Error::LabelMismatch { .. }
                | Error::Invalid { .. }
                | Error::DuplicateName(_)
                | Error::InvalidCorrespondence(_)
                | Error::InvalidConfig(_)
                | Error::Input(_)
                | Error::Json(_)
                | Error::Io(_)
        )
    }

    /// Variant name, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySpace => "EmptySpace",
            Error::LabelMismatch { .. } => "LabelMismatch",
            Error::Invalid { .. } => "InvalidMetric",
            Error::DuplicateName(_) => "DuplicateName",
            Error::QuotientNotMetric(_) => "QuotientNotMetric",
            Error::SearchSpaceTooLarge { .. } => "SearchSpaceTooLarge",
            Error::TooManyTerminals { .. } => "TooManyTerminals",
            Error::InvalidCorrespondence(_) => "InvalidCorrespondence",
            Error::Infeasible => "Infeasible",
            Error::NumericalFailure(_) => "NumericalFailure",
            Error::MissingCorrespondence { .. } => "MissingCorrespondence",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Input(_) => "Input",
            Error::Json(_) => "Json",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
