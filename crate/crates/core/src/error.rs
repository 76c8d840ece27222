use std::fmt;

use thiserror::Error;

/// Errors raised by the algebra kernels, the family constructors and the analyzer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at offset {offset} in {input:?}: {message}")]
    Parse {
        input: String,
        offset: usize,
        message: String,
    },

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("map is not well defined: {0}")]
    NotWellDefined(String),

    #[error("not an inclusion at degree {degree}")]
    NotInclusion { degree: i64 },

    #[error("submodule containment violated: {0}")]
    Containment(String),

    #[error("degree {degree} outside the constructed window [{lo}, {hi}]")]
    OutOfWindow { degree: i64, lo: i64, hi: i64 },

    #[error("not finite length at degree {degree}")]
    NotFiniteLength { degree: i64 },

    #[error("malformed input at degree {degree}: {message}")]
    Malformed { degree: i64, message: String },

    #[error("no normalizing shift within window ending at {window_end}: {diagnostics}")]
    NoNormalizingShift { window_end: i64, diagnostics: String },

    #[error("insufficient window: {0}")]
    InsufficientWindow(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("invalid problem description: {}", join_issues(.0))]
    Validation(Vec<ValidationIssue>),
}

/// One problem-description error, located by a JSON pointer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "{at}: {}", self.message)
    }
}

fn join_issues(issues: &[ValidationIssue]) -> String {
    issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
