use std::fmt;

use thiserror::Error;

/// Named hypothesis of the Kronecker constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    /// A and D are column-orthogonal sign matrices.
    I,
    /// B and C are orthogonal Latin hypercubes (or, for the shifted form,
    /// C carries the required shifted level set).
    II,
    /// AᵀC = 0 or BᵀD = 0.
    III,
    /// Neither fold condition (a) on (A, C) nor (b) on (B, D) holds.
    IV,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::I => "i",
            Clause::II => "ii",
            Clause::III => "iii",
            Clause::IV => "iva/ivb",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("column {0} has all levels equal; correlation is undefined")]
    DegenerateColumn(usize),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("unsupported order {order}: {reason}")]
    UnsupportedOrder { order: usize, reason: String },

    #[error("no catalog entry for n = {0}")]
    NotInCatalog(usize),

    #[error("condition ({clause}) violated: {detail}")]
    ConditionViolation { clause: Clause, detail: String },

    #[error("no orthogonal Latin hypercube with two or more factors exists for n = {0} (n = 2, 3, or of the form 4k+2)")]
    NoOlhExists(usize),

    #[error("post-verification failed: {0}")]
    VerificationFailed(String),

    #[error("catalog: {0}")]
    Catalog(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn violation(clause: Clause, detail: impl Into<String>) -> Error {
    Error::ConditionViolation {
        clause,
        detail: detail.into(),
    }
}
