use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed word {0:?}")]
    Parse(String),
    #[error("letter {0:?} is not in the domain of the labelling")]
    Domain(char),
    #[error("{what} limit exceeded (cap {cap})")]
    Limit { what: String, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("constraint {clause} violated: {detail}")]
    Constraint { clause: String, detail: String },
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("no form found: {0}")]
    NotFound(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    pub fn limit(what: impl Into<String>, cap: usize) -> Self {
        Error::Limit { what: what.into(), cap }
    }

    pub fn constraint(clause: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Constraint { clause: clause.into(), detail: detail.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
