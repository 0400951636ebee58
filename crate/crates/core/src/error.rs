use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("not a permutation: {0}")]
    NotBijective(String),

    #[error("guard exceeded: {what} ({value} > {limit})")]
    GuardExceeded {
        what: &'static str,
        value: String,
        limit: String,
    },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph error: {0}")]
    Graph(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
}

impl Error {
    pub(crate) fn guard(what: &'static str, value: impl ToString, limit: impl ToString) -> Self {
        Error::GuardExceeded {
            what,
            value: value.to_string(),
            limit: limit.to_string(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
