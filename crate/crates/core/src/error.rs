use thiserror::Error;

use crate::graded::Deg;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    /// A defining relation of a module or morphism fails.
    #[error("{relation} fails at degree {degree}")]
    Relation { relation: String, degree: Deg },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("vertex {vertex} is not usable in window [{lo}, {hi}]")]
    Window { vertex: i32, lo: i32, hi: i32 },
}

impl Error {
    pub fn relation(relation: impl Into<String>, degree: Deg) -> Self {
        Error::Relation {
            relation: relation.into(),
            degree,
        }
    }
}
