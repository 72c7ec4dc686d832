use thiserror::Error;

use crate::spaces::Point;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a finite labeled space needs at least one label")]
    EmptyLabelSet,

    #[error("vector spaces need dimension at least 1")]
    ZeroDimension,

    #[error("kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },

    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },

    #[error("invalid bounded set: {0}")]
    InvalidBound(String),

    #[error("morphism `{morphism}` is not bornological: {point} maps to {image}, outside {bound}")]
    NotBornological {
        morphism: String,
        point: Box<Point>,
        image: Box<Point>,
        bound: String,
    },

    #[error("atom at {0} lies outside the restricting set")]
    SupportViolation(Box<Point>),

    #[error("not a probability measure: {0}")]
    NotAProbabilityMeasure(String),

    #[error("no grid cell centre lies inside the region")]
    EmptyRegion,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn kind(expected: impl ToString, found: impl ToString) -> Self {
        Error::KindMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    pub(crate) fn spaces(left: impl ToString, right: impl ToString) -> Self {
        Error::SpaceMismatch {
            left: left.to_string(),
            right: right.to_string(),
        }
    }
}
