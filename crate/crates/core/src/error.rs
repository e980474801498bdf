use thiserror::Error;

use crate::FacilityId;

/// Errors raised while loading inputs or applying operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("facility {0} is already placed")]
    DuplicateFacility(FacilityId),

    #[error("facility {0} is not placed")]
    MissingFacility(FacilityId),

    #[error("facility {facility} is placed on vertex {actual}, not {given}")]
    WrongHome {
        facility: FacilityId,
        given: usize,
        actual: usize,
    },

    #[error("distance parameter must be non-negative, got {0}")]
    NegativeRadius(i64),

    #[error("expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
