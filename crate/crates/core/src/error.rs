use thiserror::Error;

use crate::fan::RaySet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("support function is unbounded below in direction {direction:?}")]
    UnboundedBelow { direction: Vec<i64> },

    #[error("polyhedron is not compatible with the fan (witness cone {witness})")]
    NotCompatible { witness: RaySet },

    #[error("tail cones differ")]
    TailMismatch,

    #[error("divisor is not Cartier on cone {cone}")]
    NotCartier { cone: RaySet },

    #[error("divisor is not nef")]
    NotNef,

    #[error("no ample polyhedron given")]
    NoAmpleGiven,

    #[error("polyhedron is not ample on the fan: {0}")]
    NotAmple(String),

    #[error("fan is not simplicial (cone {cone})")]
    NonSimplicialFan { cone: RaySet },

    #[error("cone {0} is not a cone of the fan")]
    ConeNotInFan(RaySet),

    #[error("normal fans are only computed up to dimension 3 (got {0})")]
    UnsupportedDimension(usize),

    #[error("polyhedron is not full-dimensional")]
    NotFullDimensional,

    #[error("degree box is unbounded; supply an explicit box")]
    UnboundedBox,

    #[error("rejection sampling found no point of a non-empty difference")]
    SamplingExhausted,

    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}
