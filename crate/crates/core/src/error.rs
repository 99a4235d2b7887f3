//! Error type shared across the geometry modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("jet parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("germ must fix the origin: constant terms are not allowed")]
    NotCentered,

    #[error("dimensions {domain} -> {codomain} are not supported by this analysis")]
    UnsupportedDimensions { domain: usize, codomain: usize },

    #[error("jet degree {found} is below the required degree {needed}")]
    DegreeTooLow { needed: u32, found: u32 },

    #[error("differential has rank {found}, this analysis needs rank {expected}")]
    RankMismatch { expected: usize, found: usize },

    #[error("required frame is irrational; rerun the computation in float mode")]
    IrrationalRotation,

    #[error("direction must be nonzero")]
    ZeroDirection,

    #[error("direction is not normal to the tangent space")]
    NotNormal,

    #[error("singular source change of coordinates")]
    SingularSource,

    #[error("parameter out of disc: {0}")]
    ParameterOutOfDisc(String),

    #[error("{0}")]
    WrongStratum(String),

    #[error("{0}")]
    NotAdapted(String),
}

pub type GeomResult<T> = Result<T, GeomError>;
