use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("opposite infinities cannot be added")]
    OppositeInfinities,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point {0} is outside the effective domain")]
    PointOutsideDomain(String),
    #[error("function is not integrally convex: {0}")]
    NotIntegrallyConvex(String),
    #[error("effective domains do not intersect")]
    EmptyIntersection,
    #[error("subdifferential meets the box in the empty set: {0}")]
    InternalInfeasible(String),
    #[error("region is unbounded")]
    UnboundedRegion,
    #[error("no finite enumeration bound")]
    UnboundedEnumeration,
    #[error("operation supports dimension {supported} only, got {found}")]
    UnsupportedDimension { supported: usize, found: usize },
    #[error("dual box too small: {0}")]
    BoxTooSmall(String),
    #[error("precondition not satisfied: {0}")]
    InfeasiblePrecondition(String),
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
