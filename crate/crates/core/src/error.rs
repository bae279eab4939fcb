use thiserror::Error;

use crate::geometry::{LineId, PointId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("field order {p}^{h} is out of range (degree must be >= 1 and order <= {max})")]
    FieldOutOfRange { p: u32, h: u32, max: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("invalid dimension {0}: affine spaces need n >= 1")]
    InvalidDimension(u32),

    #[error("space AG({n}, {q}) has {lines} lines, above the enumeration bound {limit}")]
    SpaceTooLarge { n: u32, q: u32, lines: u128, limit: u128 },

    #[error("{what} bound exceeded: {actual} > {limit}")]
    BoundExceeded { what: &'static str, actual: usize, limit: usize },

    #[error("points must be distinct")]
    EqualPoints,

    #[error("point {point} is incident with line {line}")]
    PointOnLine { point: PointId, line: LineId },

    #[error("point {0} is not incident with the plane")]
    PointNotInPlane(PointId),

    #[error("lines {0} and {1} are not distinct parallels")]
    NotDistinctParallels(LineId, LineId),

    #[error("wrong coordinate count: expected {expected}, got {got}")]
    CoordinateCount { expected: usize, got: usize },

    #[error("coordinate code {code} out of range for GF({q})")]
    CoordinateOutOfRange { code: u32, q: u32 },

    #[error("DimensionError: {role} space has dimension {got}, at least {needed} required")]
    Dimension { role: &'static str, needed: u32, got: u32 },

    #[error("DimensionError: expected an affine plane, got dimension {0}")]
    NotAPlane(u32),

    #[error("WellDefinednessViolation: adjacent lines {pair:?} meet at point {point} but their images {reason}")]
    WellDefinedness { pair: (LineId, LineId), point: PointId, reason: String },

    #[error("table is not a bijection: {0}")]
    NotBijective(String),

    #[error("map tables do not match the spaces: {0}")]
    TableShape(String),

    #[error("point map is not a collineation: {0}")]
    NotCollineation(String),

    #[error("line map does not satisfy the required relation condition: {0}")]
    NotRelationPreserving(String),

    #[error("inconsistent computation: {0}")]
    Inconsistent(String),

    #[error("{0}")]
    Io(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Short name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) | Error::FieldOutOfRange { .. } | Error::InvalidDimension(_) => "ParameterError",
            Error::ZeroInverse => "ZeroInverse",
            Error::SpaceTooLarge { .. } | Error::BoundExceeded { .. } => "BoundExceeded",
            Error::EqualPoints
            | Error::PointOnLine { .. }
            | Error::PointNotInPlane(_)
            | Error::NotDistinctParallels(..)
            | Error::CoordinateCount { .. }
            | Error::CoordinateOutOfRange { .. } => "InvalidArgument",
            Error::Dimension { .. } | Error::NotAPlane(_) => "DimensionError",
            Error::WellDefinedness { .. } => "WellDefinednessViolation",
            Error::NotBijective(_) => "NotBijective",
            Error::TableShape(_) => "TableShape",
            Error::NotCollineation(_) => "NotCollineation",
            Error::NotRelationPreserving(_) => "NotRelationPreserving",
            Error::Inconsistent(_) => "Inconsistent",
            Error::Io(_) => "IoError",
            Error::Parse(_) => "ParseError",
        }
    }
}
