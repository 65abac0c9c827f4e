use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("all points are collinear; the convex hull is not two-dimensional")]
    DegenerateHull,
    #[error("label {0} is not a vertex of the convex hull")]
    NotHullVertex(usize),
    #[error("points {0} and {1} are at the same angle from the apex")]
    TiedAngles(usize, usize),
    #[error("point {0} is sent to the line at infinity")]
    PointAtInfinity(usize),
    #[error("projective map is singular")]
    SingularMap,
    #[error("duplicate point: label {0} repeats label {1}")]
    DuplicatePoint(usize, usize),
    #[error("expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("configuration needs at least {needed} points, has {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("label {0} is out of range")]
    LabelOutOfRange(usize),
    #[error("subdivision is not regular")]
    NotRegular,
    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),
    #[error("invalid dimension vector: {0}")]
    InvalidDelta(String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("apex {0} lies in no cell of the subdivision")]
    ApexNotInAnyCell(usize),
    #[error("configuration has {n} points, above the limit of {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("configuration is not in general position")]
    GeneralPositionRequired,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("moment-curve parameter {0} repeats")]
    DuplicateParameter(String),
    #[error("point configuration does not affinely span its space")]
    RankDeficient,
    #[error("vectors {0} and {1} are antipodal")]
    AntipodalPair(usize, usize),
    #[error("vector arrangement is not generic: {0}")]
    NotGeneric(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
