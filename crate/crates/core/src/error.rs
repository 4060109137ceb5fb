use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse grouping of errors, used by front-ends to pick an exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input description.
    Parse,
    /// A structural invariant failed; the error carries a witness.
    Invariant,
    /// An operation was called outside its precondition.
    Precondition,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("complex has no vertices")]
    EmptyComplex,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge `{0}`-`{1}`")]
    DuplicateEdge(String, String),
    #[error("edge endpoint `{0}` is not a vertex")]
    DanglingEndpoint(String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("graph is disconnected: `{0}` is unreachable from `{1}`")]
    Disconnected(String, String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown hyperplane {0}")]
    UnknownHyperplane(usize),
    #[error("host is not a median graph; triple ({}, {}, {}) has {count} medians", .witness[0], .witness[1], .witness[2])]
    NotMedian { witness: [String; 3], count: usize },
    #[error("set is not median-closed: median of ({}, {}, {}) is `{escaped}`", .witness[0], .witness[1], .witness[2])]
    NotMedianClosed { witness: [String; 3], escaped: String },
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex set is not convex: `{0}` lies between members but is missing")]
    NotConvex(String),
    #[error("malformed wall {index}: {reason}")]
    MalformedWall { index: usize, reason: String },
    #[error("window contains no member vertices")]
    EmptyWindow,
    #[error("invalid periodic complex: {0}")]
    InvalidPeriodic(String),
    #[error("map is not a symmetry: witness vertex {0:?}")]
    NotSymmetry(Vec<i64>),
    #[error("invalid isometry: {0}")]
    InvalidIsometry(String),
    #[error("isometry is not loxodromic (it is {0})")]
    NotLoxodromic(&'static str),
    #[error("isometry is not inverting (it is {0})")]
    NotInverting(&'static str),
    #[error("isometry is not elliptic")]
    NotElliptic,
    #[error("isometry has bounded orbits")]
    BoundedOrbits,
    #[error("vertex {0} is not in the minimising set")]
    NotInMinSet(String),
    #[error("isometries {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("wall set is not commensurated: {0}")]
    NotCommensurated(String),
    #[error("quantity did not stabilise by radius {0}")]
    NoStabilisation(i64),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_)
            | Error::EmptyComplex
            | Error::DuplicateVertex(_)
            | Error::DuplicateEdge(..)
            | Error::DanglingEndpoint(_)
            | Error::SelfLoop(_)
            | Error::Disconnected(..)
            | Error::UnknownVertex(_)
            | Error::UnknownHyperplane(_)
            | Error::MalformedWall { .. }
            | Error::InvalidPeriodic(_) => ErrorKind::Parse,
            Error::NotMedian { .. }
            | Error::NotMedianClosed { .. }
            | Error::NotSymmetry(_)
            | Error::NoStabilisation(_)
            | Error::Invariant(_) => ErrorKind::Invariant,
            _ => ErrorKind::Precondition,
        }
    }
}
