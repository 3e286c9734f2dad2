use thiserror::Error;

/// Errors raised by the chain calculus.
///
/// Variants map onto the precondition failures of the individual
/// operations; the CLI turns every variant except `Parse` into exit code 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("value does not belong to the group: {0}")]
    InvalidValue(String),
    #[error("lattice rank {rank} exceeds the supported maximum {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("group is not finitely generated: {0}")]
    NotFinitelyGenerated(String),
    #[error("map does not respect the relations: {0}")]
    InvalidHom(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree error: {0}")]
    DegreeError(String),

    #[error("zero multivector has no plane")]
    ZeroVector,
    #[error("multivector is not simple")]
    NotSimple,
    #[error("elements lie over different planes")]
    FiberMismatch,
    #[error("linear map collapses the plane")]
    RankCollapse,
    #[error("linear map has nonzero corank on the plane")]
    CorankCollapse,

    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("chains live on different carriers: {0}")]
    CarrierMismatch(String),
    #[error("boundary of a 0-dimensional chain")]
    DimensionZero,
    #[error("level {level} is attained at vertex {vertex}")]
    NonRegularValue { level: String, vertex: usize },
    #[error("image is not a simplicial complex: {0}")]
    OverlayUnsupported(String),

    #[error("not a combinatorial manifold: {0}")]
    NotManifold(String),
    #[error("manifold is not connected")]
    NotConnected,
    #[error("orientation is not coherent across face {0:?}")]
    IncoherentOrientation(Vec<usize>),

    #[error("linear program infeasible")]
    Infeasible,
    #[error("simplex method stalled after {0} iterations")]
    SolverStall(usize),
    #[error("integral flat norm limited to {max} top cells, got {got}")]
    TooManyCells { got: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::GroupMismatch(_) => "GroupMismatch",
            Error::InvalidValue(_) => "InvalidValue",
            Error::RankTooLarge { .. } => "RankTooLarge",
            Error::NotFinitelyGenerated(_) => "NotFinitelyGenerated",
            Error::InvalidHom(_) => "InvalidHom",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::DegreeError(_) => "DegreeError",
            Error::ZeroVector => "ZeroVector",
            Error::NotSimple => "NotSimple",
            Error::FiberMismatch => "FiberMismatch",
            Error::RankCollapse => "RankCollapse",
            Error::CorankCollapse => "CorankCollapse",
            Error::InvalidComplex(_) => "InvalidComplex",
            Error::CarrierMismatch(_) => "CarrierMismatch",
            Error::DimensionZero => "DimensionZero",
            Error::NonRegularValue { .. } => "NonRegularValue",
            Error::OverlayUnsupported(_) => "OverlayUnsupported",
            Error::NotManifold(_) => "NotManifold",
            Error::NotConnected => "NotConnected",
            Error::IncoherentOrientation(_) => "IncoherentOrientation",
            Error::Infeasible => "Infeasible",
            Error::SolverStall(_) => "SolverStall",
            Error::TooManyCells { .. } => "TooManyCells",
            Error::Parse(_) => "Parse",
        }
    }
}
