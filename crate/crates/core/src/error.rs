use thiserror::Error;

/// Errors raised by torus graph construction and the stress/lifting pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("torus matrix must have positive determinant (got {det})")]
    DegenerateShape { det: f64 },

    #[error("linear system is singular: {0}")]
    SingularSystem(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed combinatorial map: {0}")]
    MalformedMap(String),

    #[error("embedding is not cellular on the torus: {0}")]
    NotCellular(String),

    #[error("boundary of face {face} has nonzero homology ({hx}, {hy})")]
    BadFaceHomology { face: usize, hx: i64, hy: i64 },

    #[error("dart sequence is not a closed walk (break after position {position})")]
    NotClosed { position: usize },

    #[error("edge values are not a circulation: imbalance {residual:e} at vertex {vertex}")]
    NotACirculation { vertex: usize, residual: f64 },

    #[error("cocirculation check failed: {0}")]
    CocirculationCheckFailed(String),

    #[error("stress is invalid: {0}")]
    InvalidStress(String),

    #[error("graph is not essentially simple and essentially 3-connected")]
    NotEssentiallyValid,

    #[error("drawing is not an embedding: {0}")]
    NotAnEmbedding(String),

    #[error("stress is not normalized (discriminant {discriminant}, expected 1)")]
    NotNormalized { discriminant: f64 },

    #[error("stress is not reciprocal on the requested torus: {0}")]
    NotReciprocalHere(String),

    #[error("dual closure failed: residual {residual:e}")]
    ClosureFailure { residual: f64 },

    #[error("vertex {vertex} has fewer than three distinct darts around it")]
    DegenerateStar { vertex: usize },

    #[error("lifting is path dependent: residual {residual:e}")]
    PathInconsistent { residual: f64 },

    #[error("recovered weights do not certify a weighted Delaunay graph: {0}")]
    WeightCheckFailed(String),

    #[error("configuration is not generic: {0}")]
    NonGeneric(String),

    #[error("site {name} is hidden by the weights and has no Delaunay triangle")]
    HiddenSite { name: String },

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// Short machine-readable tag, used in CLI error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateShape { .. } => "DegenerateShape",
            Error::SingularSystem(_) => "SingularSystem",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::MalformedMap(_) => "MalformedMap",
            Error::NotCellular(_) => "NotCellular",
            Error::BadFaceHomology { .. } => "BadFaceHomology",
            Error::NotClosed { .. } => "NotClosed",
            Error::NotACirculation { .. } => "NotACirculation",
            Error::CocirculationCheckFailed(_) => "CocirculationCheckFailed",
            Error::InvalidStress(_) => "InvalidStress",
            Error::NotEssentiallyValid => "NotEssentiallyValid",
            Error::NotAnEmbedding(_) => "NotAnEmbedding",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::NotReciprocalHere(_) => "NotReciprocalHere",
            Error::ClosureFailure { .. } => "ClosureFailure",
            Error::DegenerateStar { .. } => "DegenerateStar",
            Error::PathInconsistent { .. } => "PathInconsistent",
            Error::WeightCheckFailed(_) => "WeightCheckFailed",
            Error::NonGeneric(_) => "NonGeneric",
            Error::HiddenSite { .. } => "HiddenSite",
            Error::Parse { .. } => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
