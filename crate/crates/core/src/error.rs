use thiserror::Error;

/// Errors raised by the toolkit. Verdict failures are never errors: they are
/// reported through [`crate::report::Report`] with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("morphisms are not composable: {0}")]
    NonComposable(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("seed pair has no common target: ({0}, {1})")]
    BadSeedPair(String, String),

    #[error("operation not supported for this backend: {0}")]
    BackendUnsupported(String),

    #[error("backward zig-zag step on a morphism outside W: {0}")]
    BackwardStepNotInW(String),

    #[error("reflective data did not pass certification: {0}")]
    UncertifiedReflectiveData(String),

    #[error("time-slice axiom violated at {0}")]
    TimeSliceViolated(String),

    #[error("weight truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("degree window exceeds the truncation: {0}")]
    WindowExceedsTruncation(String),

    #[error("invalid category: {0}")]
    InvalidCategory(String),

    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),

    #[error("not a chain map: {0}")]
    NotChainMap(String),

    #[error("invalid dg-algebra: {0}")]
    InvalidAlgebra(String),

    #[error("not a dg-algebra map: {0}")]
    NotAlgebraMap(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl Error {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema { path: path.into(), message: message.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
