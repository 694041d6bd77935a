use thiserror::Error;

/// Errors produced by the algebra, cone, theory and circuit layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid algebra parameter: {0}")]
    InvalidParameter(String),
    #[error("elements belong to different algebras ({left} vs {right})")]
    AlgebraMismatch { left: String, right: String },
    #[error("coordinate vector has length {actual}, expected {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("operation not supported: {0}")]
    Unsupported(String),
    #[error("state is not normalized (trace {trace})")]
    NotNormalized { trace: f64 },
    #[error("state is not internal (minimum eigenvalue {min_eigenvalue})")]
    NotInternal { min_eigenvalue: f64 },
    #[error("element is not in the positive cone (minimum eigenvalue {min_eigenvalue})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("ensemble does not sum to the marginal (deviation {deviation})")]
    EnsembleMismatch { deviation: f64 },
    #[error("purifications have different marginals (deviation {deviation})")]
    NoCommonMarginal { deviation: f64 },
    #[error("element is not a rank-one state")]
    NotPure,
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("linear map is singular")]
    Singular,
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: duplicate declaration of `{name}`")]
    DuplicateDeclaration {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: unknown name `{name}`")]
    UnknownName {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: wire mismatch: expected {expected}, found {actual}")]
    WireMismatch {
        expected: String,
        actual: String,
        line: usize,
        column: usize,
    },
    #[error("binding error: {0}")]
    Binding(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
