use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input, configuration or I/O.
    Input,
    /// A mathematical validation failed (precedence, nondegeneracy, integrality, ...).
    Validation,
    /// A finite word or window was too short to complete the computation.
    Window,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("model `{0}` has no matrix representation")]
    NoRepresentation(String),

    #[error("invalid group model: {0}")]
    InvalidModel(String),

    #[error("operands belong to different group models (`{0}` vs `{1}`)")]
    ModelMismatch(String, String),

    #[error("polynomial is not integer-valued: {0}")]
    NotIntegral(String),

    #[error("symbolic composition produced a non-integral coordinate; the group model is broken")]
    InternalNotIntegral,

    #[error("degree guard exceeded: result degree {degree} > cap {cap}")]
    DegreeGuardExceeded { degree: usize, cap: usize },

    #[error("size guard exceeded: derived system has {size} elements > cap {cap}")]
    SizeGuardExceeded { size: usize, cap: usize },

    #[error("polynomial sequence does not vanish at 0")]
    NotInPG0,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("search exhausted after {bound} candidates")]
    SearchExhausted { bound: u64 },

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("factors out of canonical order at column {column}: S{found} after S{previous}")]
    CanonicalOrder { column: usize, previous: usize, found: usize },

    #[error("duplicate element in system: {0}")]
    DuplicateElement(String),

    #[error("element {0} is not of minimal weight in the system")]
    NotMinimal(String),

    #[error("the identity cannot be used here")]
    IdentityElement,

    #[error("derived system does not precede the original: {0}")]
    PrecedenceViolation(String),

    #[error("empty system")]
    EmptySystem,

    #[error("window is empty after trimming margins")]
    EmptyWindow,

    #[error("window mismatch: [{0}, {1}] vs [{2}, {3}]")]
    WindowMismatch(i64, i64, i64, i64),

    #[error("pattern `{0}` does not occur in the generated word")]
    InadmissiblePattern(String),

    #[error("degenerate polynomial family: {0}")]
    NonDegenerate(String),

    #[error("window exhausted: {0}")]
    WindowExhausted(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            DimensionMismatch { .. }
            | NoRepresentation(_)
            | InvalidModel(_)
            | InvalidSubstitution(_)
            | ModelMismatch(..)
            | Parse { .. }
            | CanonicalOrder { .. }
            | DuplicateElement(_)
            | EmptySystem
            | WindowMismatch(..)
            | InadmissiblePattern(_)
            | Io(_)
            | Json(_)
            | Csv(_) => ErrorClass::Input,
            NotIntegral(_)
            | InternalNotIntegral
            | DegreeGuardExceeded { .. }
            | SizeGuardExceeded { .. }
            | NotInPG0
            | PreconditionViolated(_)
            | SearchExhausted { .. }
            | NotMinimal(_)
            | IdentityElement
            | PrecedenceViolation(_)
            | NonDegenerate(_) => ErrorClass::Validation,
            EmptyWindow | WindowExhausted(_) => ErrorClass::Window,
        }
    }
}
