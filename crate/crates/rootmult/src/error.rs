use thiserror::Error;

/// Error type shared by the whole crate.
///
/// The variants map onto the CLI exit-status contract:
/// parse errors → 2, validation errors → 3, integrity errors → 4.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A textual form (composition, poset spec, …) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// An argument violated an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Structured input failed semantic validation (parity, basepoint,
    /// closedness, …).
    #[error("validation error: {0}")]
    Validation(String),

    /// An internal consistency check failed (∂∂ ≠ 0, closedness breach
    /// during assembly). Indicates a bug or corrupted data, never user error.
    #[error("integrity error: {0}")]
    Integrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
