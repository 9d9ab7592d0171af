use thiserror::Error;

/// Errors shared across the toolkit.
///
/// `HorizonOverflow` is the one callers are expected to branch on: it marks a
/// supremum whose argmax touched the tabulated boundary, which must never be
/// reported as a plain value.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("invalid parameter for family `{family}`: {reason}")]
    InvalidParameter { family: String, reason: String },

    #[error("horizon overflow: {0}")]
    HorizonOverflow(String),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("empty matrix")]
    EmptyMatrix,

    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },

    #[error("weight positivity region unreachable: {0}")]
    PositivityUnreachable(String),

    #[error("weight family order violated: {0}")]
    OrderViolated(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
