use thiserror::Error;

/// Errors produced by the library.
///
/// The CLI maps these to exit codes: configuration/domain problems exit
/// with 2, numeric failures (non-finite states, singular matrices) with 3.
#[derive(Error, Debug)]
pub enum PathdriftError {
    /// A precondition on the inputs was violated (bad parameter range,
    /// malformed grid, missing table, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The computation itself broke down (NaN/Inf state, singular
    /// diffusion, SPD failure at a sampled point).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The requested method does not support the given model
    /// (e.g. the first-order representation with non-constant diffusion).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Configuration file or CLI argument problem.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl PathdriftError {
    pub fn domain(msg: impl Into<String>) -> Self {
        PathdriftError::Domain(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        PathdriftError::Numeric(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        PathdriftError::Unsupported(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        PathdriftError::Config(msg.into())
    }

    /// Exit code the CLI uses for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            PathdriftError::Domain(_)
            | PathdriftError::Unsupported(_)
            | PathdriftError::Config(_)
            | PathdriftError::Io(_) => 2,
            PathdriftError::Numeric(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, PathdriftError>;
