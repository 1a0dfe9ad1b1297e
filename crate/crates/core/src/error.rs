use thiserror::Error;

/// Errors raised by domain construction, file parsing and the verifiers.
///
/// Unmet theorem hypotheses are not errors: verifiers report them as a
/// vacuous verdict instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty domain")]
    EmptyDomain,
    #[error("anisotropic grid unsupported")]
    Anisotropic,
    #[error("singular sample at {0}")]
    SingularSample(String),
    #[error("axis too short")]
    AxisTooShort,
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("length mismatch: expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("domain mismatch")]
    DomainMismatch,
    #[error("{name} out of range: {detail}")]
    OutOfRange { name: &'static str, detail: String },
    #[error("missing constant {0}")]
    MissingConstant(&'static str),
    #[error("search family empty")]
    EmptySearch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("N-function: {0}")]
    NFunction(String),
    #[error("expression: {0}")]
    Expression(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn out_of_range(name: &'static str, detail: impl Into<String>) -> Self {
        Error::OutOfRange {
            name,
            detail: detail.into(),
        }
    }
}
