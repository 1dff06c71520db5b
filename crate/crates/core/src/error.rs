use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Certified evaluation could not separate the result from zero at the
    /// working precision; retrying at a higher precision may succeed.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    /// The precision budget was exhausted before a verdict could be certified.
    #[error("undecided at budget of {bits} bits: {detail}")]
    Undecided { bits: u32, detail: String },

    /// A configured resource cap (enumeration size, degree, precision) was hit.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// Malformed external input (JSON, command line value).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A certificate or internal consistency check failed.
    #[error("certificate check failed: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
