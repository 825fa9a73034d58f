use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the core library.
///
/// The variants are grouped the way the CLI maps them onto exit codes:
/// validation problems, resource guards, and internal-consistency failures
/// (which signal a bug rather than bad input).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("resource limit exceeded: {what} (cap {cap})")]
    ResourceLimit { what: String, cap: usize },

    #[error("graph is disconnected: {} components {:?}", .components.len(), .components)]
    Disconnected { components: Vec<Vec<usize>> },

    #[error("internal consistency violated: {0}")]
    Consistency(String),

    #[error("numerical failure: {what} (residual {residual:e})")]
    Numerical { what: String, residual: f64 },

    #[error("width zero: forests of width zero carry no information")]
    WidthZero,
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
