use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violates a documented precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An argument lies outside the domain of a mathematical function.
    #[error("domain error in {function}: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },

    /// A figure of merit is undefined, e.g. no photons are lost.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(function: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            function,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
