use thiserror::Error;

/// Errors produced by the numerics and estimation routines.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method (quadrature, root finding) missed its tolerance.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// A sampler would need an impractical number of proposals.
    #[error("sampler impractical: {0}")]
    Impractical(String),

    /// A simulation or run configuration is invalid. `field` is a dotted path.
    #[error("invalid configuration at `{field}`: {message}")]
    Config { field: String, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
