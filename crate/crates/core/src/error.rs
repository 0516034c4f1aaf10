use thiserror::Error;

/// Errors raised by queries and constructions.
///
/// The CLI maps [`Error::Unsupported`] to exit code 3 and everything else to 2.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("unknown identifier: {0}")]
    Unknown(String),
    #[error("point outside support: {0}")]
    OutsideSupport(String),
    #[error("path leaves the support: {0}")]
    PathOutsideSupport(String),
    #[error("non-monotone motion: {0}")]
    NonMonotone(String),
    #[error("unsupported construction: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
}

impl Error {
    pub fn is_unsupported(&self) -> bool {
        matches!(self, Error::Unsupported(_))
    }

    /// The payload without the category prefix.
    pub fn message(&self) -> &str {
        match self {
            Error::Parse(m)
            | Error::Invalid(m)
            | Error::Unknown(m)
            | Error::OutsideSupport(m)
            | Error::PathOutsideSupport(m)
            | Error::NonMonotone(m)
            | Error::Unsupported(m)
            | Error::Precondition(m)
            | Error::ResourceBound(m) => m,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Invalid(_) => "invalid",
            Error::Unknown(_) => "unknown",
            Error::OutsideSupport(_) => "outside_support",
            Error::PathOutsideSupport(_) => "path_outside_support",
            Error::NonMonotone(_) => "non_monotone",
            Error::Unsupported(_) => "unsupported",
            Error::Precondition(_) => "precondition",
            Error::ResourceBound(_) => "resource_bound",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
