//! Error type shared by every module in the crate.

use thiserror::Error;

/// Unified error for image I/O, feature extraction, training, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// Underlying I/O failure (unreadable file, unwritable directory).
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed or corrupt file contents.
    #[error("format error: {0}")]
    Format(String),

    /// Well-formed input that this crate deliberately does not handle.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Argument outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mismatched dimensions between two operands.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Invalid configuration or hyperparameters.
    #[error("config error: {0}")]
    Config(String),

    /// Model file with an unknown version tag.
    #[error("unknown model version: {0}")]
    Version(u32),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
