//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, PorodeError>;

/// Errors raised by geometry validation, meshing, solvers and I/O.
///
/// The variants are split into two families so that front ends can map them
/// onto exit codes: input problems ([`PorodeError::is_validation`]) and
/// numerical failures (everything else).
#[derive(Debug, Error)]
pub enum PorodeError {
    /// Inconsistent or out-of-range input that is not tied to a single pore.
    #[error("validation error: {0}")]
    Validation(String),

    /// A pore violates one of its geometric invariants.
    #[error("pore {id}: {message}")]
    InvalidPore {
        /// Identifier of the offending pore.
        id: u32,
        /// Human-readable description of the violation.
        message: String,
    },

    /// A text file could not be parsed.
    #[error("{source_name}:{line}: {message}")]
    Parse {
        /// File name or other description of the input.
        source_name: String,
        /// One-based line number (zero when not applicable).
        line: usize,
        /// Description of the problem.
        message: String,
    },

    /// Triangulation of a domain failed.
    #[error("mesh generation failed: {0}")]
    Meshing(String),

    /// A linear solve or factorization failed.
    #[error("solver error: {0}")]
    Solver(String),

    /// The exterior boundary-element problem of a pore could not be solved.
    #[error("exterior problem of pore {pore}: {message}")]
    Exterior {
        /// Identifier of the pore whose exterior problem failed.
        pore: u32,
        /// Description of the failure.
        message: String,
    },

    /// Underlying I/O failure.
    #[error("{path}: {source}")]
    Io {
        /// Path that was being read or written.
        path: String,
        /// Original error.
        #[source]
        source: std::io::Error,
    },

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl PorodeError {
    /// True for errors caused by invalid input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            PorodeError::Validation(_)
                | PorodeError::InvalidPore { .. }
                | PorodeError::Parse { .. }
                | PorodeError::Io { .. }
                | PorodeError::Json(_)
        )
    }

    /// Shorthand for [`PorodeError::Validation`].
    pub fn validation(message: impl Into<String>) -> Self {
        PorodeError::Validation(message.into())
    }

    /// Shorthand for [`PorodeError::Solver`].
    pub fn solver(message: impl Into<String>) -> Self {
        PorodeError::Solver(message.into())
    }

    /// Shorthand for [`PorodeError::InvalidPore`].
    pub fn pore(id: u32, message: impl Into<String>) -> Self {
        PorodeError::InvalidPore {
            id,
            message: message.into(),
        }
    }

    /// Wraps an I/O error with the path that caused it.
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        PorodeError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
