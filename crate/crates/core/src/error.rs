//! Error types shared by every solver module.

use thiserror::Error;

/// A state that cannot be fed to an equation of state.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum PhysicsError {
    #[error("non-positive density {0:e}")]
    Density(f64),
    #[error("non-positive pressure {0:e}")]
    Pressure(f64),
    #[error("non-finite state component")]
    NonFinite,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Physics(#[from] PhysicsError),
    #[error("unphysical state at {location}: {source}")]
    PhysicsAt {
        location: String,
        #[source]
        source: PhysicsError,
    },
    #[error("divergence at step {step}, stage {stage}: {reason}")]
    Divergence { step: usize, stage: usize, reason: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
