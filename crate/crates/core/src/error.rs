use serde::Serialize;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Parse(String),
    #[error("infeasible: {0}")]
    Infeasible(Infeasible),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A construction whose preconditions cannot be met on the given input.
///
/// This is an expected outcome rather than a bug: callers (and the CLI)
/// report it and exit with a distinct status.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Infeasible {
    pub reason: String,
    /// How far the input falls short of the requirement, when that is a number.
    pub deficit: Option<f64>,
}

impl std::fmt::Display for Infeasible {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.deficit {
            Some(d) => write!(f, "{} (deficit {d:.3e})", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

impl Error {
    pub(crate) fn infeasible(reason: impl Into<String>, deficit: Option<f64>) -> Self {
        Error::Infeasible(Infeasible {
            reason: reason.into(),
            deficit,
        })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible(_))
    }
}
