use thiserror::Error;

use crate::lp::LpError;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// Variants other than [`Error::Lp`] describe invalid input; the CLI maps
/// them to its validation exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("not an outward-rooted tree: {0}")]
    NotATree(String),

    #[error("{what}: expected length {expected}, got {actual}")]
    Dimension {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("path leaves the simplex: mass {value:e} at knot {knot}, vertex {vertex}")]
    NegativeMass {
        knot: usize,
        vertex: usize,
        value: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("linear program failed: {0}")]
    Lp(#[from] LpError),
}

impl Error {
    /// True when the failure came from the optimizer rather than the input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, Error::Lp(_))
    }
}

pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::Dimension {
            what,
            expected,
            actual,
        })
    }
}
