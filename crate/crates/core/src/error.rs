use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("origin is not an interior point of the body")]
    OriginNotInterior,

    #[error("representation is unbounded in the queried direction")]
    Unbounded,

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("simplex iteration cap reached ({iterations} pivots, {degenerate} degenerate, objective {objective})")]
    LpIterationLimit {
        iterations: usize,
        degenerate: usize,
        objective: f64,
    },

    #[error("degenerate input: {what}; deficient direction {direction:?}")]
    Degenerate { what: String, direction: Vec<f64> },

    #[error("linear map is singular")]
    SingularMap,

    #[error("certification failed: {0}")]
    CertificationFailed(String),

    #[error("arithmetic overflow in exact computation")]
    Overflow,
}

pub(crate) fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
