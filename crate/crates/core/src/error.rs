use thiserror::Error;

use crate::element::Element;
use crate::reduction::{Ambiguity, ReductionSystem};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    /// Reduction did not reach a normal form within the step budget.
    #[error("reduction budget of {budget} steps exceeded")]
    Budget { budget: u64, partial: Option<Box<Element>> },

    /// A cycle of reductions that uses the deformation and still reaches
    /// irreducible paths: the product is an infinite sum.
    #[error("star product is not well defined: {0}")]
    NotWellDefined(String),

    #[error("completion stopped after {rounds} rounds with {} unresolved overlaps", outstanding.len())]
    Incomplete {
        rounds: usize,
        outstanding: Vec<Ambiguity>,
        partial: Box<ReductionSystem>,
    },
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
