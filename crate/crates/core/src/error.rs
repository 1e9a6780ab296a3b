use thiserror::Error;

use crate::symcore::SymError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("curve lies in the polar locus: {0}")]
    PolarCurve(String),
    #[error("curve is not adapted: {0}")]
    NotAdapted(String),
    #[error("the zero function has no junior part")]
    ZeroFunction,
    #[error("ell must satisfy 0 <= ell <= n, got {ell} with n = {n}")]
    BadEll { ell: usize, n: usize },
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
