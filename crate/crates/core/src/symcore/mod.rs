//! Exact polynomial and rational-function arithmetic over a field, with
//! named symbols, an expression parser, and the small amount of linear
//! algebra the rest of the crate needs.

pub mod dispersion;
pub mod field;
pub mod gcd;
mod heugcd;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod ring;
pub mod roots;
pub mod series;

use thiserror::Error;

pub use dispersion::{dispersion_set, OrbitAction};
pub use field::{Field, OrderedField};
pub use gcd::gcd;
pub use matrix::Matrix;
pub use parse::{parse_ast, parse_expression, ExprAst};
pub use poly::{Monomial, Poly};
pub use ratfunc::RatFunc;
pub use ring::Ring;
pub use roots::{poly_sqrt, ratfunc_sqrt, rational_sqrt};
pub use series::epsilon_expansion;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared identifier `{0}`")]
    UndeclaredSymbol(String),
    #[error("`{0}` is not a valid identifier")]
    BadSymbol(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("division by the zero polynomial")]
    ZeroDenominator,
    #[error("substitution makes the denominator vanish identically")]
    SubstitutionPole,
    #[error("pole at the expansion point: denominator vanishes at eps = 0")]
    PoleAtExpansionPoint,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("transformation is not a translation or a dilation")]
    NotNormalized,
    #[error("transformation is periodic")]
    Periodic,
}
