//! Exact matrix semantics: semirings, matrices, stochastic matrices, and
//! functorial evaluation of diagrams.

mod eval;
mod matrix;
pub mod realize;
mod semiring;

use thiserror::Error;

use crate::diagram::DiagramError;
use crate::rational::Rational;

pub use eval::{eval_ca, eval_ha, Evaluator, Interpretation};
pub use matrix::{Distribution, Matrix, StochMatrix};
pub use semiring::Semiring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("dimension mismatch: {}×{} vs {}×{}", left.0, left.1, right.0, right.1)]
    Dimension { left: (usize, usize), right: (usize, usize) },
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("no generator interpretation for `{0}`")]
    UnknownGenerator(String),
    #[error("{value} is not an element of the {semiring} semiring")]
    NotInSemiring { value: Rational, semiring: Semiring },
    #[error("not stochastic: {0}")]
    NotStochastic(String),
    #[error("no stochastic matrix has type {arity} → 0")]
    NoStochastic { arity: usize },
    #[error("unknown semiring `{0}`")]
    UnknownSemiring(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}
