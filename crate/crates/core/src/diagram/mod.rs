//! Typed string-diagram terms.

pub mod build;
mod signature;
pub mod syntax;
mod term;

use std::ops::Range;

use thiserror::Error;

use crate::rational::Rational;

pub use signature::{is_reserved, GeneratorDecl, ScalarDomain, Signature};
pub use syntax::{parse, print};
pub use term::{Generator, Term, TermKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("composition mismatch: {left} ≠ {right}")]
    Mismatch { left: usize, right: usize },
    #[error("scalar {value} of `{name}` is outside its domain ({domain})")]
    ScalarDomain { name: String, value: Rational, domain: ScalarDomain },
    #[error("generator `{0}` needs a scalar argument")]
    MissingScalar(String),
    #[error("generator `{0}` takes no scalar argument")]
    UnexpectedScalar(String),
    #[error("`{name}` has type {}→{} but is declared {}→{}", found.0, found.1, expected.0, expected.1)]
    GeneratorType { name: String, expected: (usize, usize), found: (usize, usize) },
    #[error("invalid generator name `{0}`")]
    BadName(String),
    #[error("generator `{0}` declared twice")]
    Duplicate(String),
    #[error("merge needs at least one output wire")]
    EmptyMerge,
    #[error("{message} at {}..{}", span.start, span.end)]
    Syntax { span: Range<usize>, message: String },
    #[error("{source} at {}..{}", span.start, span.end)]
    At { span: Range<usize>, source: Box<DiagramError> },
}

impl DiagramError {
    /// Attaches a source span unless one is already present.
    pub fn at(self, span: Range<usize>) -> DiagramError {
        match self {
            DiagramError::Syntax { .. } | DiagramError::At { .. } => self,
            other => DiagramError::At { span, source: Box::new(other) },
        }
    }

    /// The source span, for errors raised by the parser.
    pub fn span(&self) -> Option<Range<usize>> {
        match self {
            DiagramError::Syntax { span, .. } | DiagramError::At { span, .. } => Some(span.clone()),
            _ => None,
        }
    }
}
