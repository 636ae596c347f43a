//! Derivation certificates for quantitative equations: a checker for
//! finite proof trees and generators that build them for the built-in
//! theories.

mod check;
mod format;
mod prove;
pub(crate) mod sexpr;

use std::fmt;

use thiserror::Error;

use crate::cartesian::CartesianError;
use crate::diagram::{DiagramError, Term};
use crate::distance::DistanceError;
use crate::quantale::{finite_join, QuantaleError, QuantaleKind, QuantaleValue};
use crate::rational::Rational;
use crate::semantics::SemanticsError;
use crate::theory::{Combine, QuantEq, QuantTheory, TheoryError};

pub use check::{check, check_with, rule_conclusion, CheckOptions, CheckReport, TrustedLeaf};
pub use format::{from_json, parse_certificate, render_certificate, theory_hint, to_json, CertJson};
pub use prove::{prove_matrix_order, prove_tv_column, prove_tv_general};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("node {path}: {message}")]
    Rejected { path: String, message: String },
    #[error("not derivable: entry ({row}, {col}) has {left} ≰ {right}")]
    NotDerivable { row: usize, col: usize, left: Box<Rational>, right: Box<Rational> },
    #[error("{0}")]
    Unsupported(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Distance(#[from] DistanceError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
    #[error(transparent)]
    Cartesian(#[from] CartesianError),
}

/// Inference rules of the closure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Refl,
    Bot,
    Mon,
    Join,
    Triang,
    Symm,
    SeqSum,
    SeqMeet,
    ParSum,
    ParMeet,
    /// A quantitative axiom: a concrete label, or a family at scalars.
    Axiom { name: String, args: Vec<Rational> },
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Refl => "REFL",
            Rule::Bot => "BOT",
            Rule::Mon => "MON",
            Rule::Join => "JOIN",
            Rule::Triang => "TRIANG",
            Rule::Symm => "SYMM",
            Rule::SeqSum => "SEQ_SUM",
            Rule::SeqMeet => "SEQ_MEET",
            Rule::ParSum => "PAR_SUM",
            Rule::ParMeet => "PAR_MEET",
            Rule::Axiom { .. } => "AXIOM",
        }
    }

    pub fn seq(c: Combine) -> Rule {
        match c {
            Combine::Sum => Rule::SeqSum,
            Combine::Meet => Rule::SeqMeet,
        }
    }

    pub fn par(c: Combine) -> Rule {
        match c {
            Combine::Sum => Rule::ParSum,
            Combine::Meet => Rule::ParMeet,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Axiom { name, args } if args.is_empty() => write!(f, "AXIOM {name}"),
            Rule::Axiom { name, args } => {
                let args: Vec<String> = args.iter().map(ToString::to_string).collect();
                write!(f, "AXIOM {name}[{}]", args.join(","))
            }
            other => f.write_str(other.tag()),
        }
    }
}

/// A derivation tree; every node carries the judgment `lhs =_eps rhs` it
/// concludes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub rule: Rule,
    pub lhs: Term,
    pub rhs: Term,
    pub eps: QuantaleValue,
    pub children: Vec<Certificate>,
}

fn combine(c: Combine, a: &QuantaleValue, b: &QuantaleValue) -> Result<QuantaleValue, QuantaleError> {
    match c {
        Combine::Sum => a.tensor(b),
        Combine::Meet => a.meet(b),
    }
}

impl Certificate {
    pub fn refl(kind: QuantaleKind, lhs: Term, rhs: Term) -> Self {
        Certificate { rule: Rule::Refl, lhs, rhs, eps: kind.top(), children: vec![] }
    }

    pub fn bot(kind: QuantaleKind, lhs: Term, rhs: Term) -> Self {
        Certificate { rule: Rule::Bot, lhs, rhs, eps: kind.bottom(), children: vec![] }
    }

    /// The theory's axiom `name` at `args`.
    pub fn axiom(theory: &QuantTheory, name: &str, args: &[Rational]) -> Result<Self, CertifyError> {
        let QuantEq { lhs, rhs, eps } = theory.axiom(name, args)?;
        Ok(Certificate { rule: Rule::Axiom { name: name.to_string(), args: args.to_vec() }, lhs, rhs, eps, children: vec![] })
    }

    /// Weakens the conclusion to `eps ⊑ self.eps`.
    pub fn mon(self, eps: QuantaleValue) -> Result<Self, CertifyError> {
        if !eps.leq(&self.eps)? {
            return Err(CertifyError::Unsupported(format!("{eps} is not below {}", self.eps)));
        }
        Ok(Certificate { rule: Rule::Mon, lhs: self.lhs.clone(), rhs: self.rhs.clone(), eps, children: vec![self] })
    }

    /// Joins derivations of the same judgment.
    pub fn join(kind: QuantaleKind, children: Vec<Certificate>) -> Result<Self, CertifyError> {
        let first = children.first().ok_or_else(|| CertifyError::Unsupported("JOIN needs a premise".into()))?;
        let eps = finite_join(kind, children.iter().map(|c| &c.eps))?;
        Ok(Certificate { rule: Rule::Join, lhs: first.lhs.clone(), rhs: first.rhs.clone(), eps, children })
    }

    pub fn symm(self) -> Self {
        Certificate { rule: Rule::Symm, lhs: self.rhs.clone(), rhs: self.lhs.clone(), eps: self.eps.clone(), children: vec![self] }
    }

    /// Chains `a = b` and `b = c`.
    pub fn triang(self, next: Certificate) -> Result<Self, CertifyError> {
        if self.rhs != next.lhs {
            return Err(CertifyError::Unsupported(format!("cannot chain: {} ≠ {}", self.rhs, next.lhs)));
        }
        let eps = self.eps.tensor(&next.eps)?;
        Ok(Certificate { rule: Rule::Triang, lhs: self.lhs.clone(), rhs: next.rhs.clone(), eps, children: vec![self, next] })
    }

    /// Composes two derivations with `;`.
    pub fn seq(self, next: Certificate, c: Combine) -> Result<Self, CertifyError> {
        let lhs = self.lhs.seq(&next.lhs)?;
        let rhs = self.rhs.seq(&next.rhs)?;
        let eps = combine(c, &self.eps, &next.eps)?;
        Ok(Certificate { rule: Rule::seq(c), lhs, rhs, eps, children: vec![self, next] })
    }

    /// Composes two derivations with `*`.
    pub fn par(self, below: Certificate, c: Combine) -> Result<Self, CertifyError> {
        let lhs = self.lhs.par(&below.lhs);
        let rhs = self.rhs.par(&below.rhs);
        let eps = combine(c, &self.eps, &below.eps)?;
        Ok(Certificate { rule: Rule::par(c), lhs, rhs, eps, children: vec![self, below] })
    }

    /// `TRIANG` with `REFL` steps on either side where the endpoints differ
    /// syntactically: concludes `lhs =_eps rhs` from a derivation between
    /// terms equal to them in the theory.
    pub fn bridge(self, kind: QuantaleKind, lhs: &Term, rhs: &Term) -> Result<Self, CertifyError> {
        let mut cert = self;
        if cert.lhs != *lhs {
            cert = Certificate::refl(kind, lhs.clone(), cert.lhs.clone()).triang(cert)?;
        }
        if cert.rhs != *rhs {
            let right = Certificate::refl(kind, cert.rhs.clone(), rhs.clone());
            cert = cert.triang(right)?;
        }
        Ok(cert)
    }

    pub fn judgment(&self) -> QuantEq {
        QuantEq { lhs: self.lhs.clone(), rhs: self.rhs.clone(), eps: self.eps.clone() }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Certificate::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(Certificate::height).max().unwrap_or(0)
    }

    /// Paths of all nodes in pre-order; a path lists child indices.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for (i, c) in self.children.iter().enumerate() {
            out.extend(c.paths().into_iter().map(|mut p| {
                p.insert(0, i);
                p
            }));
        }
        out
    }

    pub fn node(&self, path: &[usize]) -> Option<&Certificate> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children.get(i)?.node(rest),
        }
    }

    pub fn node_mut(&mut self, path: &[usize]) -> Option<&mut Certificate> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children.get_mut(i)?.node_mut(rest),
        }
    }

    /// Counts nodes by rule tag.
    pub fn count(&self, tag: &str) -> usize {
        usize::from(self.rule.tag() == tag) + self.children.iter().map(|c| c.count(tag)).sum::<usize>()
    }
}

/// Renders a node path as `/0/1`; the root is `/`.
pub fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        return "/".to_string();
    }
    path.iter().map(|i| format!("/{i}")).collect()
}

/// A value strictly stronger than `eps` (strictly above it in the
/// quantale order), or `None` at `⊤`.
pub fn strengthen(eps: &QuantaleValue) -> Option<QuantaleValue> {
    match eps {
        QuantaleValue::Boolean(false) => Some(QuantaleValue::Boolean(true)),
        QuantaleValue::Boolean(true) => None,
        QuantaleValue::Lawvere(_) if eps.is_top() => None,
        QuantaleValue::Lawvere(_) => match eps.as_rational() {
            Some(r) => Some(QuantaleValue::lawvere(r / &Rational::from_integer(2)).expect("non-negative")),
            None => Some(QuantaleValue::lawvere(Rational::one()).expect("non-negative")),
        },
    }
}

/// Whether the judgment holds in the theory's model: `ε ⊑ d(F lhs, F rhs)`.
pub fn truth_check(qe: &QuantEq, theory: &QuantTheory) -> Result<bool, CertifyError> {
    Ok(theory.truth_check(qe)?)
}
