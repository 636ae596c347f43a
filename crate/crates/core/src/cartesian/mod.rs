//! Cartesian terms over operations of coarity one, unconditional
//! quantitative equational logic, and the translation `Φ` into string
//! diagrams with a natural cocommutative comonoid.

mod phi;
mod qel;
mod simulate;
mod term;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::diagram::{Term, TermKind};
use crate::quantale::{QuantaleKind, QuantaleValue};

pub use phi::{copy_bundle, phi_translate, phi_tuple, prime_theory, projection};
pub use qel::{check_qel, parse_qel, render_qel, QelCertificate, QelJson, QelReport, QelRule};
pub use simulate::simulate_qel_in_monoidal;
pub use term::{parse_cart, substitute, CartTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartesianError {
    #[error("{message} at byte {pos}")]
    Parse { pos: usize, message: String },
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("`{op}` takes {expected} arguments, got {found}")]
    Arity { op: String, expected: usize, found: usize },
    #[error("variable x{} is not bound by a substitution of length {size}", var + 1)]
    UnboundVariable { var: usize, size: usize },
    #[error("term mentions x{needed} but the context has {ctx} variables")]
    ContextTooSmall { needed: usize, ctx: usize },
    #[error("`{0}` is not a cartesian diagram")]
    NotCartesian(String),
    #[error("operation name `{0}` is reserved")]
    Reserved(String),
    #[error("at {path}: {message}")]
    Qel { path: String, message: String },
    #[error("{0}")]
    Theory(String),
}

/// Operation symbols and their arities; every operation has coarity 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CartSignature {
    ops: BTreeMap<String, usize>,
}

impl CartSignature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an operation. `copy`, `del` and the structural names are taken
    /// by the translation.
    pub fn declare(&mut self, name: &str, arity: usize) -> Result<(), CartesianError> {
        if name == "copy" || name == "del" || crate::diagram::is_reserved(name) || term::is_variable(name) {
            return Err(CartesianError::Reserved(name.to_string()));
        }
        self.ops.insert(name.to_string(), arity);
        Ok(())
    }

    pub fn with(mut self, name: &str, arity: usize) -> Result<Self, CartesianError> {
        self.declare(name, arity)?;
        Ok(self)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.ops.get(name).copied()
    }

    pub fn ops(&self) -> impl Iterator<Item = (&str, usize)> {
        self.ops.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Checks operation arities.
    pub fn check(&self, t: &CartTerm) -> Result<(), CartesianError> {
        match t {
            CartTerm::Var(_) => Ok(()),
            CartTerm::Op(o, args) => {
                let expected = self.arity(o).ok_or_else(|| CartesianError::UnknownOp(o.to_string()))?;
                if expected != args.len() {
                    return Err(CartesianError::Arity { op: o.to_string(), expected, found: args.len() });
                }
                args.iter().try_for_each(|a| self.check(a))
            }
        }
    }
}

/// `lhs = rhs` with variables drawn from a context of `ctx` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartEquation {
    pub label: String,
    pub ctx: usize,
    pub lhs: CartTerm,
    pub rhs: CartTerm,
}

/// `lhs =_eps rhs` in a context of `ctx` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartAxiom {
    pub label: String,
    pub ctx: usize,
    pub lhs: CartTerm,
    pub rhs: CartTerm,
    pub eps: QuantaleValue,
}

/// An unconditional quantitative algebraic theory `(Σ, E, E_q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartTheory {
    pub name: String,
    pub quantale: QuantaleKind,
    pub signature: CartSignature,
    pub equations: Vec<CartEquation>,
    pub axioms: Vec<CartAxiom>,
}

fn context_of(terms: &[&CartTerm]) -> usize {
    terms.iter().filter_map(|t| t.max_var()).map(|v| v + 1).max().unwrap_or(0)
}

impl CartTheory {
    pub fn new(name: impl Into<String>, quantale: QuantaleKind, signature: CartSignature) -> Self {
        CartTheory { name: name.into(), quantale, signature, equations: Vec::new(), axioms: Vec::new() }
    }

    /// Adds `lhs = rhs`, parsed against the signature.
    pub fn equation(mut self, label: &str, lhs: &str, rhs: &str) -> Result<Self, CartesianError> {
        let (lhs, rhs) = (parse_cart(lhs, &self.signature)?, parse_cart(rhs, &self.signature)?);
        let ctx = context_of(&[&lhs, &rhs]);
        self.equations.push(CartEquation { label: label.to_string(), ctx, lhs, rhs });
        Ok(self)
    }

    /// Adds `lhs =_eps rhs`, parsed against the signature.
    pub fn axiom(mut self, label: &str, lhs: &str, eps: &str, rhs: &str) -> Result<Self, CartesianError> {
        let (lhs, rhs) = (parse_cart(lhs, &self.signature)?, parse_cart(rhs, &self.signature)?);
        let eps = self.quantale.parse_value(eps).map_err(|e| CartesianError::Theory(e.to_string()))?;
        let ctx = context_of(&[&lhs, &rhs]);
        self.axioms.push(CartAxiom { label: label.to_string(), ctx, lhs, rhs, eps });
        Ok(self)
    }

    pub fn find_axiom(&self, label: &str) -> Option<&CartAxiom> {
        self.axioms.iter().find(|a| a.label == label)
    }
}

/// Reads a diagram over `Σ ⊎ {copy, del}` as a tuple of cartesian terms:
/// an `n → m` diagram becomes `m` terms over `x1 … xn`.
pub fn interpret(t: &Term) -> Result<Vec<CartTerm>, CartesianError> {
    Ok(match t.kind() {
        TermKind::Gen(g) => {
            if g.scalar.is_some() {
                return Err(CartesianError::NotCartesian(g.to_string()));
            }
            match (&*g.name, g.arity, g.coarity) {
                ("copy", 1, 2) => vec![CartTerm::Var(0), CartTerm::Var(0)],
                ("del", 1, 0) => vec![],
                (name, n, 1) => vec![CartTerm::Op(name.into(), (0..n).map(CartTerm::Var).collect())],
                _ => return Err(CartesianError::NotCartesian(g.to_string())),
            }
        }
        TermKind::Id => vec![CartTerm::Var(0)],
        TermKind::Empty => vec![],
        TermKind::Sym => vec![CartTerm::Var(1), CartTerm::Var(0)],
        TermKind::Seq(a, b) => {
            let first = interpret(a)?;
            interpret(b)?.iter().map(|u| substitute(u, &first)).collect::<Result<_, _>>()?
        }
        TermKind::Par(a, b) => {
            let mut out = interpret(a)?;
            let shift = a.arity();
            out.extend(interpret(b)?.iter().map(|u| u.shift(shift)));
            out
        }
    })
}

impl fmt::Display for CartEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} == {}", self.label, self.lhs, self.rhs)
    }
}

impl fmt::Display for CartAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ==({}) {}", self.label, self.lhs, self.eps, self.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse, Signature};

    fn sig() -> CartSignature {
        CartSignature::new().with("f", 2).unwrap().with("g", 1).unwrap()
    }

    #[test]
    fn interpretation_of_diagrams() {
        let s = Signature::new().with("f", 2, 1, None).with("g", 1, 1, None).with("copy", 1, 2, None).with("del", 1, 0, None);
        let d = parse("copy ; f", &s).unwrap();
        assert_eq!(interpret(&d).unwrap(), vec![parse_cart("f(x1, x1)", &sig()).unwrap()]);
        let d = parse("id * del ; g", &s).unwrap();
        assert_eq!(interpret(&d).unwrap(), vec![parse_cart("g(x1)", &sig()).unwrap()]);
        let d = parse("sym ; f", &s).unwrap();
        assert_eq!(interpret(&d).unwrap(), vec![parse_cart("f(x2, x1)", &sig()).unwrap()]);
        assert!(sig().clone().with("copy", 1).is_err());
    }
}
