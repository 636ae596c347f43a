use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::rational::Rational;

use super::DiagramError;

/// A generator occurrence: name, type, and the scalar for indexed families.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: Arc<str>,
    pub arity: usize,
    pub coarity: usize,
    pub scalar: Option<Rational>,
}

impl Generator {
    pub fn new(name: &str, arity: usize, coarity: usize) -> Self {
        Generator { name: name.into(), arity, coarity, scalar: None }
    }

    pub fn with_scalar(name: &str, arity: usize, coarity: usize, scalar: Rational) -> Self {
        Generator { name: name.into(), arity, coarity, scalar: Some(scalar) }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.scalar {
            Some(k) => write!(f, "{}({})", self.name, k),
            None => f.write_str(&self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermKind {
    Gen(Generator),
    /// The identity on one wire.
    Id,
    /// The identity on zero wires.
    Empty,
    /// The swap of two wires.
    Sym,
    Seq(Term, Term),
    Par(Term, Term),
}

#[derive(Debug)]
struct Node {
    kind: TermKind,
    arity: usize,
    coarity: usize,
    size: usize,
    hash: u64,
}

/// An immutable, typed Σ-term. Cloning is cheap; equality is structural.
#[derive(Clone)]
pub struct Term(Arc<Node>);

impl Term {
    fn make(kind: TermKind, arity: usize, coarity: usize) -> Term {
        let mut h = DefaultHasher::new();
        let size = match &kind {
            TermKind::Gen(g) => {
                0u8.hash(&mut h);
                g.hash(&mut h);
                1
            }
            TermKind::Id => {
                1u8.hash(&mut h);
                1
            }
            TermKind::Empty => {
                2u8.hash(&mut h);
                1
            }
            TermKind::Sym => {
                3u8.hash(&mut h);
                1
            }
            TermKind::Seq(a, b) => {
                4u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                b.0.hash.hash(&mut h);
                a.size() + b.size() + 1
            }
            TermKind::Par(a, b) => {
                5u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                b.0.hash.hash(&mut h);
                a.size() + b.size() + 1
            }
        };
        Term(Arc::new(Node { kind, arity, coarity, size, hash: h.finish() }))
    }

    pub fn gen(g: Generator) -> Term {
        let (a, c) = (g.arity, g.coarity);
        Term::make(TermKind::Gen(g), a, c)
    }

    pub fn id() -> Term {
        Term::make(TermKind::Id, 1, 1)
    }

    pub fn empty() -> Term {
        Term::make(TermKind::Empty, 0, 0)
    }

    pub fn sym() -> Term {
        Term::make(TermKind::Sym, 2, 2)
    }

    /// `self ; next`, checking that the interface widths agree.
    pub fn seq(&self, next: &Term) -> Result<Term, DiagramError> {
        if self.coarity() != next.arity() {
            return Err(DiagramError::Mismatch { left: self.coarity(), right: next.arity() });
        }
        Ok(Term::make(TermKind::Seq(self.clone(), next.clone()), self.arity(), next.coarity()))
    }

    /// `self * below`.
    pub fn par(&self, below: &Term) -> Term {
        Term::make(
            TermKind::Par(self.clone(), below.clone()),
            self.arity() + below.arity(),
            self.coarity() + below.coarity(),
        )
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn arity(&self) -> usize {
        self.0.arity
    }

    pub fn coarity(&self) -> usize {
        self.0.coarity
    }

    pub fn ty(&self) -> (usize, usize) {
        (self.0.arity, self.0.coarity)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn as_generator(&self) -> Option<&Generator> {
        match &self.0.kind {
            TermKind::Gen(g) => Some(g),
            _ => None,
        }
    }

    /// Every generator occurrence, left to right.
    pub fn generators(&self) -> Vec<&Generator> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t.kind() {
                TermKind::Gen(g) => out.push(g),
                TermKind::Seq(a, b) | TermKind::Par(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                _ => {}
            }
        }
        out
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.size == other.0.size
                && self.0.arity == other.0.arity
                && self.0.coarity == other.0.coarity
                && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash.hash(state);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({} : {} → {})", self, self.arity(), self.coarity())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::syntax::print(self))
    }
}
