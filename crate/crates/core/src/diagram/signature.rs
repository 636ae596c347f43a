use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::rational::Rational;

use super::{DiagramError, Generator, Term, TermKind};

/// Admissible values for the parameter of a scalar-indexed family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarDomain {
    Any,
    /// `{0, 1}`.
    Boolean,
    /// `[0, ∞)`.
    NonNegative,
    /// `[0, 1]`.
    UnitInterval,
}

impl ScalarDomain {
    pub fn contains(self, k: &Rational) -> bool {
        match self {
            ScalarDomain::Any => true,
            ScalarDomain::Boolean => k.is_zero() || k.is_one(),
            ScalarDomain::NonNegative => !k.is_negative(),
            ScalarDomain::UnitInterval => k.in_unit_interval(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScalarDomain::Any => "any",
            ScalarDomain::Boolean => "bool",
            ScalarDomain::NonNegative => "nonneg",
            ScalarDomain::UnitInterval => "unit",
        }
    }
}

impl fmt::Display for ScalarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScalarDomain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "any" => Ok(ScalarDomain::Any),
            "bool" | "boolean" => Ok(ScalarDomain::Boolean),
            "nonneg" => Ok(ScalarDomain::NonNegative),
            "unit" => Ok(ScalarDomain::UnitInterval),
            other => Err(format!("unknown scalar domain `{other}`")),
        }
    }
}

/// Declaration of a generator or a scalar-indexed generator family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorDecl {
    pub name: String,
    pub arity: usize,
    pub coarity: usize,
    pub scalar: Option<ScalarDomain>,
}

/// A monoidal signature.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    decls: BTreeMap<String, GeneratorDecl>,
}

/// Names the term grammar reserves for structural atoms.
pub fn is_reserved(name: &str) -> bool {
    if matches!(name, "id" | "sym" | "empty") {
        return true;
    }
    if let Some(rest) = name.strip_prefix("id_") {
        return !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit());
    }
    if let Some(rest) = name.strip_prefix("sym_") {
        if let Some((a, b)) = rest.split_once('_') {
            let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
            return digits(a) && digits(b);
        }
    }
    false
}

fn valid_ident(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn declare(&mut self, decl: GeneratorDecl) -> Result<(), DiagramError> {
        if !valid_ident(&decl.name) || is_reserved(&decl.name) {
            return Err(DiagramError::BadName(decl.name));
        }
        if self.decls.contains_key(&decl.name) {
            return Err(DiagramError::Duplicate(decl.name));
        }
        self.decls.insert(decl.name.clone(), decl);
        Ok(())
    }

    /// Builder-style `declare` for known-good names.
    pub fn with(mut self, name: &str, arity: usize, coarity: usize, scalar: Option<ScalarDomain>) -> Self {
        self.declare(GeneratorDecl { name: name.to_string(), arity, coarity, scalar })
            .expect("valid generator declaration");
        self
    }

    pub fn get(&self, name: &str) -> Option<&GeneratorDecl> {
        self.decls.get(name)
    }

    pub fn decls(&self) -> impl Iterator<Item = &GeneratorDecl> {
        self.decls.values()
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    /// Resolves a generator occurrence, checking the scalar against the
    /// family's domain.
    pub fn generator(&self, name: &str, scalar: Option<Rational>) -> Result<Generator, DiagramError> {
        let decl = self.get(name).ok_or_else(|| DiagramError::UnknownGenerator(name.to_string()))?;
        match (decl.scalar, scalar) {
            (None, None) => Ok(Generator::new(name, decl.arity, decl.coarity)),
            (Some(domain), Some(k)) => {
                if !domain.contains(&k) {
                    return Err(DiagramError::ScalarDomain { name: name.to_string(), value: k, domain });
                }
                Ok(Generator::with_scalar(name, decl.arity, decl.coarity, k))
            }
            (Some(_), None) => Err(DiagramError::MissingScalar(name.to_string())),
            (None, Some(_)) => Err(DiagramError::UnexpectedScalar(name.to_string())),
        }
    }

    /// Checks every generator occurrence against this signature and returns
    /// the term's type.
    pub fn typecheck(&self, term: &Term) -> Result<(usize, usize), DiagramError> {
        let mut stack = vec![term];
        while let Some(t) = stack.pop() {
            match t.kind() {
                TermKind::Gen(g) => {
                    let expected = self.generator(&g.name, g.scalar.clone())?;
                    if expected.arity != g.arity || expected.coarity != g.coarity {
                        return Err(DiagramError::GeneratorType {
                            name: g.name.to_string(),
                            expected: (expected.arity, expected.coarity),
                            found: (g.arity, g.coarity),
                        });
                    }
                }
                TermKind::Seq(a, b) | TermKind::Par(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                TermKind::Id | TermKind::Empty | TermKind::Sym => {}
            }
        }
        Ok(term.ty())
    }

    /// Union of two signatures; fails on conflicting declarations.
    pub fn extend(&mut self, other: &Signature) -> Result<(), DiagramError> {
        for decl in other.decls() {
            match self.get(&decl.name) {
                Some(existing) if existing == decl => {}
                Some(_) => return Err(DiagramError::Duplicate(decl.name.clone())),
                None => self.declare(decl.clone())?,
            }
        }
        Ok(())
    }
}
