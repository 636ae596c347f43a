use std::fmt;
use std::str::FromStr;

use crate::diagram::{parse, ScalarDomain, Signature};
use crate::quantale::QuantaleKind;
use crate::semantics::Semiring;

use super::{
    ClosureConfig, Combine, Equation, EquationEntry, Model, QuantEntry, QuantTheory, SchemaId, TheoryError,
};

/// The four theories that ship with the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinTheory {
    /// Commutative bialgebras with scalars from a semiring.
    Ha,
    /// `Ha` with the entrywise order on scalars as quantitative axioms.
    PreOrd,
    /// Convex algebras.
    Ca,
    /// `Ca` with the total-variation axioms.
    Ba,
}

impl BuiltinTheory {
    pub fn name(self) -> &'static str {
        match self {
            BuiltinTheory::Ha => "ha",
            BuiltinTheory::PreOrd => "preord",
            BuiltinTheory::Ca => "ca",
            BuiltinTheory::Ba => "ba",
        }
    }
}

impl fmt::Display for BuiltinTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinTheory {
    type Err = TheoryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ha" | "ha_r" => Ok(BuiltinTheory::Ha),
            "preord" | "preord_r" => Ok(BuiltinTheory::PreOrd),
            "ca" => Ok(BuiltinTheory::Ca),
            "ba" => Ok(BuiltinTheory::Ba),
            other => Err(TheoryError::UnknownTheory(other.to_string())),
        }
    }
}

pub(crate) fn ha_signature(semiring: Semiring) -> Signature {
    Signature::new()
        .with("copy", 1, 2, None)
        .with("del", 1, 0, None)
        .with("add", 2, 1, None)
        .with("zero", 0, 1, None)
        .with("scalar", 1, 1, Some(semiring.scalar_domain()))
}

pub(crate) fn ca_signature() -> Signature {
    Signature::new()
        .with("del", 0, 1, None)
        .with("cop", 2, 1, None)
        .with("cc", 1, 2, Some(ScalarDomain::UnitInterval))
}

const HA_EQUATIONS: [(&str, &str, &str); 12] = [
    ("addassoc", "add * id ; add", "id * add ; add"),
    ("addcomm", "sym ; add", "add"),
    ("addunit", "zero * id ; add", "id"),
    ("copassoc", "copy ; copy * id", "copy ; id * copy"),
    ("copcomm", "copy ; sym", "copy"),
    ("copunit", "copy ; del * id", "id"),
    ("deladd", "add ; del", "del * del"),
    ("copadd", "add ; copy", "copy * copy ; id * sym * id ; add * add"),
    ("zercop", "zero ; copy", "zero * zero"),
    ("delzer", "zero ; del", "empty"),
    ("scalid", "scalar(1)", "id"),
    ("zero", "scalar(0)", "del ; zero"),
];

const HA_SCHEMAS: [SchemaId; 6] = [
    SchemaId::ScalScal,
    SchemaId::AddScal,
    SchemaId::ZerScal,
    SchemaId::ScalCop,
    SchemaId::ScalDel,
    SchemaId::AddingScalars,
];

const CA_EQUATIONS: [(&str, &str, &str); 4] = [
    ("assoc", "cop * id ; cop", "id * cop ; cop"),
    ("comm", "sym ; cop", "cop"),
    ("unit", "del * id ; cop", "id"),
    ("zprob", "cc(0)", "del * id"),
];

const CA_SCHEMAS: [SchemaId; 5] =
    [SchemaId::Idemp, SchemaId::ConvAssoc, SchemaId::ConvComm, SchemaId::NatDel, SchemaId::CcCop];

fn concrete(sig: &Signature, table: &[(&str, &str, &str)]) -> Vec<EquationEntry> {
    table
        .iter()
        .map(|(label, l, r)| {
            EquationEntry::Concrete(Equation {
                label: label.to_string(),
                lhs: parse(l, sig).expect("built-in equation parses"),
                rhs: parse(r, sig).expect("built-in equation parses"),
            })
        })
        .collect()
}

/// Builds a built-in theory. The bialgebra theories need a semiring whose
/// operations are monotone in the order; the convex theories ignore it.
pub fn builtin_theory(which: BuiltinTheory, semiring: Semiring) -> Result<QuantTheory, TheoryError> {
    match which {
        BuiltinTheory::Ha | BuiltinTheory::PreOrd => {
            if let Some([a, a2, b, b2]) = semiring.monotonicity_counterexample() {
                return Err(TheoryError::NotMonotone {
                    semiring,
                    detail: format!("{a} ≤ {a2} and {b} ≤ {b2} but the sum or product is not ordered"),
                });
            }
            let sig = ha_signature(semiring);
            let mut equations = concrete(&sig, &HA_EQUATIONS);
            equations.extend(HA_SCHEMAS.iter().map(|&s| EquationEntry::Schema(s)));
            let (quantitative, model) = if which == BuiltinTheory::PreOrd {
                (vec![QuantEntry::Schema(SchemaId::OrderScalars)], Model::MatrixOrder)
            } else {
                (vec![], Model::Matrix)
            };
            QuantTheory::new(
                format!("{}_{}", which.name(), semiring.name()),
                QuantaleKind::Boolean,
                Some(semiring),
                sig,
                equations,
                quantitative,
                ClosureConfig { seq: Combine::Sum, par: Combine::Sum, symm: false },
                model,
            )
        }
        BuiltinTheory::Ca | BuiltinTheory::Ba => {
            let sig = ca_signature();
            let mut equations = concrete(&sig, &CA_EQUATIONS);
            equations.extend(CA_SCHEMAS.iter().map(|&s| EquationEntry::Schema(s)));
            let (quantitative, model) = if which == BuiltinTheory::Ba {
                (vec![QuantEntry::Schema(SchemaId::Tv)], Model::StochasticTv)
            } else {
                (vec![], Model::Stochastic)
            };
            QuantTheory::new(
                which.name(),
                QuantaleKind::Lawvere,
                None,
                sig,
                equations,
                quantitative,
                ClosureConfig { seq: Combine::Sum, par: Combine::Meet, symm: true },
                model,
            )
        }
    }
}

/// Resolves the names accepted on the command line: `ha_bool`,
/// `ha_nonneg`, `preord_bool`, `preord_nonneg`, `ca`, `ba`.
pub fn builtin_by_name(name: &str) -> Result<QuantTheory, TheoryError> {
    let lower = name.to_ascii_lowercase();
    let (base, semiring) = match lower.rsplit_once('_') {
        Some((base, s)) if base == "ha" || base == "preord" => (base, s.parse::<Semiring>()?),
        _ => (lower.as_str(), Semiring::Boolean),
    };
    builtin_theory(base.parse()?, semiring)
}
