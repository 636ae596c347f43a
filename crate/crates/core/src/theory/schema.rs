//! Scalar-indexed axiom families.

use std::fmt;
use std::str::FromStr;

use crate::diagram::{parse, Signature};
use crate::quantale::QuantaleValue;
use crate::rational::Rational;
use crate::semantics::Semiring;

use super::{QuantEq, TheoryError};

/// Every built-in axiom family. Equational families conclude `=_⊤`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemaId {
    ScalScal,
    AddScal,
    ZerScal,
    ScalCop,
    ScalDel,
    AddingScalars,
    Idemp,
    ConvAssoc,
    ConvComm,
    NatDel,
    CcCop,
    OrderScalars,
    Tv,
}

pub const ALL_SCHEMAS: [SchemaId; 13] = [
    SchemaId::ScalScal,
    SchemaId::AddScal,
    SchemaId::ZerScal,
    SchemaId::ScalCop,
    SchemaId::ScalDel,
    SchemaId::AddingScalars,
    SchemaId::Idemp,
    SchemaId::ConvAssoc,
    SchemaId::ConvComm,
    SchemaId::NatDel,
    SchemaId::CcCop,
    SchemaId::OrderScalars,
    SchemaId::Tv,
];

impl SchemaId {
    pub fn name(self) -> &'static str {
        match self {
            SchemaId::ScalScal => "scalscal",
            SchemaId::AddScal => "addscal",
            SchemaId::ZerScal => "zerscal",
            SchemaId::ScalCop => "scalcop",
            SchemaId::ScalDel => "scaldel",
            SchemaId::AddingScalars => "addingscalars",
            SchemaId::Idemp => "idemp",
            SchemaId::ConvAssoc => "convassoc",
            SchemaId::ConvComm => "convcomm",
            SchemaId::NatDel => "natdel",
            SchemaId::CcCop => "cccop",
            SchemaId::OrderScalars => "order_scalars",
            SchemaId::Tv => "tv",
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            SchemaId::ScalScal | SchemaId::AddingScalars | SchemaId::ConvAssoc | SchemaId::OrderScalars => 2,
            _ => 1,
        }
    }

    /// True for families of quantitative axioms.
    pub fn is_quantitative(self) -> bool {
        matches!(self, SchemaId::OrderScalars | SchemaId::Tv)
    }

    /// True for families over the bialgebra signature, whose parameters
    /// range over the theory's semiring.
    pub fn uses_semiring(self) -> bool {
        matches!(
            self,
            SchemaId::ScalScal
                | SchemaId::AddScal
                | SchemaId::ZerScal
                | SchemaId::ScalCop
                | SchemaId::ScalDel
                | SchemaId::AddingScalars
                | SchemaId::OrderScalars
        )
    }

    /// The instance at `args`. Bialgebra families need the semiring their
    /// scalars live in; convex families need parameters in `[0, 1]`.
    pub fn instantiate(
        self,
        args: &[Rational],
        semiring: Option<Semiring>,
        sig: &Signature,
    ) -> Result<QuantEq, TheoryError> {
        let domain = |reason: String| TheoryError::Domain { schema: self.name().to_string(), reason };
        if args.len() != self.param_count() {
            return Err(TheoryError::Arity { schema: self.name().to_string(), expected: self.param_count(), found: args.len() });
        }
        let semiring = if self.uses_semiring() {
            let s = semiring.ok_or_else(|| domain("no semiring for scalar parameters".into()))?;
            if let Some(bad) = args.iter().find(|a| !s.contains(a)) {
                return Err(domain(format!("{bad} is not in the {s} semiring")));
            }
            Some(s)
        } else {
            if let Some(bad) = args.iter().find(|a| !a.in_unit_interval()) {
                return Err(domain(format!("{bad} is outside [0, 1]")));
            }
            None
        };
        let top = QuantaleValue::Boolean(true);
        let (lhs, rhs, eps) = match (self, args) {
            (SchemaId::ScalScal, [k, l]) => {
                let prod = semiring.expect("checked").mul(l, k);
                (format!("scalar({k}) ; scalar({l})"), format!("scalar({prod})"), top)
            }
            (SchemaId::AddScal, [k]) => (format!("add ; scalar({k})"), format!("scalar({k}) * scalar({k}) ; add"), top),
            (SchemaId::ZerScal, [k]) => (format!("zero ; scalar({k})"), "zero".to_string(), top),
            (SchemaId::ScalCop, [k]) => (format!("scalar({k}) ; copy"), format!("copy ; scalar({k}) * scalar({k})"), top),
            (SchemaId::ScalDel, [k]) => (format!("scalar({k}) ; del"), "del".to_string(), top),
            (SchemaId::AddingScalars, [k, l]) => {
                let sum = semiring.expect("checked").add(k, l);
                (format!("copy ; scalar({k}) * scalar({l}) ; add"), format!("scalar({sum})"), top)
            }
            (SchemaId::Idemp, [l]) => (format!("cc({l}) ; cop"), "id".to_string(), lawvere_top()),
            (SchemaId::ConvAssoc, [l, m]) => {
                let lm = l * m;
                let rest = Rational::one() - &lm;
                let tilde = if rest.is_zero() { Rational::one() } else { (l - &lm) / rest };
                (format!("cc({l}) ; cc({m}) * id"), format!("cc({lm}) ; id * cc({tilde})"), lawvere_top())
            }
            (SchemaId::ConvComm, [l]) => {
                (format!("cc({l}) ; sym"), format!("cc({})", Rational::one() - l), lawvere_top())
            }
            (SchemaId::NatDel, [l]) => (format!("del ; cc({l})"), "del * del".to_string(), lawvere_top()),
            (SchemaId::CcCop, [l]) => (
                format!("cop ; cc({l})"),
                format!("cc({l}) * cc({l}) ; id * sym * id ; cop * cop"),
                lawvere_top(),
            ),
            (SchemaId::OrderScalars, [k1, k2]) => {
                if k1 > k2 {
                    return Err(domain(format!("{k1} > {k2}")));
                }
                (format!("scalar({k1})"), format!("scalar({k2})"), top)
            }
            (SchemaId::Tv, [l]) => (
                format!("cc({l}) * del"),
                format!("del * cc({})", Rational::one() - l),
                QuantaleValue::lawvere(l.clone()).expect("λ is non-negative"),
            ),
            _ => unreachable!("argument count checked above"),
        };
        let lhs = parse(&lhs, sig)?;
        let rhs = parse(&rhs, sig)?;
        QuantEq::new(lhs, rhs, eps)
    }

    /// Sample parameter tuples drawn from `grid`, respecting the family's
    /// side conditions.
    pub fn grid_args(self, grid: &[Rational], semiring: Option<Semiring>) -> Vec<Vec<Rational>> {
        let admissible: Vec<Rational> = grid
            .iter()
            .filter(|x| match (self.uses_semiring(), semiring) {
                (true, Some(s)) => s.contains(x),
                (true, None) => false,
                (false, _) => x.in_unit_interval(),
            })
            .cloned()
            .collect();
        match self.param_count() {
            1 => admissible.iter().map(|x| vec![x.clone()]).collect(),
            _ => {
                let mut out = Vec::new();
                for a in &admissible {
                    for b in &admissible {
                        if self != SchemaId::OrderScalars || a <= b {
                            out.push(vec![a.clone(), b.clone()]);
                        }
                    }
                }
                out
            }
        }
    }
}

fn lawvere_top() -> QuantaleValue {
    QuantaleValue::lawvere(Rational::zero()).expect("zero is a distance")
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemaId {
    type Err = TheoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_SCHEMAS
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| TheoryError::UnknownAxiom(s.to_string()))
    }
}

/// Equational families conclude `⊤` in whichever quantale the theory uses.
pub(crate) fn retarget_top(eq: QuantEq, top: QuantaleValue) -> QuantEq {
    if eq.eps.is_top() {
        QuantEq { eps: top, ..eq }
    } else {
        eq
    }
}

pub(crate) fn parse_args(text: &str) -> Result<Vec<Rational>, TheoryError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|a| a.trim().parse::<Rational>().map_err(|e| TheoryError::Invalid(e.to_string())))
        .collect()
}
