//! Quantitative monoidal theories: signature, equations, quantitative
//! axioms, closure rules, and the model used to decide equality.

mod builtin;
mod file;
pub(crate) mod schema;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cartesian::{self, CartesianError};
use crate::diagram::{DiagramError, Signature, Term};
use crate::distance;
use crate::quantale::{Quantale, QuantaleError, QuantaleKind, QuantaleValue, ijd_sample_check};
use crate::rational::Rational;
use crate::semantics::{Evaluator, Interpretation, Matrix, Semiring, SemanticsError};

pub use builtin::{builtin_by_name, builtin_theory, BuiltinTheory};
pub use file::{load_theory, parse_theory, render_theory, save_theory};
pub use schema::{SchemaId, ALL_SCHEMAS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("unknown theory `{0}`")]
    UnknownTheory(String),
    #[error("semiring {semiring} is not monotone: {detail}")]
    NotMonotone { semiring: Semiring, detail: String },
    #[error("`{schema}` expects {expected} scalar arguments, got {found}")]
    Arity { schema: String, expected: usize, found: usize },
    #[error("arguments of `{schema}` out of domain: {reason}")]
    Domain { schema: String, reason: String },
    #[error("no axiom named `{0}`")]
    UnknownAxiom(String),
    #[error("equality is undecidable here: theory `{0}` has no faithful model")]
    Undecidable(String),
    #[error("theory `{0}` has no semantic distance")]
    NoDistance(String),
    #[error("closure {0} needs an infinitely join distributive quantale")]
    Closure(String),
    #[error("line {line}: {message}")]
    File { line: usize, message: String },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
    #[error(transparent)]
    Cartesian(#[from] Box<CartesianError>),
}

/// A quantitative equation `lhs =_eps rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantEq {
    pub lhs: Term,
    pub rhs: Term,
    pub eps: QuantaleValue,
}

impl QuantEq {
    pub fn new(lhs: Term, rhs: Term, eps: QuantaleValue) -> Result<Self, TheoryError> {
        if lhs.ty() != rhs.ty() {
            return Err(TheoryError::Invalid(format!(
                "sides have types {}→{} and {}→{}",
                lhs.arity(),
                lhs.coarity(),
                rhs.arity(),
                rhs.coarity()
            )));
        }
        Ok(QuantEq { lhs, rhs, eps })
    }
}

impl fmt::Display for QuantEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =({}) {}", self.lhs, self.eps, self.rhs)
    }
}

/// A named equation `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub label: String,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquationEntry {
    Concrete(Equation),
    Schema(SchemaId),
}

/// A named quantitative axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantAxiom {
    pub label: String,
    pub eq: QuantEq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuantEntry {
    Concrete(QuantAxiom),
    Schema(SchemaId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Combine {
    /// Premise bounds combined with `⊕`.
    Sum,
    /// Premise bounds combined with `⊓`.
    Meet,
}

impl Combine {
    pub fn name(self) -> &'static str {
        match self {
            Combine::Sum => "sum",
            Combine::Meet => "meet",
        }
    }
}

impl FromStr for Combine {
    type Err = TheoryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(Combine::Sum),
            "meet" => Ok(Combine::Meet),
            other => Err(TheoryError::Invalid(format!("expected sum or meet, got `{other}`"))),
        }
    }
}

/// Which sequential and parallel rules, and whether symmetry, close the
/// quantitative axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClosureConfig {
    pub seq: Combine,
    pub par: Combine,
    pub symm: bool,
}

impl ClosureConfig {
    /// Validates the configuration against a built-in quantale.
    pub fn new(seq: Combine, par: Combine, symm: bool, quantale: QuantaleKind) -> Result<Self, TheoryError> {
        let config = ClosureConfig { seq, par, symm };
        if config.needs_ijd() && !quantale.ijd_sample_check() {
            return Err(TheoryError::Closure(config.to_string()));
        }
        Ok(config)
    }

    /// Validates the configuration against an arbitrary quantale using the
    /// given sample elements.
    pub fn for_quantale<Q: Quantale>(
        seq: Combine,
        par: Combine,
        symm: bool,
        q: &Q,
        samples: &[Q::Value],
    ) -> Result<Self, TheoryError> {
        let config = ClosureConfig { seq, par, symm };
        if config.needs_ijd() && !ijd_sample_check(q, samples) {
            return Err(TheoryError::Closure(config.to_string()));
        }
        Ok(config)
    }

    pub fn needs_ijd(&self) -> bool {
        self.seq == Combine::Meet || self.par == Combine::Meet
    }

    /// All eight configurations.
    pub fn all() -> Vec<ClosureConfig> {
        let mut out = Vec::new();
        for seq in [Combine::Sum, Combine::Meet] {
            for par in [Combine::Sum, Combine::Meet] {
                for symm in [false, true] {
                    out.push(ClosureConfig { seq, par, symm });
                }
            }
        }
        out
    }
}

impl fmt::Display for ClosureConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seq={} par={} symm={}", self.seq.name(), self.par.name(), self.symm)
    }
}

/// The semantics a theory uses to decide equality and compute distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Matrices over the theory's semiring; distance `⊤` iff equal.
    Matrix,
    /// Matrices ordered entrywise; Boolean distance `⊤` iff `F(s) ≤ F(t)`.
    MatrixOrder,
    /// Stochastic matrices; distance `0` iff equal, `∞` otherwise.
    Stochastic,
    /// Stochastic matrices at distance `tvmax`.
    StochasticTv,
    /// Tuples of cartesian terms. `exact` means the underlying equations are
    /// empty, so distinct tuples are provably distinct.
    Cartesian { exact: bool },
    /// No decision procedure.
    None,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Matrix => "matrix",
            Model::MatrixOrder => "matrix-order",
            Model::Stochastic => "stochastic",
            Model::StochasticTv => "stochastic-tv",
            Model::Cartesian { exact: true } => "cartesian-exact",
            Model::Cartesian { exact: false } => "cartesian",
            Model::None => "none",
        }
    }
}

impl FromStr for Model {
    type Err = TheoryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "matrix" => Model::Matrix,
            "matrix-order" => Model::MatrixOrder,
            "stochastic" => Model::Stochastic,
            "stochastic-tv" => Model::StochasticTv,
            "cartesian-exact" => Model::Cartesian { exact: true },
            "cartesian" => Model::Cartesian { exact: false },
            "none" => Model::None,
            other => return Err(TheoryError::Invalid(format!("unknown model `{other}`"))),
        })
    }
}

/// Outcome of asking a model whether two terms are equal in the theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Equal,
    NotEqual,
    Unknown,
}

/// A quantitative monoidal theory `(Σ, E, E_q)` with its closure and model.
#[derive(Debug, Clone)]
pub struct QuantTheory {
    pub name: String,
    pub quantale: QuantaleKind,
    pub semiring: Option<Semiring>,
    pub signature: Signature,
    pub equations: Vec<EquationEntry>,
    pub quantitative: Vec<QuantEntry>,
    pub closure: ClosureConfig,
    pub model: Model,
    evaluator: Option<Evaluator>,
}

impl PartialEq for QuantTheory {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.quantale == other.quantale
            && self.semiring == other.semiring
            && self.signature == other.signature
            && self.equations == other.equations
            && self.quantitative == other.quantitative
            && self.closure == other.closure
            && self.model == other.model
    }
}

/// One instance checked by [`QuantTheory::soundness_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub label: String,
    pub args: Vec<Rational>,
    pub holds: bool,
    pub detail: String,
}

impl QuantTheory {
    /// Assembles and validates a theory.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        quantale: QuantaleKind,
        semiring: Option<Semiring>,
        signature: Signature,
        equations: Vec<EquationEntry>,
        quantitative: Vec<QuantEntry>,
        closure: ClosureConfig,
        model: Model,
    ) -> Result<Self, TheoryError> {
        let closure = ClosureConfig::new(closure.seq, closure.par, closure.symm, quantale)?;
        let evaluator = match model {
            Model::Matrix | Model::MatrixOrder => {
                let s = semiring.ok_or_else(|| TheoryError::Invalid("matrix model needs a semiring".into()))?;
                Some(Evaluator::new(Interpretation::Bialgebra(s)))
            }
            Model::Stochastic | Model::StochasticTv => Some(Evaluator::new(Interpretation::Convex)),
            _ => None,
        };
        if model == Model::MatrixOrder && quantale != QuantaleKind::Boolean {
            return Err(TheoryError::Invalid("the entrywise order is Boolean-valued".into()));
        }
        if model == Model::StochasticTv && quantale != QuantaleKind::Lawvere {
            return Err(TheoryError::Invalid("total variation is Lawvere-valued".into()));
        }
        let theory = QuantTheory {
            name: name.into(),
            quantale,
            semiring,
            signature,
            equations,
            quantitative,
            closure,
            model,
            evaluator,
        };
        theory.validate()?;
        Ok(theory)
    }

    fn validate(&self) -> Result<(), TheoryError> {
        let named = |label: &str, e: TheoryError| TheoryError::Invalid(format!("equation `{label}`: {e}"));
        for entry in &self.equations {
            match entry {
                EquationEntry::Concrete(eq) => {
                    self.signature.typecheck(&eq.lhs).map_err(|e| named(&eq.label, e.into()))?;
                    self.signature.typecheck(&eq.rhs).map_err(|e| named(&eq.label, e.into()))?;
                    QuantEq::new(eq.lhs.clone(), eq.rhs.clone(), self.quantale.top())
                        .map_err(|e| named(&eq.label, e))?;
                }
                EquationEntry::Schema(id) => self.check_schema(*id, false)?,
            }
        }
        for entry in &self.quantitative {
            match entry {
                QuantEntry::Concrete(ax) => {
                    self.signature.typecheck(&ax.eq.lhs).map_err(|e| named(&ax.label, e.into()))?;
                    self.signature.typecheck(&ax.eq.rhs).map_err(|e| named(&ax.label, e.into()))?;
                    if ax.eq.eps.kind() != self.quantale {
                        return Err(named(&ax.label, QuantaleError::Mismatch(self.quantale, ax.eq.eps.kind()).into()));
                    }
                }
                QuantEntry::Schema(id) => self.check_schema(*id, true)?,
            }
        }
        Ok(())
    }

    fn check_schema(&self, id: SchemaId, quantitative: bool) -> Result<(), TheoryError> {
        if id.is_quantitative() != quantitative {
            let section = if quantitative { "quantitative" } else { "equations" };
            return Err(TheoryError::Invalid(format!("schema `{id}` does not belong in [{section}]")));
        }
        let grid = [Rational::zero(), Rational::one()];
        let args = id
            .grid_args(&grid, self.semiring)
            .into_iter()
            .next()
            .ok_or_else(|| TheoryError::Invalid(format!("schema `{id}` needs a semiring")))?;
        self.instantiate_schema(id, &args).map(|_| ()).map_err(|e| TheoryError::Invalid(format!("schema `{id}`: {e}")))
    }

    /// The instance of a family at the given scalars, with `⊤` read in this
    /// theory's quantale.
    pub fn instantiate_schema(&self, id: SchemaId, args: &[Rational]) -> Result<QuantEq, TheoryError> {
        let eq = id.instantiate(args, self.semiring, &self.signature)?;
        if id.is_quantitative() && eq.eps.kind() != self.quantale {
            return Err(TheoryError::Quantale(QuantaleError::Mismatch(self.quantale, eq.eps.kind())));
        }
        Ok(schema::retarget_top(eq, self.quantale.top()))
    }

    /// Looks up a quantitative axiom by name: a concrete label, or a family
    /// instantiated at `args`.
    pub fn axiom(&self, name: &str, args: &[Rational]) -> Result<QuantEq, TheoryError> {
        for entry in &self.quantitative {
            match entry {
                QuantEntry::Concrete(ax) if ax.label == name => {
                    if !args.is_empty() {
                        return Err(TheoryError::Arity { schema: name.to_string(), expected: 0, found: args.len() });
                    }
                    return Ok(ax.eq.clone());
                }
                QuantEntry::Schema(id) if id.name() == name => return self.instantiate_schema(*id, args),
                _ => {}
            }
        }
        Err(TheoryError::UnknownAxiom(name.to_string()))
    }

    pub fn has_schema(&self, id: SchemaId) -> bool {
        self.equations.contains(&EquationEntry::Schema(id)) || self.quantitative.contains(&QuantEntry::Schema(id))
    }

    /// Evaluates a term in the theory's matrix model.
    pub fn eval(&self, t: &Term) -> Result<Matrix, TheoryError> {
        let ev = self.evaluator.as_ref().ok_or_else(|| TheoryError::Undecidable(self.name.clone()))?;
        self.signature.typecheck(t)?;
        Ok(ev.eval(t)?)
    }

    /// Decides `s = t` modulo the equations via the theory's model.
    pub fn decide_equal(&self, s: &Term, t: &Term) -> Result<Decision, TheoryError> {
        if s.ty() != t.ty() {
            return Ok(Decision::NotEqual);
        }
        if s == t {
            self.signature.typecheck(s)?;
            return Ok(Decision::Equal);
        }
        match self.model {
            Model::Matrix | Model::MatrixOrder | Model::Stochastic | Model::StochasticTv => {
                Ok(if self.eval(s)? == self.eval(t)? { Decision::Equal } else { Decision::NotEqual })
            }
            Model::Cartesian { exact } => {
                self.signature.typecheck(s)?;
                self.signature.typecheck(t)?;
                let (a, b) = (cartesian::interpret(s).map_err(Box::new)?, cartesian::interpret(t).map_err(Box::new)?);
                Ok(match (a == b, exact) {
                    (true, _) => Decision::Equal,
                    (false, true) => Decision::NotEqual,
                    (false, false) => Decision::Unknown,
                })
            }
            Model::None => Ok(Decision::Unknown),
        }
    }

    /// Like [`decide_equal`](Self::decide_equal), but an unknown answer is an
    /// error.
    pub fn equal_in_theory(&self, s: &Term, t: &Term) -> Result<bool, TheoryError> {
        match self.decide_equal(s, t)? {
            Decision::Equal => Ok(true),
            Decision::NotEqual => Ok(false),
            Decision::Unknown => Err(TheoryError::Undecidable(self.name.clone())),
        }
    }

    /// The distance between the interpretations of `s` and `t`.
    pub fn semantic_distance(&self, s: &Term, t: &Term) -> Result<QuantaleValue, TheoryError> {
        if s.ty() != t.ty() {
            return Err(TheoryError::Invalid("terms of different types".into()));
        }
        match self.model {
            Model::Matrix | Model::Stochastic => Ok(if self.eval(s)? == self.eval(t)? {
                self.quantale.top()
            } else {
                self.quantale.bottom()
            }),
            Model::MatrixOrder => {
                let below = self.eval(s)?.first_violation(&self.eval(t)?)?.is_none();
                Ok(QuantaleValue::Boolean(below))
            }
            Model::StochasticTv => {
                let (a, b) = (self.eval(s)?, self.eval(t)?);
                let d = distance::tvmax_matrices(&a, &b).map_err(|e| TheoryError::Invalid(e.to_string()))?;
                Ok(QuantaleValue::lawvere(d)?)
            }
            Model::Cartesian { .. } | Model::None => Err(TheoryError::NoDistance(self.name.clone())),
        }
    }

    /// Whether `qe` holds in the model: `ε ⊑ d(F lhs, F rhs)`.
    pub fn truth_check(&self, qe: &QuantEq) -> Result<bool, TheoryError> {
        let d = self.semantic_distance(&qe.lhs, &qe.rhs)?;
        Ok(qe.eps.leq(&d)?)
    }

    /// Checks every equation (as an equality in the model) and every
    /// quantitative axiom (as a truth check) on the given scalar grid.
    pub fn soundness_report(&self, grid: &[Rational]) -> Result<Vec<AxiomCheck>, TheoryError> {
        let mut out = Vec::new();
        let mut push = |label: &str, args: Vec<Rational>, holds: bool, detail: String| {
            out.push(AxiomCheck { label: label.to_string(), args, holds, detail })
        };
        for entry in &self.equations {
            let instances: Vec<(String, Vec<Rational>, QuantEq)> = match entry {
                EquationEntry::Concrete(eq) => {
                    vec![(eq.label.clone(), vec![], QuantEq::new(eq.lhs.clone(), eq.rhs.clone(), self.quantale.top())?)]
                }
                EquationEntry::Schema(id) => id
                    .grid_args(grid, self.semiring)
                    .into_iter()
                    .map(|args| Ok((id.name().to_string(), args.clone(), self.instantiate_schema(*id, &args)?)))
                    .collect::<Result<_, TheoryError>>()?,
            };
            for (label, args, qe) in instances {
                let holds = self.equal_in_theory(&qe.lhs, &qe.rhs)?;
                let detail = if holds {
                    String::new()
                } else {
                    format!("{} ≠ {}", self.eval(&qe.lhs)?, self.eval(&qe.rhs)?)
                };
                push(&label, args, holds, detail);
            }
        }
        for entry in &self.quantitative {
            let instances: Vec<(String, Vec<Rational>, QuantEq)> = match entry {
                QuantEntry::Concrete(ax) => vec![(ax.label.clone(), vec![], ax.eq.clone())],
                QuantEntry::Schema(id) => id
                    .grid_args(grid, self.semiring)
                    .into_iter()
                    .map(|args| Ok((id.name().to_string(), args.clone(), self.instantiate_schema(*id, &args)?)))
                    .collect::<Result<_, TheoryError>>()?,
            };
            for (label, args, qe) in instances {
                let d = self.semantic_distance(&qe.lhs, &qe.rhs)?;
                let holds = qe.eps.leq(&d)?;
                let detail = if holds { String::new() } else { format!("claimed {} but distance is {}", qe.eps, d) };
                push(&label, args, holds, detail);
            }
        }
        Ok(out)
    }

    /// Number of entries in the equation list, counting each family once.
    pub fn equation_count(&self) -> usize {
        self.equations.len()
    }
}

/// The scalar grid used by the soundness checks.
pub fn scalar_grid() -> Vec<Rational> {
    [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (1, 1)].iter().map(|&(p, q)| Rational::new(p, q)).collect()
}
