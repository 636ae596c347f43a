//! Integral quantales and quantale-valued hemimetric spaces.
//!
//! Two quantales ship built in: the Boolean quantale `({⊥, ⊤}, ⊓, ⊤)` and the
//! Lawvere quantale `([0, ∞], +, 0)` with the reversed numeric order. The
//! generic [`Quantale`] trait carries the law checks so other lattices can be
//! plugged in by tests or downstream code.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantaleError {
    #[error("quantale mismatch: {0} vs {1}")]
    Mismatch(QuantaleKind, QuantaleKind),
    #[error("negative Lawvere distance {0}")]
    Negative(Rational),
    #[error("invalid {kind} value `{text}`")]
    Parse { kind: QuantaleKind, text: String },
    #[error("unknown quantale `{0}` (expected boolean or lawvere)")]
    UnknownKind(String),
    #[error("space is not a hemimetric: {0}")]
    NotHemimetric(String),
    #[error("max product needs an infinitely join distributive quantale")]
    NotIjd,
}

/// A complete lattice with a commutative, join-continuous monoid.
///
/// Only finite joins are exposed; `top` and `bottom` stand in for the
/// infinitary ones.
pub trait Quantale {
    type Value: Clone + PartialEq + fmt::Debug;

    fn leq(&self, a: &Self::Value, b: &Self::Value) -> bool;
    fn tensor(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn join(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn meet(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn top(&self) -> Self::Value;
    fn bottom(&self) -> Self::Value;

    fn unit(&self) -> Self::Value {
        self.top()
    }

    fn finite_join<'a, I>(&self, values: I) -> Self::Value
    where
        I: IntoIterator<Item = &'a Self::Value>,
        Self::Value: 'a,
    {
        values.into_iter().fold(self.bottom(), |acc, v| self.join(&acc, v))
    }

    fn finite_meet<'a, I>(&self, values: I) -> Self::Value
    where
        I: IntoIterator<Item = &'a Self::Value>,
        Self::Value: 'a,
    {
        values.into_iter().fold(self.top(), |acc, v| self.meet(&acc, v))
    }
}

/// `a ⊕ b ⊑ a ⊓ b`, which holds in every integral quantale.
pub fn integrality_holds<Q: Quantale>(q: &Q, a: &Q::Value, b: &Q::Value) -> bool {
    q.leq(&q.tensor(a, b), &q.meet(a, b))
}

/// `x ⊓ ⋁S = ⋁ (x ⊓ s)` for the given element and finite family.
pub fn ijd_instance_holds<Q: Quantale>(q: &Q, x: &Q::Value, family: &[Q::Value]) -> bool {
    let lhs = q.meet(x, &q.finite_join(family));
    let meets: Vec<_> = family.iter().map(|s| q.meet(x, s)).collect();
    lhs == q.finite_join(&meets)
}

/// Checks infinite join distributivity on every element of `samples` against
/// every pair and triple drawn from `samples`.
pub fn ijd_sample_check<Q: Quantale>(q: &Q, samples: &[Q::Value]) -> bool {
    samples.iter().all(|x| {
        samples.iter().all(|a| {
            ijd_instance_holds(q, x, std::slice::from_ref(a))
                && samples.iter().all(|b| {
                    ijd_instance_holds(q, x, &[a.clone(), b.clone()])
                        && samples.iter().all(|c| ijd_instance_holds(q, x, &[a.clone(), b.clone(), c.clone()]))
                })
        })
    })
}

/// A law that failed on concrete values.
#[derive(Debug, Clone, PartialEq)]
pub struct LawViolation<V> {
    pub law: &'static str,
    pub values: Vec<V>,
}

/// Monoid, monotonicity, integrality and finite join-continuity checks on a
/// triple and a finite family.
pub fn check_laws<Q: Quantale>(
    q: &Q,
    a: &Q::Value,
    b: &Q::Value,
    c: &Q::Value,
    family: &[Q::Value],
) -> Vec<LawViolation<Q::Value>> {
    let mut out = Vec::new();
    let mut fail = |law, values: &[&Q::Value]| {
        out.push(LawViolation { law, values: values.iter().map(|v| (*v).clone()).collect() })
    };
    if q.tensor(&q.tensor(a, b), c) != q.tensor(a, &q.tensor(b, c)) {
        fail("associativity", &[a, b, c]);
    }
    if q.tensor(a, b) != q.tensor(b, a) {
        fail("commutativity", &[a, b]);
    }
    if q.tensor(a, &q.unit()) != *a {
        fail("unit", &[a]);
    }
    if q.unit() != q.top() {
        fail("integral unit", &[]);
    }
    if q.leq(a, b) && !q.leq(&q.tensor(a, c), &q.tensor(b, c)) {
        fail("monotonicity", &[a, b, c]);
    }
    if !integrality_holds(q, a, b) {
        fail("integrality", &[a, b]);
    }
    if !q.leq(&q.bottom(), a) || !q.leq(a, &q.top()) {
        fail("bounds", &[a]);
    }
    let lhs = q.tensor(a, &q.finite_join(family));
    let parts: Vec<_> = family.iter().map(|s| q.tensor(a, s)).collect();
    if lhs != q.finite_join(&parts) {
        let mut values = vec![a];
        values.extend(family.iter());
        fail("join-continuity", &values);
    }
    out
}

/// The two-element quantale with meet as tensor.
#[derive(Debug, Clone, Copy, Default)]
pub struct BooleanQuantale;

impl Quantale for BooleanQuantale {
    type Value = bool;

    fn leq(&self, a: &bool, b: &bool) -> bool {
        !*a || *b
    }
    fn tensor(&self, a: &bool, b: &bool) -> bool {
        *a && *b
    }
    fn join(&self, a: &bool, b: &bool) -> bool {
        *a || *b
    }
    fn meet(&self, a: &bool, b: &bool) -> bool {
        *a && *b
    }
    fn top(&self) -> bool {
        true
    }
    fn bottom(&self) -> bool {
        false
    }
}

/// An element of `[0, ∞]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(Rational),
    Infinity,
}

impl Extended {
    /// Numeric comparison, with ∞ above every finite value.
    pub fn numeric_le(&self, other: &Extended) -> bool {
        match (self, other) {
            (_, Extended::Infinity) => true,
            (Extended::Infinity, Extended::Finite(_)) => false,
            (Extended::Finite(a), Extended::Finite(b)) => a <= b,
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(r) => Some(r),
            Extended::Infinity => None,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(r) => write!(f, "{r}"),
            Extended::Infinity => f.write_str("∞"),
        }
    }
}

/// `[0, ∞]` ordered by `≥`, with addition as tensor.
#[derive(Debug, Clone, Copy, Default)]
pub struct LawvereQuantale;

impl Quantale for LawvereQuantale {
    type Value = Extended;

    fn leq(&self, a: &Extended, b: &Extended) -> bool {
        b.numeric_le(a)
    }
    fn tensor(&self, a: &Extended, b: &Extended) -> Extended {
        match (a, b) {
            (Extended::Finite(x), Extended::Finite(y)) => Extended::Finite(x + y),
            _ => Extended::Infinity,
        }
    }
    fn join(&self, a: &Extended, b: &Extended) -> Extended {
        if a.numeric_le(b) {
            a.clone()
        } else {
            b.clone()
        }
    }
    fn meet(&self, a: &Extended, b: &Extended) -> Extended {
        if a.numeric_le(b) {
            b.clone()
        } else {
            a.clone()
        }
    }
    fn top(&self) -> Extended {
        Extended::Finite(Rational::zero())
    }
    fn bottom(&self) -> Extended {
        Extended::Infinity
    }
}

/// Which built-in quantale a theory or value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantaleKind {
    Boolean,
    Lawvere,
}

impl QuantaleKind {
    pub fn name(self) -> &'static str {
        match self {
            QuantaleKind::Boolean => "boolean",
            QuantaleKind::Lawvere => "lawvere",
        }
    }

    pub fn top(self) -> QuantaleValue {
        match self {
            QuantaleKind::Boolean => QuantaleValue::Boolean(true),
            QuantaleKind::Lawvere => QuantaleValue::Lawvere(LawvereQuantale.top()),
        }
    }

    pub fn bottom(self) -> QuantaleValue {
        match self {
            QuantaleKind::Boolean => QuantaleValue::Boolean(false),
            QuantaleKind::Lawvere => QuantaleValue::Lawvere(Extended::Infinity),
        }
    }

    /// Representative elements used by the sampled IJD and law checks.
    pub fn samples(self) -> Vec<QuantaleValue> {
        match self {
            QuantaleKind::Boolean => vec![QuantaleValue::Boolean(false), QuantaleValue::Boolean(true)],
            QuantaleKind::Lawvere => {
                let mut out: Vec<_> = [(0, 1), (1, 4), (1, 2), (1, 1), (7, 3)]
                    .iter()
                    .map(|&(p, q)| QuantaleValue::Lawvere(Extended::Finite(Rational::new(p, q))))
                    .collect();
                out.push(QuantaleValue::Lawvere(Extended::Infinity));
                out
            }
        }
    }

    pub fn ijd_sample_check(self) -> bool {
        match self {
            QuantaleKind::Boolean => ijd_sample_check(&BooleanQuantale, &[false, true]),
            QuantaleKind::Lawvere => {
                let samples: Vec<Extended> = self
                    .samples()
                    .into_iter()
                    .filter_map(|v| match v {
                        QuantaleValue::Lawvere(e) => Some(e),
                        QuantaleValue::Boolean(_) => None,
                    })
                    .collect();
                ijd_sample_check(&LawvereQuantale, &samples)
            }
        }
    }

    /// Parses a value: `⊤`/`top`/`⊥`/`bot` for Boolean, a non-negative
    /// rational or `∞`/`inf` for Lawvere.
    pub fn parse_value(self, text: &str) -> Result<QuantaleValue, QuantaleError> {
        let t = text.trim();
        let err = || QuantaleError::Parse { kind: self, text: text.to_string() };
        match self {
            QuantaleKind::Boolean => match t {
                "⊤" | "top" | "true" => Ok(QuantaleValue::Boolean(true)),
                "⊥" | "bot" | "false" => Ok(QuantaleValue::Boolean(false)),
                _ => Err(err()),
            },
            QuantaleKind::Lawvere => match t {
                "∞" | "inf" | "infinity" => Ok(QuantaleValue::Lawvere(Extended::Infinity)),
                _ => {
                    let r: Rational = t.parse().map_err(|_| err())?;
                    QuantaleValue::lawvere(r)
                }
            },
        }
    }
}

impl fmt::Display for QuantaleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuantaleKind {
    type Err = QuantaleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "boolean" | "bool" => Ok(QuantaleKind::Boolean),
            "lawvere" => Ok(QuantaleKind::Lawvere),
            other => Err(QuantaleError::UnknownKind(other.to_string())),
        }
    }
}

/// A value of one of the built-in quantales.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QuantaleValue {
    Boolean(bool),
    Lawvere(Extended),
}

impl QuantaleValue {
    /// A finite Lawvere distance; rejects negative numbers.
    pub fn lawvere(r: Rational) -> Result<Self, QuantaleError> {
        if r.is_negative() {
            Err(QuantaleError::Negative(r))
        } else {
            Ok(QuantaleValue::Lawvere(Extended::Finite(r)))
        }
    }

    pub fn infinity() -> Self {
        QuantaleValue::Lawvere(Extended::Infinity)
    }

    pub fn kind(&self) -> QuantaleKind {
        match self {
            QuantaleValue::Boolean(_) => QuantaleKind::Boolean,
            QuantaleValue::Lawvere(_) => QuantaleKind::Lawvere,
        }
    }

    pub fn is_top(&self) -> bool {
        *self == self.kind().top()
    }

    pub fn is_bottom(&self) -> bool {
        *self == self.kind().bottom()
    }

    /// The finite Lawvere distance, if this is one.
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            QuantaleValue::Lawvere(Extended::Finite(r)) => Some(r),
            _ => None,
        }
    }

    pub fn leq(&self, other: &QuantaleValue) -> Result<bool, QuantaleError> {
        match (self, other) {
            (QuantaleValue::Boolean(a), QuantaleValue::Boolean(b)) => Ok(BooleanQuantale.leq(a, b)),
            (QuantaleValue::Lawvere(a), QuantaleValue::Lawvere(b)) => Ok(LawvereQuantale.leq(a, b)),
            _ => Err(QuantaleError::Mismatch(self.kind(), other.kind())),
        }
    }

    fn lift(
        &self,
        other: &QuantaleValue,
        b: impl Fn(&bool, &bool) -> bool,
        l: impl Fn(&Extended, &Extended) -> Extended,
    ) -> Result<QuantaleValue, QuantaleError> {
        match (self, other) {
            (QuantaleValue::Boolean(x), QuantaleValue::Boolean(y)) => Ok(QuantaleValue::Boolean(b(x, y))),
            (QuantaleValue::Lawvere(x), QuantaleValue::Lawvere(y)) => Ok(QuantaleValue::Lawvere(l(x, y))),
            _ => Err(QuantaleError::Mismatch(self.kind(), other.kind())),
        }
    }

    /// `self ⊕ other`.
    pub fn tensor(&self, other: &QuantaleValue) -> Result<QuantaleValue, QuantaleError> {
        self.lift(other, |a, b| BooleanQuantale.tensor(a, b), |a, b| LawvereQuantale.tensor(a, b))
    }

    pub fn join(&self, other: &QuantaleValue) -> Result<QuantaleValue, QuantaleError> {
        self.lift(other, |a, b| BooleanQuantale.join(a, b), |a, b| LawvereQuantale.join(a, b))
    }

    pub fn meet(&self, other: &QuantaleValue) -> Result<QuantaleValue, QuantaleError> {
        self.lift(other, |a, b| BooleanQuantale.meet(a, b), |a, b| LawvereQuantale.meet(a, b))
    }

    /// `a ⊕ b ⊑ a ⊓ b`.
    pub fn integrality_check(&self, other: &QuantaleValue) -> Result<bool, QuantaleError> {
        self.tensor(other)?.leq(&self.meet(other)?)
    }
}

/// Finite join; the empty join is `⊥`.
pub fn finite_join<'a>(
    kind: QuantaleKind,
    values: impl IntoIterator<Item = &'a QuantaleValue>,
) -> Result<QuantaleValue, QuantaleError> {
    values.into_iter().try_fold(kind.bottom(), |acc, v| acc.join(v))
}

/// Finite meet; the empty meet is `⊤`.
pub fn finite_meet<'a>(
    kind: QuantaleKind,
    values: impl IntoIterator<Item = &'a QuantaleValue>,
) -> Result<QuantaleValue, QuantaleError> {
    values.into_iter().try_fold(kind.top(), |acc, v| acc.meet(v))
}

impl fmt::Display for QuantaleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantaleValue::Boolean(true) => f.write_str("⊤"),
            QuantaleValue::Boolean(false) => f.write_str("⊥"),
            QuantaleValue::Lawvere(e) => write!(f, "{e}"),
        }
    }
}

/// Product of hemimetric spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductMode {
    /// Distances combined with `⊕`.
    Sum,
    /// Distances combined with `⊓`; needs IJD.
    Max,
}

/// A finite quantale-valued hemimetric space.
#[derive(Debug, Clone, PartialEq)]
pub struct HemimetricSpace {
    kind: QuantaleKind,
    points: Vec<String>,
    dist: Vec<Vec<QuantaleValue>>,
    pseudometric: bool,
}

impl HemimetricSpace {
    /// Validates reflexivity, the triangle inequality and, when
    /// `pseudometric` is set, symmetry.
    pub fn new(
        kind: QuantaleKind,
        points: Vec<String>,
        dist: Vec<Vec<QuantaleValue>>,
        pseudometric: bool,
    ) -> Result<Self, QuantaleError> {
        let n = points.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(QuantaleError::NotHemimetric(format!("distance table is not {n}×{n}")));
        }
        for v in dist.iter().flatten() {
            if v.kind() != kind {
                return Err(QuantaleError::Mismatch(kind, v.kind()));
            }
        }
        let space = HemimetricSpace { kind, points, dist, pseudometric };
        if let Some(problem) = space.violation() {
            return Err(QuantaleError::NotHemimetric(problem));
        }
        Ok(space)
    }

    /// The one-point space at distance `⊤` from itself.
    pub fn unit(kind: QuantaleKind) -> Self {
        HemimetricSpace { kind, points: vec!["•".to_string()], dist: vec![vec![kind.top()]], pseudometric: true }
    }

    pub fn kind(&self) -> QuantaleKind {
        self.kind
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_pseudometric(&self) -> bool {
        self.pseudometric
    }

    pub fn dist(&self, x: usize, y: usize) -> &QuantaleValue {
        &self.dist[x][y]
    }

    /// First failing axiom, described in words.
    pub fn violation(&self) -> Option<String> {
        let n = self.len();
        let top = self.kind.top();
        for x in 0..n {
            if !top.leq(&self.dist[x][x]).unwrap_or(false) {
                return Some(format!("reflexivity fails at {}", self.points[x]));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if self.pseudometric && self.dist[x][y] != self.dist[y][x] {
                    return Some(format!("symmetry fails at ({}, {})", self.points[x], self.points[y]));
                }
                for z in 0..n {
                    let lhs = self.dist[x][y].tensor(&self.dist[y][z]).ok()?;
                    if !lhs.leq(&self.dist[x][z]).unwrap_or(false) {
                        return Some(format!(
                            "triangle fails at ({}, {}, {})",
                            self.points[x], self.points[y], self.points[z]
                        ));
                    }
                }
            }
        }
        None
    }

    /// Cartesian product with the sum or max hemimetric. Points are indexed
    /// row-major: `(x, y)` sits at `x * other.len() + y`.
    pub fn product(&self, other: &HemimetricSpace, mode: ProductMode) -> Result<HemimetricSpace, QuantaleError> {
        if self.kind != other.kind {
            return Err(QuantaleError::Mismatch(self.kind, other.kind));
        }
        if mode == ProductMode::Max && !self.kind.ijd_sample_check() {
            return Err(QuantaleError::NotIjd);
        }
        let mut points = Vec::with_capacity(self.len() * other.len());
        for x in &self.points {
            for y in &other.points {
                points.push(format!("({x},{y})"));
            }
        }
        let size = points.len();
        let mut dist = vec![Vec::with_capacity(size); size];
        for (a, row) in dist.iter_mut().enumerate() {
            let (x, y) = (a / other.len(), a % other.len());
            for b in 0..size {
                let (x2, y2) = (b / other.len(), b % other.len());
                let (dx, dy) = (&self.dist[x][x2], &other.dist[y][y2]);
                row.push(match mode {
                    ProductMode::Sum => dx.tensor(dy)?,
                    ProductMode::Max => dx.meet(dy)?,
                });
            }
        }
        Ok(HemimetricSpace {
            kind: self.kind,
            points,
            dist,
            pseudometric: self.pseudometric && other.pseudometric,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn l(p: i64, d: i64) -> QuantaleValue {
        QuantaleValue::lawvere(q(p, d)).unwrap()
    }

    #[test]
    fn lawvere_tensor_adds() {
        assert_eq!(l(3, 10).tensor(&l(4, 10)).unwrap(), l(7, 10));
        assert_eq!(QuantaleValue::infinity().tensor(&l(1, 2)).unwrap(), QuantaleValue::infinity());
    }

    #[test]
    fn boolean_tensor_is_meet() {
        let t = QuantaleValue::Boolean(true);
        let f = QuantaleValue::Boolean(false);
        assert_eq!(t.tensor(&t).unwrap(), t);
        assert_eq!(t.tensor(&f).unwrap(), f);
    }

    #[test]
    fn mixed_kinds_are_rejected() {
        let err = QuantaleValue::Boolean(true).tensor(&l(1, 2)).unwrap_err();
        assert_eq!(err, QuantaleError::Mismatch(QuantaleKind::Boolean, QuantaleKind::Lawvere));
    }

    #[test]
    fn reversed_order() {
        assert!(l(7, 10).leq(&l(4, 10)).unwrap());
        assert!(!l(4, 10).leq(&l(7, 10)).unwrap());
        assert!(QuantaleValue::infinity().leq(&l(0, 1)).unwrap());
        assert_eq!(l(1, 4).meet(&l(1, 2)).unwrap(), l(1, 2));
        assert_eq!(l(1, 4).join(&l(1, 2)).unwrap(), l(1, 4));
    }

    #[test]
    fn integrality_examples() {
        assert!(l(3, 10).integrality_check(&l(4, 10)).unwrap());
        assert!(QuantaleValue::Boolean(false).integrality_check(&QuantaleValue::Boolean(true)).unwrap());
        assert!(l(0, 1).integrality_check(&l(0, 1)).unwrap());
    }

    #[test]
    fn parse_and_display() {
        let k = QuantaleKind::Lawvere;
        assert_eq!(k.parse_value("inf").unwrap(), QuantaleValue::infinity());
        assert_eq!(k.parse_value("3/10").unwrap().to_string(), "3/10");
        assert!(k.parse_value("-1").is_err());
        assert_eq!(QuantaleKind::Boolean.parse_value("⊤").unwrap().to_string(), "⊤");
        assert_eq!("lawvere".parse::<QuantaleKind>().unwrap(), QuantaleKind::Lawvere);
    }

    #[test]
    fn builtin_quantales_are_ijd() {
        assert!(QuantaleKind::Boolean.ijd_sample_check());
        assert!(QuantaleKind::Lawvere.ijd_sample_check());
    }

    fn two_point(a: QuantaleValue, b: QuantaleValue) -> HemimetricSpace {
        let k = a.kind();
        HemimetricSpace::new(
            k,
            vec!["p".into(), "q".into()],
            vec![vec![k.top(), a], vec![b, k.top()]],
            false,
        )
        .unwrap()
    }

    #[test]
    fn product_distances() {
        let x = two_point(l(1, 4), l(1, 4));
        let y = two_point(l(1, 2), l(1, 2));
        let sum = x.product(&y, ProductMode::Sum).unwrap();
        assert_eq!(*sum.dist(0, 3), l(3, 4));
        let max = x.product(&y, ProductMode::Max).unwrap();
        assert_eq!(*max.dist(0, 3), l(1, 2));
        let unit = HemimetricSpace::unit(QuantaleKind::Lawvere);
        let uu = unit.product(&unit, ProductMode::Sum).unwrap();
        assert_eq!(uu.len(), 1);
        assert!(uu.dist(0, 0).is_top());
    }

    #[test]
    fn rejects_triangle_failure() {
        let k = QuantaleKind::Lawvere;
        let d = vec![
            vec![l(0, 1), l(1, 1), l(5, 1)],
            vec![l(1, 1), l(0, 1), l(1, 1)],
            vec![l(5, 1), l(1, 1), l(0, 1)],
        ];
        let err = HemimetricSpace::new(k, vec!["a".into(), "b".into(), "c".into()], d, true).unwrap_err();
        assert!(matches!(err, QuantaleError::NotHemimetric(_)));
    }
}
