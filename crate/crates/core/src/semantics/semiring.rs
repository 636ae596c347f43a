use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagram::ScalarDomain;
use crate::rational::{q, Rational};

use super::SemanticsError;

/// The ordered semirings matrices can take entries in. Elements are stored
/// as rationals; Boolean values are `0` and `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semiring {
    /// `({0,1}, ∨, ∧)`.
    Boolean,
    /// `([0, ∞), +, ×)` over the rationals.
    NonNegative,
    /// `(ℚ, +, ×)`; ordered, but multiplication is not monotone.
    Rationals,
}

impl Semiring {
    pub fn name(self) -> &'static str {
        match self {
            Semiring::Boolean => "bool",
            Semiring::NonNegative => "nonneg",
            Semiring::Rationals => "rationals",
        }
    }

    pub fn zero(self) -> Rational {
        Rational::zero()
    }

    pub fn one(self) -> Rational {
        Rational::one()
    }

    pub fn add(self, a: &Rational, b: &Rational) -> Rational {
        match self {
            Semiring::Boolean => a.clone().max(b.clone()),
            _ => a + b,
        }
    }

    pub fn mul(self, a: &Rational, b: &Rational) -> Rational {
        match self {
            Semiring::Boolean => a.clone().min(b.clone()),
            _ => a * b,
        }
    }

    pub fn leq(self, a: &Rational, b: &Rational) -> bool {
        a <= b
    }

    pub fn contains(self, a: &Rational) -> bool {
        self.scalar_domain().contains(a)
    }

    pub fn scalar_domain(self) -> ScalarDomain {
        match self {
            Semiring::Boolean => ScalarDomain::Boolean,
            Semiring::NonNegative => ScalarDomain::NonNegative,
            Semiring::Rationals => ScalarDomain::Any,
        }
    }

    /// Elements used by the sampled law and monotonicity checks.
    pub fn samples(self) -> Vec<Rational> {
        match self {
            Semiring::Boolean => vec![q(0, 1), q(1, 1)],
            Semiring::NonNegative => vec![q(0, 1), q(1, 3), q(1, 2), q(1, 1), q(3, 2), q(5, 1)],
            Semiring::Rationals => vec![q(-2, 1), q(-1, 2), q(0, 1), q(1, 3), q(1, 1), q(3, 1)],
        }
    }

    /// Checks that `a ≤ a'` and `b ≤ b'` imply `a+b ≤ a'+b'` and
    /// `ab ≤ a'b'` on the sample elements; returns the first failing
    /// quadruple.
    pub fn monotonicity_counterexample(self) -> Option<[Rational; 4]> {
        let s = self.samples();
        for a in &s {
            for a2 in s.iter().filter(|a2| self.leq(a, a2)) {
                for b in &s {
                    for b2 in s.iter().filter(|b2| self.leq(b, b2)) {
                        if !self.leq(&self.add(a, b), &self.add(a2, b2)) || !self.leq(&self.mul(a, b), &self.mul(a2, b2)) {
                            return Some([a.clone(), a2.clone(), b.clone(), b2.clone()]);
                        }
                    }
                }
            }
        }
        None
    }

    /// Semiring laws on a triple; returns the name of the first failing law.
    pub fn law_violation(self, a: &Rational, b: &Rational, c: &Rational) -> Option<&'static str> {
        let (add, mul) = (|x: &Rational, y: &Rational| self.add(x, y), |x: &Rational, y: &Rational| self.mul(x, y));
        if add(&add(a, b), c) != add(a, &add(b, c)) {
            return Some("additive associativity");
        }
        if add(a, b) != add(b, a) {
            return Some("additive commutativity");
        }
        if add(a, &self.zero()) != *a {
            return Some("additive unit");
        }
        if mul(&mul(a, b), c) != mul(a, &mul(b, c)) {
            return Some("multiplicative associativity");
        }
        if mul(a, &self.one()) != *a || mul(&self.one(), a) != *a {
            return Some("multiplicative unit");
        }
        if mul(a, &add(b, c)) != add(&mul(a, b), &mul(a, c)) {
            return Some("left distributivity");
        }
        if mul(&add(a, b), c) != add(&mul(a, c), &mul(b, c)) {
            return Some("right distributivity");
        }
        if !mul(a, &self.zero()).is_zero() {
            return Some("annihilation");
        }
        None
    }

    pub fn check_membership(self, a: &Rational) -> Result<(), SemanticsError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(SemanticsError::NotInSemiring { value: a.clone(), semiring: self })
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semiring {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bool" | "boolean" => Ok(Semiring::Boolean),
            "nonneg" | "nonnegative" => Ok(Semiring::NonNegative),
            "rationals" | "rational" | "q" => Ok(Semiring::Rationals),
            other => Err(SemanticsError::UnknownSemiring(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotonicity() {
        assert!(Semiring::Boolean.monotonicity_counterexample().is_none());
        assert!(Semiring::NonNegative.monotonicity_counterexample().is_none());
        assert!(Semiring::Rationals.monotonicity_counterexample().is_some());
    }

    #[test]
    fn laws_on_samples() {
        for s in [Semiring::Boolean, Semiring::NonNegative, Semiring::Rationals] {
            let xs = s.samples();
            for a in &xs {
                for b in &xs {
                    for c in &xs {
                        assert_eq!(s.law_violation(a, b, c), None, "{s} on {a} {b} {c}");
                    }
                }
            }
        }
    }
}
