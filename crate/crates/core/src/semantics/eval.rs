use std::collections::HashMap;
use std::sync::Mutex;

use crate::diagram::{Generator, Term, TermKind};
use crate::rational::Rational;

use super::{Matrix, Semiring, SemanticsError, StochMatrix};

/// How generators are interpreted as matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interpretation {
    /// `copy`, `del`, `add`, `zero`, `scalar(k)` over a semiring.
    Bialgebra(Semiring),
    /// `del : 0 → 1`, `cop`, `cc(λ)` as stochastic matrices.
    Convex,
}

impl Interpretation {
    pub fn semiring(self) -> Semiring {
        match self {
            Interpretation::Bialgebra(s) => s,
            Interpretation::Convex => Semiring::NonNegative,
        }
    }

    pub fn generator(self, g: &Generator) -> Result<Matrix, SemanticsError> {
        let o = Rational::one();
        let unknown = || SemanticsError::UnknownGenerator(g.to_string());
        let expect = |a: usize, c: usize| {
            if g.arity == a && g.coarity == c {
                Ok(())
            } else {
                Err(unknown())
            }
        };
        match self {
            Interpretation::Bialgebra(semiring) => match (g.name.as_ref(), &g.scalar) {
                ("copy", None) => expect(1, 2).and_then(|_| Matrix::new(2, 1, vec![o.clone(), o])),
                ("del", None) => expect(1, 0).map(|_| Matrix::zeros(0, 1)),
                ("add", None) => expect(2, 1).and_then(|_| Matrix::new(1, 2, vec![o.clone(), o])),
                ("zero", None) => expect(0, 1).map(|_| Matrix::zeros(1, 0)),
                ("scalar", Some(k)) => {
                    expect(1, 1)?;
                    semiring.check_membership(k)?;
                    Matrix::new(1, 1, vec![k.clone()])
                }
                _ => Err(unknown()),
            },
            Interpretation::Convex => match (g.name.as_ref(), &g.scalar) {
                ("del", None) => expect(0, 1).map(|_| Matrix::zeros(1, 0)),
                ("cop", None) => expect(2, 1).and_then(|_| Matrix::new(1, 2, vec![o.clone(), o])),
                ("cc", Some(l)) => {
                    expect(1, 2)?;
                    if !l.in_unit_interval() {
                        return Err(SemanticsError::NotStochastic(format!("cc({l}) outside [0, 1]")));
                    }
                    Matrix::new(2, 1, vec![l.clone(), &o - l])
                }
                _ => Err(unknown()),
            },
        }
    }
}

const CACHE_LIMIT: usize = 1 << 17;

/// Evaluates terms functorially, memoising composite subterms.
#[derive(Debug)]
pub struct Evaluator {
    interp: Interpretation,
    cache: Mutex<HashMap<Term, Matrix>>,
}

impl Clone for Evaluator {
    fn clone(&self) -> Self {
        Evaluator::new(self.interp)
    }
}

impl Evaluator {
    pub fn new(interp: Interpretation) -> Self {
        Evaluator { interp, cache: Mutex::new(HashMap::new()) }
    }

    pub fn interpretation(&self) -> Interpretation {
        self.interp
    }

    pub fn eval(&self, t: &Term) -> Result<Matrix, SemanticsError> {
        if self.interp == Interpretation::Convex && t.coarity() == 0 && t.arity() > 0 {
            return Err(SemanticsError::NoStochastic { arity: t.arity() });
        }
        self.go(t)
    }

    pub fn eval_stochastic(&self, t: &Term) -> Result<StochMatrix, SemanticsError> {
        StochMatrix::new(self.eval(t)?)
    }

    fn go(&self, t: &Term) -> Result<Matrix, SemanticsError> {
        let semiring = self.interp.semiring();
        match t.kind() {
            TermKind::Gen(g) => self.interp.generator(g),
            TermKind::Id => Ok(Matrix::identity(1)),
            TermKind::Empty => Ok(Matrix::identity(0)),
            TermKind::Sym => Ok(Matrix::swap()),
            TermKind::Seq(a, b) | TermKind::Par(a, b) => {
                if let Some(m) = self.cache.lock().expect("evaluation cache").get(t) {
                    return Ok(m.clone());
                }
                let (ma, mb) = (self.go(a)?, self.go(b)?);
                let m = match t.kind() {
                    TermKind::Seq(..) => ma.then(&mb, semiring)?,
                    _ => ma.dsum(&mb),
                };
                let mut cache = self.cache.lock().expect("evaluation cache");
                if cache.len() >= CACHE_LIMIT {
                    cache.clear();
                }
                cache.insert(t.clone(), m.clone());
                Ok(m)
            }
        }
    }
}

/// Evaluates a term over the bialgebra signature in `semiring`.
pub fn eval_ha(t: &Term, semiring: Semiring) -> Result<Matrix, SemanticsError> {
    Evaluator::new(Interpretation::Bialgebra(semiring)).eval(t)
}

/// Evaluates a term over the convex-algebra signature.
pub fn eval_ca(t: &Term) -> Result<StochMatrix, SemanticsError> {
    Evaluator::new(Interpretation::Convex).eval_stochastic(t)
}
