//! Diagrams realising given matrices: the scalar canonical form for the
//! bialgebra signature and the column-then-merge form for convex algebras.

use crate::diagram::build::{ca, canonical_wires, fritz_merge, ha, par_all, seq_smart};
use crate::diagram::Term;
use crate::rational::Rational;

use super::{Distribution, Matrix, SemanticsError, StochMatrix};

/// The three pieces of `b ; (⊗ scalars) ; w`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    pub b: Term,
    pub scalars: Term,
    pub w: Term,
    pub term: Term,
}

/// Scalar generators for `m`, ordered column by column: wire `j*rows + i`
/// carries entry `(i, j)`.
pub fn scalar_layer(m: &Matrix) -> Vec<Term> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            out.push(ha::scalar(m.get(i, j).clone()));
        }
    }
    out
}

/// `b^n_m ; (⊗_{j,i} scalar(m_ij)) ; w^n_m` with plain `;` nodes.
pub fn canonical_form(m: &Matrix) -> CanonicalForm {
    let (b, w) = canonical_wires(m.cols(), m.rows());
    let scalars = par_all(&scalar_layer(m));
    let term = b.seq(&scalars).and_then(|t| t.seq(&w)).expect("canonical form is well typed");
    CanonicalForm { b, scalars, w, term }
}

/// A `1 → m` diagram evaluating to `mu`, built from `cc` gates.
pub fn distribution_term(mu: &Distribution) -> Term {
    distribution_from(mu.weights())
}

fn distribution_from(weights: &[Rational]) -> Term {
    if weights.len() == 1 {
        return Term::id();
    }
    let head = &weights[0];
    let rest_mass = Rational::one() - head;
    let rest: Vec<Rational> = if rest_mass.is_zero() {
        let mut v = vec![Rational::zero(); weights.len() - 1];
        v[0] = Rational::one();
        v
    } else {
        weights[1..].iter().map(|w| w / &rest_mass).collect()
    };
    let tail = Term::id().par(&distribution_from(&rest));
    ca::cc(head.clone()).seq(&tail).expect("distribution diagram is well typed")
}

/// `(⊗_j column_j) ; p^n_m` for a stochastic matrix with `n ≥ 1` columns;
/// `m` copies of `del` when `n = 0`.
pub fn stochastic_term(s: &StochMatrix) -> Result<Term, SemanticsError> {
    let (m, n) = (s.rows(), s.cols());
    if n == 0 {
        return Ok(par_all(&vec![ca::del(); m]));
    }
    let columns: Vec<Term> = s.columns().iter().map(distribution_term).collect();
    let p = fritz_merge(n, m)?;
    Ok(seq_smart(&par_all(&columns), &p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::semantics::{eval_ca, eval_ha, Semiring};

    #[test]
    fn canonical_form_evaluates_back() {
        let m = Matrix::from_rows(vec![vec![q(1, 2), q(3, 1)], vec![q(0, 1), q(2, 1)], vec![q(1, 1), q(0, 1)]], 2).unwrap();
        let c = canonical_form(&m);
        assert_eq!(eval_ha(&c.term, Semiring::NonNegative).unwrap(), m);
    }

    #[test]
    fn distributions_evaluate_back() {
        for w in [vec![q(1, 1)], vec![q(1, 2), q(1, 2)], vec![q(1, 1), q(0, 1), q(0, 1)], vec![q(0, 1), q(1, 3), q(2, 3)]] {
            let d = Distribution::new(w).unwrap();
            let t = distribution_term(&d);
            assert_eq!(eval_ca(&t).unwrap().column(0), d);
        }
    }
}
