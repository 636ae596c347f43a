//! Semantic distances: the entrywise order on matrices, total variation on
//! distributions, and `tvmax` on stochastic matrices.

pub mod lp;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;
use crate::sample;
use crate::semantics::{Distribution, Matrix, SemanticsError, StochMatrix};

/// Largest support the subset method enumerates.
pub const SUP_LIMIT: usize = 12;
/// Largest support the coupling method solves.
pub const COUPLING_LIMIT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistanceError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    Dimension { left: (usize, usize), right: (usize, usize) },
    #[error("distributions over {left} and {right} points")]
    Support { left: usize, right: usize },
    #[error("method `{method}` handles supports up to {limit}, got {size}; use `sum`")]
    MethodUnavailable { method: TvMethod, size: usize, limit: usize },
    #[error("coupling program failed: {0}")]
    Lp(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// `A ≤ B` entrywise.
pub fn entrywise_leq(a: &Matrix, b: &Matrix) -> Result<bool, DistanceError> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(DistanceError::Dimension { left: (a.rows(), a.cols()), right: (b.rows(), b.cols()) });
    }
    Ok(a.entries().iter().zip(b.entries()).all(|(x, y)| x <= y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TvMethod {
    /// `½ Σ |μ(x) − ν(x)|`.
    Sum,
    /// `max over S of |μ(S) − ν(S)|`.
    Sup,
    /// Least off-diagonal mass of a coupling.
    Coupling,
}

impl TvMethod {
    pub const ALL: [TvMethod; 3] = [TvMethod::Sum, TvMethod::Sup, TvMethod::Coupling];

    pub fn name(self) -> &'static str {
        match self {
            TvMethod::Sum => "sum",
            TvMethod::Sup => "sup",
            TvMethod::Coupling => "coupling",
        }
    }

    pub fn limit(self) -> Option<usize> {
        match self {
            TvMethod::Sum => None,
            TvMethod::Sup => Some(SUP_LIMIT),
            TvMethod::Coupling => Some(COUPLING_LIMIT),
        }
    }
}

impl fmt::Display for TvMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TvMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(TvMethod::Sum),
            "sup" => Ok(TvMethod::Sup),
            "coupling" => Ok(TvMethod::Coupling),
            other => Err(format!("unknown tv method `{other}` (expected sum, sup or coupling)")),
        }
    }
}

fn same_support(mu: &Distribution, nu: &Distribution) -> Result<usize, DistanceError> {
    if mu.len() != nu.len() {
        return Err(DistanceError::Support { left: mu.len(), right: nu.len() });
    }
    Ok(mu.len())
}

/// Total variation distance by the chosen method.
pub fn tv(mu: &Distribution, nu: &Distribution, method: TvMethod) -> Result<Rational, DistanceError> {
    let m = same_support(mu, nu)?;
    if let Some(limit) = method.limit() {
        if m > limit {
            return Err(DistanceError::MethodUnavailable { method, size: m, limit });
        }
    }
    Ok(match method {
        TvMethod::Sum => tv_sum(mu, nu),
        TvMethod::Sup => tv_sup(mu, nu),
        TvMethod::Coupling => optimal_coupling(mu, nu)?.off_diagonal(),
    })
}

fn tv_sum(mu: &Distribution, nu: &Distribution) -> Rational {
    let total: Rational = mu.weights().iter().zip(nu.weights()).map(|(a, b)| (a - b).abs()).sum();
    total / Rational::from_integer(2)
}

fn tv_sup(mu: &Distribution, nu: &Distribution) -> Rational {
    let m = mu.len();
    let diffs: Vec<Rational> = mu.weights().iter().zip(nu.weights()).map(|(a, b)| a - b).collect();
    let mut best = Rational::zero();
    for mask in 0u32..(1 << m) {
        let s: Rational = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| diffs[i].clone()).sum();
        best = best.max(s.abs());
    }
    best
}

/// A joint distribution on `⟨m⟩ × ⟨m⟩`; `weight(i, j)` is the mass on
/// `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coupling {
    m: usize,
    weights: Vec<Rational>,
}

impl Coupling {
    /// Checks non-negativity and both marginals.
    pub fn new(m: usize, weights: Vec<Rational>, mu: &Distribution, nu: &Distribution) -> Result<Self, DistanceError> {
        same_support(mu, nu)?;
        let bad = |what: &str| DistanceError::Lp(format!("not a coupling: {what}"));
        if weights.len() != m * m || mu.len() != m {
            return Err(bad("wrong size"));
        }
        if weights.iter().any(Rational::is_negative) {
            return Err(bad("negative mass"));
        }
        let c = Coupling { m, weights };
        if c.first_marginal() != mu.weights() || c.second_marginal() != nu.weights() {
            return Err(bad("marginals differ"));
        }
        Ok(c)
    }

    pub fn weight(&self, i: usize, j: usize) -> &Rational {
        &self.weights[i * self.m + j]
    }

    pub fn first_marginal(&self) -> Vec<Rational> {
        (0..self.m).map(|i| (0..self.m).map(|j| self.weight(i, j).clone()).sum()).collect()
    }

    pub fn second_marginal(&self) -> Vec<Rational> {
        (0..self.m).map(|j| (0..self.m).map(|i| self.weight(i, j).clone()).sum()).collect()
    }

    /// `Σ_{i≠j} ω(i, j)`.
    pub fn off_diagonal(&self) -> Rational {
        (0..self.m)
            .flat_map(|i| (0..self.m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.weight(i, j).clone())
            .sum()
    }
}

/// A coupling of `μ` and `ν` with least off-diagonal mass, found by exact
/// linear programming over the transportation polytope.
pub fn optimal_coupling(mu: &Distribution, nu: &Distribution) -> Result<Coupling, DistanceError> {
    let m = same_support(mu, nu)?;
    if m > COUPLING_LIMIT {
        return Err(DistanceError::MethodUnavailable { method: TvMethod::Coupling, size: m, limit: COUPLING_LIMIT });
    }
    let var = |i: usize, j: usize| i * m + j;
    let cost: Vec<Rational> =
        (0..m * m).map(|k| if k / m == k % m { Rational::zero() } else { Rational::one() }).collect();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..m {
        let mut row = vec![Rational::zero(); m * m];
        (0..m).for_each(|j| row[var(i, j)] = Rational::one());
        a.push(row);
        b.push(mu.weights()[i].clone());
    }
    // The last column constraint follows from the others.
    for j in 0..m.saturating_sub(1) {
        let mut row = vec![Rational::zero(); m * m];
        (0..m).for_each(|i| row[var(i, j)] = Rational::one());
        a.push(row);
        b.push(nu.weights()[j].clone());
    }
    match lp::minimize(&cost, &a, &b) {
        lp::LpOutcome::Optimal { x, .. } => Coupling::new(m, x, mu, nu),
        other => Err(DistanceError::Lp(format!("{other:?}"))),
    }
}

/// `max_i tv(A_i, B_i)` over columns. With no columns the maximum is empty
/// and taken to be 0.
pub fn tvmax(a: &StochMatrix, b: &StochMatrix) -> Result<Rational, DistanceError> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(DistanceError::Dimension { left: (a.rows(), a.cols()), right: (b.rows(), b.cols()) });
    }
    if a.cols() == 0 {
        log::warn!("tvmax of matrices with no columns is taken to be 0");
        return Ok(Rational::zero());
    }
    let mut best = Rational::zero();
    for (x, y) in a.columns().iter().zip(b.columns()) {
        best = best.max(tv_sum(x, &y));
    }
    Ok(best)
}

/// [`tvmax`] on plain matrices, which must be stochastic.
pub fn tvmax_matrices(a: &Matrix, b: &Matrix) -> Result<Rational, DistanceError> {
    tvmax(&StochMatrix::new(a.clone())?, &StochMatrix::new(b.clone())?)
}

/// `μ = μ′ +_λ τ` and `ν = ν′ +_λ τ` with `λ = tv(μ, ν)`, where
/// `x +_λ y = λx + (1−λ)y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitResult {
    pub lambda: Rational,
    pub mu_prime: Distribution,
    pub nu_prime: Distribution,
    pub tau: Distribution,
}

impl SplitResult {
    /// Recombines the parts, returning `(μ′ +_λ τ, ν′ +_λ τ)`.
    pub fn recombine(&self) -> (Distribution, Distribution) {
        let mu = self.mu_prime.mix(&self.lambda, &self.tau).expect("λ in [0,1], equal supports");
        let nu = self.nu_prime.mix(&self.lambda, &self.tau).expect("λ in [0,1], equal supports");
        (mu, nu)
    }
}

pub fn split(mu: &Distribution, nu: &Distribution) -> Result<SplitResult, DistanceError> {
    let m = same_support(mu, nu)?;
    let lambda = tv_sum(mu, nu);
    if lambda.is_zero() {
        return Ok(SplitResult { lambda, mu_prime: mu.clone(), nu_prime: mu.clone(), tau: mu.clone() });
    }
    if lambda.is_one() {
        return Ok(SplitResult { lambda, mu_prime: mu.clone(), nu_prime: nu.clone(), tau: Distribution::uniform(m) });
    }
    let overlap: Vec<Rational> = mu.weights().iter().zip(nu.weights()).map(|(a, b)| a.clone().min(b.clone())).collect();
    let rest = Rational::one() - &lambda;
    let tau = Distribution::new(overlap.iter().map(|o| o / &rest).collect())?;
    let excess = |d: &Distribution| -> Result<Distribution, SemanticsError> {
        Distribution::new(d.weights().iter().zip(&overlap).map(|(x, o)| (x - o) / &lambda).collect())
    };
    Ok(SplitResult { mu_prime: excess(mu)?, nu_prime: excess(nu)?, tau, lambda })
}

/// A failed law instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawCounterexample {
    pub law: String,
    pub matrices: Vec<Matrix>,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Sequential composites of a quadruple `(C, C′, A, B)`: `tvmax(C;A, C′;B)`
/// against `tvmax(C, C′)` and `tvmax(A, B)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeqWitness {
    pub composite: Rational,
    pub first: Rational,
    pub second: Rational,
}

impl SeqWitness {
    pub fn compute(c: &StochMatrix, c2: &StochMatrix, a: &StochMatrix, b: &StochMatrix) -> Result<Self, DistanceError> {
        Ok(SeqWitness {
            composite: tvmax(&c.then(a)?, &c2.then(b)?)?,
            first: tvmax(c, c2)?,
            second: tvmax(a, b)?,
        })
    }

    /// True when the composite exceeds the larger of the two parts.
    pub fn violates_meet_bound(&self) -> bool {
        self.composite > self.first.clone().max(self.second.clone())
    }

    pub fn within_sum_bound(&self) -> bool {
        self.composite <= &self.first + &self.second
    }
}

fn stoch(rows: &[&[(i64, i64)]]) -> StochMatrix {
    let cols = rows.first().map_or(0, |r| r.len());
    let rows = rows.iter().map(|r| r.iter().map(|&(p, q)| Rational::new(p, q)).collect()).collect();
    StochMatrix::new(Matrix::from_rows(rows, cols).expect("well-formed")).expect("stochastic")
}

/// The quadruple `(C, C′, A, B)` with `A = B = [[1, 1/2], [0, 1/2]]`,
/// `C = [1, 0]ᵀ`, `C′ = [1/2, 1/2]ᵀ`.
pub fn meet_witness_stated() -> [StochMatrix; 4] {
    let a = stoch(&[&[(1, 1), (1, 2)], &[(0, 1), (1, 2)]]);
    [stoch(&[&[(1, 1)], &[(0, 1)]]), stoch(&[&[(1, 2)], &[(1, 2)]]), a.clone(), a]
}

/// A quadruple that does break the meet bound: `A = I`,
/// `B = [[1/2, 0], [1/2, 1]]`, with the same `C`, `C′`.
pub fn meet_witness_corrected() -> [StochMatrix; 4] {
    let [c, c2, _, _] = meet_witness_stated();
    let a = stoch(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
    let b = stoch(&[&[(1, 2), (0, 1)], &[(1, 2), (1, 1)]]);
    [c, c2, a, b]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawReport {
    pub samples: usize,
    /// `tvmax(A;A′, B;B′) ≤ tvmax(A, B) + tvmax(A′, B′)` failures.
    pub sequential: Vec<LawCounterexample>,
    /// `tvmax(A⊕A′, B⊕B′) = max(tvmax(A, B), tvmax(A′, B′))` failures.
    pub direct_sum: Vec<LawCounterexample>,
    pub stated_witness: SeqWitness,
    pub corrected_witness: SeqWitness,
}

impl LawReport {
    /// No sampled law failed and some witness breaks the meet bound.
    pub fn ok(&self) -> bool {
        self.sequential.is_empty() && self.direct_sum.is_empty() && self.corrected_witness.violates_meet_bound()
    }
}

/// Samples quadruples of stochastic matrices with dimensions at most 4 and
/// checks the sequential sum bound and the direct-sum max law on each.
pub fn law_checks<R: Rng>(rng: &mut R, samples: usize) -> Result<LawReport, DistanceError> {
    let mut sequential = Vec::new();
    let mut direct_sum = Vec::new();
    for _ in 0..samples {
        let (n, k, m) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = sample::stochastic(rng, k, n);
        let b = sample::stochastic(rng, k, n);
        let a2 = sample::stochastic(rng, m, k);
        let b2 = sample::stochastic(rng, m, k);
        let w = SeqWitness::compute(&a, &b, &a2, &b2)?;
        if !w.within_sum_bound() {
            sequential.push(LawCounterexample {
                law: "sequential sum bound".into(),
                matrices: [&a, &b, &a2, &b2].iter().map(|s| s.matrix().clone()).collect(),
                lhs: w.composite.clone(),
                rhs: &w.first + &w.second,
            });
        }
        let (x, y) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a3 = sample::stochastic(rng, x, y);
        let b3 = sample::stochastic(rng, x, y);
        let lhs = tvmax(&a.dsum(&a3), &b.dsum(&b3))?;
        let rhs = tvmax(&a, &b)?.max(tvmax(&a3, &b3)?);
        if lhs != rhs {
            direct_sum.push(LawCounterexample {
                law: "direct-sum max law".into(),
                matrices: [&a, &b, &a3, &b3].iter().map(|s| s.matrix().clone()).collect(),
                lhs,
                rhs,
            });
        }
    }
    let [c, c2, a, b] = meet_witness_stated();
    let stated_witness = SeqWitness::compute(&c, &c2, &a, &b)?;
    let [c, c2, a, b] = meet_witness_corrected();
    let corrected_witness = SeqWitness::compute(&c, &c2, &a, &b)?;
    Ok(LawReport { samples, sequential, direct_sum, stated_witness, corrected_witness })
}
