//! Exact two-phase simplex over rationals with Bland's rule.
//!
//! Solves `min c·x` subject to `A x = b`, `x ≥ 0`. Small problems only; the
//! tableau is dense.

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `rows × (cols + 1)`, last column is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &(&f * pv);
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs of `cost` for the current basis, restricted to the
    /// columns allowed to enter.
    fn optimize(&mut self, cost: &[Rational], allowed: impl Fn(usize) -> bool) -> bool {
        loop {
            let reduced = |j: usize, t: &Tableau| -> Rational {
                let mut r = cost[j].clone();
                for (i, &b) in t.basis.iter().enumerate() {
                    if !t.t[i][j].is_zero() && !cost[b].is_zero() {
                        r = &r - &(&cost[b] * &t.t[i][j]);
                    }
                }
                r
            };
            let Some(enter) = (0..self.cols).find(|&j| allowed(j) && !self.basis.contains(&j) && reduced(j, self).is_negative())
            else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][enter];
                if a.is_negative() || a.is_zero() {
                    continue;
                }
                let ratio = &self.t[i][self.cols] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

pub fn minimize(cost: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let n = cost.len();
    let m = a.len();
    // Artificial column n + i for row i; flip rows with negative rhs.
    let cols = n + m;
    let mut t = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let mut r: Vec<Rational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        r.push(if flip { -rhs } else { rhs.clone() });
        t.push(r);
    }
    let mut tab = Tableau { t, basis: (n..n + m).collect(), cols };

    let phase1: Vec<Rational> = (0..cols).map(|j| if j >= n { Rational::one() } else { Rational::zero() }).collect();
    tab.optimize(&phase1, |_| true);
    let infeasibility: Rational = tab.basis.iter().enumerate().filter(|(_, &bj)| bj >= n).map(|(i, _)| tab.t[i][cols].clone()).sum();
    if !infeasibility.is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive degenerate artificials out of the basis; rows where that is
    // impossible are redundant and dropped.
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let mut phase2 = cost.to_vec();
    phase2.extend((0..m).map(|_| Rational::zero()));
    if !tab.optimize(&phase2, |j| j < n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bj) in tab.basis.iter().enumerate() {
        if bj < n {
            x[bj] = tab.t[i][cols].clone();
        }
    }
    let value = cost.iter().zip(&x).map(|(c, v)| c * v).sum();
    LpOutcome::Optimal { value, x }
}
