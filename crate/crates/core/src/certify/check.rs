use serde::Serialize;

use crate::diagram::{Term, TermKind};
use crate::quantale::{finite_join, QuantaleValue};
use crate::theory::{Combine, Decision, QuantTheory};

use super::{combine, path_string, Certificate, CertifyError, Rule};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Accept `REFL` leaves the theory cannot decide, recording them as
    /// trusted.
    pub assume_refl: bool,
}

/// A `REFL` leaf accepted without a decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrustedLeaf {
    pub path: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub eps: QuantaleValue,
    pub nodes: usize,
    pub trusted: Vec<TrustedLeaf>,
}

/// Validates every node and returns the root bound.
pub fn check(cert: &Certificate, theory: &QuantTheory) -> Result<QuantaleValue, CertifyError> {
    Ok(check_with(cert, theory, CheckOptions::default())?.eps)
}

pub fn check_with(cert: &Certificate, theory: &QuantTheory, opts: CheckOptions) -> Result<CheckReport, CertifyError> {
    let mut checker = Checker { theory, opts, trusted: Vec::new(), nodes: 0 };
    let mut path = Vec::new();
    checker.node(cert, &mut path)?;
    Ok(CheckReport { eps: cert.eps.clone(), nodes: checker.nodes, trusted: checker.trusted })
}

/// The bound a node's rule concludes from its premises; for `MON`, the
/// premise bound it weakens.
pub fn rule_conclusion(cert: &Certificate, theory: &QuantTheory) -> Result<QuantaleValue, CertifyError> {
    let kind = theory.quantale;
    let child = |i: usize| -> Result<&QuantaleValue, CertifyError> {
        cert.children.get(i).map(|c| &c.eps).ok_or_else(|| CertifyError::Unsupported("missing premise".into()))
    };
    Ok(match &cert.rule {
        Rule::Refl => kind.top(),
        Rule::Bot => kind.bottom(),
        Rule::Mon | Rule::Symm => child(0)?.clone(),
        Rule::Join => finite_join(kind, cert.children.iter().map(|c| &c.eps))?,
        Rule::Triang | Rule::SeqSum | Rule::ParSum => child(0)?.tensor(child(1)?)?,
        Rule::SeqMeet | Rule::ParMeet => child(0)?.meet(child(1)?)?,
        Rule::Axiom { name, args } => theory.axiom(name, args)?.eps,
    })
}

struct Checker<'a> {
    theory: &'a QuantTheory,
    opts: CheckOptions,
    trusted: Vec<TrustedLeaf>,
    nodes: usize,
}

impl Checker<'_> {
    fn node(&mut self, cert: &Certificate, path: &mut Vec<usize>) -> Result<(), CertifyError> {
        self.nodes += 1;
        for (i, child) in cert.children.iter().enumerate() {
            path.push(i);
            self.node(child, path)?;
            path.pop();
        }
        self.local(cert, path).map_err(|message| CertifyError::Rejected { path: path_string(path), message })
    }

    fn local(&mut self, cert: &Certificate, path: &[usize]) -> Result<(), String> {
        let theory = self.theory;
        let kind = theory.quantale;
        if cert.eps.kind() != kind {
            return Err(format!("bound {} is not in the {kind} quantale", cert.eps));
        }
        theory.signature.typecheck(&cert.lhs).map_err(|e| format!("left side: {e}"))?;
        theory.signature.typecheck(&cert.rhs).map_err(|e| format!("right side: {e}"))?;
        if cert.lhs.ty() != cert.rhs.ty() {
            return Err(format!("sides have types {:?} and {:?}", cert.lhs.ty(), cert.rhs.ty()));
        }
        let arity = |n: usize| -> Result<(), String> {
            if cert.children.len() == n {
                Ok(())
            } else {
                Err(format!("{} takes {n} premises, got {}", cert.rule.tag(), cert.children.len()))
            }
        };
        let same_judgment = |c: &Certificate| -> Result<(), String> {
            if c.lhs == cert.lhs && c.rhs == cert.rhs {
                Ok(())
            } else {
                Err(format!("premise concludes {} = {}, not {} = {}", c.lhs, c.rhs, cert.lhs, cert.rhs))
            }
        };
        let c = &cert.children;
        let expected = match &cert.rule {
            Rule::Refl => {
                arity(0)?;
                match theory.decide_equal(&cert.lhs, &cert.rhs).map_err(|e| e.to_string())? {
                    Decision::Equal => {}
                    Decision::NotEqual => return Err(format!("{} and {} are not equal in {}", cert.lhs, cert.rhs, theory.name)),
                    Decision::Unknown if self.opts.assume_refl => self.trusted.push(TrustedLeaf {
                        path: path_string(path),
                        lhs: cert.lhs.to_string(),
                        rhs: cert.rhs.to_string(),
                    }),
                    Decision::Unknown => {
                        return Err(format!(
                            "cannot decide {} = {} in {}; pass assume-refl to trust it",
                            cert.lhs, cert.rhs, theory.name
                        ))
                    }
                }
                kind.top()
            }
            Rule::Bot => {
                arity(0)?;
                kind.bottom()
            }
            Rule::Mon => {
                arity(1)?;
                same_judgment(&c[0])?;
                if !cert.eps.leq(&c[0].eps).map_err(|e| e.to_string())? {
                    return Err(format!("{} is not below the premise bound {}", cert.eps, c[0].eps));
                }
                return Ok(());
            }
            Rule::Join => {
                if c.is_empty() {
                    return Err("JOIN needs at least one premise".into());
                }
                c.iter().try_for_each(same_judgment)?;
                finite_join(kind, c.iter().map(|x| &x.eps)).map_err(|e| e.to_string())?
            }
            Rule::Triang => {
                arity(2)?;
                if c[0].lhs != cert.lhs || c[1].rhs != cert.rhs || c[0].rhs != c[1].lhs {
                    return Err(format!(
                        "premises {} = {} and {} = {} do not chain to {} = {}",
                        c[0].lhs, c[0].rhs, c[1].lhs, c[1].rhs, cert.lhs, cert.rhs
                    ));
                }
                c[0].eps.tensor(&c[1].eps).map_err(|e| e.to_string())?
            }
            Rule::Symm => {
                arity(1)?;
                if !theory.closure.symm {
                    return Err(format!("SYMM is not part of the closure {}", theory.closure));
                }
                if c[0].lhs != cert.rhs || c[0].rhs != cert.lhs {
                    return Err("premise is not the mirrored judgment".into());
                }
                c[0].eps.clone()
            }
            Rule::SeqSum | Rule::SeqMeet | Rule::ParSum | Rule::ParMeet => {
                arity(2)?;
                let (is_seq, comb) = match cert.rule {
                    Rule::SeqSum => (true, Combine::Sum),
                    Rule::SeqMeet => (true, Combine::Meet),
                    Rule::ParSum => (false, Combine::Sum),
                    _ => (false, Combine::Meet),
                };
                let allowed = if is_seq { theory.closure.seq } else { theory.closure.par };
                if allowed != comb {
                    return Err(format!("{} is not part of the closure {}", cert.rule.tag(), theory.closure));
                }
                let splits = |t: &Term, a: &Term, b: &Term| match (t.kind(), is_seq) {
                    (TermKind::Seq(x, y), true) | (TermKind::Par(x, y), false) => x == a && y == b,
                    _ => false,
                };
                if !splits(&cert.lhs, &c[0].lhs, &c[1].lhs) || !splits(&cert.rhs, &c[0].rhs, &c[1].rhs) {
                    let op = if is_seq { ";" } else { "*" };
                    return Err(format!("sides are not the `{op}` composites of the premises' sides"));
                }
                combine(comb, &c[0].eps, &c[1].eps).map_err(|e| e.to_string())?
            }
            Rule::Axiom { name, args } => {
                arity(0)?;
                let ax = theory.axiom(name, args).map_err(|e| e.to_string())?;
                if ax.lhs != cert.lhs || ax.rhs != cert.rhs {
                    return Err(format!("axiom {name} states {} = {}, not {} = {}", ax.lhs, ax.rhs, cert.lhs, cert.rhs));
                }
                ax.eps
            }
        };
        if cert.eps != expected {
            return Err(format!("{} concludes {expected}, node claims {}", cert.rule.tag(), cert.eps));
        }
        Ok(())
    }
}
