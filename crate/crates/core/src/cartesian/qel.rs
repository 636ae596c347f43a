//! Derivations in quantitative equational logic over a cartesian theory.
//!
//! Text form, one node per line:
//!
//! ```text
//! (TRIANG@1 1/2 "g(g(x1))" "x1"
//!   (NEXP@1 1/4 "g(g(x1))" "g(x1)" {"g"}
//!     (AXIOM@1 1/4 "g(x1)" "x1" {"ax"}))
//!   (AXIOM@1 1/4 "g(x1)" "x1" {"ax"}))
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::certify::path_string;
use crate::certify::sexpr::{parse_one, Sexp};
use crate::quantale::{finite_join, finite_meet, QuantaleValue};

use super::{parse_cart, substitute, CartTerm, CartTheory, CartesianError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QelRule {
    Bot,
    Mon,
    /// Finite continuity: the join of bounds derived for the same pair.
    Cont,
    /// Equality in the equational part, witnessed by the intermediate terms
    /// of a rewrite chain; each step applies one equation once.
    Refl { chain: Vec<CartTerm> },
    Symm,
    Triang,
    /// Substitution of the premise's variables by `sigma`.
    SubQ { sigma: Vec<CartTerm> },
    /// Non-expansiveness of an operation.
    NExp { op: String },
    Axiom { name: String },
}

impl QelRule {
    pub fn tag(&self) -> &'static str {
        match self {
            QelRule::Bot => "BOT",
            QelRule::Mon => "MON",
            QelRule::Cont => "CONT",
            QelRule::Refl { .. } => "REFL",
            QelRule::Symm => "SYMM",
            QelRule::Triang => "TRIANG",
            QelRule::SubQ { .. } => "SUBQ",
            QelRule::NExp { .. } => "NEXP",
            QelRule::Axiom { .. } => "AXIOM",
        }
    }

    fn payload(&self) -> Option<Vec<String>> {
        match self {
            QelRule::Refl { chain } => Some(chain.iter().map(ToString::to_string).collect()),
            QelRule::SubQ { sigma } => Some(sigma.iter().map(ToString::to_string).collect()),
            QelRule::NExp { op } => Some(vec![op.clone()]),
            QelRule::Axiom { name } => Some(vec![name.clone()]),
            _ => None,
        }
    }
}

/// A node concluding `ctx ⊢ lhs =_eps rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QelCertificate {
    pub rule: QelRule,
    pub ctx: usize,
    pub lhs: CartTerm,
    pub rhs: CartTerm,
    pub eps: QuantaleValue,
    pub children: Vec<QelCertificate>,
}

impl QelCertificate {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(QelCertificate::size).sum::<usize>()
    }

    pub fn count(&self, tag: &str) -> usize {
        usize::from(self.rule.tag() == tag) + self.children.iter().map(|c| c.count(tag)).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QelReport {
    pub eps: QuantaleValue,
    pub nodes: usize,
}

/// Validates every node of a derivation in `theory`.
pub fn check_qel(cert: &QelCertificate, theory: &CartTheory) -> Result<QelReport, CartesianError> {
    let mut path = Vec::new();
    let nodes = check_node(cert, theory, &mut path)?;
    Ok(QelReport { eps: cert.eps.clone(), nodes })
}

fn check_node(cert: &QelCertificate, theory: &CartTheory, path: &mut Vec<usize>) -> Result<usize, CartesianError> {
    let mut nodes = 1;
    for (i, c) in cert.children.iter().enumerate() {
        path.push(i);
        nodes += check_node(c, theory, path)?;
        path.pop();
    }
    local(cert, theory).map_err(|message| CartesianError::Qel { path: path_string(path), message })?;
    Ok(nodes)
}

fn in_context(t: &CartTerm, ctx: usize, theory: &CartTheory) -> Result<(), String> {
    theory.signature.check(t).map_err(|e| e.to_string())?;
    match t.max_var() {
        Some(v) if v >= ctx => Err(format!("{t} mentions x{} outside a context of {ctx}", v + 1)),
        _ => Ok(()),
    }
}

fn local(cert: &QelCertificate, theory: &CartTheory) -> Result<(), String> {
    let kind = theory.quantale;
    if cert.eps.kind() != kind {
        return Err(format!("bound {} is not in the {kind} quantale", cert.eps));
    }
    in_context(&cert.lhs, cert.ctx, theory)?;
    in_context(&cert.rhs, cert.ctx, theory)?;
    let c = &cert.children;
    let arity = |n: usize| -> Result<(), String> {
        if c.len() == n {
            Ok(())
        } else {
            Err(format!("{} takes {n} premises, got {}", cert.rule.tag(), c.len()))
        }
    };
    let same_ctx = |p: &QelCertificate| -> Result<(), String> {
        if p.ctx == cert.ctx {
            Ok(())
        } else {
            Err(format!("premise context {} differs from {}", p.ctx, cert.ctx))
        }
    };
    let same_judgment = |p: &QelCertificate| -> Result<(), String> {
        same_ctx(p)?;
        if p.lhs == cert.lhs && p.rhs == cert.rhs {
            Ok(())
        } else {
            Err(format!("premise concludes {} = {}, not {} = {}", p.lhs, p.rhs, cert.lhs, cert.rhs))
        }
    };
    let expected = match &cert.rule {
        QelRule::Bot => {
            arity(0)?;
            kind.bottom()
        }
        QelRule::Mon => {
            arity(1)?;
            same_judgment(&c[0])?;
            if !cert.eps.leq(&c[0].eps).map_err(|e| e.to_string())? {
                return Err(format!("{} is not below the premise bound {}", cert.eps, c[0].eps));
            }
            return Ok(());
        }
        QelRule::Cont => {
            if c.is_empty() {
                return Err("CONT needs at least one premise".into());
            }
            c.iter().try_for_each(same_judgment)?;
            finite_join(kind, c.iter().map(|p| &p.eps)).map_err(|e| e.to_string())?
        }
        QelRule::Refl { chain } => {
            arity(0)?;
            let steps: Vec<&CartTerm> = std::iter::once(&cert.lhs).chain(chain).chain(std::iter::once(&cert.rhs)).collect();
            for (i, w) in steps.windows(2).enumerate() {
                in_context(w[1], cert.ctx, theory)?;
                if w[0] != w[1] && !one_step(w[0], w[1], theory) {
                    return Err(format!("step {i}: {} does not rewrite to {} by one equation", w[0], w[1]));
                }
            }
            kind.top()
        }
        QelRule::Symm => {
            arity(1)?;
            same_ctx(&c[0])?;
            if c[0].lhs != cert.rhs || c[0].rhs != cert.lhs {
                return Err("premise is not the mirrored judgment".into());
            }
            c[0].eps.clone()
        }
        QelRule::Triang => {
            arity(2)?;
            c.iter().try_for_each(same_ctx)?;
            if c[0].lhs != cert.lhs || c[1].rhs != cert.rhs || c[0].rhs != c[1].lhs {
                return Err(format!(
                    "premises {} = {} and {} = {} do not chain to {} = {}",
                    c[0].lhs, c[0].rhs, c[1].lhs, c[1].rhs, cert.lhs, cert.rhs
                ));
            }
            c[0].eps.tensor(&c[1].eps).map_err(|e| e.to_string())?
        }
        QelRule::SubQ { sigma } => {
            arity(1)?;
            if c[0].ctx != sigma.len() {
                return Err(format!("substitution has {} terms for a context of {}", sigma.len(), c[0].ctx));
            }
            sigma.iter().try_for_each(|s| in_context(s, cert.ctx, theory))?;
            let lhs = substitute(&c[0].lhs, sigma).map_err(|e| e.to_string())?;
            let rhs = substitute(&c[0].rhs, sigma).map_err(|e| e.to_string())?;
            if lhs != cert.lhs || rhs != cert.rhs {
                return Err(format!("substituting gives {lhs} = {rhs}, not {} = {}", cert.lhs, cert.rhs));
            }
            c[0].eps.clone()
        }
        QelRule::NExp { op } => {
            let n = theory.signature.arity(op).ok_or_else(|| format!("unknown operation `{op}`"))?;
            arity(n)?;
            c.iter().try_for_each(same_ctx)?;
            let lhs = CartTerm::op(op, c.iter().map(|p| p.lhs.clone()).collect());
            let rhs = CartTerm::op(op, c.iter().map(|p| p.rhs.clone()).collect());
            if lhs != cert.lhs || rhs != cert.rhs {
                return Err(format!("`{op}` applied to the premises gives {lhs} = {rhs}"));
            }
            finite_meet(kind, c.iter().map(|p| &p.eps)).map_err(|e| e.to_string())?
        }
        QelRule::Axiom { name } => {
            arity(0)?;
            let ax = theory.find_axiom(name).ok_or_else(|| format!("unknown axiom `{name}`"))?;
            if cert.ctx < ax.ctx {
                return Err(format!("axiom `{name}` needs a context of {}, node has {}", ax.ctx, cert.ctx));
            }
            if ax.lhs != cert.lhs || ax.rhs != cert.rhs {
                return Err(format!("axiom `{name}` states {} = {}", ax.lhs, ax.rhs));
            }
            ax.eps.clone()
        }
    };
    if cert.eps != expected {
        return Err(format!("{} concludes {expected}, node claims {}", cert.rule.tag(), cert.eps));
    }
    Ok(())
}

/// Binds pattern variables, consistently with earlier bindings.
fn matches(pattern: &CartTerm, t: &CartTerm, sigma: &mut HashMap<usize, CartTerm>) -> bool {
    match pattern {
        CartTerm::Var(v) => match sigma.get(v) {
            Some(bound) => bound == t,
            None => {
                sigma.insert(*v, t.clone());
                true
            }
        },
        CartTerm::Op(o, ps) => match t {
            CartTerm::Op(p, ts) if o == p && ps.len() == ts.len() => ps.iter().zip(ts).all(|(x, y)| matches(x, y, sigma)),
            _ => false,
        },
    }
}

/// Whether `b` arises from `a` by one equation of the theory, used in
/// either direction at a single position.
fn one_step(a: &CartTerm, b: &CartTerm, theory: &CartTheory) -> bool {
    a.positions().iter().any(|p| {
        let (Some(x), Some(y)) = (a.at(p), b.at(p)) else { return false };
        if a.replace_at(p, y.clone()).as_ref() != Some(b) {
            return false;
        }
        theory.equations.iter().any(|e| {
            [(&e.lhs, &e.rhs), (&e.rhs, &e.lhs)].into_iter().any(|(l, r)| {
                let mut sigma = HashMap::new();
                matches(l, x, &mut sigma) && matches(r, y, &mut sigma)
            })
        })
    })
}

/// Renders a derivation, one node per line.
pub fn render_qel(cert: &QelCertificate) -> String {
    let mut out = String::new();
    render_node(cert, 0, &mut out);
    out.push('\n');
    out
}

fn quoted(items: &[String]) -> String {
    items.iter().map(|s| format!("\"{s}\"")).collect::<Vec<_>>().join(" ")
}

fn render_node(cert: &QelCertificate, depth: usize, out: &mut String) {
    let _ = write!(out, "{}({}@{} {} \"{}\" \"{}\"", "  ".repeat(depth), cert.rule.tag(), cert.ctx, cert.eps, cert.lhs, cert.rhs);
    if let Some(payload) = cert.rule.payload() {
        let _ = write!(out, " {{{}}}", quoted(&payload));
    }
    for c in &cert.children {
        out.push('\n');
        render_node(c, depth + 1, out);
    }
    out.push(')');
}

fn parse_err(line: usize, message: impl Into<String>) -> CartesianError {
    CartesianError::Qel { path: format!("line {line}"), message: message.into() }
}

fn make_rule(tag: &str, payload: Vec<String>, theory: &CartTheory, line: usize) -> Result<QelRule, CartesianError> {
    let terms = |items: &[String]| -> Result<Vec<CartTerm>, CartesianError> {
        items.iter().map(|s| parse_cart(s, &theory.signature).map_err(|e| parse_err(line, e.to_string()))).collect()
    };
    let single = |what: &str| -> Result<String, CartesianError> {
        match payload.as_slice() {
            [x] => Ok(x.clone()),
            _ => Err(parse_err(line, format!("{tag} takes one {what} in its payload"))),
        }
    };
    Ok(match tag {
        "BOT" => QelRule::Bot,
        "MON" => QelRule::Mon,
        "CONT" => QelRule::Cont,
        "SYMM" => QelRule::Symm,
        "TRIANG" => QelRule::Triang,
        "REFL" => QelRule::Refl { chain: terms(&payload)? },
        "SUBQ" => QelRule::SubQ { sigma: terms(&payload)? },
        "NEXP" => QelRule::NExp { op: single("operation")? },
        "AXIOM" => QelRule::Axiom { name: single("axiom name")? },
        other => return Err(parse_err(line, format!("unknown rule `{other}`"))),
    })
}

fn node_from(sexp: &Sexp, theory: &CartTheory) -> Result<QelCertificate, CartesianError> {
    let Sexp::List(items, line) = sexp else {
        return Err(parse_err(sexp.line(), "expected `(`"));
    };
    let line = *line;
    let mut it = items.iter().peekable();
    let (tag, ctx) = match it.next() {
        Some(Sexp::Word(w, _)) => {
            let (tag, ctx) = w.split_once('@').ok_or_else(|| parse_err(line, format!("expected RULE@ctx, got `{w}`")))?;
            (tag.to_string(), ctx.parse::<usize>().map_err(|_| parse_err(line, format!("bad context `{ctx}`")))?)
        }
        _ => return Err(parse_err(line, "expected a rule name")),
    };
    let eps = match it.next() {
        Some(Sexp::Word(w, l)) => theory.quantale.parse_value(w).map_err(|e| parse_err(*l, e.to_string()))?,
        _ => return Err(parse_err(line, "expected a bound")),
    };
    let mut side = |what: &str| -> Result<CartTerm, CartesianError> {
        match it.next() {
            Some(Sexp::Str(s, l)) => parse_cart(s, &theory.signature).map_err(|e| parse_err(*l, format!("{what}: {e}"))),
            _ => Err(parse_err(line, format!("expected the {what} as a quoted term"))),
        }
    };
    let lhs = side("left side")?;
    let rhs = side("right side")?;
    let mut payload = Vec::new();
    if let Some(Sexp::Group(group, _)) = it.peek() {
        for g in group {
            match g {
                Sexp::Str(s, _) | Sexp::Word(s, _) => payload.push(s.clone()),
                other => return Err(parse_err(other.line(), "payload items are quoted strings")),
            }
        }
        it.next();
    }
    let rule = make_rule(&tag, payload, theory, line)?;
    let children = it.map(|c| node_from(c, theory)).collect::<Result<_, _>>()?;
    Ok(QelCertificate { rule, ctx, lhs, rhs, eps, children })
}

/// Parses the text form against a cartesian theory.
pub fn parse_qel(text: &str, theory: &CartTheory) -> Result<QelCertificate, CartesianError> {
    let tree = parse_one(text).map_err(|(line, message)| parse_err(line, message))?;
    node_from(&tree, theory)
}

/// JSON shape of a derivation node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QelJson {
    pub rule: String,
    pub ctx: usize,
    pub eps: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub payload: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<QelJson>,
}

impl From<&QelCertificate> for QelJson {
    fn from(c: &QelCertificate) -> Self {
        QelJson {
            rule: c.rule.tag().to_string(),
            ctx: c.ctx,
            eps: c.eps.to_string(),
            lhs: c.lhs.to_string(),
            rhs: c.rhs.to_string(),
            payload: c.rule.payload().unwrap_or_default(),
            children: c.children.iter().map(QelJson::from).collect(),
        }
    }
}

impl QelJson {
    pub fn to_certificate(&self, theory: &CartTheory) -> Result<QelCertificate, CartesianError> {
        let cart = |s: &str| parse_cart(s, &theory.signature);
        Ok(QelCertificate {
            rule: make_rule(&self.rule, self.payload.clone(), theory, 0)?,
            ctx: self.ctx,
            lhs: cart(&self.lhs)?,
            rhs: cart(&self.rhs)?,
            eps: theory.quantale.parse_value(&self.eps).map_err(|e| CartesianError::Theory(e.to_string()))?,
            children: self.children.iter().map(|c| c.to_certificate(theory)).collect::<Result<_, _>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartesian::CartSignature;
    use crate::quantale::QuantaleKind;

    fn theory() -> CartTheory {
        let sig = CartSignature::new().with("f", 2).unwrap().with("g", 1).unwrap();
        CartTheory::new("t", QuantaleKind::Lawvere, sig)
            .equation("comm", "f(x1, x2)", "f(x2, x1)")
            .unwrap()
            .axiom("ax", "g(x1)", "1/4", "x1")
            .unwrap()
    }

    const EXAMPLE: &str = r#"
(TRIANG@1 1/2 "g(g(x1))" "x1"
  (NEXP@1 1/4 "g(g(x1))" "g(x1)" {"g"}
    (AXIOM@1 1/4 "g(x1)" "x1" {"ax"}))
  (AXIOM@1 1/4 "g(x1)" "x1" {"ax"}))
"#;

    #[test]
    fn example_checks_and_round_trips() {
        let t = theory();
        let cert = parse_qel(EXAMPLE, &t).unwrap();
        let report = check_qel(&cert, &t).unwrap();
        assert_eq!(report.eps.to_string(), "1/2");
        assert_eq!(report.nodes, 4);
        assert_eq!(parse_qel(&render_qel(&cert), &t).unwrap(), cert);
        let json = serde_json::to_string(&QelJson::from(&cert)).unwrap();
        let back: QelJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_certificate(&t).unwrap(), cert);
    }

    #[test]
    fn rewrite_chains() {
        let t = theory();
        let refl = r#"(REFL@3 0 "g(f(x1, f(x2, x3)))" "g(f(f(x3, x2), x1))" {"g(f(f(x2, x3), x1))"})"#;
        check_qel(&parse_qel(refl, &t).unwrap(), &t).unwrap();
        let bad = r#"(REFL@3 0 "g(f(x1, f(x2, x3)))" "g(f(f(x3, x2), x1))")"#;
        let err = check_qel(&parse_qel(bad, &t).unwrap(), &t).unwrap_err();
        assert!(err.to_string().contains("does not rewrite"), "{err}");
    }

    #[test]
    fn substitution_and_rejections() {
        let t = theory();
        let subq = r#"(SUBQ@2 1/4 "g(f(x1, x2))" "f(x1, x2)" {"f(x1, x2)"} (AXIOM@1 1/4 "g(x1)" "x1" {"ax"}))"#;
        check_qel(&parse_qel(subq, &t).unwrap(), &t).unwrap();
        let wrong_eps = r#"(SUBQ@2 1/8 "g(f(x1, x2))" "f(x1, x2)" {"f(x1, x2)"} (AXIOM@1 1/4 "g(x1)" "x1" {"ax"}))"#;
        let err = check_qel(&parse_qel(wrong_eps, &t).unwrap(), &t).unwrap_err();
        assert!(matches!(err, CartesianError::Qel { ref path, .. } if path == "/"), "{err}");
        let deep = r#"(MON@1 1 "g(x1)" "x1" (AXIOM@1 1/8 "g(x1)" "x1" {"ax"}))"#;
        let err = check_qel(&parse_qel(deep, &t).unwrap(), &t).unwrap_err();
        assert!(matches!(err, CartesianError::Qel { ref path, .. } if path == "/0"), "{err}");
        let ctx = r#"(AXIOM@0 1/4 "g(x1)" "x1" {"ax"})"#;
        assert!(check_qel(&parse_qel(ctx, &t).unwrap(), &t).is_err());
    }
}
