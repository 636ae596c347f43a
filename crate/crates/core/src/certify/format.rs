//! Text and JSON forms of certificates.
//!
//! ```text
//! # theory ba
//! (TRIANG 3/10 "lhs" "rhs"
//!   (REFL 0 "…" "…")
//!   (SEQ_SUM 3/10 "…" "…"
//!     (AXIOM tv[3/10] 3/10 "cc(3/10) * del" "del * cc(7/10)")
//!     (REFL 0 "…" "…")))
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::diagram::parse;
use crate::theory::QuantTheory;

use super::sexpr::{parse_one, Sexp};
use super::{Certificate, CertifyError, Rule};

/// Renders a certificate, one node per line. With a theory name the
/// output starts with a `# theory <name>` comment.
pub fn render_certificate(cert: &Certificate, theory: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(name) = theory {
        let _ = writeln!(out, "# theory {name}");
    }
    render_node(cert, 0, &mut out);
    out.push('\n');
    out
}

fn render_node(cert: &Certificate, depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    let head = match &cert.rule {
        Rule::Axiom { name, args } if args.is_empty() => format!("AXIOM {name}"),
        Rule::Axiom { name, args } => {
            let args: Vec<String> = args.iter().map(ToString::to_string).collect();
            format!("AXIOM {name}[{}]", args.join(","))
        }
        other => other.tag().to_string(),
    };
    let _ = write!(out, "{indent}({head} {} \"{}\" \"{}\"", cert.eps, cert.lhs, cert.rhs);
    for c in &cert.children {
        out.push('\n');
        render_node(c, depth + 1, out);
    }
    out.push(')');
}

/// The theory named by a leading `# theory <name>` comment.
pub fn theory_hint(text: &str) -> Option<String> {
    text.lines()
        .map(str::trim)
        .take_while(|l| l.is_empty() || l.starts_with('#'))
        .find_map(|l| l.strip_prefix('#').map(str::trim).and_then(|l| l.strip_prefix("theory ")))
        .map(|n| n.trim().to_string())
}

fn parse_err(line: usize, message: impl Into<String>) -> CertifyError {
    CertifyError::Parse { line, message: message.into() }
}

fn rule_from(tag: &str, axiom: Option<&str>, line: usize) -> Result<Rule, CertifyError> {
    Ok(match tag {
        "REFL" => Rule::Refl,
        "BOT" => Rule::Bot,
        "MON" => Rule::Mon,
        "JOIN" => Rule::Join,
        "TRIANG" => Rule::Triang,
        "SYMM" => Rule::Symm,
        "SEQ_SUM" => Rule::SeqSum,
        "SEQ_MEET" => Rule::SeqMeet,
        "PAR_SUM" => Rule::ParSum,
        "PAR_MEET" => Rule::ParMeet,
        "AXIOM" => {
            let head = axiom.ok_or_else(|| parse_err(line, "AXIOM needs a name"))?;
            let (name, args) = match head.split_once('[') {
                Some((name, rest)) => {
                    let inner = rest.strip_suffix(']').ok_or_else(|| parse_err(line, format!("unclosed `[` in `{head}`")))?;
                    let args = crate::theory::schema::parse_args(inner).map_err(|e| parse_err(line, e.to_string()))?;
                    (name, args)
                }
                None => (head, vec![]),
            };
            Rule::Axiom { name: name.to_string(), args }
        }
        other => return Err(parse_err(line, format!("unknown rule `{other}`"))),
    })
}

fn node_from(sexp: &Sexp, theory: &QuantTheory) -> Result<Certificate, CertifyError> {
    let Sexp::List(items, line) = sexp else {
        return Err(parse_err(sexp.line(), "expected `(`"));
    };
    let line = *line;
    let mut it = items.iter().peekable();
    let tag = match it.next() {
        Some(Sexp::Word(w, _)) => w.as_str(),
        _ => return Err(parse_err(line, "expected a rule name")),
    };
    let axiom = if tag == "AXIOM" {
        match it.next() {
            Some(Sexp::Word(w, _)) => Some(w.as_str()),
            _ => return Err(parse_err(line, "AXIOM needs a name")),
        }
    } else {
        None
    };
    let rule = rule_from(tag, axiom, line)?;
    let eps = match it.next() {
        Some(Sexp::Word(w, l)) => theory.quantale.parse_value(w).map_err(|e| parse_err(*l, e.to_string()))?,
        _ => return Err(parse_err(line, "expected a bound")),
    };
    let mut side = |what: &str| -> Result<crate::diagram::Term, CertifyError> {
        match it.next() {
            Some(Sexp::Str(s, l)) => parse(s, &theory.signature).map_err(|e| parse_err(*l, format!("{what}: {e}"))),
            _ => Err(parse_err(line, format!("expected the {what} as a quoted term"))),
        }
    };
    let lhs = side("left side")?;
    let rhs = side("right side")?;
    let children = it.map(|c| node_from(c, theory)).collect::<Result<_, _>>()?;
    Ok(Certificate { rule, lhs, rhs, eps, children })
}

/// Parses the text form against a theory's signature and quantale.
pub fn parse_certificate(text: &str, theory: &QuantTheory) -> Result<Certificate, CertifyError> {
    let tree = parse_one(text).map_err(|(line, message)| CertifyError::Parse { line, message })?;
    node_from(&tree, theory)
}

/// JSON shape of a certificate node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertJson {
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axiom: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub args: Vec<String>,
    pub eps: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<CertJson>,
}

impl From<&Certificate> for CertJson {
    fn from(c: &Certificate) -> Self {
        let (axiom, args) = match &c.rule {
            Rule::Axiom { name, args } => (Some(name.clone()), args.iter().map(ToString::to_string).collect()),
            _ => (None, vec![]),
        };
        CertJson {
            rule: c.rule.tag().to_string(),
            axiom,
            args,
            eps: c.eps.to_string(),
            lhs: c.lhs.to_string(),
            rhs: c.rhs.to_string(),
            children: c.children.iter().map(CertJson::from).collect(),
        }
    }
}

impl CertJson {
    pub fn to_certificate(&self, theory: &QuantTheory) -> Result<Certificate, CertifyError> {
        let rule = match &self.axiom {
            Some(name) if self.args.is_empty() => rule_from("AXIOM", Some(name), 0)?,
            Some(name) => rule_from("AXIOM", Some(&format!("{name}[{}]", self.args.join(","))), 0)?,
            None => rule_from(&self.rule, None, 0)?,
        };
        Ok(Certificate {
            rule,
            eps: theory.quantale.parse_value(&self.eps).map_err(|e| parse_err(0, e.to_string()))?,
            lhs: parse(&self.lhs, &theory.signature).map_err(|e| parse_err(0, e.to_string()))?,
            rhs: parse(&self.rhs, &theory.signature).map_err(|e| parse_err(0, e.to_string()))?,
            children: self.children.iter().map(|c| c.to_certificate(theory)).collect::<Result<_, _>>()?,
        })
    }
}

pub fn to_json(cert: &Certificate) -> String {
    serde_json::to_string_pretty(&CertJson::from(cert)).expect("certificates serialize")
}

pub fn from_json(text: &str, theory: &QuantTheory) -> Result<Certificate, CertifyError> {
    let j: CertJson = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    j.to_certificate(theory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::theory::builtin_by_name;

    #[test]
    fn text_and_json_round_trip() {
        let ba = builtin_by_name("ba").unwrap();
        let ax = Certificate::axiom(&ba, "tv", &[q(3, 10)]).unwrap();
        let refl = Certificate::refl(ba.quantale, ax.rhs.clone(), ax.rhs.clone());
        let cert = ax.triang(refl).unwrap();
        let text = render_certificate(&cert, Some("ba"));
        assert!(text.contains("(AXIOM tv[3/10] 3/10 \"cc(3/10) * del\" \"del * cc(7/10)\")"), "{text}");
        assert_eq!(theory_hint(&text).as_deref(), Some("ba"));
        assert_eq!(parse_certificate(&text, &ba).unwrap(), cert);
        assert_eq!(from_json(&to_json(&cert), &ba).unwrap(), cert);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let ba = builtin_by_name("ba").unwrap();
        let bad = "(TRIANG 0 \"id\" \"id\"\n  (REFL 0 \"id\" \"cc(1/2)\")\n  (FOO 0 \"id\" \"id\"))";
        assert!(matches!(parse_certificate(bad, &ba), Err(CertifyError::Parse { line: 3, .. })));
        let bad = "(REFL 0 \"id\" \"cop(\")";
        assert!(matches!(parse_certificate(bad, &ba), Err(CertifyError::Parse { line: 1, .. })));
    }
}
