//! Line-oriented theory files.
//!
//! ```text
//! [name]        ha_bool
//! [quantale]    boolean | lawvere
//! [semiring]    bool | nonneg | rationals      (optional)
//! [signature]   copy : 1 -> 2
//!               scalar : 1 -> 1 @scalar(bool)
//! [equations]   label: lhs == rhs
//!               @scalscal
//! [quantitative] label: lhs ==(eps) rhs
//!               @tv
//! [closure]     seq=sum par=meet symm=true
//! [model]       matrix | matrix-order | stochastic | stochastic-tv | cartesian | cartesian-exact | none
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::diagram::{parse, GeneratorDecl, ScalarDomain, Signature};
use crate::quantale::QuantaleKind;
use crate::semantics::Semiring;

use super::{
    ClosureConfig, Combine, Equation, EquationEntry, Model, QuantAxiom, QuantEntry, QuantEq, QuantTheory, SchemaId,
    TheoryError,
};

const SECTIONS: [&str; 8] = ["name", "quantale", "semiring", "signature", "equations", "quantitative", "closure", "model"];

fn err(line: usize, message: impl Into<String>) -> TheoryError {
    TheoryError::File { line, message: message.into() }
}

/// Parses a theory file.
pub fn parse_theory(text: &str) -> Result<QuantTheory, TheoryError> {
    let mut sections: Vec<(&str, Vec<(usize, &str)>)> = SECTIONS.iter().map(|s| (*s, Vec::new())).collect();
    let mut current: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let pos = SECTIONS.iter().position(|s| *s == name.trim()).ok_or_else(|| err(line_no, format!("unknown section [{name}]")))?;
            current = Some(pos);
            continue;
        }
        let pos = current.ok_or_else(|| err(line_no, "content before the first section"))?;
        sections[pos].1.push((line_no, line));
    }
    let section = |name: &str| -> &[(usize, &str)] {
        &sections.iter().find(|(n, _)| *n == name).expect("known section").1
    };
    let single = |name: &str| -> Result<Option<(usize, &str)>, TheoryError> {
        match section(name) {
            [] => Ok(None),
            [one] => Ok(Some(*one)),
            [_, second, ..] => Err(err(second.0, format!("[{name}] takes a single line"))),
        }
    };

    let name = single("name")?.map_or("unnamed", |(_, n)| n).to_string();
    let (q_line, q_text) = single("quantale")?.ok_or_else(|| err(0, "missing [quantale] section"))?;
    let quantale: QuantaleKind = q_text.parse().map_err(|e: crate::quantale::QuantaleError| err(q_line, e.to_string()))?;
    let semiring = match single("semiring")? {
        Some((line, s)) => Some(s.parse::<Semiring>().map_err(|e| err(line, e.to_string()))?),
        None => None,
    };

    let mut signature = Signature::new();
    for &(line, text) in section("signature") {
        signature.declare(parse_decl(line, text)?).map_err(|e| err(line, e.to_string()))?;
    }

    let mut equations = Vec::new();
    for &(line, text) in section("equations") {
        if let Some(id) = text.strip_prefix('@') {
            equations.push(EquationEntry::Schema(id.trim().parse::<SchemaId>().map_err(|e| err(line, e.to_string()))?));
            continue;
        }
        let (label, body) = split_label(text, equations.len());
        let (l, r) = body.split_once("==").ok_or_else(|| err(line, format!("equation `{label}` lacks `==`")))?;
        let lhs = parse(l.trim(), &signature).map_err(|e| err(line, format!("equation `{label}`: {e}")))?;
        let rhs = parse(r.trim(), &signature).map_err(|e| err(line, format!("equation `{label}`: {e}")))?;
        QuantEq::new(lhs.clone(), rhs.clone(), quantale.top()).map_err(|e| err(line, format!("equation `{label}`: {e}")))?;
        equations.push(EquationEntry::Concrete(Equation { label, lhs, rhs }));
    }

    let mut quantitative = Vec::new();
    for &(line, text) in section("quantitative") {
        if let Some(id) = text.strip_prefix('@') {
            quantitative.push(QuantEntry::Schema(id.trim().parse::<SchemaId>().map_err(|e| err(line, e.to_string()))?));
            continue;
        }
        let (label, body) = split_label(text, quantitative.len());
        let bad = || err(line, format!("axiom `{label}` should read `lhs ==(eps) rhs`"));
        let (l, rest) = body.split_once("==(").ok_or_else(bad)?;
        let (eps, r) = rest.split_once(')').ok_or_else(bad)?;
        let eps = quantale.parse_value(eps).map_err(|e| err(line, format!("axiom `{label}`: {e}")))?;
        let lhs = parse(l.trim(), &signature).map_err(|e| err(line, format!("axiom `{label}`: {e}")))?;
        let rhs = parse(r.trim(), &signature).map_err(|e| err(line, format!("axiom `{label}`: {e}")))?;
        let eq = QuantEq::new(lhs, rhs, eps).map_err(|e| err(line, format!("axiom `{label}`: {e}")))?;
        quantitative.push(QuantEntry::Concrete(QuantAxiom { label, eq }));
    }

    let closure = match single("closure")? {
        Some((line, text)) => parse_closure(line, text)?,
        None => ClosureConfig { seq: Combine::Sum, par: Combine::Sum, symm: false },
    };
    let model = match single("model")? {
        Some((line, text)) => text.parse::<Model>().map_err(|e| err(line, e.to_string()))?,
        None => Model::None,
    };
    QuantTheory::new(name, quantale, semiring, signature, equations, quantitative, closure, model)
}

fn split_label(text: &str, index: usize) -> (String, &str) {
    match text.split_once(':') {
        Some((label, body)) if !label.contains("==") => (label.trim().to_string(), body),
        _ => (format!("e{}", index + 1), text),
    }
}

fn parse_decl(line: usize, text: &str) -> Result<GeneratorDecl, TheoryError> {
    let bad = || err(line, format!("declaration should read `name : n -> m [@scalar(domain)]`, got `{text}`"));
    let (name, ty) = text.split_once(':').ok_or_else(bad)?;
    let (ty, scalar) = match ty.split_once('@') {
        Some((ty, annot)) => {
            let domain = annot
                .trim()
                .strip_prefix("scalar")
                .map(str::trim)
                .and_then(|a| a.strip_prefix('('))
                .and_then(|a| a.strip_suffix(')'))
                .ok_or_else(bad)?;
            let domain: ScalarDomain = domain.trim().parse().map_err(|e: String| err(line, e))?;
            (ty, Some(domain))
        }
        None => (ty, None),
    };
    let (a, c) = ty.split_once("->").ok_or_else(bad)?;
    Ok(GeneratorDecl {
        name: name.trim().to_string(),
        arity: a.trim().parse().map_err(|_| bad())?,
        coarity: c.trim().parse().map_err(|_| bad())?,
        scalar,
    })
}

fn parse_closure(line: usize, text: &str) -> Result<ClosureConfig, TheoryError> {
    let mut config = ClosureConfig { seq: Combine::Sum, par: Combine::Sum, symm: false };
    for item in text.split_whitespace() {
        let (key, value) = item.split_once('=').ok_or_else(|| err(line, format!("expected key=value, got `{item}`")))?;
        match key {
            "seq" => config.seq = value.parse().map_err(|e: TheoryError| err(line, e.to_string()))?,
            "par" => config.par = value.parse().map_err(|e: TheoryError| err(line, e.to_string()))?,
            "symm" => {
                config.symm = value.parse().map_err(|_| err(line, format!("symm must be true or false, got `{value}`")))?
            }
            other => return Err(err(line, format!("unknown closure key `{other}`"))),
        }
    }
    Ok(config)
}

/// Renders a theory in the file format; `parse_theory` reads it back to an
/// equal theory.
pub fn render_theory(t: &QuantTheory) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[name]\n{}\n\n[quantale]\n{}", t.name, t.quantale);
    if let Some(s) = t.semiring {
        let _ = writeln!(out, "\n[semiring]\n{s}");
    }
    out.push_str("\n[signature]\n");
    for d in t.signature.decls() {
        let _ = write!(out, "{} : {} -> {}", d.name, d.arity, d.coarity);
        if let Some(domain) = d.scalar {
            let _ = write!(out, " @scalar({domain})");
        }
        out.push('\n');
    }
    out.push_str("\n[equations]\n");
    for e in &t.equations {
        match e {
            EquationEntry::Concrete(eq) => {
                let _ = writeln!(out, "{}: {} == {}", eq.label, eq.lhs, eq.rhs);
            }
            EquationEntry::Schema(id) => {
                let _ = writeln!(out, "@{id}");
            }
        }
    }
    out.push_str("\n[quantitative]\n");
    for e in &t.quantitative {
        match e {
            QuantEntry::Concrete(ax) => {
                let _ = writeln!(out, "{}: {} ==({}) {}", ax.label, ax.eq.lhs, ax.eq.eps, ax.eq.rhs);
            }
            QuantEntry::Schema(id) => {
                let _ = writeln!(out, "@{id}");
            }
        }
    }
    let _ = writeln!(out, "\n[closure]\n{}\n\n[model]\n{}", t.closure, t.model.name());
    out
}

pub fn load_theory(path: impl AsRef<Path>) -> Result<QuantTheory, TheoryError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| TheoryError::Io(format!("{}: {e}", path.display())))?;
    parse_theory(&text)
}

pub fn save_theory(t: &QuantTheory, path: impl AsRef<Path>) -> Result<(), TheoryError> {
    let path = path.as_ref();
    std::fs::write(path, render_theory(t)).map_err(|e| TheoryError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{builtin_theory, BuiltinTheory};

    #[test]
    fn round_trips_builtins() {
        for (which, s) in [
            (BuiltinTheory::Ha, Semiring::Boolean),
            (BuiltinTheory::PreOrd, Semiring::NonNegative),
            (BuiltinTheory::Ca, Semiring::Boolean),
            (BuiltinTheory::Ba, Semiring::Boolean),
        ] {
            let t = builtin_theory(which, s).unwrap();
            let text = render_theory(&t);
            assert_eq!(parse_theory(&text).unwrap(), t, "{text}");
        }
    }

    #[test]
    fn ill_typed_equation_is_named() {
        let text = "[quantale]\nboolean\n[signature]\nf : 1 -> 2\ng : 2 -> 1\n[equations]\nbad: f ; f == g\n";
        match parse_theory(text) {
            Err(TheoryError::File { line, message }) => {
                assert_eq!(line, 7);
                assert!(message.contains("`bad`"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let text = "[quantale]\nboolean\n[signature]\nf : 1 -> 2\ng : 2 -> 1\n[equations]\nmixed: f == g\n";
        assert!(matches!(parse_theory(text), Err(TheoryError::File { line: 7, .. })));
    }

    #[test]
    fn meet_closure_is_checked() {
        let text = "[quantale]\nlawvere\n[signature]\nf : 1 -> 1\n[quantitative]\nax: f ==(1/4) id\n[closure]\nseq=sum par=meet symm=true\n";
        let t = parse_theory(text).unwrap();
        assert_eq!(t.closure.par, Combine::Meet);
        assert_eq!(t.axiom("ax", &[]).unwrap().eps.to_string(), "1/4");
        assert!(parse_theory("[quantale]\nlawvere\n[closure]\nseq=max\n").is_err());
    }
}
