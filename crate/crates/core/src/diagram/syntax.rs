//! Concrete syntax for Σ-terms.
//!
//! ```text
//! term := atom | term ";" term | term "*" term | "(" term ")"
//! atom := IDENT | IDENT "(" RATIONAL ")" | id | sym | empty | id_N | sym_N_M
//! ```
//!
//! `;` binds looser than `*`; both associate to the left.

use std::fmt::Write;
use std::ops::Range;

use crate::rational::Rational;

use super::build::{id_n, sym_mn};
use super::{DiagramError, Signature, Term, TermKind};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    Semi,
    Star,
}

/// Builds the token for a scanned word.
type WordTok = fn(String) -> Tok;

fn lex(text: &str) -> Result<Vec<(Tok, Range<usize>)>, DiagramError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ';' => Some(Tok::Semi),
            '*' => Some(Tok::Star),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push((tok, i..i + c.len_utf8()));
            continue;
        }
        let (pred, make): (fn(char) -> bool, WordTok) = if c.is_ascii_alphabetic() || c == '_' {
            (|c| c.is_ascii_alphanumeric() || c == '_', Tok::Ident)
        } else if c.is_ascii_digit() || c == '-' || c == '.' {
            (|c| c.is_ascii_digit() || c == '.' || c == '/' || c == '-', Tok::Num)
        } else {
            return Err(DiagramError::Syntax { span: i..i + c.len_utf8(), message: format!("unexpected character `{c}`") });
        };
        let mut end = i;
        let mut word = String::new();
        while let Some(&(j, d)) = chars.peek() {
            if !pred(d) {
                break;
            }
            word.push(d);
            end = j + d.len_utf8();
            chars.next();
        }
        out.push((make(word), i..end));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Range<usize>)>,
    pos: usize,
    sig: &'a Signature,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> Range<usize> {
        self.toks.get(self.pos).map(|(_, s)| s.clone()).unwrap_or(self.len..self.len)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Range<usize>, DiagramError> {
        if self.peek() == Some(&tok) {
            let span = self.span();
            self.pos += 1;
            Ok(span)
        } else {
            Err(DiagramError::Syntax { span: self.span(), message: format!("expected {what}") })
        }
    }

    fn seq(&mut self) -> Result<(Term, Range<usize>), DiagramError> {
        let (mut acc, mut span) = self.par()?;
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            let (rhs, rspan) = self.par()?;
            acc = acc.seq(&rhs).map_err(|e| e.at(rspan.clone()))?;
            span = span.start..rspan.end;
        }
        Ok((acc, span))
    }

    fn par(&mut self) -> Result<(Term, Range<usize>), DiagramError> {
        let (mut acc, mut span) = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let (rhs, rspan) = self.atom()?;
            acc = acc.par(&rhs);
            span = span.start..rspan.end;
        }
        Ok((acc, span))
    }

    fn atom(&mut self) -> Result<(Term, Range<usize>), DiagramError> {
        let start = self.span();
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let (t, _) = self.seq()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok((t, start.start..close.end))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(t) = structural(&name) {
                    return Ok((t, start));
                }
                let mut span = start.clone();
                let scalar = if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let num_span = self.span();
                    let value = match self.peek().cloned() {
                        Some(Tok::Num(text)) => text.parse::<Rational>().map_err(|_| DiagramError::Syntax {
                            span: num_span.clone(),
                            message: format!("invalid rational `{text}`"),
                        })?,
                        _ => {
                            return Err(DiagramError::Syntax { span: num_span, message: "expected a rational".into() })
                        }
                    };
                    self.pos += 1;
                    let close = self.expect(Tok::RParen, "`)`")?;
                    span = start.start..close.end;
                    Some(value)
                } else {
                    None
                };
                let g = self.sig.generator(&name, scalar).map_err(|e| e.at(span.clone()))?;
                Ok((Term::gen(g), span))
            }
            Some(_) => Err(DiagramError::Syntax { span: start, message: "expected a term".into() }),
            None => Err(DiagramError::Syntax { span: start, message: "unexpected end of input".into() }),
        }
    }
}

fn structural(name: &str) -> Option<Term> {
    match name {
        "id" => return Some(Term::id()),
        "sym" => return Some(Term::sym()),
        "empty" => return Some(Term::empty()),
        _ => {}
    }
    if !super::is_reserved(name) {
        return None;
    }
    if let Some(n) = name.strip_prefix("id_") {
        return n.parse().ok().map(id_n);
    }
    let (m, n) = name.strip_prefix("sym_")?.split_once('_')?;
    Some(sym_mn(m.parse().ok()?, n.parse().ok()?))
}

/// Parses a term over `sig`. Errors carry byte spans into `text`.
pub fn parse(text: &str, sig: &Signature) -> Result<Term, DiagramError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, sig, len: text.len() };
    let (t, _) = p.seq()?;
    if p.pos != p.toks.len() {
        return Err(DiagramError::Syntax { span: p.span(), message: "unexpected trailing input".into() });
    }
    Ok(t)
}

/// Prints a term with the fewest parentheses that parse back to the same
/// tree.
pub fn print(t: &Term) -> String {
    let mut out = String::new();
    print_seq(t, &mut out);
    out
}

fn print_seq(t: &Term, out: &mut String) {
    match t.kind() {
        TermKind::Seq(a, b) => {
            print_seq(a, out);
            out.push_str(" ; ");
            print_par(b, out);
        }
        _ => print_par(t, out),
    }
}

fn print_par(t: &Term, out: &mut String) {
    match t.kind() {
        TermKind::Par(a, b) => {
            print_par(a, out);
            out.push_str(" * ");
            print_atom(b, out);
        }
        _ => print_atom(t, out),
    }
}

fn print_atom(t: &Term, out: &mut String) {
    match t.kind() {
        TermKind::Gen(g) => {
            let _ = write!(out, "{g}");
        }
        TermKind::Id => out.push_str("id"),
        TermKind::Empty => out.push_str("empty"),
        TermKind::Sym => out.push_str("sym"),
        TermKind::Seq(..) | TermKind::Par(..) => {
            out.push('(');
            print_seq(t, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::ScalarDomain;
    use crate::rational::q;

    fn ha() -> Signature {
        Signature::new()
            .with("copy", 1, 2, None)
            .with("del", 1, 0, None)
            .with("add", 2, 1, None)
            .with("zero", 0, 1, None)
            .with("scalar", 1, 1, Some(ScalarDomain::NonNegative))
    }

    #[test]
    fn parses_with_precedence() {
        let t = parse("copy ; (id * del)", &ha()).unwrap();
        assert_eq!(t.ty(), (1, 1));
        match t.kind() {
            TermKind::Seq(a, b) => {
                assert_eq!(a.as_generator().unwrap().name.as_ref(), "copy");
                assert!(matches!(b.kind(), TermKind::Par(..)));
            }
            _ => panic!("expected a sequential composite"),
        }
        let u = parse("copy ; id * del", &ha()).unwrap();
        assert_eq!(t, u);
    }

    #[test]
    fn reports_mismatch_at_second_operand() {
        let text = "copy ; add ; add";
        let err = parse(text, &ha()).unwrap_err();
        match err {
            DiagramError::At { span, source } => {
                assert_eq!(&text[span], "add");
                assert_eq!(*source, DiagramError::Mismatch { left: 1, right: 2 });
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn scalars_and_structural_atoms() {
        let t = parse("scalar(1/2) * id_2 ; sym_2_1", &ha()).unwrap();
        assert_eq!(t.ty(), (3, 3));
        let s = parse("scalar(0.25)", &ha()).unwrap();
        assert_eq!(s.as_generator().unwrap().scalar, Some(q(1, 4)));
        assert!(parse("scalar(-1)", &ha()).is_err());
        assert!(parse("scalar", &ha()).is_err());
        assert!(parse("copy(1)", &ha()).is_err());
        assert!(parse("frob", &ha()).is_err());
        assert!(parse("copy ;", &ha()).is_err());
        assert!(parse("(copy", &ha()).is_err());
        assert!(parse("copy $ del", &ha()).is_err());
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "copy ; (id * del)",
            "copy * copy ; id * sym * id ; add * add",
            "(copy ; add) * (del ; zero)",
            "copy * (del * zero)",
            "scalar(3/2) ; (scalar(0) ; scalar(1))",
            "empty * id",
        ] {
            let t = parse(text, &ha()).unwrap();
            let printed = print(&t);
            assert_eq!(parse(&printed, &ha()).unwrap(), t, "{text} printed as {printed}");
        }
        assert_eq!(print(&parse("(copy ; (id * del))", &ha()).unwrap()), "copy ; id * del");
    }
}
