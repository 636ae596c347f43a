//! The bracketed tree syntax shared by the certificate formats:
//! `( … )` lists, `{ … }` payload groups, `"…"` strings and bare words.
//! Lines starting with `#` are comments.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Sexp {
    List(Vec<Sexp>, usize),
    Group(Vec<Sexp>, usize),
    Str(String, usize),
    Word(String, usize),
}

impl Sexp {
    pub(crate) fn line(&self) -> usize {
        match self {
            Sexp::List(_, l) | Sexp::Group(_, l) | Sexp::Str(_, l) | Sexp::Word(_, l) => *l,
        }
    }
}

pub(crate) type ParseError = (usize, String);

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
}

impl Lexer<'_> {
    fn skip(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == '\n' {
                self.line += 1;
                self.chars.next();
            } else if c.is_whitespace() {
                self.chars.next();
            } else if c == '#' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.chars.next();
                }
            } else {
                break;
            }
        }
    }

    fn item(&mut self) -> Result<Option<Sexp>, ParseError> {
        self.skip();
        let line = self.line;
        let Some(&c) = self.chars.peek() else { return Ok(None) };
        match c {
            '(' | '{' => {
                self.chars.next();
                let close = if c == '(' { ')' } else { '}' };
                let mut items = Vec::new();
                loop {
                    self.skip();
                    match self.chars.peek() {
                        None => return Err((line, format!("unclosed `{c}`"))),
                        Some(&d) if d == close => {
                            self.chars.next();
                            break;
                        }
                        Some(')') | Some('}') => return Err((self.line, format!("mismatched bracket closing `{c}`"))),
                        Some(_) => items.push(self.item()?.expect("input remains")),
                    }
                }
                Ok(Some(if c == '(' { Sexp::List(items, line) } else { Sexp::Group(items, line) }))
            }
            ')' | '}' => Err((line, format!("unexpected `{c}`"))),
            '"' => {
                self.chars.next();
                let mut s = String::new();
                loop {
                    match self.chars.next() {
                        None => return Err((line, "unterminated string".into())),
                        Some('"') => break,
                        Some('\n') => return Err((line, "newline inside a string".into())),
                        Some(ch) => s.push(ch),
                    }
                }
                Ok(Some(Sexp::Str(s, line)))
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = self.chars.peek() {
                    if ch.is_whitespace() || "(){}\"".contains(ch) {
                        break;
                    }
                    s.push(ch);
                    self.chars.next();
                }
                Ok(Some(Sexp::Word(s, line)))
            }
        }
    }
}

/// Reads exactly one top-level item.
pub(crate) fn parse_one(text: &str) -> Result<Sexp, ParseError> {
    let mut lx = Lexer { chars: text.chars().peekable(), line: 1 };
    let item = lx.item()?.ok_or((1, "empty input".to_string()))?;
    lx.skip();
    if lx.chars.peek().is_some() {
        return Err((lx.line, "trailing input after the tree".into()));
    }
    Ok(item)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_trees() {
        let t = parse_one("# c\n(A 1/2 \"x ; y\"\n  (B ⊤ {\"p\" \"q\"}))\n").unwrap();
        match t {
            Sexp::List(items, 2) => {
                assert_eq!(items.len(), 4);
                assert_eq!(items[2], Sexp::Str("x ; y".into(), 2));
                assert!(matches!(&items[3], Sexp::List(inner, 3) if matches!(&inner[2], Sexp::Group(g, 3) if g.len() == 2)));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_one("(A (B)").unwrap_err().0, 1);
        assert!(parse_one("(A) (B)").is_err());
        assert!(parse_one("(A }").is_err());
    }
}
