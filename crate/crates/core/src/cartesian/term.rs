use std::fmt;
use std::sync::Arc;

use super::{CartSignature, CartesianError};

/// A cartesian term. Variables are 0-based indices into the context and
/// print as `x1, x2, …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartTerm {
    Var(usize),
    Op(Arc<str>, Vec<CartTerm>),
}

impl CartTerm {
    pub fn var(i: usize) -> Self {
        CartTerm::Var(i)
    }

    pub fn op(name: &str, args: Vec<CartTerm>) -> Self {
        CartTerm::Op(name.into(), args)
    }

    /// Largest variable index, if any variable occurs.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            CartTerm::Var(i) => Some(*i),
            CartTerm::Op(_, args) => args.iter().filter_map(CartTerm::max_var).max(),
        }
    }

    /// Adds `k` to every variable index.
    pub fn shift(&self, k: usize) -> Self {
        match self {
            CartTerm::Var(i) => CartTerm::Var(i + k),
            CartTerm::Op(o, args) => CartTerm::Op(o.clone(), args.iter().map(|a| a.shift(k)).collect()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            CartTerm::Var(_) => 1,
            CartTerm::Op(_, args) => 1 + args.iter().map(CartTerm::size).sum::<usize>(),
        }
    }

    /// The subterm at a path of argument positions.
    pub fn at(&self, path: &[usize]) -> Option<&CartTerm> {
        match (path.split_first(), self) {
            (None, t) => Some(t),
            (Some((&i, rest)), CartTerm::Op(_, args)) => args.get(i)?.at(rest),
            _ => None,
        }
    }

    /// Replaces the subterm at `path`.
    pub fn replace_at(&self, path: &[usize], with: CartTerm) -> Option<CartTerm> {
        match (path.split_first(), self) {
            (None, _) => Some(with),
            (Some((&i, rest)), CartTerm::Op(o, args)) => {
                let mut args = args.clone();
                let new = args.get(i)?.replace_at(rest, with)?;
                args[i] = new;
                Some(CartTerm::Op(o.clone(), args))
            }
            _ => None,
        }
    }

    /// Every position in the term, pre-order.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        if let CartTerm::Op(_, args) = self {
            for (i, a) in args.iter().enumerate() {
                out.extend(a.positions().into_iter().map(|mut p| {
                    p.insert(0, i);
                    p
                }));
            }
        }
        out
    }
}

pub(crate) fn is_variable(name: &str) -> bool {
    name.strip_prefix('x').is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
}

/// Simultaneous substitution `t[σ(x_i)/x_i]`.
pub fn substitute(t: &CartTerm, sigma: &[CartTerm]) -> Result<CartTerm, CartesianError> {
    match t {
        CartTerm::Var(i) => sigma.get(*i).cloned().ok_or(CartesianError::UnboundVariable { var: *i, size: sigma.len() }),
        CartTerm::Op(o, args) => {
            Ok(CartTerm::Op(o.clone(), args.iter().map(|a| substitute(a, sigma)).collect::<Result<_, _>>()?))
        }
    }
}

impl fmt::Display for CartTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartTerm::Var(i) => write!(f, "x{}", i + 1),
            CartTerm::Op(o, args) if args.is_empty() => f.write_str(o),
            CartTerm::Op(o, args) => {
                write!(f, "{o}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn err(&self, message: impl Into<String>) -> CartesianError {
        CartesianError::Parse { pos: self.pos, message: message.into() }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<&str, CartesianError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(rest.len());
        if len == 0 || !rest.starts_with(|c: char| c.is_alphabetic() || c == '_') {
            return Err(self.err("expected a variable or an operation"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn term(&mut self, sig: &CartSignature) -> Result<CartTerm, CartesianError> {
        let start = self.pos;
        let name = self.ident()?.to_string();
        if is_variable(&name) {
            let n: usize = name[1..].parse().map_err(|_| self.err("variable index too large"))?;
            if n == 0 {
                return Err(CartesianError::Parse { pos: start, message: "variables are numbered from x1".into() });
            }
            return Ok(CartTerm::Var(n - 1));
        }
        let mut args = Vec::new();
        if self.eat('(') {
            loop {
                args.push(self.term(sig)?);
                if self.eat(')') {
                    break;
                }
                if !self.eat(',') {
                    return Err(self.err("expected `,` or `)`"));
                }
            }
        }
        let expected = sig.arity(&name).ok_or_else(|| CartesianError::UnknownOp(name.clone()))?;
        if expected != args.len() {
            return Err(CartesianError::Arity { op: name, expected, found: args.len() });
        }
        Ok(CartTerm::Op(name.into(), args))
    }
}

/// Parses `t := xN | IDENT | IDENT "(" t ("," t)* ")"`.
pub fn parse_cart(text: &str, sig: &CartSignature) -> Result<CartTerm, CartesianError> {
    let mut p = Parser { src: text, pos: 0 };
    let t = p.term(sig)?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> CartSignature {
        CartSignature::new().with("f", 2).unwrap().with("g", 1).unwrap().with("c", 0).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let s = sig();
        for text in ["x1", "f(x1, x2)", "g(f(c, x3))", "c"] {
            assert_eq!(parse_cart(text, &s).unwrap().to_string(), text);
        }
        assert!(matches!(parse_cart("f(x1)", &s), Err(CartesianError::Arity { .. })));
        assert!(matches!(parse_cart("h(x1)", &s), Err(CartesianError::UnknownOp(_))));
        assert!(parse_cart("x0", &s).is_err());
        assert!(parse_cart("f(x1, x2", &s).is_err());
        assert!(parse_cart("g(x1) x2", &s).is_err());
    }

    #[test]
    fn substitution() {
        let s = sig();
        let p = |t: &str| parse_cart(t, &s).unwrap();
        assert_eq!(substitute(&p("x1"), &[p("f(x2, x2)")]).unwrap(), p("f(x2, x2)"));
        assert_eq!(substitute(&p("f(x1, x1)"), &[p("g(x2)")]).unwrap(), p("f(g(x2), g(x2))"));
        assert_eq!(substitute(&p("g(c)"), &[]).unwrap(), p("g(c)"));
        assert_eq!(substitute(&p("f(x1, x2)"), &[p("x2"), p("x1")]).unwrap(), p("f(x2, x1)"));
        assert!(matches!(substitute(&p("x3"), &[p("c")]), Err(CartesianError::UnboundVariable { var: 2, size: 1 })));
    }

    #[test]
    fn positions() {
        let s = sig();
        let t = parse_cart("f(g(x1), x2)", &s).unwrap();
        assert_eq!(t.positions().len(), 4);
        assert_eq!(t.at(&[0, 0]), Some(&CartTerm::Var(0)));
        assert_eq!(t.replace_at(&[1], CartTerm::Var(0)).unwrap().to_string(), "f(g(x1), x1)");
    }
}
