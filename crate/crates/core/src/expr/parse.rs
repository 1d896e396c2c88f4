use thiserror::Error;

use super::{BinOp, Expr, Func, Scope};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("undeclared identifier `{name}` at offset {offset}")]
    Undeclared { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::Undeclared { offset, .. } => *offset,
        }
    }
}

/// Parses `text` with the grammar
///
/// ```text
/// expr   := term (('+'|'-') term)*
/// term   := factor (('*'|'/') factor)*
/// factor := ('-')? power
/// power  := atom ('^' factor)?
/// atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
/// ```
///
/// Identifiers must be declared in `scope` (or be the constant `pi`).
pub fn parse_expr(text: &str, scope: &Scope) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        scope,
    };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.syntax("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    scope: &'a Scope,
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            Ok(Expr::neg(self.power()?))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.factor()?;
            Ok(Expr::pow(base, exponent))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(_) => Err(self.syntax("expected a number, identifier or `(`")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            self.pos = start;
            return Err(self.syntax("malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
                return Err(self.syntax("malformed exponent"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
            offset: start,
            message: format!("invalid number `{text}`"),
        })?;
        Ok(Expr::constant(value))
    }

    fn ident(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        if self.peek() == Some(b'(') {
            let Some(func) = Func::from_name(name) else {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unknown function `{name}`"),
                });
            };
            self.pos += 1;
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.syntax("expected `)` after function argument"));
            }
            return Ok(Expr::call(func, arg));
        }
        if let Some(symbol) = self.scope.resolve(name) {
            return Ok(Expr::var(symbol));
        }
        if name == "pi" {
            return Ok(Expr::constant(std::f64::consts::PI));
        }
        Err(ParseError::Undeclared {
            name: name.to_string(),
            offset: start,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schwarzschild_scope() -> Scope {
        Scope::new(&["t", "r", "theta", "phi"], &["M"])
    }

    #[test]
    fn parses_corpus_style_components() {
        let scope = schwarzschild_scope();
        assert!(parse_expr("1 - 2*M/r", &scope).is_ok());
        assert!(parse_expr("sin(theta)^2", &scope).is_ok());
        assert!(parse_expr("-r^2*sin(theta)^2", &scope).is_ok());
        assert!(parse_expr("1.5e-3 * r", &scope).is_ok());
    }

    #[test]
    fn reports_syntax_offset() {
        let scope = Scope::new(&["x"], &[] as &[&str]);
        let err = parse_expr("2*/x", &scope).unwrap_err();
        assert_eq!(err.offset(), 2);
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn names_undeclared_identifier() {
        let err = parse_expr("1 - 2*Q/r", &schwarzschild_scope()).unwrap_err();
        match err {
            ParseError::Undeclared { name, offset } => {
                assert_eq!(name, "Q");
                assert_eq!(offset, 6);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_empty_and_unbalanced() {
        let scope = schwarzschild_scope();
        assert!(parse_expr("   ", &scope).is_err());
        assert!(parse_expr("(r", &scope).is_err());
        assert!(parse_expr("r)", &scope).is_err());
        assert!(parse_expr("foo(r)", &scope).is_err());
        assert!(parse_expr("1e", &scope).is_err());
    }

    #[test]
    fn power_is_right_associative_and_minus_binds_tightly() {
        let scope = Scope::new(&["x"], &[] as &[&str]);
        let b = super::super::Bindings::from_slices(&[2.0], &[]);
        let e = parse_expr("2^3^2", &scope).unwrap();
        assert_eq!(e.eval(&b).unwrap(), 512.0);
        let e = parse_expr("-x^2", &scope).unwrap();
        assert_eq!(e.eval(&b).unwrap(), -4.0);
        let e = parse_expr("-x*3", &scope).unwrap();
        assert_eq!(e.eval(&b).unwrap(), -6.0);
        let e = parse_expr("2^-1", &scope).unwrap();
        assert_eq!(e.eval(&b).unwrap(), 0.5);
    }
}
