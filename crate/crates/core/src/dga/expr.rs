//! Linear combinations of products of names, as written in algebra files:
//! `1/2*x^2*y - z + 3`. A term without names is a multiple of the unit.

use std::str::FromStr;

use crate::exactlin::Rat;

/// One term: coefficient and factors `(name, exponent)` in written order.
pub type ExprTerm = (Rat, Vec<(String, u32)>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    /// Byte offset of the problem within the parsed text.
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ExprError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "column {}: {}", self.column + 1, self.message)
    }
}

impl std::error::Error for ExprError {}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '.')
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError { column: self.pos, message: message.into() })
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if f(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<Rat, ExprError> {
        let start = self.pos;
        let text = self.take_while(|c| c.is_ascii_digit() || c == '/');
        Rat::from_str(text).map_err(|_| ExprError { column: start, message: format!("bad number `{text}`") })
    }

    fn factor(&mut self, coef: &mut Rat, names: &mut Vec<(String, u32)>) -> Result<(), ExprError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                *coef = &*coef * &self.number()?;
                Ok(())
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '.').to_string();
                self.skip_ws();
                let mut e = 1;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    self.skip_ws();
                    let start = self.pos;
                    let text = self.take_while(|c| c.is_ascii_digit());
                    e = text.parse::<u32>().map_err(|_| ExprError { column: start, message: "expected exponent".into() })?;
                }
                if e > 0 {
                    names.push((name, e));
                }
                Ok(())
            }
            Some(c) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses a sum of terms. `"0"` and the empty sum both give no terms.
pub fn parse_expr(src: &str) -> Result<Vec<ExprTerm>, ExprError> {
    let mut cur = Cursor { src, pos: 0 };
    let mut terms = Vec::new();
    cur.skip_ws();
    if cur.peek().is_none() {
        return cur.err("empty expression");
    }
    let mut first = true;
    loop {
        cur.skip_ws();
        let mut coef = Rat::one();
        match cur.peek() {
            Some('+') => {
                cur.pos += 1;
            }
            Some('-') => {
                cur.pos += 1;
                coef = -coef;
            }
            _ if first => {}
            Some(c) => return cur.err(format!("expected `+` or `-`, found `{c}`")),
            None => break,
        }
        first = false;
        let mut names = Vec::new();
        cur.factor(&mut coef, &mut names)?;
        loop {
            cur.skip_ws();
            if cur.peek() == Some('*') {
                cur.pos += 1;
                cur.factor(&mut coef, &mut names)?;
            } else {
                break;
            }
        }
        if !coef.is_zero() {
            terms.push((coef, names));
        }
        cur.skip_ws();
        if cur.peek().is_none() {
            break;
        }
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_terms() {
        let t = parse_expr("1/2*x^2*y - z + 3").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0], (Rat::new(1, 2), vec![("x".into(), 2), ("y".into(), 1)]));
        assert_eq!(t[1], (Rat::from_int(-1), vec![("z".into(), 1)]));
        assert_eq!(t[2], (Rat::from_int(3), vec![]));
        assert!(parse_expr("0").unwrap().is_empty());
        assert!(parse_expr("-x*2").unwrap()[0].0 == Rat::from_int(-2));
    }

    #[test]
    fn reports_columns() {
        assert_eq!(parse_expr("x + ").unwrap_err().column, 4);
        assert_eq!(parse_expr("x y").unwrap_err().column, 2);
        assert!(parse_expr("").is_err());
        assert!(parse_expr("x^").is_err());
    }
}
