//! Parser for the arithmetic expressions used in every text format.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```

use super::error::AlgebraError;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(i64),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err(msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse(msg.into())
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
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

    fn expr(&mut self) -> Result<Expr, AlgebraError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, AlgebraError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, AlgebraError> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, AlgebraError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let e = self.integer()?;
            Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<i64, AlgebraError> {
        self.peek();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(format!("expected integer at offset {start}")));
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().map_err(|_| err("integer out of range"))
    }

    fn atom(&mut self) -> Result<Expr, AlgebraError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(err(format!("expected ')' at offset {}", self.pos)));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Expr::Var(name.to_string()))
            }
            Some(c) => Err(err(format!("unexpected '{}' at offset {}", c as char, self.pos))),
            None => Err(err("unexpected end of input")),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, AlgebraError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(err(format!("trailing input at offset {}", p.pos)));
    }
    Ok(e)
}

impl Expr {
    /// Evaluates the expression; `var` resolves identifiers, `div` performs
    /// (possibly failing) division.
    pub fn eval<T, V, D>(&self, var: &V, div: &D, int: &dyn Fn(i64) -> T) -> Result<T, AlgebraError>
    where
        T: crate::algebra::Ring,
        V: Fn(&str) -> Result<T, AlgebraError>,
        D: Fn(&T, &T) -> Result<T, AlgebraError>,
    {
        Ok(match self {
            Expr::Int(n) => int(*n),
            Expr::Var(name) => var(name)?,
            Expr::Add(a, b) => a.eval(var, div, int)?.add(&b.eval(var, div, int)?),
            Expr::Sub(a, b) => a.eval(var, div, int)?.sub(&b.eval(var, div, int)?),
            Expr::Mul(a, b) => a.eval(var, div, int)?.mul(&b.eval(var, div, int)?),
            Expr::Div(a, b) => div(&a.eval(var, div, int)?, &b.eval(var, div, int)?)?,
            Expr::Neg(a) => a.eval(var, div, int)?.neg(),
            Expr::Pow(a, e) => {
                let base = a.eval(var, div, int)?;
                if *e >= 0 {
                    base.pow(*e as u64)
                } else {
                    let inv = div(&base.one_like(), &base)?;
                    inv.pow(e.unsigned_abs())
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_precedence() {
        let e = parse_expr("1+2*t^3").unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Int(1)),
                Box::new(Expr::Mul(Box::new(Expr::Int(2)), Box::new(Expr::Pow(Box::new(Expr::Var("t".into())), 3))))
            )
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_expr("1+").is_err());
        assert!(parse_expr("(t").is_err());
        assert!(parse_expr("t t").is_err());
        assert!(parse_expr("t^x").is_err());
    }
}
