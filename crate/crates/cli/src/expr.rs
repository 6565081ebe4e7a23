//! Tiny arithmetic grammar for beam-shape control functions.
//!
//! Shapes are functions of the direction variable `beta`. The grammar is
//! deliberately minimal so inputs stay auditable:
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' factor)?          -- right-associative power
//! atom   := NUMBER | 'beta' | '(' expr ')'
//! NUMBER := nonnegative decimal literal
//! ```
//!
//! No subtraction, division, or unary minus: shape functions must be
//! positive over their band, and the restricted grammar cannot express
//! most accidental sign mistakes.

use std::fmt;

/// Parsed shape expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Beta,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, beta: f64) -> f64 {
        match self {
            Expr::Number(v) => *v,
            Expr::Beta => beta,
            Expr::Add(a, b) => a.eval(beta) + b.eval(beta),
            Expr::Mul(a, b) => a.eval(beta) * b.eval(beta),
            Expr::Pow(a, b) => a.eval(beta).powf(b.eval(beta)),
        }
    }
}

/// Where and why parsing failed.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at byte {}", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

pub fn parse(input: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let expr = parser.expr()?;
    parser.skip_spaces();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.to_owned(),
        }
    }

    fn skip_spaces(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: u8) -> bool {
        self.skip_spaces();
        if self.bytes.get(self.pos) == Some(&token) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.term()?;
        while self.eat(b'+') {
            let right = self.term()?;
            left = Expr::Add(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.factor()?;
        while self.eat(b'*') {
            let right = self.factor()?;
            left = Expr::Mul(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        self.skip_spaces();
        match self.bytes.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() || *b == b'.' => self.number(),
            Some(_) => self.ident(),
            None => Err(self.error("expected a number, 'beta', or '('")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit() || *b == b'.')
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii range");
        text.parse::<f64>()
            .map(Expr::Number)
            .map_err(|_| ParseError {
                position: start,
                message: format!("invalid number {text:?}"),
            })
    }

    fn ident(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphabetic())
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii range");
        if text == "beta" {
            Ok(Expr::Beta)
        } else {
            Err(ParseError {
                position: start,
                message: format!("unknown symbol {text:?} (only 'beta' is defined)"),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(input: &str, beta: f64) -> f64 {
        parse(input).unwrap().eval(beta)
    }

    #[test]
    fn literals_and_the_variable() {
        assert_eq!(eval("1.5", 0.0), 1.5);
        assert_eq!(eval("beta", 0.75), 0.75);
        assert_eq!(eval(".5", 0.0), 0.5);
    }

    #[test]
    fn precedence_is_power_then_product_then_sum() {
        assert_eq!(eval("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(eval("2 * 3 ^ 2", 0.0), 18.0);
        assert_eq!(eval("(1 + 2) * 3", 0.0), 9.0);
        // Right-associative power: 2^(3^2) = 512, not (2^3)^2 = 64.
        assert_eq!(eval("2 ^ 3 ^ 2", 0.0), 512.0);
    }

    #[test]
    fn beta_composes_with_arithmetic() {
        assert_eq!(eval("beta ^ 2 + 0.25", 0.5), 0.5);
        assert_eq!(eval("beta * beta", 1.5), 2.25);
    }

    #[test]
    fn rejects_unknown_symbols_and_syntax() {
        assert!(parse("gamma").is_err());
        assert!(parse("beta -").is_err());
        assert!(parse("1 - 2").is_err());
        assert!(parse("(beta").is_err());
        assert!(parse("beta beta").is_err());
        assert!(parse("").is_err());
        assert!(parse("1..2").is_err());
    }

    #[test]
    fn reported_positions_point_at_the_problem() {
        let err = parse("1 + gamma").unwrap_err();
        assert_eq!(err.position, 4);
    }
}
