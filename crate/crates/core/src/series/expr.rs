//! Input language for curves and parametrizations.
//!
//! Grammar: terms separated by `+` and `-`; factors joined by `*`
//! (juxtaposition is not allowed); `^` binds tightest and takes a
//! nonnegative integer exponent; literals are integers or rationals `a/b`;
//! variables come from a caller-supplied set. Whitespace is insignificant.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{BiSeries, Rat, TSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Lit(Rat),
    Variable(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable '{name}' at position {pos}")]
    UnknownVariable { name: String, pos: usize },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a BTreeSet<String>,
}

/// Parse `text` into an expression tree over the allowed variables.
pub fn parse_expr(text: &str, allowed_vars: &BTreeSet<String>) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars: allowed_vars };
    p.skip_ws();
    if p.pos >= p.src.len() {
        return Err(ParseError::Syntax { pos: 0, msg: "empty expression".into() });
    }
    let e = p.expression()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(ParseError::Syntax {
            pos: p.pos,
            msg: format!("unexpected character '{}'", p.src[p.pos] as char),
        });
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expression(&mut self) -> Result<Expr, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Expr::Neg(Box::new(self.term()?))
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            if self.peek() == Some(b'-') {
                return Err(ParseError::Syntax {
                    pos: self.pos,
                    msg: "negative exponent".into(),
                });
            }
            let n = self.integer()?;
            let e: u32 = n.to_string().parse().map_err(|_| ParseError::Syntax {
                pos: start,
                msg: "exponent too large".into(),
            })?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expression()?;
                if self.peek() != Some(b')') {
                    return Err(ParseError::Syntax {
                        pos: self.pos,
                        msg: "expected ')'".into(),
                    });
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let pos = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(ParseError::Syntax { pos, msg: "zero denominator".into() });
                    }
                    Ok(Expr::Lit(Rat::new(num, den)))
                } else {
                    Ok(Expr::Lit(Rat::from_integer(num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                if !self.vars.contains(&name) {
                    return Err(ParseError::UnknownVariable { name, pos: start });
                }
                Ok(Expr::Variable(name))
            }
            Some(c) => Err(ParseError::Syntax {
                pos: self.pos,
                msg: format!("unexpected character '{}'", c as char),
            }),
            None => Err(ParseError::Syntax {
                pos: self.pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::Syntax { pos: start, msg: "expected integer".into() });
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }
}

impl Expr {
    /// Count of top-level additive terms (useful for grammar sanity checks).
    pub fn num_top_terms(&self) -> usize {
        match self {
            Expr::Add(a, b) | Expr::Sub(a, b) => a.num_top_terms() + b.num_top_terms(),
            _ => 1,
        }
    }

    /// Fold into a bivariate series in `x`, `y`.
    pub fn eval_bi(&self, trunc: usize) -> BiSeries {
        match self {
            Expr::Lit(c) => BiSeries::constant(c.clone(), trunc),
            Expr::Variable(v) => match v.as_str() {
                "x" => BiSeries::var_x(trunc),
                "y" => BiSeries::var_y(trunc),
                other => panic!("variable '{}' is not a series variable here", other),
            },
            Expr::Add(a, b) => a.eval_bi(trunc).add(&b.eval_bi(trunc)),
            Expr::Sub(a, b) => a.eval_bi(trunc).sub(&b.eval_bi(trunc)),
            Expr::Mul(a, b) => a.eval_bi(trunc).mul(&b.eval_bi(trunc)),
            Expr::Pow(a, e) => a.eval_bi(trunc).pow(*e),
            Expr::Neg(a) => a.eval_bi(trunc).neg(),
        }
    }

    /// Fold into a univariate series in the single variable `var`.
    pub fn eval_uni(&self, var: &str, trunc: usize) -> TSeries {
        match self {
            Expr::Lit(c) => TSeries::constant(c.clone(), trunc),
            Expr::Variable(v) => {
                assert_eq!(v, var, "variable '{}' is not '{}'", v, var);
                TSeries::monomial(Rat::from_integer(BigInt::from(1)), 1, trunc)
            }
            Expr::Add(a, b) => a.eval_uni(var, trunc).add(&b.eval_uni(var, trunc)),
            Expr::Sub(a, b) => a.eval_uni(var, trunc).sub(&b.eval_uni(var, trunc)),
            Expr::Mul(a, b) => a.eval_uni(var, trunc).mul(&b.eval_uni(var, trunc)),
            Expr::Pow(a, e) => {
                let base = a.eval_uni(var, trunc);
                let mut acc = TSeries::one(trunc);
                for _ in 0..*e {
                    acc = acc.mul(&base);
                }
                acc
            }
            Expr::Neg(a) => a.eval_uni(var, trunc).neg(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(c) => write!(f, "{}", c),
            Expr::Variable(v) => write!(f, "{}", v),
            Expr::Add(a, b) => write!(f, "{} + {}", a, b),
            Expr::Sub(a, b) => write!(f, "{} - ({})", a, b),
            Expr::Mul(a, b) => write!(f, "({})*({})", a, b),
            Expr::Pow(a, e) => write!(f, "({})^{}", a, e),
            Expr::Neg(a) => write!(f, "-({})", a),
        }
    }
}

/// Convenience: allowed-variable set from names.
pub fn var_set(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat_int;

    #[test]
    fn grammar_cases() {
        let xy = var_set(&["x", "y"]);
        let e = parse_expr("y^3 - x^10 + x^8*y", &xy).unwrap();
        assert_eq!(e.num_top_terms(), 3);

        let t = var_set(&["t"]);
        let e = parse_expr("t^3", &t).unwrap();
        assert!(matches!(e, Expr::Pow(_, 3)));

        assert!(matches!(
            parse_expr("y^-1", &xy),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("z + 1", &xy),
            Err(ParseError::UnknownVariable { .. })
        ));
        assert!(matches!(parse_expr("", &xy), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn rational_literals_and_eval() {
        let t = var_set(&["t"]);
        let e = parse_expr("t^10 - 1/3*t^14", &t).unwrap();
        let s = e.eval_uni("t", 20);
        assert_eq!(s.coeff(10), rat_int(1));
        assert_eq!(s.coeff(14), crate::series::rat(-1, 3));
    }

    #[test]
    fn bivariate_eval() {
        let xy = var_set(&["x", "y"]);
        let e = parse_expr("y^2 - x^3", &xy).unwrap();
        let f = e.eval_bi(10);
        assert_eq!(f.coeff(0, 2), rat_int(1));
        assert_eq!(f.coeff(3, 0), rat_int(-1));
        assert_eq!(f.num_terms(), 2);
    }
}
