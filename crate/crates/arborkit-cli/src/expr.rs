//! Recursive-descent parser for rational-function expressions in t.
//!
//! Grammar:
//!   expr   := ["-"] term (("+" | "-") term)*
//!   term   := factor (("*" | "/") factor)*
//!   factor := base ("^" uint)?
//!   base   := uint | "t" | "x" | "(" expr ")"
//! Implicit multiplication is not allowed.

use arborkit::rational::Rational;
use arborkit::RatFunc;
use num_bigint::BigInt;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset of the offending token.
    pub position: usize,
    /// Token classes that would have been accepted at this position.
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at offset {}: found {}, expected one of {}",
            self.position,
            self.found,
            self.expected.join(", ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprError {
    Parse(ParseError),
    /// Division by the zero rational function, with the offset of the "/".
    DivisionByZero { position: usize },
    /// The expression used x where only functions of t are meaningful.
    XNotAllowed { position: usize },
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Parse(e) => write!(f, "{e}"),
            ExprError::DivisionByZero { position } => {
                write!(f, "at offset {position}: division by zero")
            }
            ExprError::XNotAllowed { position } => {
                write!(f, "at offset {position}: variable x is not valid here")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    T,
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(s) => format!("number \"{s}\""),
            Tok::T => "\"t\"".into(),
            Tok::X => "\"x\"".into(),
            Tok::Plus => "\"+\"".into(),
            Tok::Minus => "\"-\"".into(),
            Tok::Star => "\"*\"".into(),
            Tok::Slash => "\"/\"".into(),
            Tok::Caret => "\"^\"".into(),
            Tok::LParen => "\"(\"".into(),
            Tok::RParen => "\")\"".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(s[start..i].to_string())));
            }
            b't' => {
                out.push((i, Tok::T));
                i += 1;
            }
            b'x' => {
                out.push((i, Tok::X));
                i += 1;
            }
            b'+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            b'/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            b'^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            _ => {
                return Err(ParseError {
                    position: i,
                    expected: vec!["number", "t", "x", "operator", "parenthesis"],
                    found: format!("{:?}", &s[i..].chars().next().unwrap()),
                })
            }
        }
    }
    out.push((s.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &(usize, Tok) {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, expected: Vec<&'static str>) -> ExprError {
        let (position, tok) = self.peek();
        ExprError::Parse(ParseError {
            position: *position,
            expected,
            found: tok.describe(),
        })
    }

    fn expr(&mut self) -> Result<RatFunc, ExprError> {
        let mut acc = if matches!(self.peek().1, Tok::Minus) {
            self.bump();
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek().1 {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek().1 {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Tok::Slash => {
                    let (position, _) = self.bump();
                    let rhs = self.factor()?;
                    acc = acc
                        .div(&rhs)
                        .map_err(|_| ExprError::DivisionByZero { position })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc, ExprError> {
        let base = self.base()?;
        if matches!(self.peek().1, Tok::Caret) {
            self.bump();
            match self.bump() {
                (_, Tok::Int(digits)) => {
                    let e: u32 = digits.parse().map_err(|_| ExprError::Parse(ParseError {
                        position: self.toks[self.pos - 1].0,
                        expected: vec!["exponent fitting in 32 bits"],
                        found: format!("number \"{digits}\""),
                    }))?;
                    return Ok(base.pow(e));
                }
                (position, tok) => {
                    return Err(ExprError::Parse(ParseError {
                        position,
                        expected: vec!["unsigned integer exponent"],
                        found: tok.describe(),
                    }))
                }
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RatFunc, ExprError> {
        match self.peek().1.clone() {
            Tok::Int(digits) => {
                self.bump();
                let n: BigInt = digits.parse().expect("lexer produced digits");
                Ok(RatFunc::from_rational(Rational::from_integer(n)))
            }
            Tok::T => {
                self.bump();
                Ok(RatFunc::t())
            }
            Tok::X => {
                let (position, _) = self.bump();
                Err(ExprError::XNotAllowed { position })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if !matches!(self.peek().1, Tok::RParen) {
                    return Err(self.fail(vec!["\")\"", "operator"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.fail(vec!["number", "\"t\"", "\"(\""])),
        }
    }
}

/// Parse an expression into a rational function of t.
pub fn parse_ratfunc(s: &str) -> Result<RatFunc, ExprError> {
    let toks = lex(s).map_err(ExprError::Parse)?;
    let mut p = Parser { toks, pos: 0 };
    let v = p.expr()?;
    if !matches!(p.peek().1, Tok::End) {
        return Err(p.fail(vec!["operator", "end of input"]));
    }
    Ok(v)
}

/// Parse an expression that must be a constant rational number.
pub fn parse_rational(s: &str) -> Result<Rational, ExprError> {
    let v = parse_ratfunc(s)?;
    v.as_constant().ok_or(ExprError::Parse(ParseError {
        position: 0,
        expected: vec!["constant rational expression"],
        found: format!("\"{v}\""),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use arborkit::poly::{Poly, Var};
    use arborkit::rational::rat;

    fn tp(coeffs: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::new(Var::T, coeffs.iter().map(|&c| rat(c)).collect()))
    }

    #[test]
    fn basic_polynomials() {
        assert_eq!(parse_ratfunc("t^2+1").unwrap(), tp(&[1, 0, 1]));
        assert_eq!(parse_ratfunc("t^2 + t"), Ok(tp(&[0, 1, 1])));
        assert_eq!(parse_ratfunc("-t + 1"), Ok(tp(&[1, -1])));
        assert_eq!(parse_ratfunc("2*t - 3"), Ok(tp(&[-3, 2])));
    }

    #[test]
    fn rational_functions() {
        let z = tp(&[1, 1]).div(&tp(&[-1, 1])).unwrap();
        assert_eq!(parse_ratfunc("(t+1)/(t-1)").unwrap(), z);
        assert_eq!(parse_ratfunc("3/4").unwrap(), RatFunc::from_rational(Rational::new(3.into(), 4.into())));
    }

    #[test]
    fn no_implicit_multiplication() {
        assert!(matches!(
            parse_ratfunc("2t"),
            Err(ExprError::Parse(ParseError { position: 1, .. }))
        ));
    }

    #[test]
    fn double_caret_position() {
        match parse_ratfunc("t^^2") {
            Err(ExprError::Parse(e)) => assert_eq!(e.position, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            parse_ratfunc("1/(t-t)"),
            Err(ExprError::DivisionByZero { position: 1 })
        );
    }

    #[test]
    fn x_rejected() {
        assert_eq!(
            parse_ratfunc("x+1"),
            Err(ExprError::XNotAllowed { position: 0 })
        );
    }

    #[test]
    fn display_round_trip() {
        for s in ["t^2+1", "(t+1)/(t-1)", "-3/2*t^3 + t - 5", "(t^2 - 1/4)/(t^3)"] {
            let v = parse_ratfunc(s).unwrap();
            assert_eq!(parse_ratfunc(&v.to_string()).unwrap(), v, "{s}");
        }
    }
}
