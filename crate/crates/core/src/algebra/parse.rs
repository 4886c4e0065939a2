//! A small expression parser shared by the text forms of [`IndexPoly`] and
//! of Weyl-algebra operators.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr  := ('+'|'-')? term (('+'|'-') term)*
//! term  := unary (('*'|'/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? digits)?
//! atom  := digits | ident | '(' expr ')'
//! ```

use num_bigint::BigInt;
use thiserror::Error;

use super::{IndexPoly, Rational, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at offset {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token {0:?}")]
    UnexpectedToken(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(text.parse().expect("digits")));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Token::Op(ch));
            i += 1;
        } else if ch == '−' {
            out.push(Token::Op('-'));
            i += 1;
        } else {
            return Err(ParseError::UnexpectedChar { ch, pos: i });
        }
    }
    Ok(out)
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let exp = match self.next() {
            Some(Token::Num(n)) => {
                i64::try_from(n).map_err(|_| ParseError::Invalid("exponent too large".into()))?
            }
            Some(other) => return Err(ParseError::UnexpectedToken(format!("{other:?}"))),
            None => return Err(ParseError::UnexpectedEnd),
        };
        Ok(Expr::Pow(Box::new(base), if negative { -exp } else { exp }))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.next() {
            Some(Token::Num(n)) => Ok(Expr::Num(
                Rational::from_bigints(n, BigInt::from(1)).expect("nonzero"),
            )),
            Some(Token::Ident(s)) => Ok(Expr::Ident(s)),
            Some(Token::Op('(')) => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(match self.peek() {
                        Some(t) => ParseError::UnexpectedToken(format!("{t:?}")),
                        None => ParseError::UnexpectedEnd,
                    });
                }
                Ok(e)
            }
            Some(t) => Err(ParseError::UnexpectedToken(format!("{t:?}"))),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        tokens: tokenize(s)?,
        pos: 0,
    };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(t) => Err(ParseError::UnexpectedToken(format!("{t:?}"))),
    }
}

/// The target of expression evaluation.
pub trait ExprAlgebra {
    type Value;
    fn number(&self, r: Rational) -> Result<Self::Value, ParseError>;
    fn ident(&self, name: &str) -> Result<Self::Value, ParseError>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ParseError>;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ParseError>;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ParseError>;
    fn neg(&self, a: Self::Value) -> Result<Self::Value, ParseError>;
    /// Division is only by constants.
    fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ParseError>;
    fn pow(&self, a: Self::Value, exp: i64) -> Result<Self::Value, ParseError>;
}

pub fn evaluate<A: ExprAlgebra>(alg: &A, e: &Expr) -> Result<A::Value, ParseError> {
    match e {
        Expr::Num(r) => alg.number(r.clone()),
        Expr::Ident(s) => alg.ident(s),
        Expr::Neg(a) => alg.neg(evaluate(alg, a)?),
        Expr::Add(a, b) => alg.add(evaluate(alg, a)?, evaluate(alg, b)?),
        Expr::Sub(a, b) => alg.sub(evaluate(alg, a)?, evaluate(alg, b)?),
        Expr::Mul(a, b) => alg.mul(evaluate(alg, a)?, evaluate(alg, b)?),
        Expr::Div(a, b) => alg.div(evaluate(alg, a)?, evaluate(alg, b)?),
        Expr::Pow(a, n) => alg.pow(evaluate(alg, a)?, *n),
    }
}

struct IndexPolyAlgebra;

impl ExprAlgebra for IndexPolyAlgebra {
    type Value = IndexPoly;

    fn number(&self, r: Rational) -> Result<IndexPoly, ParseError> {
        Ok(IndexPoly::constant(r))
    }

    fn ident(&self, name: &str) -> Result<IndexPoly, ParseError> {
        index_symbol(name)
            .map(IndexPoly::var)
            .ok_or_else(|| ParseError::UnknownSymbol(name.into()))
    }

    fn add(&self, a: IndexPoly, b: IndexPoly) -> Result<IndexPoly, ParseError> {
        Ok(a + b)
    }

    fn sub(&self, a: IndexPoly, b: IndexPoly) -> Result<IndexPoly, ParseError> {
        Ok(a - b)
    }

    fn mul(&self, a: IndexPoly, b: IndexPoly) -> Result<IndexPoly, ParseError> {
        Ok(a * b)
    }

    fn neg(&self, a: IndexPoly) -> Result<IndexPoly, ParseError> {
        Ok(-a)
    }

    fn div(&self, a: IndexPoly, b: IndexPoly) -> Result<IndexPoly, ParseError> {
        let d = b
            .as_constant()
            .ok_or_else(|| ParseError::Invalid("division by a non-constant".into()))?;
        let inv = d.recip().map_err(|e| ParseError::Invalid(e.to_string()))?;
        Ok(a.scale(&inv))
    }

    fn pow(&self, a: IndexPoly, exp: i64) -> Result<IndexPoly, ParseError> {
        if exp < 0 {
            let c = a
                .as_constant()
                .ok_or_else(|| ParseError::Invalid("negative power of a symbol".into()))?;
            let r = c
                .pow(exp as i32)
                .map_err(|e| ParseError::Invalid(e.to_string()))?;
            return Ok(IndexPoly::constant(r));
        }
        let mut acc = IndexPoly::from(1);
        for _ in 0..exp {
            acc = &acc * &a;
        }
        Ok(acc)
    }
}

/// Maps a textual symbol to an index variable.
pub fn index_symbol(name: &str) -> Option<Var> {
    match name {
        "k" => Some(Var::K),
        "t" => Some(Var::T),
        "eta" | "η" => Some(Var::Eta),
        _ => None,
    }
}

pub fn parse_index_poly(s: &str) -> Result<IndexPoly, ParseError> {
    evaluate(&IndexPolyAlgebra, &parse_expr(s)?)
}
