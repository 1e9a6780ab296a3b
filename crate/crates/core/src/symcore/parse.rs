//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' int)?
//! base   := number | ident | '(' expr ')' | '-' base
//! ```
//!
//! Exponents are integer literals and may be negative. A rational literal
//! `p/q` is just integer division under this grammar.

use num_bigint::BigInt;

use super::field::Field;
use super::ratfunc::RatFunc;
use super::ring::Ring;
use super::SymError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprAst {
    Const(BigInt),
    Symbol(String),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Neg(Box<ExprAst>),
    Pow(Box<ExprAst>, i64),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SymError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(SymError::Syntax { pos: i, msg: format!("unexpected character `{}`", c) });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T, SymError> {
        Err(SymError::Syntax { pos: self.offset(), msg: msg.to_string() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ExprAst, SymError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = ExprAst::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, SymError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = ExprAst::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<ExprAst, SymError> {
        let base = self.base()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: i64 = match i64::try_from(&n) {
                        Ok(e) if e <= u32::MAX as i64 => e,
                        _ => return self.err("exponent too large"),
                    };
                    Ok(ExprAst::Pow(Box::new(base), if neg { -e } else { e }))
                }
                _ => self.err("expected integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<ExprAst, SymError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(ExprAst::Const(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(ExprAst::Symbol(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(ExprAst::Neg(Box::new(self.base()?)))
            }
            Some(_) => self.err("expected number, identifier, `(` or `-`"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_ast(text: &str) -> Result<ExprAst, SymError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl ExprAst {
    /// Evaluate to a canonical rational function; every identifier must be
    /// a symbol of `ring`.
    pub fn evaluate<F: Field + From<BigInt>>(&self, ring: &Ring) -> Result<RatFunc<F>, SymError> {
        Ok(match self {
            ExprAst::Const(n) => RatFunc::constant(ring, F::from(n.clone())),
            ExprAst::Symbol(s) => RatFunc::var(ring, ring.require(s)?),
            ExprAst::Add(a, b) => &a.evaluate(ring)? + &b.evaluate(ring)?,
            ExprAst::Sub(a, b) => &a.evaluate(ring)? - &b.evaluate(ring)?,
            ExprAst::Mul(a, b) => &a.evaluate(ring)? * &b.evaluate(ring)?,
            ExprAst::Div(a, b) => a.evaluate(ring)?.try_div(&b.evaluate(ring)?)?,
            ExprAst::Neg(a) => -a.evaluate(ring)?,
            ExprAst::Pow(a, e) => a.evaluate(ring)?.pow(*e)?,
        })
    }
}

pub fn parse_expression<F: Field + From<BigInt>>(text: &str, ring: &Ring) -> Result<RatFunc<F>, SymError> {
    parse_ast(text)?.evaluate(ring)
}
