//! Expression syntax for elements of `O_q(GL_N)`.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := '-' factor | power
//! power    := atom ('^' exponent)?
//! exponent := ['-'] INT | '(' ['-'] INT ['/' INT] ')'
//! atom     := INT ['/' INT] | 'x' '[' INT ',' INT ']' | 'detq' | 'q' | 's' | '(' expr ')'
//! ```
//!
//! `s` is the `N`-th root of `q`; `q^(a/b)` is accepted when `b` divides `N`.
//! Negative powers are allowed on invertible values only (scalar units
//! times powers of `detq`). Whitespace is ignored.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hopf::{self, GLElem};
use crate::qmatrix::{AlgElem, MAX_N};
use crate::scalar::{Coeff, QScalar};

// keeps accidental huge powers from running away
const MAX_EXPONENT: i64 = 4096;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Int(i64),
    Frac(i64, i64),
}

/// Parsed expression; `pos` fields are byte offsets into the source.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Gen { i: usize, j: usize },
    Detq,
    Q,
    S,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow { base: Box<Expr>, exp: Exponent, pos: usize },
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
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
            out.push((start, Tok::Int(text[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()[],".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            // report the character, not a byte, for multibyte input
            let ch = text[i..].chars().next().unwrap();
            return Err(syntax(i, format!("unexpected character {:?}", ch)));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected '{}'", c)))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.clone();
                self.at += 1;
                Ok(v)
            }
            _ => Err(syntax(self.pos(), "expected an integer")),
        }
    }

    fn small_int(&mut self) -> Result<i64> {
        let pos = self.pos();
        self.int()?.to_i64().filter(|v| *v <= MAX_EXPONENT).ok_or_else(|| syntax(pos, "integer too large"))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let exp = if self.eat('(') {
            let neg = self.eat('-');
            let a = self.small_int()?;
            let a = if neg { -a } else { a };
            let e = if self.eat('/') {
                let b = self.small_int()?;
                if b == 0 {
                    return Err(Error::DivisionByZero);
                }
                Exponent::Frac(a, b)
            } else {
                Exponent::Int(a)
            };
            self.expect(')')?;
            e
        } else {
            let neg = self.eat('-');
            let a = self.small_int()?;
            Exponent::Int(if neg { -a } else { a })
        };
        Ok(Expr::Pow { base: Box::new(base), exp, pos })
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.at += 1;
                if self.eat('/') {
                    let d = self.int()?;
                    if d.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    Ok(Expr::Num(BigRational::new(v, d)))
                } else {
                    Ok(Expr::Num(BigRational::from_integer(v)))
                }
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "detq" => Ok(Expr::Detq),
                    "q" => Ok(Expr::Q),
                    "s" => Ok(Expr::S),
                    "x" => {
                        self.expect('[')?;
                        let i = self.index()?;
                        self.expect(',')?;
                        let j = self.index()?;
                        self.expect(']')?;
                        Ok(Expr::Gen { i, j })
                    }
                    _ => Err(syntax(pos, format!("unknown identifier {:?}", name))),
                }
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(_) => Err(syntax(pos, "expected a value")),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }

    fn index(&mut self) -> Result<usize> {
        let pos = self.pos();
        self.int()?.to_usize().ok_or_else(|| syntax(pos, "index too large"))
    }
}

/// Parses without evaluating.
pub fn parse_ast(text: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(text)?, at: 0, end: text.len() };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Inverse of `c det_q^a det_q^{-k}`, the only invertible values.
fn invert(x: &GLElem, pos: usize) -> Result<GLElem> {
    let n = x.n();
    let mut num = x.num().clone();
    let mut a = 0;
    while num.homogeneous_degree().is_some_and(|d| d > 0) {
        match hopf::divide_by_det(&num) {
            Some(q) => {
                num = q;
                a += 1;
            }
            None => break,
        }
    }
    let c = num.coeff(&crate::qmatrix::Monomial::one());
    if num.len() != 1 || !c.is_unit() {
        return Err(Error::NegativePowerOfGenerator(pos));
    }
    let inv = c.unit_inverse().unwrap();
    Ok(GLElem::new(AlgElem::scalar(n, inv).mul(&hopf::det_pow(n, x.det_power())), a))
}

pub fn eval(e: &Expr, n: usize) -> Result<GLElem> {
    Ok(match e {
        Expr::Num(r) => GLElem::scalar(n, QScalar::from_rational(r.clone())),
        Expr::Gen { i, j } => GLElem::generator(n, *i, *j)?,
        Expr::Detq => GLElem::det(n),
        Expr::Q => GLElem::scalar(n, QScalar::q_pow(n, 1)),
        Expr::S => GLElem::scalar(n, QScalar::s_pow(1)),
        Expr::Neg(a) => eval(a, n)?.neg(),
        Expr::Add(a, b) => eval(a, n)?.add(&eval(b, n)?),
        Expr::Sub(a, b) => eval(a, n)?.sub(&eval(b, n)?),
        Expr::Mul(a, b) => eval(a, n)?.mul(&eval(b, n)?),
        Expr::Pow { base, exp, pos } => match exp {
            Exponent::Frac(a, b) => {
                if **base != Expr::Q {
                    return Err(syntax(*pos, "fractional powers are only defined for q"));
                }
                let top = a * n as i64;
                if top % b != 0 {
                    return Err(syntax(*pos, format!("q^({}/{}) is not a power of the root s for N = {}", a, b, n)));
                }
                GLElem::scalar(n, QScalar::s_pow((top / b) as i32))
            }
            Exponent::Int(k) => {
                let x = eval(base, n)?;
                if *k >= 0 {
                    x.pow(*k as u32)
                } else {
                    invert(&x, *pos)?.pow(k.unsigned_abs() as u32)
                }
            }
        },
    })
}

/// Parses and evaluates to a canonical element.
pub fn parse_expr(text: &str, n: usize) -> Result<GLElem> {
    if n == 0 || n > MAX_N {
        return Err(Error::Invalid(format!("matrix size {} outside 1..={}", n, MAX_N)));
    }
    eval(&parse_ast(text)?, n)
}

/// Parses a single rational coefficient written `a` or `a/b`.
pub fn parse_coeff(text: &str) -> Result<Coeff> {
    crate::scalar::parse_rational(text).map(Coeff::from)
}
