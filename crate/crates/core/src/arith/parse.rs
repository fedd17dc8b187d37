//! Text syntax for polynomials: integer or `a/b` coefficients, `^` powers,
//! optional `*`, parentheses, and ASCII identifiers declared by the caller.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ArithError, Poly, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// A ring the parser can evaluate expressions into.
pub trait ParseTarget: Sized {
    fn from_rational(c: Rational) -> Self;
    fn add(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Self;
    fn neg(self) -> Self;

    fn pow(self, e: u32) -> Self
    where
        Self: Clone,
    {
        let mut acc = Self::from_rational(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self.clone());
        }
        acc
    }
}

impl Expr {
    pub fn eval_with<T, F>(&self, var: &F) -> Result<T, ArithError>
    where
        T: ParseTarget + Clone,
        F: Fn(&str) -> Option<T>,
    {
        Ok(match self {
            Expr::Num(c) => T::from_rational(c.clone()),
            Expr::Var(v) => var(v).ok_or_else(|| ArithError::Parse {
                message: format!("unknown variable `{v}`"),
            })?,
            Expr::Neg(e) => e.eval_with(var)?.neg(),
            Expr::Add(a, b) => a.eval_with(var)?.add(b.eval_with(var)?),
            Expr::Sub(a, b) => a.eval_with(var)?.add(b.eval_with(var)?.neg()),
            Expr::Mul(a, b) => a.eval_with(var)?.mul(b.eval_with(var)?),
            Expr::Pow(a, e) => a.eval_with(var)?.pow(*e),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ArithError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Tok::Int(digits.parse().expect("digits")));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(ArithError::Parse {
                    message: format!("unexpected character `{other}` in `{s}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T, ArithError> {
        Err(ArithError::Parse {
            message: format!("{msg} at token {}", self.pos),
        })
    }

    fn expr(&mut self) -> Result<Expr, ArithError> {
        let mut lhs = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Expr::Neg(Box::new(self.term()?))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ArithError> {
        let mut lhs = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            let inv = Rational::new(BigInt::one(), d);
                            lhs = Expr::Mul(Box::new(lhs), Box::new(Expr::Num(inv)));
                        }
                        Some(Tok::Int(_)) => return self.err("division by zero"),
                        _ => return self.err("only integer denominators are allowed"),
                    }
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ArithError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Int(e)) => {
                    let e: u32 = e.try_into().map_err(|_| ArithError::Parse {
                        message: "exponent too large".into(),
                    })?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ArithError> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Expr::Num(Rational::from_integer(n))),
            Some(Tok::Ident(v)) => Ok(Expr::Var(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => self.err("expected `)`"),
                }
            }
            _ => self.err("expected a number, variable or `(`"),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, ArithError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(ArithError::Parse {
            message: "empty expression".into(),
        });
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[derive(Clone)]
struct PolyTarget(Poly);

impl Poly {
    pub fn parse(s: &str, vars: &[String]) -> Result<Poly, ArithError> {
        let n = vars.len();
        let expr = parse_expr(s)?;
        // Constants carry an arity placeholder that is fixed up on combination.
        let lookup = |name: &str| {
            vars.iter()
                .position(|v| v == name)
                .map(|i| PolyTarget(Poly::var(n, i)))
        };
        let PolyTarget(raw) = expr.eval_with(&lookup)?;
        Ok(raw.resize(n).expect("constants only"))
    }
}

impl ParseTarget for PolyTarget {
    fn from_rational(c: Rational) -> Self {
        PolyTarget(Poly::constant(0, c))
    }
    fn add(self, rhs: Self) -> Self {
        let (a, b) = unify(self.0, rhs.0);
        PolyTarget(&a + &b)
    }
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = unify(self.0, rhs.0);
        PolyTarget(&a * &b)
    }
    fn neg(self) -> Self {
        PolyTarget(-&self.0)
    }
}

fn unify(a: Poly, b: Poly) -> (Poly, Poly) {
    let n = a.nvars().max(b.nvars());
    (a.resize(n).expect("pad"), b.resize(n).expect("pad"))
}
