//! A small arithmetic expression language for field elements, e.g.
//! `1/2*sqrt(-3) - 1/2`, `zeta12^5 + 2`, `ζ3^2+1`, `x^2+2*x`.

use num::{BigInt, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Sym(String),
    Sqrt(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sqrt,
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().unwrap()));
        } else if c == '√' {
            out.push(Tok::Sqrt);
            i += 1;
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') && chars[i] != '√' {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            if text == "sqrt" {
                out.push(Tok::Sqrt);
            } else {
                out.push(Tok::Ident(text));
            }
        } else if "+-*/^()".contains(c) || c == '−' {
            out.push(Tok::Op(if c == '−' { '-' } else { c }));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
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

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_op('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_op('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Sqrt) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_op('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat_op('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if self.starts_atom() {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_op('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat_op('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat_op('^') {
            let neg = self.eat_op('-');
            let e = match self.peek() {
                Some(Tok::Num(n)) => n.to_i64().ok_or_else(|| Error::Parse("exponent too large".into()))?,
                _ => return Err(Error::Parse("expected integer exponent".into())),
            };
            self.pos += 1;
            return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Sym(s))
            }
            Some(Tok::Sqrt) => {
                self.pos += 1;
                let arg = if self.eat_op('-') { Expr::Neg(Box::new(self.atom()?)) } else { self.atom()? };
                Ok(Expr::Sqrt(Box::new(arg)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat_op(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(e)
}

impl Expr {
    /// Evaluates to a rational number when no symbols occur.
    pub fn as_rational(&self) -> Option<Rational> {
        Some(match self {
            Expr::Num(n) => Rational::from_integer(n.clone()),
            Expr::Sym(_) | Expr::Sqrt(_) => return None,
            Expr::Neg(a) => -a.as_rational()?,
            Expr::Add(a, b) => a.as_rational()? + b.as_rational()?,
            Expr::Sub(a, b) => a.as_rational()? - b.as_rational()?,
            Expr::Mul(a, b) => a.as_rational()? * b.as_rational()?,
            Expr::Div(a, b) => {
                let d = b.as_rational()?;
                if d.is_zero() {
                    return None;
                }
                a.as_rational()? / d
            }
            Expr::Pow(a, e) => {
                let b = a.as_rational()?;
                if *e < 0 && b.is_zero() {
                    return None;
                }
                num::pow::pow(if *e < 0 { b.recip() } else { b }, e.unsigned_abs() as usize)
            }
        })
    }

    pub fn as_integer(&self) -> Option<i64> {
        let q = self.as_rational()?;
        if q.is_integer() {
            q.numer().to_i64()
        } else {
            None
        }
    }

    /// All symbol names and integer square-root arguments occurring in the expression.
    pub fn atoms(&self, syms: &mut Vec<String>, roots: &mut Vec<i64>) {
        match self {
            Expr::Num(_) => {}
            Expr::Sym(s) => syms.push(s.clone()),
            Expr::Sqrt(a) => {
                if let Some(n) = a.as_integer() {
                    roots.push(n);
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.atoms(syms, roots),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.atoms(syms, roots);
                b.atoms(syms, roots);
            }
        }
    }

    /// Evaluates in `f`. `sym` resolves identifiers, `sqrt` resolves square roots of integers.
    pub fn eval<F: Field>(
        &self,
        f: &F,
        sym: &dyn Fn(&str) -> Result<F::Elem>,
        sqrt: &dyn Fn(i64) -> Result<F::Elem>,
    ) -> Result<F::Elem> {
        Ok(match self {
            Expr::Num(n) => f
                .from_rational(&Rational::from_integer(n.clone()))
                .ok_or_else(|| Error::Parse("integer not representable".into()))?,
            Expr::Sym(s) => sym(s)?,
            Expr::Sqrt(a) => {
                let n = a.as_integer().ok_or_else(|| Error::Parse("sqrt needs an integer argument".into()))?;
                sqrt(n)?
            }
            Expr::Neg(a) => f.neg(&a.eval(f, sym, sqrt)?),
            Expr::Add(a, b) => f.add(&a.eval(f, sym, sqrt)?, &b.eval(f, sym, sqrt)?),
            Expr::Sub(a, b) => f.sub(&a.eval(f, sym, sqrt)?, &b.eval(f, sym, sqrt)?),
            Expr::Mul(a, b) => f.mul(&a.eval(f, sym, sqrt)?, &b.eval(f, sym, sqrt)?),
            Expr::Div(a, b) => f
                .div(&a.eval(f, sym, sqrt)?, &b.eval(f, sym, sqrt)?)
                .ok_or_else(|| Error::Parse("division by zero".into()))?,
            Expr::Pow(a, e) => {
                let b = a.eval(f, sym, sqrt)?;
                let b = if *e < 0 { f.inv(&b).ok_or_else(|| Error::Parse("zero to a negative power".into()))? } else { b };
                f.pow(&b, e.unsigned_abs())
            }
        })
    }
}

/// Recognises root-of-unity symbols: `zeta12`, `zeta_12`, `ζ12`, `z12`, `omega`/`ω` (order 3), `i` (order 4).
pub fn root_of_unity_order(sym: &str) -> Option<u64> {
    match sym {
        "omega" | "ω" | "w" => return Some(3),
        "i" | "I" => return Some(4),
        _ => {}
    }
    let rest = sym
        .strip_prefix("zeta")
        .or_else(|| sym.strip_prefix('ζ'))
        .or_else(|| sym.strip_prefix('z'))?;
    let rest = rest.strip_prefix('_').unwrap_or(rest);
    let n: u64 = rest.parse().ok()?;
    (n >= 1).then_some(n)
}
