//! Element expressions: `T1*T2 + 2*x[1,0]`, `(T0 - 1.5i)^2`, …
//!
//! Grammar, loosest first: `+`/`-` (left associative), `*` (left
//! associative), unary `-`, postfix `^n` with `n` a non-negative integer.
//! Atoms are real or imaginary literals (`2`, `0.5i`, `1e-3`), generators
//! `T0…Tn`, lattice monomials `x[c1,…,cn]` in the lattice basis, and
//! parenthesized expressions. `2+0.5i` is the sum of two literals.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hecke::{BernsteinElement, HeckeAlgebra};
use crate::lattice::Coweight;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Complex64),
    /// `T_i`, `i ∈ 0..=rank`.
    Gen(usize),
    /// `x^λ` in lattice-basis coordinates.
    Mono(Vec<i32>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Complex64),
    Gen(usize),
    X,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn syntax(offset: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { offset, msg: msg.into() }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let ch = b[i];
        let start = i;
        match ch {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((i, Tok::Plus)),
            b'-' => out.push((i, Tok::Minus)),
            b'*' => out.push((i, Tok::Star)),
            b'^' => out.push((i, Tok::Caret)),
            b'(' => out.push((i, Tok::LParen)),
            b')' => out.push((i, Tok::RParen)),
            b'[' => out.push((i, Tok::LBracket)),
            b']' => out.push((i, Tok::RBracket)),
            b',' => out.push((i, Tok::Comma)),
            b'x' => out.push((i, Tok::X)),
            b'T' => {
                i += 1;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                if i == start + 1 {
                    return Err(syntax(start, "expected a generator index after T"));
                }
                let n = src[start + 1..i]
                    .parse()
                    .map_err(|_| syntax(start, "generator index out of range"))?;
                out.push((start, Tok::Gen(n)));
                continue;
            }
            b'0'..=b'9' | b'.' => {
                while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                    i += 1;
                }
                if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                    let mut j = i + 1;
                    if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                        j += 1;
                    }
                    if j < b.len() && b[j].is_ascii_digit() {
                        while j < b.len() && b[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let v: f64 = src[start..i].parse().map_err(|_| syntax(start, "malformed number"))?;
                let z = if i < b.len() && b[i] == b'i' {
                    i += 1;
                    Complex64::new(0.0, v)
                } else {
                    Complex64::new(v, 0.0)
                };
                out.push((start, Tok::Num(z)));
                continue;
            }
            _ => {
                let c = src[i..].chars().next().expect("in bounds");
                return Err(syntax(i, format!("unexpected character {c:?}")));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    rank: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<usize> {
        match self.toks.get(self.pos) {
            Some((o, t)) if *t == want => {
                self.pos += 1;
                Ok(*o)
            }
            _ => Err(syntax(self.offset(), format!("expected {what}"))),
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.offset();
            match self.toks.get(self.pos) {
                Some((_, Tok::Num(z))) if z.im == 0.0 && z.re >= 0.0 && z.re.fract() == 0.0 && z.re <= u32::MAX as f64 => {
                    let n = z.re as u32;
                    self.pos += 1;
                    base = Expr::Pow(Box::new(base), n);
                }
                _ => return Err(syntax(at, "expected a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn int(&mut self) -> Result<i32> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.offset();
        match self.toks.get(self.pos) {
            Some((_, Tok::Num(z))) if z.im == 0.0 && z.re.fract() == 0.0 && z.re.abs() <= i32::MAX as f64 => {
                self.pos += 1;
                Ok(if neg { -(z.re as i32) } else { z.re as i32 })
            }
            _ => Err(syntax(at, "expected an integer coordinate")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return Err(syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(z) => Ok(Expr::Num(z)),
            Tok::Gen(i) => {
                if i > self.rank {
                    return Err(Error::UnknownGenerator { offset: at, name: format!("T{i}") });
                }
                Ok(Expr::Gen(i))
            }
            Tok::X => {
                self.expect(Tok::LBracket, "'[' after x")?;
                let mut coords = vec![self.int()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    coords.push(self.int()?);
                }
                self.expect(Tok::RBracket, "']'")?;
                if coords.len() != self.rank {
                    return Err(Error::BadExponentVector { offset: at, expected: self.rank, got: coords.len() });
                }
                Ok(Expr::Mono(coords))
            }
            Tok::LParen => {
                let e = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => Err(syntax(at, "expected a literal, generator, monomial or '('")),
        }
    }
}

/// Parses `src` for an algebra of the given rank.
pub fn parse_element(src: &str, rank: usize) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len(), rank };
    let e = p.sum()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

impl Expr {
    /// The element in the Bernstein basis.
    pub fn eval(&self, alg: &HeckeAlgebra) -> BernsteinElement {
        match self {
            Expr::Num(z) => BernsteinElement::scalar(*z),
            Expr::Gen(i) => alg.bern_generator(*i),
            Expr::Mono(v) => {
                let mut e = [0; 2];
                e[..v.len()].copy_from_slice(v);
                BernsteinElement::x(Coweight(e))
            }
            Expr::Add(a, b) => a.eval(alg).add(&b.eval(alg)),
            Expr::Sub(a, b) => a.eval(alg).sub(&b.eval(alg)),
            Expr::Mul(a, b) => alg.bernstein_mult(&a.eval(alg), &b.eval(alg)),
            Expr::Neg(a) => a.eval(alg).scale(Complex64::new(-1.0, 0.0)),
            Expr::Pow(a, n) => {
                let base = a.eval(alg);
                let mut out = BernsteinElement::one();
                for _ in 0..*n {
                    out = alg.bernstein_mult(&out, &base);
                }
                out
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(z) if z.re != 0.0 && z.im != 0.0 => 1,
            Expr::Num(z) if z.re < 0.0 || z.im < 0.0 || z.re.is_sign_negative() => 3,
            _ => 5,
        }
    }
}

fn fmt_real(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    write!(f, "{v}")
}

fn fmt_child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.prec() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(z) => {
                if z.im == 0.0 {
                    fmt_real(f, z.re)
                } else if z.re == 0.0 {
                    fmt_real(f, z.im)?;
                    write!(f, "i")
                } else {
                    fmt_real(f, z.re)?;
                    write!(f, "{}", if z.im < 0.0 { "-" } else { "+" })?;
                    fmt_real(f, z.im.abs())?;
                    write!(f, "i")
                }
            }
            Expr::Gen(i) => write!(f, "T{i}"),
            Expr::Mono(v) => {
                let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                write!(f, "x[{}]", parts.join(","))
            }
            Expr::Add(a, b) => {
                fmt_child(f, a, 1)?;
                write!(f, " + ")?;
                fmt_child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                fmt_child(f, a, 1)?;
                write!(f, " - ")?;
                fmt_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                fmt_child(f, a, 2)?;
                write!(f, "*")?;
                fmt_child(f, b, 3)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                fmt_child(f, a, 3)
            }
            Expr::Pow(a, n) => {
                fmt_child(f, a, 5)?;
                write!(f, "^{n}")
            }
        }
    }
}
