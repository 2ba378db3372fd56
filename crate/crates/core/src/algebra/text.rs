//! Canonical text forms for polynomials, rational functions and skew
//! polynomials, and a small parser for them.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | "T" | "a" | "t" | "(" expr ")"
//! ```
//!
//! `a` is the generator of F_q over F_p and `t` is the Frobenius variable.
//! Products are evaluated in the skew ring, so `t*T` means `T^q*t`.

use super::fq::{Fq, FqCtx};
use super::poly::Poly;
use super::rational::{RationalFunction, RationalFunctionField};
use super::ring::{Field, FrobeniusRing};
use crate::error::{Error, Result};
use crate::skew::{SkewPoly, SkewRing};

const MAX_EXPONENT: u64 = 100_000;

fn wrap_if(s: String, chars: &[char]) -> String {
    if s.contains(chars) {
        format!("({s})")
    } else {
        s
    }
}

/// Renders a polynomial in T with terms in descending degree, e.g.
/// `2*T^2+T+1`.
pub fn render_poly(fq: &FqCtx, p: &[Fq]) -> String {
    let mut terms = Vec::new();
    for (k, &c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mon = match k {
            0 => String::new(),
            1 => "T".to_string(),
            _ => format!("T^{k}"),
        };
        terms.push(match (k, c == Fq::ONE) {
            (0, _) => fq.render(c),
            (_, true) => mon,
            _ => format!("{}*{mon}", wrap_if(fq.render(c), &['+', '*'])),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

pub fn render_rational(fq: &FqCtx, r: &RationalFunction) -> String {
    let num = render_poly(fq, r.num());
    if r.is_polynomial() {
        return num;
    }
    let den = render_poly(fq, r.den());
    format!("{}/{}", wrap_if(num, &['+']), wrap_if(den, &['+', '*']))
}

/// Renders a skew polynomial as `c0 + c1*t + c2*t^2`, ascending in `t`.
pub fn render_skew<E, F>(f: &[E], is_zero: impl Fn(&E) -> bool, is_one: impl Fn(&E) -> bool, render: F) -> String
where
    F: Fn(&E) -> String,
{
    let mut terms = Vec::new();
    for (k, c) in f.iter().enumerate() {
        if is_zero(c) {
            continue;
        }
        let mon = match k {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{k}"),
        };
        terms.push(match (k, is_one(c)) {
            (0, _) => render(c),
            (_, true) => mon,
            _ => format!("{}*{mon}", wrap_if(render(c), &['+', '/'])),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Renders a skew polynomial over F_q(T).
pub fn render_skew_rational(fq: &FqCtx, f: &[RationalFunction]) -> String {
    render_skew(f, |c| c.num().is_empty(), |c| c.num() == [Fq::ONE] && c.is_polynomial(), |c| {
        render_rational(fq, c)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Num(u64),
    VarT,
    VarA,
    Tau,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let mut v: u64 = 0;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(chars[i] as u64 - '0' as u64))
                        .ok_or(Error::Parse { column: col, message: "integer too large".into() })?;
                    i += 1;
                }
                out.push((Tok::Num(v), col));
                continue;
            }
            'T' => Tok::VarT,
            'a' => Tok::VarA,
            't' => Tok::Tau,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::Open,
            ')' => Tok::Close,
            other => {
                return Err(Error::Parse {
                    column: col,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    fq: &'a FqCtx,
    f: RationalFunctionField,
    s: SkewRing<RationalFunctionField>,
}

type Value = SkewPoly<RationalFunction>;

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { column: self.col(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        while let Some(op @ (Tok::Plus | Tok::Minus)) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == Tok::Plus { self.s.add(&acc, &rhs) } else { self.s.sub(&acc, &rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        while let Some(op @ (Tok::Star | Tok::Slash)) = self.peek() {
            self.pos += 1;
            let col = self.col();
            let rhs = self.unary()?;
            acc = if op == Tok::Star {
                self.s.mul(&acc, &rhs)
            } else {
                if acc.len() > 1 || rhs.len() > 1 {
                    return Err(Error::Parse {
                        column: col,
                        message: "division is only defined for t-free operands".into(),
                    });
                }
                let Some(den) = rhs.first() else {
                    return Err(Error::Parse { column: col, message: "division by zero".into() });
                };
                let num = acc.first().cloned().unwrap_or_else(|| self.f.zero());
                self.s.constant(self.f.div(&num, den).unwrap())
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value> {
        if self.peek() == Some(Tok::Minus) {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(self.s.neg(&v));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if self.peek() != Some(Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek() {
            Some(Tok::Num(e)) if e <= MAX_EXPONENT => {
                self.pos += 1;
                Ok(self.s.pow(&base, e))
            }
            Some(Tok::Num(_)) => self.err("exponent too large"),
            _ => self.err("expected an integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Value> {
        let Some(tok) = self.peek() else {
            return self.err("unexpected end of input");
        };
        let v = match tok {
            Tok::Num(n) => self.s.constant(self.f.from_fq(self.fq.from_int((n % self.fq.p()) as i64))),
            Tok::VarT => self.s.constant(self.f.t()),
            Tok::VarA => {
                if self.fq.e() == 1 {
                    return self.err("`a` is only available when e > 1");
                }
                self.s.constant(self.f.from_fq(self.fq.generator()))
            }
            Tok::Tau => self.s.tau_power(1),
            Tok::Open => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(Tok::Close) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                return Ok(v);
            }
            _ => return self.err("expected a term"),
        };
        self.pos += 1;
        Ok(v)
    }
}

/// Parses a skew polynomial over F_q(T).
pub fn parse_skew(fq: &FqCtx, s: &str) -> Result<SkewPoly<RationalFunction>> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse { column: 1, message: "empty input".into() });
    }
    let f = RationalFunctionField::new(fq.clone());
    let mut p = Parser {
        toks,
        pos: 0,
        end: s.chars().count() + 1,
        fq,
        s: SkewRing::new(f.clone()),
        f,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Parses an element of F_q(T).
pub fn parse_rational(fq: &FqCtx, s: &str) -> Result<RationalFunction> {
    let v = parse_skew(fq, s)?;
    if v.len() > 1 {
        return Err(Error::Parse { column: 1, message: "unexpected `t`".into() });
    }
    Ok(v.into_iter().next().unwrap_or_else(|| RationalFunctionField::new(fq.clone()).zero()))
}

/// Parses an element of F_q[T].
pub fn parse_poly(fq: &FqCtx, s: &str) -> Result<Poly<Fq>> {
    let r = parse_rational(fq, s)?;
    if !r.is_polynomial() {
        return Err(Error::Parse { column: 1, message: "expected a polynomial".into() });
    }
    Ok(r.num().to_vec())
}
