//! The constant field F_q, q = p^e.
//!
//! Elements are encoded as integers `0..q`: the element with coordinates
//! `(c_0, ..., c_{e-1})` in the polynomial basis `1, a, ..., a^{e-1}` is
//! stored as `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. Comparing encodings is
//! therefore lexicographic with the constant coordinate last, which is the
//! order used by every enumeration in the crate.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::poly::PolyRing;
use super::ring::{Field, FiniteField, FrobeniusRing};
use crate::error::{Error, Result};

/// Largest supported field order; keeps the log/exp tables small.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// An element of F_q, meaningful only relative to its [`FqCtx`].
#[derive(
    Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct Fq(pub(crate) u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    /// Integer encoding of the element.
    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct FqInner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus over F_p (ascending coefficients), empty when e = 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

/// Context for F_q: characteristic, degree, modulus, and arithmetic tables.
#[derive(Clone)]
pub struct FqCtx(Arc<FqInner>);

impl fmt::Debug for FqCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)?;
        if self.0.e > 1 {
            write!(f, " (mod {:?})", self.0.modulus)?;
        }
        Ok(())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds the context for F_q with q = p^e.
///
/// With no modulus, the lexicographically least monic irreducible of degree
/// `e` over F_p is used. A given modulus is listed by ascending coefficients
/// over F_p and may be non-monic.
pub fn make_field_context(p: u64, e: u32, modulus: Option<&[u64]>) -> Result<FqCtx> {
    FqCtx::new(p, e, modulus)
}

impl FqCtx {
    pub fn new(p: u64, e: u32, modulus: Option<&[u64]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let q = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64));
        }
        let prime = Self::build(p as u32, 1, Vec::new());
        match (e, modulus) {
            (1, None) => Ok(prime),
            (1, Some(m)) => {
                // A degree-1 modulus carries no information beyond validity.
                let m = reduce_mod_p(m, p);
                let ring = PolyRing::new(prime.clone());
                let deg = ring.degree(&m).ok_or(Error::ZeroPolynomial)?;
                if deg != 1 {
                    return Err(Error::DegreeMismatch { expected: 1, found: deg });
                }
                Ok(prime)
            }
            (_, Some(m)) => {
                let m = reduce_mod_p(m, p);
                let ring = PolyRing::new(prime.clone());
                let deg = ring.degree(&m).ok_or(Error::ZeroPolynomial)?;
                if deg != e as usize {
                    return Err(Error::DegreeMismatch { expected: e as usize, found: deg });
                }
                let m = ring.monic(&m);
                if !ring.is_irreducible(&m) {
                    return Err(Error::ReducibleModulus);
                }
                Ok(Self::build(p as u32, e, m.iter().map(|c| c.0).collect()))
            }
            (_, None) => {
                let ring = PolyRing::new(prime.clone());
                let m = ring.least_monic_irreducible(e as usize);
                Ok(Self::build(p as u32, e, m.iter().map(|c| c.0).collect()))
            }
        }
    }

    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    fn build(p: u32, e: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(e);
        let mut inner = FqInner {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add_table: None,
        };
        if e > 1 {
            inner.neg = (0..q).map(|a| digit_neg(&inner, a)).collect();
            if q <= 256 {
                let mut t = vec![0; (q * q) as usize];
                for a in 0..q {
                    for b in 0..q {
                        t[(a * q + b) as usize] = digit_add(&inner, a, b);
                    }
                }
                inner.add_table = Some(t);
            }
        }
        // Log/exp tables from a primitive element.
        if q > 2 {
            let n = q - 1;
            let mut g = 2.min(q - 1);
            loop {
                let mut exp = Vec::with_capacity(2 * n as usize);
                let mut x = 1u32;
                let mut seen = vec![false; q as usize];
                let mut ok = true;
                for _ in 0..n {
                    if seen[x as usize] {
                        ok = false;
                        break;
                    }
                    seen[x as usize] = true;
                    exp.push(x);
                    x = slow_mul(&inner, x, g);
                }
                if ok {
                    let mut log = vec![0u32; q as usize];
                    for (i, &v) in exp.iter().enumerate() {
                        log[v as usize] = i as u32;
                    }
                    let doubled: Vec<u32> = exp.iter().chain(exp.iter()).copied().collect();
                    inner.exp = doubled;
                    inner.log = log;
                    break;
                }
                g += 1;
            }
        } else {
            inner.exp = vec![1, 1];
            inner.log = vec![0, 0];
        }
        FqCtx(Arc::new(inner))
    }

    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u64 {
        self.0.q as u64
    }

    /// Modulus of F_q over F_p, ascending and monic; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Element with integer encoding `v mod q`.
    pub fn elem(&self, v: u64) -> Fq {
        Fq((v % self.0.q as u64) as u32)
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, v: i64) -> Fq {
        Fq(v.rem_euclid(self.0.p as i64) as u32)
    }

    /// Coordinates over F_p in the basis `1, a, ..., a^{e-1}`.
    pub fn coordinates(&self, a: Fq) -> Vec<u32> {
        let p = self.0.p;
        let mut v = a.0;
        (0..self.0.e)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_coordinates(&self, coords: &[u32]) -> Fq {
        let p = self.0.p;
        let mut v = 0u32;
        for &c in coords.iter().take(self.0.e as usize).rev() {
            v = v * p + c % p;
        }
        Fq(v)
    }

    /// The class of the modulus variable `a` (only meaningful when e > 1).
    pub fn generator(&self) -> Fq {
        if self.0.e > 1 {
            Fq(self.0.p)
        } else {
            Fq(0)
        }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(Fq)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fq> {
        (1..self.0.q).map(Fq)
    }

    /// A generator of the multiplicative group F_q^*.
    pub fn primitive_element(&self) -> Fq {
        Fq(self.0.exp[1.min(self.0.exp.len() - 1)])
    }

    #[inline]
    pub fn add_fq(&self, a: Fq, b: Fq) -> Fq {
        let i = &*self.0;
        if i.e == 1 {
            let s = a.0 + b.0;
            Fq(if s >= i.p { s - i.p } else { s })
        } else if let Some(t) = &i.add_table {
            Fq(t[(a.0 * i.q + b.0) as usize])
        } else {
            Fq(digit_add(i, a.0, b.0))
        }
    }

    #[inline]
    pub fn neg_fq(&self, a: Fq) -> Fq {
        let i = &*self.0;
        if i.e == 1 {
            Fq(if a.0 == 0 { 0 } else { i.p - a.0 })
        } else {
            Fq(i.neg[a.0 as usize])
        }
    }

    #[inline]
    pub fn sub_fq(&self, a: Fq, b: Fq) -> Fq {
        self.add_fq(a, self.neg_fq(b))
    }

    #[inline]
    pub fn mul_fq(&self, a: Fq, b: Fq) -> Fq {
        let i = &*self.0;
        if i.e == 1 {
            Fq(((a.0 as u64 * b.0 as u64) % i.p as u64) as u32)
        } else if a.0 == 0 || b.0 == 0 {
            Fq(0)
        } else {
            Fq(i.exp[(i.log[a.0 as usize] + i.log[b.0 as usize]) as usize])
        }
    }

    #[inline]
    pub fn inv_fq(&self, a: Fq) -> Option<Fq> {
        if a.0 == 0 {
            return None;
        }
        let i = &*self.0;
        let n = i.q - 1;
        let l = i.log[a.0 as usize];
        Some(Fq(i.exp[((n - l) % n.max(1)) as usize]))
    }

    pub fn pow_fq(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.0 == 0 {
            return Fq::ZERO;
        }
        let i = &*self.0;
        let n = (i.q - 1) as u64;
        let l = i.log[a.0 as usize] as u64;
        Fq(i.exp[((l * (e % n)) % n) as usize])
    }

    /// Discrete logarithm with respect to [`FqCtx::primitive_element`].
    pub fn log_fq(&self, a: Fq) -> Option<u32> {
        (!a.is_zero()).then(|| self.0.log[a.0 as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_fq(&self, a: Fq) -> Option<u64> {
        let l = self.log_fq(a)? as u64;
        let n = self.q() - 1;
        Some(n / gcd_u64(n, l))
    }

    /// Renders an element: a decimal integer for prime fields, otherwise a
    /// polynomial in `a`.
    pub fn render(&self, c: Fq) -> String {
        if self.0.e == 1 {
            return c.0.to_string();
        }
        let coords = self.coordinates(c);
        let mut terms = Vec::new();
        for (i, &d) in coords.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            terms.push(match (d, i) {
                (_, 0) => d.to_string(),
                (1, _) => mon,
                _ => format!("{d}*{mon}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn reduce_mod_p(m: &[u64], p: u64) -> Vec<Fq> {
    let mut v: Vec<Fq> = m.iter().map(|&c| Fq((c % p) as u32)).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn digit_add(i: &FqInner, mut a: u32, mut b: u32) -> u32 {
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..i.e {
        let d = (a % i.p + b % i.p) % i.p;
        out += d * scale;
        scale *= i.p;
        a /= i.p;
        b /= i.p;
    }
    out
}

fn digit_neg(i: &FqInner, mut a: u32) -> u32 {
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..i.e {
        let d = (i.p - a % i.p) % i.p;
        out += d * scale;
        scale *= i.p;
        a /= i.p;
    }
    out
}

/// Multiplication by polynomial arithmetic; only used to build tables.
fn slow_mul(i: &FqInner, a: u32, b: u32) -> u32 {
    let p = i.p as u64;
    if i.e == 1 {
        return ((a as u64 * b as u64) % p) as u32;
    }
    let e = i.e as usize;
    let digits = |mut v: u32| -> Vec<u64> {
        (0..e)
            .map(|_| {
                let d = (v % i.p) as u64;
                v /= i.p;
                d
            })
            .collect()
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * e - 1];
    for (x, &u) in da.iter().enumerate() {
        for (y, &v) in db.iter().enumerate() {
            prod[x + y] = (prod[x + y] + u * v) % p;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (j, &m) in i.modulus.iter().take(e).enumerate() {
            prod[k - e + j] = (prod[k - e + j] + p * p - c * m as u64 % p) % p;
        }
    }
    let mut out = 0u64;
    for &d in prod[..e].iter().rev() {
        out = out * p + d;
    }
    out as u32
}

impl FrobeniusRing for FqCtx {
    type Elem = Fq;

    fn base(&self) -> &FqCtx {
        self
    }
    fn zero(&self) -> Fq {
        Fq::ZERO
    }
    fn one(&self) -> Fq {
        Fq::ONE
    }
    fn is_zero(&self, a: &Fq) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        self.add_fq(*a, *b)
    }
    fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        self.sub_fq(*a, *b)
    }
    fn neg(&self, a: &Fq) -> Fq {
        self.neg_fq(*a)
    }
    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        self.mul_fq(*a, *b)
    }
    fn from_fq(&self, c: Fq) -> Fq {
        c
    }
    fn frobenius(&self, a: &Fq) -> Fq {
        *a
    }
    fn frobenius_iter(&self, a: &Fq, _k: usize) -> Fq {
        *a
    }
    fn same_as(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
    fn pow(&self, a: &Fq, e: u64) -> Fq {
        self.pow_fq(*a, e)
    }
}

impl Field for FqCtx {
    fn inv(&self, a: &Fq) -> Option<Fq> {
        self.inv_fq(*a)
    }
}

impl FiniteField for FqCtx {
    fn degree(&self) -> usize {
        1
    }
    fn to_coords(&self, a: &Fq) -> Vec<Fq> {
        vec![*a]
    }
    fn from_coords(&self, coords: &[Fq]) -> Fq {
        coords.first().copied().unwrap_or(Fq::ZERO)
    }
}
