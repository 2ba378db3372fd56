//! The twisted polynomial ring R{t} with `t a = a^q t`.

use crate::algebra::ring::FrobeniusRing;
use crate::error::{Error, Result};

/// Coefficients indexed by t-degree, trimmed (no trailing zeros).
pub type SkewPoly<E> = Vec<E>;

#[derive(Clone, Debug)]
pub struct SkewRing<R: FrobeniusRing> {
    coeffs: R,
}

impl<R: FrobeniusRing> SkewRing<R> {
    pub fn new(coeffs: R) -> Self {
        Self { coeffs }
    }

    pub fn coeff_ring(&self) -> &R {
        &self.coeffs
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.coeffs.same_as(&other.coeffs)
    }

    /// Checked multiplication across two ring handles.
    pub fn mul_checked(
        &self,
        other: &Self,
        f: &[R::Elem],
        g: &[R::Elem],
    ) -> Result<SkewPoly<R::Elem>> {
        if !self.same_as(other) {
            return Err(Error::MixedContexts);
        }
        Ok(self.mul(f, g))
    }

    pub fn trim(&self, mut f: SkewPoly<R::Elem>) -> SkewPoly<R::Elem> {
        while f.last().is_some_and(|c| self.coeffs.is_zero(c)) {
            f.pop();
        }
        f
    }

    pub fn degree(&self, f: &[R::Elem]) -> Option<usize> {
        f.len().checked_sub(1)
    }

    pub fn zero(&self) -> SkewPoly<R::Elem> {
        Vec::new()
    }

    pub fn one(&self) -> SkewPoly<R::Elem> {
        vec![self.coeffs.one()]
    }

    pub fn constant(&self, c: R::Elem) -> SkewPoly<R::Elem> {
        self.trim(vec![c])
    }

    /// `c t^k`.
    pub fn monomial(&self, c: R::Elem, k: usize) -> SkewPoly<R::Elem> {
        if self.coeffs.is_zero(&c) {
            return Vec::new();
        }
        let mut v = vec![self.coeffs.zero(); k + 1];
        v[k] = c;
        v
    }

    pub fn tau_power(&self, k: usize) -> SkewPoly<R::Elem> {
        self.monomial(self.coeffs.one(), k)
    }

    pub fn coeff(&self, f: &[R::Elem], i: usize) -> R::Elem {
        f.get(i).cloned().unwrap_or_else(|| self.coeffs.zero())
    }

    pub fn add(&self, f: &[R::Elem], g: &[R::Elem]) -> SkewPoly<R::Elem> {
        let r = &self.coeffs;
        let n = f.len().max(g.len());
        let out = (0..n)
            .map(|i| match (f.get(i), g.get(i)) {
                (Some(a), Some(b)) => r.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        self.trim(out)
    }

    pub fn neg(&self, f: &[R::Elem]) -> SkewPoly<R::Elem> {
        f.iter().map(|c| self.coeffs.neg(c)).collect()
    }

    pub fn sub(&self, f: &[R::Elem], g: &[R::Elem]) -> SkewPoly<R::Elem> {
        self.add(f, &self.neg(g))
    }

    /// `(a t^i)(b t^j) = a b^{q^i} t^{i+j}`.
    pub fn mul(&self, f: &[R::Elem], g: &[R::Elem]) -> SkewPoly<R::Elem> {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        let r = &self.coeffs;
        let mut out = vec![r.zero(); f.len() + g.len() - 1];
        let mut twisted = g.to_vec();
        for (i, a) in f.iter().enumerate() {
            if i > 0 {
                twisted = twisted.iter().map(|b| r.frobenius(b)).collect();
            }
            if r.is_zero(a) {
                continue;
            }
            for (j, b) in twisted.iter().enumerate() {
                if r.is_zero(b) {
                    continue;
                }
                out[i + j] = r.add(&out[i + j], &r.mul(a, b));
            }
        }
        self.trim(out)
    }

    /// Left multiplication by a scalar: `c f`.
    pub fn scale_left(&self, c: &R::Elem, f: &[R::Elem]) -> SkewPoly<R::Elem> {
        self.trim(f.iter().map(|x| self.coeffs.mul(c, x)).collect())
    }

    /// `f t^k`: shifts coefficients up without twisting them.
    pub fn shift_right(&self, f: &[R::Elem], k: usize) -> SkewPoly<R::Elem> {
        if f.is_empty() {
            return Vec::new();
        }
        let mut v = vec![self.coeffs.zero(); k];
        v.extend_from_slice(f);
        v
    }

    /// `t^k f`: twists every coefficient by `q^k` and shifts.
    pub fn shift_left(&self, f: &[R::Elem], k: usize) -> SkewPoly<R::Elem> {
        if f.is_empty() {
            return Vec::new();
        }
        let mut v = vec![self.coeffs.zero(); k];
        v.extend(f.iter().map(|c| self.coeffs.frobenius_iter(c, k)));
        v
    }

    pub fn pow(&self, f: &[R::Elem], mut e: u64) -> SkewPoly<R::Elem> {
        let mut base = f.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Evaluates `sum c_i x^{q^i}` for `x` in the coefficient ring.
    pub fn eval(&self, f: &[R::Elem], x: &R::Elem) -> R::Elem {
        let r = &self.coeffs;
        let mut acc = r.zero();
        let mut xp = x.clone();
        for (i, c) in f.iter().enumerate() {
            if i > 0 {
                xp = r.frobenius(&xp);
            }
            if !r.is_zero(c) {
                acc = r.add(&acc, &r.mul(c, &xp));
            }
        }
        acc
    }

    /// Transports coefficients along a ring map (reduction, embedding).
    pub fn map_coeffs<S, F>(&self, target: &SkewRing<S>, f: &[R::Elem], map: F) -> SkewPoly<S::Elem>
    where
        S: FrobeniusRing,
        F: Fn(&R::Elem) -> S::Elem,
    {
        target.trim(f.iter().map(map).collect())
    }

    /// As [`Self::map_coeffs`] for a fallible map.
    pub fn try_map_coeffs<S, F>(
        &self,
        target: &SkewRing<S>,
        f: &[R::Elem],
        map: F,
    ) -> Result<SkewPoly<S::Elem>>
    where
        S: FrobeniusRing,
        F: Fn(&R::Elem) -> Result<S::Elem>,
    {
        Ok(target.trim(f.iter().map(map).collect::<Result<Vec<_>>>()?))
    }
}
