//! Sparse polynomials in A = F_q[T].
//!
//! Coefficients of `phi_a` over A involve monomials `T^{q^k}`, so their
//! degrees grow like `q^{r deg a}` while the number of terms stays small.

use std::collections::HashMap;

use super::fq::{Fq, FqCtx};
use super::ring::FrobeniusRing;

/// Terms `(exponent, coefficient)` sorted by exponent, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparsePoly {
    terms: Vec<(u64, Fq)>,
}

impl SparsePoly {
    pub fn terms(&self) -> &[(u64, Fq)] {
        &self.terms
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn from_dense(coeffs: &[Fq]) -> Self {
        Self {
            terms: coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, &c)| (i as u64, c))
                .collect(),
        }
    }

    /// Dense form; panics if the degree does not fit in memory sensibly.
    pub fn to_dense(&self) -> Vec<Fq> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        let mut v = vec![Fq::ZERO; d as usize + 1];
        for &(e, c) in &self.terms {
            v[e as usize] = c;
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct SparsePolyRing {
    fq: FqCtx,
}

impl SparsePolyRing {
    pub fn new(fq: FqCtx) -> Self {
        Self { fq }
    }

    fn merge(&self, a: &SparsePoly, b: &SparsePoly, negate_b: bool) -> SparsePoly {
        let f = &self.fq;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        let nb = |c: Fq| if negate_b { f.neg_fq(c) } else { c };
        while i < a.terms.len() || j < b.terms.len() {
            match (a.terms.get(i), b.terms.get(j)) {
                (Some(&(ea, ca)), Some(&(eb, cb))) if ea == eb => {
                    let c = f.add_fq(ca, nb(cb));
                    if !c.is_zero() {
                        out.push((ea, c));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(ea, ca)), Some(&(eb, _))) if ea < eb => {
                    out.push((ea, ca));
                    i += 1;
                }
                (Some(_), Some(&(eb, cb))) | (None, Some(&(eb, cb))) => {
                    out.push((eb, nb(cb)));
                    j += 1;
                }
                (Some(&(ea, ca)), None) => {
                    out.push((ea, ca));
                    i += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparsePoly { terms: out }
    }
}

impl FrobeniusRing for SparsePolyRing {
    type Elem = SparsePoly;

    fn base(&self) -> &FqCtx {
        &self.fq
    }
    fn zero(&self) -> SparsePoly {
        SparsePoly::default()
    }
    fn one(&self) -> SparsePoly {
        SparsePoly { terms: vec![(0, Fq::ONE)] }
    }
    fn is_zero(&self, a: &SparsePoly) -> bool {
        a.terms.is_empty()
    }
    fn add(&self, a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
        self.merge(a, b, false)
    }
    fn sub(&self, a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
        self.merge(a, b, true)
    }
    fn neg(&self, a: &SparsePoly) -> SparsePoly {
        SparsePoly { terms: a.terms.iter().map(|&(e, c)| (e, self.fq.neg_fq(c))).collect() }
    }
    fn mul(&self, a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
        if a.terms.is_empty() || b.terms.is_empty() {
            return SparsePoly::default();
        }
        let f = &self.fq;
        let mut acc: HashMap<u64, Fq> = HashMap::with_capacity(a.terms.len() * b.terms.len());
        for &(ea, ca) in &a.terms {
            for &(eb, cb) in &b.terms {
                let t = f.mul_fq(ca, cb);
                let slot = acc.entry(ea + eb).or_insert(Fq::ZERO);
                *slot = f.add_fq(*slot, t);
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| t.0);
        SparsePoly { terms }
    }
    fn from_fq(&self, c: Fq) -> SparsePoly {
        if c.is_zero() {
            SparsePoly::default()
        } else {
            SparsePoly { terms: vec![(0, c)] }
        }
    }
    fn frobenius(&self, a: &SparsePoly) -> SparsePoly {
        // c^q = c for c in F_q.
        let q = self.fq.q();
        SparsePoly { terms: a.terms.iter().map(|&(e, c)| (e * q, c)).collect() }
    }
    fn same_as(&self, other: &Self) -> bool {
        self.fq.same_as(&other.fq)
    }
}
