//! Structure traits shared by every coefficient domain.
//!
//! Values are plain data; all arithmetic goes through a context object
//! (the "parent"), which owns moduli and lookup tables. Every domain here has
//! characteristic p and carries the q-power Frobenius `x -> x^q`, where q is
//! the order of the constant field [`FqCtx`].

use std::fmt::Debug;
use std::hash::Hash;

use super::fq::{Fq, FqCtx};

/// A commutative ring containing F_q, equipped with the q-power Frobenius.
pub trait FrobeniusRing: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    /// The constant field F_q.
    fn base(&self) -> &FqCtx;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_fq(&self, c: Fq) -> Self::Elem;

    /// `a^q`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;

    /// Whether two contexts describe the same ring.
    fn same_as(&self, other: &Self) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `a^(q^k)`.
    fn frobenius_iter(&self, a: &Self::Elem, k: usize) -> Self::Elem {
        let mut out = a.clone();
        for _ in 0..k {
            out = self.frobenius(&out);
        }
        out
    }

    fn scale(&self, c: Fq, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.from_fq(c), a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
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
}

/// A [`FrobeniusRing`] in which every nonzero element is invertible.
pub trait Field: FrobeniusRing {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// A finite field, viewed as a finite-dimensional F_q-vector space.
pub trait FiniteField: Field {
    /// Degree over F_q.
    fn degree(&self) -> usize;
    /// Coordinates over F_q in the context's fixed basis.
    fn to_coords(&self, a: &Self::Elem) -> Vec<Fq>;
    fn from_coords(&self, coords: &[Fq]) -> Self::Elem;
}
