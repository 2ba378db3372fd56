//! Finite extensions `K[y]/(g)` of a finite field K.
//!
//! Residue fields A/P are `ExtField<FqCtx>` with modulus P; torsion fields are
//! towers `ExtField<ResidueField>`. Elements are dense coefficient vectors of
//! length exactly `m = deg g`, so structural equality is field equality.

use std::fmt;
use std::sync::Arc;

use super::fq::{Fq, FqCtx};
use super::poly::{Poly, PolyRing};
use super::ring::{Field, FiniteField, FrobeniusRing};
use crate::error::{Error, Result};

/// Where an extension came from; informational only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Plain,
    /// Residue field A/P of the place with this rendered generator.
    Residue(String),
    /// Field of definition of torsion points.
    Torsion,
}

struct ExtInner<K: FiniteField> {
    base: K,
    ring: PolyRing<K>,
    modulus: Poly<K::Elem>,
    m: usize,
    /// `y^{q i} mod g` for `i < m`.
    frob: Vec<Vec<K::Elem>>,
    provenance: Provenance,
}

#[derive(Clone)]
pub struct ExtField<K: FiniteField>(Arc<ExtInner<K>>);

pub type ExtElem<E> = Vec<E>;
/// A/P for a place P.
pub type ResidueField = ExtField<FqCtx>;
/// An extension of a residue field.
pub type TowerField = ExtField<ResidueField>;

impl<K: FiniteField> fmt::Debug for ExtField<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext[deg {} over F_q, {:?}]", self.degree(), self.0.provenance)
    }
}

impl<K: FiniteField> ExtField<K> {
    /// Builds `K[y]/(g)` after checking that `g` is irreducible.
    pub fn new(base: K, modulus: Poly<K::Elem>, provenance: Provenance) -> Result<Self> {
        let ring = PolyRing::new(base.clone());
        let modulus = ring.trim(modulus);
        let deg = ring.degree(&modulus).ok_or(Error::ZeroPolynomial)?;
        if deg == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        if !ring.is_irreducible(&modulus) {
            return Err(Error::ReducibleModulus);
        }
        Ok(Self::new_trusted(base, modulus, provenance))
    }

    /// Builds `K[y]/(g)` for a modulus already known to be irreducible.
    pub fn new_trusted(base: K, modulus: Poly<K::Elem>, provenance: Provenance) -> Self {
        let ring = PolyRing::new(base.clone());
        let modulus = ring.monic(&modulus);
        let m = ring.degree(&modulus).expect("nonzero modulus");
        let xq = ring.pow_mod(&ring.x(), base.base().q(), &modulus);
        // Columns of the q-power map: y^{q i}.
        let mut frob = Vec::with_capacity(m);
        let mut cur = ring.constant(base.one());
        for _ in 0..m {
            let mut v = cur.clone();
            v.resize(m, base.zero());
            frob.push(v);
            cur = ring.mul_mod(&cur, &xq, &modulus);
        }
        Self(Arc::new(ExtInner { base, ring, modulus, m, frob, provenance }))
    }

    /// `K[y]/(g)` with `g` the least monic irreducible of degree `m`.
    pub fn least(base: K, m: usize, provenance: Provenance) -> Self {
        let ring = PolyRing::new(base.clone());
        let g = ring.least_monic_irreducible(m);
        Self::new_trusted(base, g, provenance)
    }

    pub fn base_field(&self) -> &K {
        &self.0.base
    }

    pub fn modulus(&self) -> &[K::Elem] {
        &self.0.modulus
    }

    /// Degree over the immediate base field.
    pub fn relative_degree(&self) -> usize {
        self.0.m
    }

    pub fn provenance(&self) -> &Provenance {
        &self.0.provenance
    }

    /// The class of `y`.
    pub fn generator(&self) -> ExtElem<K::Elem> {
        let mut v = vec![self.0.base.zero(); self.0.m];
        if self.0.m == 1 {
            // y = -g_0 when g = y + g_0.
            v[0] = self.0.base.neg(&self.0.modulus[0]);
        } else {
            v[1] = self.0.base.one();
        }
        v
    }

    pub fn embed(&self, c: &K::Elem) -> ExtElem<K::Elem> {
        let mut v = vec![self.0.base.zero(); self.0.m];
        v[0] = c.clone();
        v
    }

    /// Reduces an arbitrary polynomial in `y` into the field.
    pub fn from_poly(&self, a: &[K::Elem]) -> ExtElem<K::Elem> {
        let mut r = self.0.ring.rem_p(a, &self.0.modulus);
        r.resize(self.0.m, self.0.base.zero());
        r
    }

    /// The element as a (trimmed) polynomial in `y`.
    pub fn to_poly(&self, a: &ExtElem<K::Elem>) -> Poly<K::Elem> {
        self.0.ring.trim(a.clone())
    }

    /// If the element lies in the embedded base field, returns it.
    pub fn as_base(&self, a: &ExtElem<K::Elem>) -> Option<K::Elem> {
        a[1..].iter().all(|c| self.0.base.is_zero(c)).then(|| a[0].clone())
    }

    /// The norm down to F_q, as the product of all q-power conjugates.
    pub fn norm_to_fq(&self, a: &ExtElem<K::Elem>) -> Fq {
        let n = self.degree();
        let mut acc = self.one();
        let mut c = a.clone();
        for _ in 0..n {
            acc = self.mul(&acc, &c);
            c = self.frobenius(&c);
        }
        let coords = self.to_coords(&acc);
        debug_assert!(coords[1..].iter().all(|x| x.is_zero()));
        coords[0]
    }

    /// Enumerates all elements (only sensible for small fields).
    pub fn elements(&self) -> Vec<ExtElem<K::Elem>> {
        let n = self.degree();
        let q = self.base().q();
        let total = q.pow(n as u32);
        (0..total)
            .map(|mut v| {
                let coords: Vec<Fq> = (0..n)
                    .map(|_| {
                        let d = v % q;
                        v /= q;
                        self.base().elem(d)
                    })
                    .collect();
                self.from_coords(&coords)
            })
            .collect()
    }
}

impl<K: FiniteField> FrobeniusRing for ExtField<K> {
    type Elem = ExtElem<K::Elem>;

    fn base(&self) -> &FqCtx {
        self.0.base.base()
    }

    fn zero(&self) -> Self::Elem {
        vec![self.0.base.zero(); self.0.m]
    }

    fn one(&self) -> Self::Elem {
        self.embed(&self.0.base.one())
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.0.base.is_zero(c))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.0.base.add(x, y)).collect()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.0.base.sub(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.0.base.neg(x)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.0.base;
        let m = self.0.m;
        if m == 1 {
            return vec![k.mul(&a[0], &b[0])];
        }
        let mut prod = vec![k.zero(); 2 * m - 1];
        for (i, x) in a.iter().enumerate() {
            if k.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if k.is_zero(y) {
                    continue;
                }
                prod[i + j] = k.add(&prod[i + j], &k.mul(x, y));
            }
        }
        // Reduce with the monic modulus.
        let g = &self.0.modulus;
        for t in (m..prod.len()).rev() {
            if k.is_zero(&prod[t]) {
                continue;
            }
            let c = prod[t].clone();
            for (j, gj) in g[..m].iter().enumerate() {
                prod[t - m + j] = k.sub(&prod[t - m + j], &k.mul(&c, gj));
            }
        }
        prod.truncate(m);
        prod
    }

    fn from_fq(&self, c: Fq) -> Self::Elem {
        self.embed(&self.0.base.from_fq(c))
    }

    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        let k = &self.0.base;
        let mut out = vec![k.zero(); self.0.m];
        for (i, c) in a.iter().enumerate() {
            if k.is_zero(c) {
                continue;
            }
            let cq = k.frobenius(c);
            for (j, y) in self.0.frob[i].iter().enumerate() {
                if k.is_zero(y) {
                    continue;
                }
                out[j] = k.add(&out[j], &k.mul(&cq, y));
            }
        }
        out
    }

    fn same_as(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.base.same_as(&other.0.base) && self.0.modulus == other.0.modulus)
    }
}

impl<K: FiniteField> Field for ExtField<K> {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return None;
        }
        let ring = &self.0.ring;
        let p = ring.trim(a.clone());
        let inv = ring.inv_mod(&p, &self.0.modulus)?;
        Some(self.from_poly(&inv))
    }
}

impl<K: FiniteField> FiniteField for ExtField<K> {
    fn degree(&self) -> usize {
        self.0.m * self.0.base.degree()
    }

    fn to_coords(&self, a: &Self::Elem) -> Vec<Fq> {
        a.iter().flat_map(|c| self.0.base.to_coords(c)).collect()
    }

    fn from_coords(&self, coords: &[Fq]) -> Self::Elem {
        let d = self.0.base.degree();
        (0..self.0.m)
            .map(|i| self.0.base.from_coords(&coords[i * d..(i + 1) * d]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FqCtx {
        FqCtx::prime(3).unwrap()
    }

    #[test]
    fn residue_field_i_squared() {
        // F_3[T]/(T^2 + 1): T -> i with i^2 = -1.
        let k = ResidueField::new(f3(), vec![Fq(1), Fq(0), Fq(1)], Provenance::Plain).unwrap();
        let i = k.generator();
        assert_eq!(k.mul(&i, &i), k.from_fq(Fq(2)));
    }

    #[test]
    fn frobenius_fixed_field_is_fq() {
        let k = ResidueField::least(f3(), 3, Provenance::Plain);
        let fixed: Vec<_> =
            k.elements().into_iter().filter(|x| k.frobenius(x) == *x).collect();
        assert_eq!(fixed.len(), 3);
        assert!(fixed.iter().all(|x| k.as_base(x).is_some()));
    }

    #[test]
    fn frobenius_matches_power() {
        let k = ResidueField::least(FqCtx::new(2, 2, None).unwrap(), 3, Provenance::Plain);
        for x in k.elements().into_iter().take(40) {
            assert_eq!(k.frobenius(&x), k.pow(&x, 4));
        }
    }

    #[test]
    fn tower_inverse_and_frobenius() {
        let k = ResidueField::least(f3(), 2, Provenance::Plain);
        let l = TowerField::least(k.clone(), 3, Provenance::Torsion);
        assert_eq!(l.degree(), 6);
        for x in l.elements().into_iter().skip(1).step_by(37) {
            let xi = l.inv(&x).unwrap();
            assert_eq!(l.mul(&x, &xi), l.one());
            assert_eq!(l.frobenius(&x), l.pow(&x, 3));
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        let err = ResidueField::new(f3(), vec![Fq(2), Fq(0), Fq(1)], Provenance::Plain);
        assert_eq!(err.unwrap_err(), Error::ReducibleModulus);
    }
}
