//! Drinfeld modules `phi_T = T + g_1 t + ... + g_r t^r` over F_q(T).

mod def;
mod isogeny;
mod torsion;

pub use def::{CoeffDef, ModuleDef};
pub use isogeny::{isogeny_search, isogeny_solve, Isogeny, IsogenyOptions, IsogenySearch};
pub use torsion::{torsion_frobenius_matrix, TorsionData, TorsionOptions};

use crate::algebra::ext::{ExtElem, ResidueField};
use crate::algebra::fq::{Fq, FqCtx};
use crate::algebra::place::{residue_map, Place};
use crate::algebra::poly::Poly;
use crate::algebra::rational::{RationalFunction, RationalFunctionField};
use crate::algebra::ring::{Field, FrobeniusRing};
use crate::algebra::sparse::{SparsePoly, SparsePolyRing};
use crate::algebra::text::{render_rational, render_skew_rational};
use crate::error::{Error, Result};
use crate::skew::{SkewPoly, SkewRing};

/// `phi_a` by Horner's rule in any skew ring, given the image of T.
pub fn phi_image_with<R: FrobeniusRing>(
    s: &SkewRing<R>,
    phi_t: &[R::Elem],
    a: &[Fq],
) -> SkewPoly<R::Elem> {
    let r = s.coeff_ring();
    let mut acc = s.zero();
    for c in a.iter().rev() {
        acc = s.mul(&acc, phi_t);
        acc = s.add(&acc, &s.constant(r.from_fq(*c)));
    }
    acc
}

#[derive(Clone, Debug)]
pub struct DrinfeldModule {
    f: RationalFunctionField,
    skew: SkewRing<RationalFunctionField>,
    coeffs: Vec<RationalFunction>,
    phi_t: SkewPoly<RationalFunction>,
}

impl PartialEq for DrinfeldModule {
    fn eq(&self, other: &Self) -> bool {
        self.f.same_as(&other.f) && self.coeffs == other.coeffs
    }
}

impl Eq for DrinfeldModule {}

/// Validates a module of rank `rank` with coefficients `g_1, ..., g_r`.
pub fn make_drinfeld(fq: &FqCtx, rank: usize, coeffs: Vec<RationalFunction>) -> Result<DrinfeldModule> {
    if coeffs.len() != rank {
        return Err(Error::WrongRank { expected: rank, found: coeffs.len() });
    }
    DrinfeldModule::new(fq, coeffs)
}

impl DrinfeldModule {
    pub fn new(fq: &FqCtx, coeffs: Vec<RationalFunction>) -> Result<Self> {
        let Some(last) = coeffs.last() else {
            return Err(Error::EmptyRank);
        };
        if last.num().is_empty() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let f = RationalFunctionField::new(fq.clone());
        let skew = SkewRing::new(f.clone());
        let mut phi_t = vec![f.t()];
        phi_t.extend(coeffs.iter().cloned());
        Ok(Self { f, skew, coeffs, phi_t })
    }

    /// Convenience constructor from polynomial coefficients.
    pub fn from_polys(fq: &FqCtx, coeffs: &[Poly<Fq>]) -> Result<Self> {
        let f = RationalFunctionField::new(fq.clone());
        Self::new(fq, coeffs.iter().map(|c| f.from_poly(c.clone())).collect())
    }

    /// The Carlitz module `T + t`.
    pub fn carlitz(fq: &FqCtx) -> Self {
        Self::from_polys(fq, &[vec![Fq::ONE]]).unwrap()
    }

    pub fn fq(&self) -> &FqCtx {
        self.f.base()
    }

    pub fn field(&self) -> &RationalFunctionField {
        &self.f
    }

    pub fn skew(&self) -> &SkewRing<RationalFunctionField> {
        &self.skew
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// `g_1, ..., g_r`.
    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn phi_t(&self) -> &[RationalFunction] {
        &self.phi_t
    }

    pub fn is_polynomial(&self) -> bool {
        self.coeffs.iter().all(RationalFunction::is_polynomial)
    }

    pub fn phi_image(&self, a: &[Fq]) -> SkewPoly<RationalFunction> {
        phi_image_with(&self.skew, &self.phi_t, a)
    }

    /// `phi_T` over the sparse polynomial ring, when every coefficient is a
    /// polynomial. Useful when `phi_a` has coefficients of huge degree.
    pub fn sparse_phi_t(&self) -> Option<(SkewRing<SparsePolyRing>, SkewPoly<SparsePoly>)> {
        if !self.is_polynomial() {
            return None;
        }
        let s = SkewRing::new(SparsePolyRing::new(self.fq().clone()));
        let phi = self.phi_t.iter().map(|c| SparsePoly::from_dense(c.num())).collect();
        Some((s, phi))
    }

    /// Reduction modulo a place. Fails when some coefficient is not integral
    /// at P or the leading coefficient vanishes there.
    pub fn reduce_at(&self, place: &Place) -> Result<ReducedModule> {
        let bad = || Error::BadReduction { place: place.render(self.fq()) };
        let map = residue_map(self.fq(), place);
        let k = map.field().clone();
        let skew = SkewRing::new(k.clone());
        let phi_t: Vec<_> = self
            .phi_t
            .iter()
            .map(|c| map.map_rational(c).map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if k.is_zero(phi_t.last().unwrap()) {
            return Err(bad());
        }
        Ok(ReducedModule { place: place.clone(), field: k, skew, phi_t })
    }

    /// The rank-2 twist `(g_1 gamma, g_2 gamma^{q+1})`.
    pub fn twist2(&self, gamma: &[Fq]) -> Result<Self> {
        if self.rank() != 2 {
            return Err(Error::WrongRank { expected: 2, found: self.rank() });
        }
        let f = &self.f;
        let g = f.from_poly(f.poly_ring().trim(gamma.to_vec()));
        if f.is_zero(&g) {
            return Err(Error::ZeroGamma);
        }
        let q = self.fq().q();
        let c1 = f.mul(&self.coeffs[0], &g);
        let c2 = f.mul(&self.coeffs[1], &f.pow(&g, q + 1));
        Self::new(self.fq(), vec![c1, c2])
    }

    /// Raises every coefficient to the q-th power.
    pub fn frobenius_twist(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.f.frobenius(c)).collect();
        Self::new(self.fq(), coeffs).unwrap()
    }

    /// The rank-1 module `T + (-1)^{r-1} g_r t` carrying the determinant of
    /// the Galois action on torsion (`T - g_2 t` in rank 2).
    pub fn weil_partner(&self) -> Self {
        let g = self.coeffs.last().unwrap();
        let c = if self.rank().is_multiple_of(2) { self.f.neg(g) } else { g.clone() };
        Self::new(self.fq(), vec![c]).unwrap()
    }

    /// If `other` equals `twist2(self, gamma)` for a polynomial `gamma`,
    /// returns `gamma`. Identical modules give `gamma = 1`.
    pub fn twist_parameter(&self, other: &Self) -> Option<Poly<Fq>> {
        if self.rank() != 2 || other.rank() != 2 || !self.f.same_as(&other.f) {
            return None;
        }
        let f = &self.f;
        let (g1, g2) = (&self.coeffs[0], &self.coeffs[1]);
        let (h1, h2) = (&other.coeffs[0], &other.coeffs[1]);
        let gamma = if f.is_zero(g1) {
            if !f.is_zero(h1) {
                return None;
            }
            // gamma^{q+1} = h2/g2; only detect the untwisted case here.
            f.one()
        } else {
            f.div(h1, g1)?
        };
        if !gamma.is_polynomial() || f.is_zero(&gamma) {
            return None;
        }
        let expect = f.mul(g2, &f.pow(&gamma, self.fq().q() + 1));
        (expect == *h2).then(|| gamma.num().to_vec())
    }

    pub fn render(&self) -> String {
        render_skew_rational(self.fq(), &self.phi_t)
    }

    pub fn render_coeffs(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| render_rational(self.fq(), c)).collect()
    }
}

/// A module reduced at a place of good reduction, over A/P.
#[derive(Clone, Debug)]
pub struct ReducedModule {
    place: Place,
    field: ResidueField,
    skew: SkewRing<ResidueField>,
    phi_t: SkewPoly<ExtElem<Fq>>,
}

impl ReducedModule {
    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn skew(&self) -> &SkewRing<ResidueField> {
        &self.skew
    }

    pub fn rank(&self) -> usize {
        self.phi_t.len() - 1
    }

    pub fn phi_t(&self) -> &[ExtElem<Fq>] {
        &self.phi_t
    }

    pub fn phi_image(&self, a: &[Fq]) -> SkewPoly<ExtElem<Fq>> {
        phi_image_with(&self.skew, &self.phi_t, a)
    }
}
