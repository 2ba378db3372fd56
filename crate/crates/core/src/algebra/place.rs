//! Finite places of F_q(T): enumeration, residue maps, power residue symbols.

use serde::{Serialize, Serializer};

use super::ext::{ExtElem, Provenance, ResidueField};
use super::fq::{Fq, FqCtx};
use super::poly::{Poly, PolyRing};
use super::rational::RationalFunction;
use super::ring::FrobeniusRing;
use super::text::render_poly;
use crate::error::{Error, Result};

/// A finite place, identified with its monic irreducible generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    generator: Poly<Fq>,
}

impl Place {
    /// Wraps a generator after checking it is monic and irreducible.
    pub fn new(fq: &FqCtx, generator: Poly<Fq>) -> Result<Self> {
        let a = PolyRing::new(fq.clone());
        let generator = a.trim(generator);
        if generator.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        if !a.is_monic(&generator) || !a.is_irreducible(&generator) {
            return Err(Error::BadInput("place generator must be monic irreducible".into()));
        }
        Ok(Self { generator })
    }

    pub fn generator(&self) -> &[Fq] {
        &self.generator
    }

    pub fn degree(&self) -> usize {
        self.generator.len() - 1
    }

    /// N(P) = q^deg P, if it fits in a u128.
    pub fn norm(&self, q: u64) -> Option<u128> {
        (q as u128).checked_pow(self.degree() as u32)
    }

    pub fn render(&self, fq: &FqCtx) -> String {
        render_poly(fq, &self.generator)
    }

    /// The residue field A/P.
    pub fn residue_field(&self, fq: &FqCtx) -> ResidueField {
        ResidueField::new_trusted(
            fq.clone(),
            self.generator.clone(),
            Provenance::Residue(self.render(fq)),
        )
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<u32> = self.generator.iter().map(|c| c.value()).collect();
        v.serialize(s)
    }
}

/// Deterministic irreducibility test over F_q.
pub fn irreducible_test(fq: &FqCtx, f: &[Fq]) -> Result<bool> {
    let a = PolyRing::new(fq.clone());
    if a.degree(f).is_none() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(a.is_irreducible(f))
}

/// Monic irreducibles of degree `d`, in lexicographic coefficient order with
/// the constant term last.
pub fn monic_irreducibles(fq: &FqCtx, d: usize) -> Vec<Place> {
    assert!(d >= 1, "degree must be positive");
    let a = PolyRing::new(fq.clone());
    let q = fq.q();
    let total = q.checked_pow(d as u32).expect("enumeration too large");
    let mut out = Vec::new();
    for idx in 0..total {
        // idx written in base q, most significant digit = coefficient of T^{d-1}.
        let mut f = vec![Fq::ZERO; d + 1];
        let mut v = idx;
        for c in f.iter_mut().take(d) {
            *c = fq.elem(v % q);
            v /= q;
        }
        f[d] = Fq::ONE;
        if d > 1 && f[0].is_zero() {
            continue;
        }
        if a.is_irreducible(&f) {
            out.push(Place { generator: f });
        }
    }
    out
}

/// All places of degree `1..=max_degree`, ordered by degree then
/// lexicographically.
pub fn places_up_to(fq: &FqCtx, max_degree: usize) -> Vec<Place> {
    (1..=max_degree).flat_map(|d| monic_irreducibles(fq, d)).collect()
}

/// The reduction map A -> A/P together with its partial extension to F.
#[derive(Clone, Debug)]
pub struct ResidueMap {
    place: Place,
    field: ResidueField,
}

pub fn residue_map(fq: &FqCtx, place: &Place) -> ResidueMap {
    ResidueMap { place: place.clone(), field: place.residue_field(fq) }
}

impl ResidueMap {
    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn map_poly(&self, f: &[Fq]) -> ExtElem<Fq> {
        self.field.from_poly(f)
    }

    /// Defined exactly when the denominator is a unit mod P.
    pub fn map_rational(&self, r: &RationalFunction) -> Result<ExtElem<Fq>> {
        let den = self.map_poly(r.den());
        let k = &self.field;
        let inv = super::ring::Field::inv(k, &den).ok_or(Error::DenominatorVanishes)?;
        Ok(k.mul(&self.map_poly(r.num()), &inv))
    }
}

/// The (q-1)-th power residue symbol `gamma^{(N(P)-1)/(q-1)} mod P`, an
/// element of F_q^*. Computed as the norm of `gamma mod P` down to F_q.
pub fn power_residue_symbol(fq: &FqCtx, gamma: &[Fq], place: &Place) -> Result<Fq> {
    let k = place.residue_field(fq);
    let g = k.from_poly(gamma);
    if k.is_zero(&g) {
        return Err(Error::NotCoprime);
    }
    Ok(k.norm_to_fq(&g))
}
