//! The rational function field F = F_q(T).

use serde::{Deserialize, Serialize};

use super::fq::{Fq, FqCtx};
use super::poly::{Poly, PolyRing};
use super::ring::{Field, FrobeniusRing};

/// `num / den` with `den` monic and `gcd(num, den) = 1`. Zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalFunction {
    pub(crate) num: Poly<Fq>,
    pub(crate) den: Poly<Fq>,
}

impl RationalFunction {
    pub fn num(&self) -> &[Fq] {
        &self.num
    }

    pub fn den(&self) -> &[Fq] {
        &self.den
    }

    /// True when the denominator is 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1
    }
}

/// Context for F_q(T); also owns the polynomial ring A = F_q[T].
#[derive(Clone, Debug)]
pub struct RationalFunctionField {
    a: PolyRing<FqCtx>,
}

impl RationalFunctionField {
    pub fn new(fq: FqCtx) -> Self {
        Self { a: PolyRing::new(fq) }
    }

    /// The ring A = F_q[T].
    pub fn poly_ring(&self) -> &PolyRing<FqCtx> {
        &self.a
    }

    pub fn from_poly(&self, p: Poly<Fq>) -> RationalFunction {
        RationalFunction { num: self.a.trim(p), den: vec![Fq::ONE] }
    }

    /// `num / den`, normalized; `None` when `den` is zero.
    pub fn fraction(&self, num: &[Fq], den: &[Fq]) -> Option<RationalFunction> {
        let lead = self.a.lead(den)?;
        let li = self.a.field().inv_fq(lead).unwrap();
        let num = self.a.scale_by(&li, num);
        let den = self.a.scale_by(&li, den);
        Some(self.normalize(num, den))
    }

    fn normalize(&self, num: Poly<Fq>, den: Poly<Fq>) -> RationalFunction {
        if num.is_empty() {
            return RationalFunction { num, den: vec![Fq::ONE] };
        }
        if den.len() == 1 {
            return RationalFunction { num, den };
        }
        let g = self.a.gcd(&num, &den);
        if g.len() == 1 {
            return RationalFunction { num, den };
        }
        RationalFunction {
            num: self.a.div_exact(&num, &g).unwrap(),
            den: self.a.div_exact(&den, &g).unwrap(),
        }
    }

    /// The variable T.
    pub fn t(&self) -> RationalFunction {
        self.from_poly(self.a.x())
    }
}

impl FrobeniusRing for RationalFunctionField {
    type Elem = RationalFunction;

    fn base(&self) -> &FqCtx {
        self.a.field()
    }

    fn zero(&self) -> RationalFunction {
        RationalFunction { num: Vec::new(), den: vec![Fq::ONE] }
    }

    fn one(&self) -> RationalFunction {
        RationalFunction { num: vec![Fq::ONE], den: vec![Fq::ONE] }
    }

    fn is_zero(&self, a: &RationalFunction) -> bool {
        a.num.is_empty()
    }

    fn add(&self, x: &RationalFunction, y: &RationalFunction) -> RationalFunction {
        let a = &self.a;
        if x.den == y.den {
            return self.normalize(a.add_p(&x.num, &y.num), x.den.clone());
        }
        let num = a.add_p(&a.mul_p(&x.num, &y.den), &a.mul_p(&y.num, &x.den));
        self.normalize(num, a.mul_p(&x.den, &y.den))
    }

    fn sub(&self, x: &RationalFunction, y: &RationalFunction) -> RationalFunction {
        self.add(x, &self.neg(y))
    }

    fn neg(&self, x: &RationalFunction) -> RationalFunction {
        RationalFunction { num: self.a.neg_p(&x.num), den: x.den.clone() }
    }

    fn mul(&self, x: &RationalFunction, y: &RationalFunction) -> RationalFunction {
        let a = &self.a;
        if x.is_polynomial() && y.is_polynomial() {
            return self.from_poly(a.mul_p(&x.num, &y.num));
        }
        // Cross-cancel first so the products stay reduced.
        let g1 = a.gcd(&x.num, &y.den);
        let g2 = a.gcd(&y.num, &x.den);
        let n1 = a.div_exact(&x.num, &g1).unwrap_or_default();
        let d2 = a.div_exact(&y.den, &g1).unwrap();
        let n2 = a.div_exact(&y.num, &g2).unwrap_or_default();
        let d1 = a.div_exact(&x.den, &g2).unwrap();
        let num = a.mul_p(&n1, &n2);
        if num.is_empty() {
            return self.zero();
        }
        RationalFunction { num, den: a.mul_p(&d1, &d2) }
    }

    fn from_fq(&self, c: Fq) -> RationalFunction {
        self.from_poly(vec![c])
    }

    fn frobenius(&self, x: &RationalFunction) -> RationalFunction {
        // Coprime stays coprime under the q-power map, and monic stays monic.
        RationalFunction { num: self.a.frobenius_p(&x.num), den: self.a.frobenius_p(&x.den) }
    }

    fn same_as(&self, other: &Self) -> bool {
        self.a.field().same_as(other.a.field())
    }
}

impl Field for RationalFunctionField {
    fn inv(&self, x: &RationalFunction) -> Option<RationalFunction> {
        self.fraction(&x.den, &x.num)
    }
}
