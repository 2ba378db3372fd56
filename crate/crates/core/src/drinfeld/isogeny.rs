//! Isogenies `u` with `u phi1_T = phi2_T u`, searched by linear algebra.
//!
//! Writing `u = sum u_k t^k`, the coefficient of `t^n` in
//! `u phi1_T - phi2_T u` gives, in generic characteristic,
//!
//! ```text
//! u_n (T^{q^n} - T) = sum_{j=1}^{r} ( g2_j u_{n-j}^{q^j} - u_{n-j} g1_j^{q^{n-j}} )
//! ```
//!
//! so `u_0` determines `u`, and `deg u <= N` iff `u_{N+1} = ... = u_{N+r} = 0`.
//! The map `u_0 -> (u_{N+1}, ..., u_{N+r})` is F_q-linear (not F-linear), so
//! candidates `u_0 = n(T)/D` with `deg n <= B` give an F_q-linear system.

use serde::Serialize;

use super::DrinfeldModule;
use crate::algebra::fq::Fq;
use crate::algebra::matrix::{matrix_kernel, Matrix};
use crate::algebra::place::places_up_to;
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::rational::{RationalFunction, RationalFunctionField};
use crate::algebra::ring::{Field, FrobeniusRing};
use crate::algebra::text::render_skew_rational;
use crate::error::{Error, Result};
use crate::frobenius::frob_charpoly;
use crate::skew::SkewPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsogenyOptions {
    /// Largest t-degree tried by [`isogeny_search`].
    pub max_degree: usize,
    /// Compare Frobenius charpolys at places up to this degree first; any
    /// difference proves that no isogeny exists.
    pub trace_prefilter: Option<usize>,
    /// Extra room in the degree of the numerator of `u_0`.
    pub extra_numerator_degree: usize,
}

impl Default for IsogenyOptions {
    fn default() -> Self {
        Self { max_degree: 6, trace_prefilter: Some(3), extra_numerator_degree: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Isogeny {
    pub u: SkewPoly<RationalFunction>,
    pub degree: usize,
    /// Dimension over F_q of the candidate solutions found at this degree.
    pub solution_dim: usize,
    pub verified: bool,
}

impl Isogeny {
    pub fn render(&self, phi: &DrinfeldModule) -> String {
        render_skew_rational(phi.fq(), &self.u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsogenySearch {
    pub isogeny: Option<Isogeny>,
    /// Largest degree examined.
    pub searched_up_to: usize,
    /// A place where the Frobenius charpolys differ, if the prefilter found one.
    pub obstruction: Option<String>,
}

/// Monic `h` with `h^k = f`, if it exists.
fn monic_root(a: &PolyRing<crate::algebra::FqCtx>, f: &[Fq], k: u64) -> Option<Poly<Fq>> {
    let fq = a.field();
    let deg = a.degree(f)?;
    if !(deg as u64).is_multiple_of(k) || !a.is_monic(f) {
        return None;
    }
    let m = deg / k as usize;
    let kinv = fq.inv_fq(fq.from_int((k % fq.p()) as i64))?;
    let mut h = a.monomial(Fq::ONE, m);
    for j in 1..=m {
        let diff = a.sub_p(f, &a.pow_p(&h, k));
        let c = diff.get(deg - j).copied().unwrap_or(Fq::ZERO);
        if !c.is_zero() {
            h = a.add_p(&h, &a.monomial(fq.mul_fq(c, kinv), m - j));
        }
    }
    (a.pow_p(&h, k) == f).then_some(h)
}

struct Recursion<'a> {
    f: &'a RationalFunctionField,
    phi1: &'a DrinfeldModule,
    phi2: &'a DrinfeldModule,
}

impl Recursion<'_> {
    /// `u_0, ..., u_upto` determined by `u_0`.
    fn sequence(&self, u0: RationalFunction, upto: usize) -> Vec<RationalFunction> {
        let f = self.f;
        let r = self.phi1.rank();
        let a = f.poly_ring();
        let t = a.x();
        let mut u = vec![u0];
        for n in 1..=upto {
            let mut acc = f.zero();
            for j in 1..=r.min(n) {
                let prev = &u[n - j];
                if f.is_zero(prev) {
                    continue;
                }
                let g2 = &self.phi2.coeffs()[j - 1];
                let g1 = &self.phi1.coeffs()[j - 1];
                let lhs = f.mul(g2, &f.frobenius_iter(prev, j));
                let rhs = f.mul(prev, &f.frobenius_iter(g1, n - j));
                acc = f.add(&acc, &f.sub(&lhs, &rhs));
            }
            let q_n = f.base().q().pow(n as u32);
            let den = a.sub_p(&a.monomial(Fq::ONE, q_n as usize), &t);
            u.push(f.div(&acc, &f.from_poly(den)).unwrap());
        }
        u
    }
}

/// Looks for a nonzero isogeny of t-degree at most `n_max` from `phi1` to
/// `phi2`. Returns `None` when no candidate within the search bounds works.
pub fn isogeny_solve(
    phi1: &DrinfeldModule,
    phi2: &DrinfeldModule,
    n_max: usize,
    opts: &IsogenyOptions,
) -> Result<Option<Isogeny>> {
    if phi1.rank() != phi2.rank() {
        return Err(Error::RankMismatch(phi1.rank(), phi2.rank()));
    }
    if !phi1.field().same_as(phi2.field()) {
        return Err(Error::MixedContexts);
    }
    let f = phi1.field();
    let a = f.poly_ring();
    let fq = f.base();
    let r = phi1.rank();

    // Denominator guess: all coefficient denominators, and the denominator
    // of the root u_0 = (g1_r / g2_r)^{1/(q^r - 1)} that a degree-0
    // isogeny would need.
    let mut den = vec![Fq::ONE];
    let mut max_num = 0;
    for c in phi1.coeffs().iter().chain(phi2.coeffs()) {
        den = a.mul_p(&den, &a.div_exact(c.den(), &a.gcd(&den, c.den())).unwrap());
        max_num = max_num.max(a.degree(c.num()).unwrap_or(0));
    }
    let k = fq.q().pow(r as u32) - 1;
    let ratio = f.div(&phi1.coeffs()[r - 1], &phi2.coeffs()[r - 1]).unwrap();
    let mut root_num = 0;
    if let Some(h) = monic_root(a, ratio.den(), k) {
        den = a.mul_p(&den, &a.div_exact(&h, &a.gcd(&den, &h)).unwrap());
        root_num = a.degree(ratio.num()).unwrap_or(0) / k as usize;
    }
    let bound = a.degree(&den).unwrap() + root_num + n_max * (max_num + 1) + opts.extra_numerator_degree;

    let rec = Recursion { f, phi1, phi2 };
    let den_rf = f.from_poly(den.clone());
    let tails: Vec<Vec<RationalFunction>> = (0..=bound)
        .map(|j| {
            let u0 = f.div(&f.from_poly(a.monomial(Fq::ONE, j)), &den_rf).unwrap();
            rec.sequence(u0, n_max + r).split_off(n_max + 1)
        })
        .collect();

    // One block of F_q-equations per constrained coefficient.
    let mut rows: Vec<Vec<Fq>> = Vec::new();
    for n in 0..r {
        let mut l = vec![Fq::ONE];
        for t in &tails {
            let d = t[n].den();
            l = a.mul_p(&l, &a.div_exact(d, &a.gcd(&l, d)).unwrap());
        }
        let nums: Vec<Poly<Fq>> = tails
            .iter()
            .map(|t| a.mul_p(t[n].num(), &a.div_exact(&l, t[n].den()).unwrap()))
            .collect();
        let width = nums.iter().map(Vec::len).max().unwrap_or(0);
        for e in 0..width {
            rows.push(nums.iter().map(|p| p.get(e).copied().unwrap_or(Fq::ZERO)).collect());
        }
    }
    let kernel = if rows.is_empty() {
        (0..=bound)
            .map(|j| (0..=bound).map(|i| if i == j { Fq::ONE } else { Fq::ZERO }).collect())
            .collect()
    } else {
        matrix_kernel(fq, &Matrix::from_rows(rows)?)
    };
    let Some(x) = kernel.first() else {
        return Ok(None);
    };

    let u0 = f.div(&f.from_poly(a.trim(x.clone())), &den_rf).unwrap();
    let mut u = rec.sequence(u0, n_max);
    while u.last().is_some_and(|c| f.is_zero(c)) {
        u.pop();
    }
    let s = phi1.skew();
    let verified = s.mul(&u, phi1.phi_t()) == s.mul(phi2.phi_t(), &u);
    if !verified {
        return Err(Error::Anomaly("isogeny candidate failed verification".into()));
    }
    let degree = u.len() - 1;
    Ok(Some(Isogeny { u, degree, solution_dim: kernel.len(), verified }))
}

/// Sweeps `N = 0, 1, ..., max_degree` and returns the least-degree isogeny.
pub fn isogeny_search(
    phi1: &DrinfeldModule,
    phi2: &DrinfeldModule,
    opts: &IsogenyOptions,
) -> Result<IsogenySearch> {
    if phi1.rank() != phi2.rank() {
        return Err(Error::RankMismatch(phi1.rank(), phi2.rank()));
    }
    if let Some(dmax) = opts.trace_prefilter {
        for place in places_up_to(phi1.fq(), dmax) {
            let (Ok(r1), Ok(r2)) = (phi1.reduce_at(&place), phi2.reduce_at(&place)) else {
                continue;
            };
            if frob_charpoly(&r1)?.coeffs != frob_charpoly(&r2)?.coeffs {
                return Ok(IsogenySearch {
                    isogeny: None,
                    searched_up_to: 0,
                    obstruction: Some(place.render(phi1.fq())),
                });
            }
        }
    }
    for n in 0..=opts.max_degree {
        if let Some(iso) = isogeny_solve(phi1, phi2, n, opts)? {
            return Ok(IsogenySearch { isogeny: Some(iso), searched_up_to: n, obstruction: None });
        }
    }
    Ok(IsogenySearch { isogeny: None, searched_up_to: opts.max_degree, obstruction: None })
}
