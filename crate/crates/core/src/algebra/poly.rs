//! Dense univariate polynomials over a field.
//!
//! A polynomial is a `Vec` of coefficients in ascending degree with no
//! trailing zeros; the zero polynomial is the empty vector. `PolyRing<FqCtx>`
//! is the ring A = F_q[T]; the same code serves polynomial rings over residue
//! fields when building torsion fields.

use super::fq::{Fq, FqCtx};
use super::ring::{Field, FiniteField, FrobeniusRing};

#[derive(Clone, Debug)]
pub struct PolyRing<K: Field> {
    field: K,
}

pub type Poly<E> = Vec<E>;

impl<K: Field> PolyRing<K> {
    pub fn new(field: K) -> Self {
        Self { field }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn trim(&self, mut a: Poly<K::Elem>) -> Poly<K::Elem> {
        while a.last().is_some_and(|c| self.field.is_zero(c)) {
            a.pop();
        }
        a
    }

    pub fn degree(&self, a: &[K::Elem]) -> Option<usize> {
        a.iter().rposition(|c| !self.field.is_zero(c))
    }

    pub fn lead(&self, a: &[K::Elem]) -> Option<K::Elem> {
        self.degree(a).map(|d| a[d].clone())
    }

    pub fn constant(&self, c: K::Elem) -> Poly<K::Elem> {
        self.trim(vec![c])
    }

    /// `c * X^k`.
    pub fn monomial(&self, c: K::Elem, k: usize) -> Poly<K::Elem> {
        if self.field.is_zero(&c) {
            return Vec::new();
        }
        let mut v = vec![self.field.zero(); k + 1];
        v[k] = c;
        v
    }

    pub fn x(&self) -> Poly<K::Elem> {
        self.monomial(self.field.one(), 1)
    }

    pub fn is_monic(&self, a: &[K::Elem]) -> bool {
        self.lead(a).is_some_and(|c| self.field.is_one(&c))
    }

    pub fn monic(&self, a: &[K::Elem]) -> Poly<K::Elem> {
        match self.lead(a) {
            None => Vec::new(),
            Some(l) => {
                let li = self.field.inv(&l).expect("nonzero leading coefficient");
                self.scale_by(&li, a)
            }
        }
    }

    pub fn scale_by(&self, c: &K::Elem, a: &[K::Elem]) -> Poly<K::Elem> {
        self.trim(a.iter().map(|x| self.field.mul(c, x)).collect())
    }

    /// Multiplies by `X^k`.
    pub fn shift(&self, a: &[K::Elem], k: usize) -> Poly<K::Elem> {
        if a.is_empty() {
            return Vec::new();
        }
        let mut v = vec![self.field.zero(); k];
        v.extend_from_slice(a);
        v
    }

    pub fn add_p(&self, a: &[K::Elem], b: &[K::Elem]) -> Poly<K::Elem> {
        let f = &self.field;
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => f.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        self.trim(out)
    }

    pub fn neg_p(&self, a: &[K::Elem]) -> Poly<K::Elem> {
        a.iter().map(|x| self.field.neg(x)).collect()
    }

    pub fn sub_p(&self, a: &[K::Elem], b: &[K::Elem]) -> Poly<K::Elem> {
        let f = &self.field;
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => f.sub(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => f.neg(y),
                (None, None) => unreachable!(),
            })
            .collect();
        self.trim(out)
    }

    pub fn mul_p(&self, a: &[K::Elem], b: &[K::Elem]) -> Poly<K::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let f = &self.field;
        let mut out = vec![f.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = f.mul(x, y);
                out[i + j] = f.add(&out[i + j], &t);
            }
        }
        self.trim(out)
    }

    /// Euclidean division; `None` when `b` is zero.
    pub fn divrem(
        &self,
        a: &[K::Elem],
        b: &[K::Elem],
    ) -> Option<(Poly<K::Elem>, Poly<K::Elem>)> {
        let f = &self.field;
        let db = self.degree(b)?;
        let mut r = self.trim(a.to_vec());
        let Some(da) = self.degree(&r) else {
            return Some((Vec::new(), Vec::new()));
        };
        if da < db {
            return Some((Vec::new(), r));
        }
        let li = f.inv(&b[db]).expect("nonzero leading coefficient");
        let mut quot = vec![f.zero(); da - db + 1];
        for k in (db..=da).rev() {
            if k >= r.len() || f.is_zero(&r[k]) {
                continue;
            }
            let c = f.mul(&r[k], &li);
            for (j, y) in b[..=db].iter().enumerate() {
                let t = f.mul(&c, y);
                r[k - db + j] = f.sub(&r[k - db + j], &t);
            }
            quot[k - db] = c;
        }
        r.truncate(db);
        Some((self.trim(quot), self.trim(r)))
    }

    pub fn rem_p(&self, a: &[K::Elem], b: &[K::Elem]) -> Poly<K::Elem> {
        self.divrem(a, b).expect("division by zero polynomial").1
    }

    /// Exact quotient; `None` if `b` does not divide `a`.
    pub fn div_exact(&self, a: &[K::Elem], b: &[K::Elem]) -> Option<Poly<K::Elem>> {
        let (q, r) = self.divrem(a, b)?;
        r.is_empty().then_some(q)
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, a: &[K::Elem], b: &[K::Elem]) -> Poly<K::Elem> {
        let mut x = self.trim(a.to_vec());
        let mut y = self.trim(b.to_vec());
        while !y.is_empty() {
            let r = self.rem_p(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Extended gcd: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn xgcd(
        &self,
        a: &[K::Elem],
        b: &[K::Elem],
    ) -> (Poly<K::Elem>, Poly<K::Elem>, Poly<K::Elem>) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        let (mut s0, mut s1) = (self.constant(f.one()), Vec::new());
        let (mut t0, mut t1) = (Vec::new(), self.constant(f.one()));
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1).unwrap();
            let s = self.sub_p(&s0, &self.mul_p(&q, &s1));
            let t = self.sub_p(&t0, &self.mul_p(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match self.lead(&r0) {
            None => (r0, s0, t0),
            Some(l) => {
                let li = f.inv(&l).unwrap();
                (self.scale_by(&li, &r0), self.scale_by(&li, &s0), self.scale_by(&li, &t0))
            }
        }
    }

    /// Inverse of `a` modulo `m`, if it exists.
    pub fn inv_mod(&self, a: &[K::Elem], m: &[K::Elem]) -> Option<Poly<K::Elem>> {
        let (g, s, _) = self.xgcd(a, m);
        (self.degree(&g) == Some(0)).then(|| self.rem_p(&s, m))
    }

    pub fn mul_mod(&self, a: &[K::Elem], b: &[K::Elem], m: &[K::Elem]) -> Poly<K::Elem> {
        self.rem_p(&self.mul_p(a, b), m)
    }

    pub fn pow_mod(&self, a: &[K::Elem], mut e: u64, m: &[K::Elem]) -> Poly<K::Elem> {
        let mut base = self.rem_p(a, m);
        let mut acc = self.rem_p(&self.constant(self.field.one()), m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_mod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_mod(&base, &base, m);
            }
        }
        acc
    }

    pub fn pow_p(&self, a: &[K::Elem], mut e: u64) -> Poly<K::Elem> {
        let mut base = a.to_vec();
        let mut acc = self.constant(self.field.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_p(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_p(&base, &base);
            }
        }
        acc
    }

    /// Horner evaluation at a point of the coefficient field.
    pub fn eval(&self, a: &[K::Elem], x: &K::Elem) -> K::Elem {
        let f = &self.field;
        a.iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// `a(X)^q` computed as `sum c_i^q X^{q i}`.
    pub fn frobenius_p(&self, a: &[K::Elem]) -> Poly<K::Elem> {
        let f = &self.field;
        if a.is_empty() {
            return Vec::new();
        }
        let q = f.base().q() as usize;
        let mut out = vec![f.zero(); (a.len() - 1) * q + 1];
        for (i, c) in a.iter().enumerate() {
            out[i * q] = f.frobenius(c);
        }
        out
    }
}

impl<K: FiniteField> PolyRing<K> {
    /// Deterministic irreducibility test: `f` of degree `n` is irreducible
    /// iff `gcd(X^{Q^i} - X, f) = 1` for `1 <= i <= n/2`, where Q = |K|.
    pub fn is_irreducible(&self, f: &[K::Elem]) -> bool {
        let Some(n) = self.degree(f) else {
            return false;
        };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic(f);
        let x = self.x();
        let qmap = QPowerMap::new(self, &f);
        let mut h = self.rem_p(&x, &f);
        for _ in 1..=n / 2 {
            h = qmap.apply_field_power(self, &h);
            let g = self.gcd(&self.sub_p(&h, &x), &f);
            if self.degree(&g) != Some(0) {
                return false;
            }
        }
        true
    }

    /// The lexicographically least monic irreducible of degree `n`, with
    /// coefficients compared from degree `n - 1` down to the constant term.
    pub fn least_monic_irreducible(&self, n: usize) -> Poly<K::Elem> {
        assert!(n >= 1);
        let k = &self.field;
        let d = k.degree();
        let q = k.base().q() as u32;
        // Digits of all lower coefficients, most significant first.
        let mut digits = vec![0u32; n * d];
        loop {
            let mut f = Vec::with_capacity(n + 1);
            for i in 0..n {
                // Coefficient of X^i sits at block n-1-i; its coordinate
                // j (of d) is ordered with the constant coordinate last.
                let block = &digits[(n - 1 - i) * d..(n - i) * d];
                let coords: Vec<_> =
                    block.iter().rev().map(|&v| k.base().elem(v as u64)).collect();
                f.push(k.from_coords(&coords));
            }
            f.push(k.one());
            if self.is_irreducible(&f) {
                return f;
            }
            // Increment the digit counter.
            let mut pos = digits.len();
            loop {
                assert!(pos > 0, "no irreducible polynomial of degree {n}");
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < q {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }
}

impl<K: FiniteField> PolyRing<K> {
    /// Roots of a squarefree polynomial that splits into linear factors over
    /// K, sorted by F_q-coordinates. Splits with `gcd(f, Tr(delta X) - c)`
    /// for `delta` running over an F_q-basis of K, so it is deterministic.
    pub fn split_roots(&self, f: &[K::Elem]) -> Vec<K::Elem> {
        let k = &self.field;
        let mut pending = vec![self.monic(f)];
        let mut roots = Vec::new();
        while let Some(g) = pending.pop() {
            match self.degree(&g) {
                None | Some(0) => continue,
                Some(1) => {
                    roots.push(k.neg(&g[0]));
                    continue;
                }
                Some(_) => {}
            }
            let qmap = QPowerMap::new(self, &g);
            let n = k.degree();
            let mut split = false;
            for b in 0..n {
                let mut coords = vec![Fq::ZERO; n];
                coords[b] = Fq::ONE;
                let delta = k.from_coords(&coords);
                let mut x = self.rem_p(&self.monomial(delta, 1), &g);
                let mut tr = Vec::new();
                for _ in 0..n {
                    tr = self.add_p(&tr, &x);
                    x = qmap.apply(self, &x);
                }
                let parts: Vec<_> = k
                    .base()
                    .elements()
                    .map(|c| self.gcd(&g, &self.sub_p(&tr, &self.constant(k.from_fq(c)))))
                    .filter(|h| !h.is_empty() && h.len() > 1)
                    .collect();
                if parts.len() > 1 {
                    pending.extend(parts);
                    split = true;
                    break;
                }
            }
            assert!(split, "polynomial does not split into distinct linear factors");
        }
        roots.sort_by_cached_key(|r| k.to_coords(r));
        roots
    }
}

/// The map `h -> h^q` on K[X]/(f), which is F_q-semilinear. Precomputes
/// `X^{q i} mod f` so each application costs one pass over the coefficients.
pub(crate) struct QPowerMap<E> {
    xq_powers: Vec<Poly<E>>,
    field_degree: usize,
}

impl<E: Clone + PartialEq> QPowerMap<E> {
    pub(crate) fn new<K>(ring: &PolyRing<K>, f: &[E]) -> Self
    where
        K: FiniteField<Elem = E>,
    {
        let n = ring.degree(f).expect("nonzero modulus");
        let q = ring.field.base().q();
        let xq = ring.pow_mod(&ring.x(), q, f);
        let mut xq_powers = Vec::with_capacity(n);
        let mut cur = ring.rem_p(&ring.constant(ring.field.one()), f);
        for _ in 0..n {
            xq_powers.push(cur.clone());
            cur = ring.mul_mod(&cur, &xq, f);
        }
        Self { xq_powers, field_degree: ring.field.degree() }
    }

    /// `h^q mod f`.
    pub(crate) fn apply<K>(&self, ring: &PolyRing<K>, h: &[E]) -> Poly<E>
    where
        K: FiniteField<Elem = E>,
    {
        let k = &ring.field;
        let n = self.xq_powers.len();
        let mut out = vec![k.zero(); n];
        for (i, c) in h.iter().enumerate() {
            if k.is_zero(c) {
                continue;
            }
            let cq = k.frobenius(c);
            for (j, y) in self.xq_powers[i].iter().enumerate() {
                out[j] = k.add(&out[j], &k.mul(&cq, y));
            }
        }
        ring.trim(out)
    }

    /// `h^Q mod f` with Q = |K| = q^deg(K).
    pub(crate) fn apply_field_power<K>(&self, ring: &PolyRing<K>, h: &[E]) -> Poly<E>
    where
        K: FiniteField<Elem = E>,
    {
        let mut out = h.to_vec();
        for _ in 0..self.field_degree {
            out = self.apply(ring, &out);
        }
        out
    }
}

impl<K: Field> FrobeniusRing for PolyRing<K> {
    type Elem = Poly<K::Elem>;

    fn base(&self) -> &FqCtx {
        self.field.base()
    }
    fn zero(&self) -> Self::Elem {
        Vec::new()
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.field.one())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.degree(a).is_none()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add_p(a, b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub_p(a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.neg_p(a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul_p(a, b)
    }
    fn from_fq(&self, c: crate::algebra::fq::Fq) -> Self::Elem {
        self.constant(self.field.from_fq(c))
    }
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.frobenius_p(a)
    }
    fn same_as(&self, other: &Self) -> bool {
        self.field.same_as(&other.field)
    }
}
