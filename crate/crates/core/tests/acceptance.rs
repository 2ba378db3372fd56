//! Acceptance gate: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use drinfeld_lab::algebra::matrix::{charpoly, Matrix};
use drinfeld_lab::algebra::text::parse_rational;
use drinfeld_lab::algebra::*;
use drinfeld_lab::drinfeld::{
    isogeny_solve, phi_image_with, torsion_frobenius_matrix, DrinfeldModule, IsogenyOptions,
    ReducedModule, TorsionOptions,
};
use drinfeld_lab::experiments::*;
use drinfeld_lab::frobenius::{frob_charpoly, FrobCharpoly, WEIL_SIGN};
use drinfeld_lab::skew::{SkewPoly, SkewRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f3() -> FqCtx {
    FqCtx::prime(3).unwrap()
}

fn module(fq: &FqCtx, cs: &[&str]) -> DrinfeldModule {
    DrinfeldModule::new(fq, cs.iter().map(|c| parse_rational(fq, c).unwrap()).collect()).unwrap()
}

fn place(fq: &FqCtx, s: &str) -> Place {
    Place::new(fq, drinfeld_lab::algebra::text::parse_poly(fq, s).unwrap()).unwrap()
}

fn rand_fq(rng: &mut ChaCha8Rng, fq: &FqCtx) -> Fq {
    fq.elem(rng.gen_range(0..fq.q()))
}

fn rand_poly(rng: &mut ChaCha8Rng, fq: &FqCtx, max_deg: usize) -> Vec<Fq> {
    let len = rng.gen_range(0..=max_deg + 1);
    PolyRing::new(fq.clone()).trim((0..len).map(|_| rand_fq(rng, fq)).collect())
}

fn rand_nonzero_poly(rng: &mut ChaCha8Rng, fq: &FqCtx, max_deg: usize) -> Vec<Fq> {
    loop {
        let p = rand_poly(rng, fq, max_deg);
        if !p.is_empty() {
            return p;
        }
    }
}

/// Ring axioms on one triple; `commutative` adds `ab = ba`.
fn ring_laws<R: FrobeniusRing>(
    r: &R,
    a: &R::Elem,
    b: &R::Elem,
    c: &R::Elem,
    commutative: bool,
) -> bool
where
    R::Elem: PartialEq,
{
    let add_assoc = r.add(&r.add(a, b), c) == r.add(a, &r.add(b, c));
    let add_comm = r.add(a, b) == r.add(b, a);
    let mul_assoc = r.mul(&r.mul(a, b), c) == r.mul(a, &r.mul(b, c));
    let left = r.mul(a, &r.add(b, c)) == r.add(&r.mul(a, b), &r.mul(a, c));
    let right = r.mul(&r.add(a, b), c) == r.add(&r.mul(a, c), &r.mul(b, c));
    let ident = r.add(a, &r.zero()) == *a && r.mul(a, &r.one()) == *a && r.mul(&r.one(), a) == *a;
    let neg = r.is_zero(&r.add(a, &r.neg(a))) && r.sub(a, b) == r.add(a, &r.neg(b));
    let comm = !commutative || r.mul(a, b) == r.mul(b, a);
    let frob = r.frobenius(&r.mul(a, b)) == r.mul(&r.frobenius(a), &r.frobenius(b))
        && r.frobenius(&r.add(a, b)) == r.add(&r.frobenius(a), &r.frobenius(b));
    add_assoc && add_comm && mul_assoc && left && right && ident && neg && comm && frob
}

fn field_inverse<K: Field>(k: &K, a: &K::Elem) -> bool
where
    K::Elem: PartialEq,
{
    k.is_zero(a) || k.mul(a, &k.inv(a).unwrap()) == k.one()
}

fn criterion_1() -> Check {
    const CASES: usize = 500;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f9 = FqCtx::new(3, 2, None).unwrap();
    let f16 = FqCtx::new(2, 4, None).unwrap();
    for k in [&f9, &f16] {
        for i in 0..CASES {
            let (a, b, c) = (rand_fq(&mut rng, k), rand_fq(&mut rng, k), rand_fq(&mut rng, k));
            ensure(ring_laws(k, &a, &b, &c, true) && field_inverse(k, &a), || {
                format!("F_{} case {i}", k.q())
            })?;
        }
    }
    let ext = ResidueField::least(f9.clone(), 3, Provenance::Plain);
    for i in 0..CASES {
        let mut e = || ext.from_coords(&[rand_fq(&mut rng, &f9), rand_fq(&mut rng, &f9), rand_fq(&mut rng, &f9)]);
        let (a, b, c) = (e(), e(), e());
        ensure(ring_laws(&ext, &a, &b, &c, true) && field_inverse(&ext, &a), || {
            format!("F_729 case {i}")
        })?;
    }
    let fq = f3();
    let a_ring = PolyRing::new(fq.clone());
    for i in 0..CASES {
        let (a, b, c) =
            (rand_poly(&mut rng, &fq, 6), rand_poly(&mut rng, &fq, 6), rand_poly(&mut rng, &fq, 6));
        ensure(ring_laws(&a_ring, &a, &b, &c, true), || format!("A case {i}"))?;
    }
    let f = RationalFunctionField::new(fq.clone());
    let rf = |rng: &mut ChaCha8Rng| {
        f.fraction(&rand_poly(rng, &fq, 3), &rand_nonzero_poly(rng, &fq, 3)).unwrap()
    };
    for i in 0..CASES {
        let (a, b, c) = (rf(&mut rng), rf(&mut rng), rf(&mut rng));
        ensure(ring_laws(&f, &a, &b, &c, true) && field_inverse(&f, &a), || format!("F case {i}"))?;
    }
    let s9 = SkewRing::new(f9.clone());
    let sf = SkewRing::new(f.clone());
    for i in 0..CASES {
        let mut sp9 = || s9.trim((0..rng.gen_range(0..5)).map(|_| rand_fq(&mut rng, &f9)).collect());
        let (a, b, c) = (sp9(), sp9(), sp9());
        let ok = s9.mul(&s9.mul(&a, &b), &c) == s9.mul(&a, &s9.mul(&b, &c))
            && s9.mul(&a, &s9.add(&b, &c)) == s9.add(&s9.mul(&a, &b), &s9.mul(&a, &c))
            && s9.mul(&s9.add(&a, &b), &c) == s9.add(&s9.mul(&a, &c), &s9.mul(&b, &c))
            && s9.mul(&a, &s9.one()) == a
            && s9.add(&a, &s9.neg(&a)).is_empty();
        ensure(ok, || format!("F_9{{t}} case {i}"))?;
        let mut spf = || sf.trim((0..rng.gen_range(0..3)).map(|_| rf(&mut rng)).collect());
        let (a, b, c) = (spf(), spf(), spf());
        let ok = sf.mul(&sf.mul(&a, &b), &c) == sf.mul(&a, &sf.mul(&b, &c))
            && sf.mul(&a, &sf.add(&b, &c)) == sf.add(&sf.mul(&a, &b), &sf.mul(&a, &c));
        ensure(ok, || format!("F{{t}} case {i}"))?;
    }
    Ok(format!("{CASES} cases each for F_9, F_16, F_729, A, F, F_9{{t}}, F{{t}}"))
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fq = f3();
    let f = RationalFunctionField::new(fq.clone());
    let sf = SkewRing::new(f.clone());
    for i in 0..200 {
        let a = f.fraction(&rand_poly(&mut rng, &fq, 4), &rand_nonzero_poly(&mut rng, &fq, 4)).unwrap();
        let lhs = sf.mul(&sf.tau_power(1), &sf.constant(a.clone()));
        let rhs = sf.monomial(f.pow(&a, 3), 1);
        ensure(lhs == rhs, || format!("F_3(T) case {i}"))?;
    }
    // F_9 as a degree-2 extension of F_3, so t acts by cubing.
    let f9 = ResidueField::least(fq.clone(), 2, Provenance::Plain);
    let s9 = SkewRing::new(f9.clone());
    for i in 0..200 {
        let a = f9.from_coords(&[rand_fq(&mut rng, &fq), rand_fq(&mut rng, &fq)]);
        let cube = f9.mul(&a, &f9.mul(&a, &a));
        let lhs = s9.mul(&s9.tau_power(1), &s9.constant(a));
        ensure(lhs == s9.monomial(cube, 1), || format!("F_9 case {i}"))?;
    }
    Ok("200 cases over F_3(T) and F_9".into())
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fq = f3();
    let a_ring = PolyRing::new(fq.clone());
    let modules = [module(&fq, &["1"]), module(&fq, &["T^2"]), module(&fq, &["1", "1"]), module(&fq, &["T", "2*T^3"])];
    let mut checked = 0;
    for phi in &modules {
        let (s, phi_t) = phi.sparse_phi_t().expect("polynomial coefficients");
        for i in 0..25 {
            let a = rand_nonzero_poly(&mut rng, &fq, 4);
            let b = rand_nonzero_poly(&mut rng, &fq, 4);
            let ab = a_ring.mul_p(&a, &b);
            let lhs = phi_image_with(&s, &phi_t, &ab);
            let rhs = s.mul(&phi_image_with(&s, &phi_t, &a), &phi_image_with(&s, &phi_t, &b));
            let expected_len = phi.rank() * a_ring.degree(&ab).unwrap() + 1;
            ensure(lhs == rhs && lhs.len() == expected_len, || format!("rank {} case {i}", phi.rank()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs over ranks 1 and 2"))
}

/// Number of roots of the additive polynomial `phi_ell` in the torsion field.
fn torsion_root_count(red: &ReducedModule, ell: &Place, opts: &TorsionOptions) -> Result<(usize, usize), String> {
    let data = torsion_frobenius_matrix(red, ell, opts).map_err(|e| e.to_string())?;
    let l = data.field().clone();
    let q = l.base().q();
    let lx = PolyRing::new(l.clone());
    let phi_ell = red.phi_image(ell.generator());
    let mut f = Vec::new();
    for (i, c) in phi_ell.iter().enumerate() {
        let e = q.pow(i as u32) as usize;
        f.resize(e + 1, l.zero());
        f[e] = data.embed(c);
    }
    let f = lx.trim(f);
    let order = q.pow(l.degree() as u32);
    let xq = lx.pow_mod(&lx.x(), order, &f);
    let g = lx.gcd(&f, &lx.sub_p(&xq, &lx.x()));
    Ok((lx.degree(&g).unwrap_or(0), data.kernel_dim()))
}

fn criterion_4() -> Check {
    let opts = TorsionOptions::default();
    let mut checked = 0;
    for p in [2u64, 3] {
        let fq = FqCtx::prime(p).unwrap();
        let modules = [module(&fq, &["1"]), module(&fq, &["1", "1"]), module(&fq, &["T", "T^2+1"])];
        for phi in &modules {
            let r = phi.rank();
            for ell in monic_irreducibles(&fq, 1) {
                for pl in places_up_to(&fq, 3) {
                    if pl == ell {
                        continue;
                    }
                    let Ok(red) = phi.reduce_at(&pl) else { continue };
                    let (roots, dim) = torsion_root_count(&red, &ell, &opts)?;
                    let expected = (p as usize).pow(r as u32);
                    ensure(roots == expected && dim == r, || {
                        format!("q={p} r={r} P={} l={}: {roots} roots, dim {dim}", pl.render(&fq), ell.render(&fq))
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (module, l, P) triples"))
}

/// `phi_a` from explicit powers of `phi_T`, independent of the library's
/// Horner evaluation.
fn phi_by_powers(red: &ReducedModule, a: &[Fq]) -> SkewPoly<ExtElem<Fq>> {
    let s = red.skew();
    let k = red.field();
    let mut acc = s.zero();
    let mut pw = s.one();
    for c in a {
        acc = s.add(&acc, &s.scale_left(&k.from_fq(*c), &pw));
        pw = s.mul(&pw, red.phi_t());
    }
    acc
}

fn substitution_holds(fq: &FqCtx, red: &ReducedModule, cp: &FrobCharpoly) -> bool {
    let s = red.skew();
    let d = red.place().degree();
    let mut total = s.zero();
    for (i, c) in cp.polynomial(fq).iter().enumerate() {
        total = s.add(&total, &s.shift_right(&phi_by_powers(red, c), i * d));
    }
    total.is_empty()
}

fn criterion_5() -> Check {
    let fq = f3();
    let a_ring = PolyRing::new(fq.clone());
    let mut checked = 0;
    for phi in [module(&fq, &["T", "T^2+1"]), module(&fq, &["1", "T"]), module(&fq, &["1/T", "T+1"])] {
        for pl in places_up_to(&fq, 5) {
            let Ok(red) = phi.reduce_at(&pl) else { continue };
            let cp = frob_charpoly(&red).map_err(|e| e.to_string())?;
            let d = pl.degree();
            let (q0, rem) = a_ring.divrem(cp.norm(), pl.generator()).unwrap();
            let ok = cp.verified
                && substitution_holds(&fq, &red, &cp)
                && a_ring.degree(cp.trace()).is_none_or(|t| t <= d / 2)
                && rem.is_empty()
                && q0.len() == 1;
            ensure(ok, || format!("{} at {}", phi.render(), pl.render(&fq)))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} charpolys re-verified"))
}

fn criterion_6() -> Check {
    let fq = f3();
    let a_ring = PolyRing::new(fq.clone());
    let mut checked = 0;
    for phi in [module(&fq, &["T", "T^2+1"]), module(&fq, &["1", "T"]), module(&fq, &["T+1", "1/(T+2)"])] {
        let psi = phi.weil_partner();
        for pl in places_up_to(&fq, 5) {
            let (Ok(red), Ok(red_psi)) = (phi.reduce_at(&pl), psi.reduce_at(&pl)) else { continue };
            let cp = frob_charpoly(&red).map_err(|e| e.to_string())?;
            // Rank 1: psi_P is a single term c t^d, so Frobenius is c^{-1} P.
            let psi_p = phi_by_powers(&red_psi, pl.generator());
            let d = pl.degree();
            let k = red_psi.field();
            let lead = psi_p.last().and_then(|c| k.as_base(c));
            let single = psi_p.len() == d + 1 && psi_p[..d].iter().all(|c| k.is_zero(c));
            let Some(c) = lead.filter(|_| single) else {
                return Err(format!("psi_P is not a monomial at {}", pl.render(&fq)));
            };
            let mu = fq.mul_fq(fq.inv_fq(c).unwrap(), fq.from_int(WEIL_SIGN));
            let expected = a_ring.scale_by(&mu, pl.generator());
            ensure(cp.norm() == expected.as_slice() && substitution_holds(&fq, &red, &cp), || {
                format!("{} at {}", phi.render(), pl.render(&fq))
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} places, sign {WEIL_SIGN}"))
}

fn criterion_7() -> Check {
    let fq = f3();
    let ell = place(&fq, "T");
    let kl = ell.residue_field(&fq);
    let opts = TorsionOptions::default();
    let mut checked = 0;
    for phi in [module(&fq, &["1"]), module(&fq, &["T", "T^2+1"]), module(&fq, &["1", "T+1"])] {
        for pl in places_up_to(&fq, 4) {
            if pl == ell {
                continue;
            }
            let Ok(red) = phi.reduce_at(&pl) else { continue };
            let data = torsion_frobenius_matrix(&red, &ell, &opts).map_err(|e| e.to_string())?;
            let mtx: &Matrix<ExtElem<Fq>> = data.matrix();
            let from_matrix = charpoly(&kl, mtx).map_err(|e| e.to_string())?;
            let cp = frob_charpoly(&red).map_err(|e| e.to_string())?;
            let reduced: Vec<_> = cp.polynomial(&fq).iter().map(|c| kl.from_poly(c)).collect();
            ensure(from_matrix == reduced, || format!("{} at {}", phi.render(), pl.render(&fq)))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} places"))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut agreed = 0;
    let mut raised = 0;
    for i in 0..200 {
        let p = [3u64, 5, 7][i % 3];
        let k = FqCtx::prime(p).unwrap();
        let n = rng.gen_range(2..p as usize);
        let m = Matrix::new(n, n, (0..n * n).map(|_| rand_fq(&mut rng, &k)).collect()).unwrap();
        let traces = power_traces(&k, &m, n).map_err(|e| e.to_string())?;
        let e = newton_reconstruct(&k, &traces, n).map_err(|e| e.to_string())?;
        ensure(charpoly_from_elementary(&k, &e) == charpoly(&k, &m).unwrap(), || {
            format!("p={p} n={n} case {i}")
        })?;
        agreed += 1;
    }
    for p in [2u64, 3, 5, 7] {
        let k = FqCtx::prime(p).unwrap();
        for n in p as usize..=7 {
            for _ in 0..5 {
                let m = Matrix::new(n, n, (0..n * n).map(|_| rand_fq(&mut rng, &k)).collect()).unwrap();
                let traces = power_traces(&k, &m, n).unwrap();
                let res = newton_reconstruct(&k, &traces, n);
                ensure(
                    res == Err(drinfeld_lab::Error::CharacteristicDivision { k: p as usize, p }),
                    || format!("p={p} n={n} did not raise"),
                )?;
                raised += 1;
            }
        }
    }
    Ok(format!("{agreed} reconstructions, {raised} divisions raised"))
}

fn criterion_9() -> Check {
    let fq = f3();
    let phi = module(&fq, &["T", "T^4"]);
    let a_ring = PolyRing::new(fq.clone());
    let delta = parse_rational(&fq, "T+1").unwrap().num().to_vec();
    let gamma = a_ring.pow_p(&delta, fq.q() - 1);
    let pairs = [
        ("frobenius twist", phi.frobenius_twist()),
        ("twist by (T+1)^2", phi.twist2(&gamma).unwrap()),
    ];
    let mut notes = Vec::new();
    for (name, psi) in &pairs {
        let rep = scan_traces(&phi, psi, 5, ScanMode::Charpoly, Parallelism::Parallel)
            .map_err(|e| e.to_string())?;
        ensure(rep.full_agreement && rep.scanned > 0, || format!("{name}: charpolys differ"))?;
        let iso = isogeny_solve(&phi, psi, 2, &IsogenyOptions::default())
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("{name}: no isogeny"))?;
        let s = phi.skew();
        let lhs = s.mul(&iso.u, phi.phi_t());
        let rhs = s.mul(psi.phi_t(), &iso.u);
        ensure(iso.verified && lhs == rhs && !iso.u.is_empty(), || format!("{name}: u fails"))?;
        notes.push(format!("{name}: u = {}", iso.render(&phi)));
    }
    Ok(notes.join("; "))
}

/// `gamma^{(q^d - 1)/(q - 1)} mod P` by direct exponentiation.
fn symbol_by_power(fq: &FqCtx, gamma: &[Fq], pl: &Place) -> Fq {
    let a = PolyRing::new(fq.clone());
    let q = fq.q();
    let e = (q.pow(pl.degree() as u32) - 1) / (q - 1);
    let v = a.pow_mod(&a.rem_p(gamma, pl.generator()), e, pl.generator());
    assert!(v.len() == 1, "symbol is a nonzero constant");
    v[0]
}

fn criterion_10() -> Check {
    let fq = f3();
    let phi = module(&fq, &["1", "T^2+1"]);
    let gamma = parse_rational(&fq, "T").unwrap().num().to_vec();
    let tw = phi.twist2(&gamma).unwrap();
    let a_ring = PolyRing::new(fq.clone());
    let scans = scan_places(&phi, &tw, 8, Parallelism::Parallel).map_err(|e| e.to_string())?;
    let (mut scanned, mut agree, mut trivial, mut zero_nt) = (0usize, 0usize, 0usize, 0usize);
    for s in &scans {
        let Some((c1, c2)) = s.both() else { continue };
        let chi = symbol_by_power(&fq, &gamma, &s.place);
        let chi_inv = fq.inv_fq(chi).unwrap();
        if s.place.degree() <= 6 {
            let t_ok = a_ring.scale_by(&chi_inv, c1.trace()) == c2.trace();
            let n_ok = a_ring.scale_by(&fq.mul_fq(chi_inv, chi_inv), c1.norm()) == c2.norm();
            ensure(t_ok && n_ok, || format!("relation fails at {}", s.place.render(&fq)))?;
        }
        scanned += 1;
        let is_agree = c1.trace() == c2.trace();
        let is_trivial = chi == Fq::ONE;
        let is_zero_nt = c1.trace().is_empty() && !is_trivial;
        ensure(is_agree == (is_trivial || is_zero_nt), || {
            format!("decomposition fails at {}", s.place.render(&fq))
        })?;
        agree += is_agree as usize;
        trivial += is_trivial as usize;
        zero_nt += is_zero_nt as usize;
    }
    let rep = twist_agreement(&phi, &gamma, 8, Parallelism::Parallel).map_err(|e| e.to_string())?;
    ensure(
        rep.trace_relation_holds
            && rep.norm_relation_holds
            && rep.decomposition_exact
            && rep.scanned == scanned
            && rep.agreeing == agree
            && rep.trivial_symbol == trivial
            && rep.zero_trace_nontrivial == zero_nt,
        || "report disagrees with the per-place oracle".into(),
    )?;
    let density = agree as f64 / scanned as f64;
    let zero_density = zero_nt as f64 / scanned as f64;
    let target = 0.5 + zero_density;
    ensure((density - target).abs() <= 0.1, || format!("density {density:.4} vs {target:.4}"))?;
    Ok(format!(
        "{scanned} places, agreement {density:.4} = {:.4} + {zero_density:.4}, upper {:.4}",
        trivial as f64 / scanned as f64,
        rep.agreement_density.upper_density
    ))
}

fn criterion_11() -> Check {
    let fq = f3();
    let c = DrinfeldModule::carlitz(&fq);
    let ell = place(&fq, "T");
    let rep = chebotarev_report(&c, &ell, 8, Granularity::Class, &ChebotarevOptions::default())
        .map_err(|e| e.to_string())?;
    // Frobenius at P acts on C[T] as P mod T.
    let mut counts = [0usize; 3];
    for pl in places_up_to(&fq, 8) {
        if pl != ell {
            counts[pl.generator()[0].value() as usize] += 1;
        }
    }
    let n = counts[1] + counts[2];
    ensure(rep.group_order == 2 && rep.places_scanned == n && rep.predicted_sum == 1.0, || {
        format!("group order {} over {} places", rep.group_order, rep.places_scanned)
    })?;
    for row in &rep.rows {
        let v: usize = row.representative[0][0].parse().map_err(|_| "bad label".to_string())?;
        let oracle = counts[v] as f64 / n as f64;
        ensure(row.observed == counts[v] && (row.empirical - 0.5).abs() <= 0.1, || {
            format!("class {v}: {} vs oracle {oracle}", row.empirical)
        })?;
    }
    Ok(format!(
        "{n} places, frequencies {:?}",
        rep.rows.iter().map(|r| format!("{:.4}", r.empirical)).collect::<Vec<_>>()
    ))
}

/// Share of pairs `(g, chi g)`, `g` in GL_2(F_3) and `chi = +-1`, with equal
/// charpolys, by brute-force enumeration of GL_2(F_3).
fn gl2_twist_proportion() -> (usize, f64) {
    let mut gl2 = 0;
    let mut trace_zero = 0;
    for v in 0..81u32 {
        let [a, b, c, d] = [v % 3, v / 3 % 3, v / 9 % 3, v / 27];
        if (a * d + 2 * b * c) % 3 == 0 {
            continue;
        }
        gl2 += 1;
        trace_zero += ((a + d) % 3 == 0) as usize;
    }
    (2 * gl2, 0.5 + 0.5 * trace_zero as f64 / gl2 as f64)
}

fn criterion_12() -> Check {
    let fq = f3();
    let ell = place(&fq, "T");
    let phi = module(&fq, &["1", "T^2+1"]);
    let tw = phi.twist2(parse_rational(&fq, "T").unwrap().num()).unwrap();
    let opts = ChebotarevOptions::default();
    let same = smo_experiment(&phi, &phi, &ell, 6, &opts).map_err(|e| e.to_string())?;
    ensure(same.exact_proportion == 1.0 && same.deviation <= 0.1, || {
        format!("(phi, phi): exact {} dev {}", same.exact_proportion, same.deviation)
    })?;
    let twisted = smo_experiment(&phi, &tw, &ell, 6, &opts).map_err(|e| e.to_string())?;
    let (order, oracle) = gl2_twist_proportion();
    ensure(
        twisted.product_group_order == order
            && (twisted.exact_proportion - oracle).abs() < 1e-12
            && twisted.deviation <= 0.1,
        || {
            format!(
                "(phi, phi^T): |G| {} exact {} oracle {oracle} empirical {}",
                twisted.product_group_order, twisted.exact_proportion, twisted.empirical_frequency
            )
        },
    )?;
    Ok(format!(
        "(phi, phi): exact 1.0, empirical {:.4}; (phi, phi^T): |G| = {order}, exact {oracle:.4}, empirical {:.4} over {} places",
        same.empirical_frequency, twisted.empirical_frequency, twisted.places_scanned
    ))
}

fn criterion_13() -> Check {
    let fq = f3();
    let phi = module(&fq, &["T", "T^2+1"]);
    let tw = phi.twist2(&[Fq::ZERO, Fq::ONE]).unwrap();
    let scan = |par| {
        let r = scan_traces(&phi, &tw, 5, ScanMode::Charpoly, par).unwrap();
        (serde_json::to_string_pretty(&r).unwrap(), r.csv())
    };
    let first = scan(Parallelism::Parallel);
    ensure(first == scan(Parallelism::Parallel), || "scan reruns differ".into())?;
    ensure(first == scan(Parallelism::Sequential), || "sequential scan differs".into())?;
    let ell = place(&fq, "T");
    let cheb = || {
        let r = chebotarev_report(&phi, &ell, 4, Granularity::Charpoly, &ChebotarevOptions::default())
            .unwrap();
        serde_json::to_string_pretty(&r).unwrap()
    };
    ensure(cheb() == cheb(), || "chebotarev reruns differ".into())?;
    let tw_json = || {
        serde_json::to_string_pretty(&twist_agreement(&phi, &[Fq::ZERO, Fq::ONE], 5, Parallelism::Parallel).unwrap())
            .unwrap()
    };
    ensure(tw_json() == tw_json(), || "twist reruns differ".into())?;
    Ok(format!("scan ({} bytes), chebotarev and twist reports byte-identical", first.0.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, u64); 13] = [
        ("algebra soundness", criterion_1, 10),
        ("skew commutation rule", criterion_2, 1),
        ("homomorphism", criterion_3, 10),
        ("torsion cardinality", criterion_4, 60),
        ("charpoly verification", criterion_5, 120),
        ("Weil determinant identity", criterion_6, 120),
        ("mod-l consistency", criterion_7, 120),
        ("Newton engine", criterion_8, 10),
        ("isogeny pipeline", criterion_9, 60),
        ("twist character relation", criterion_10, 300),
        ("Chebotarev frequencies", criterion_11, 120),
        ("finite-level multiplicity one", criterion_12, 300),
        ("determinism", criterion_13, 120),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over the {budget}s budget; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {name}: {status} ({:.2}s) {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
