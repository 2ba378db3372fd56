use drinfeld_lab::algebra::matrix::{charpoly, inverse, mat_mul, mat_vec, rank};
use drinfeld_lab::algebra::text::{parse_skew, render_skew_rational};
use drinfeld_lab::algebra::*;
use drinfeld_lab::drinfeld::DrinfeldModule;
use drinfeld_lab::experiments::*;
use drinfeld_lab::skew::SkewRing;
use proptest::prelude::*;

fn f3() -> FqCtx {
    FqCtx::prime(3).unwrap()
}

fn f9() -> FqCtx {
    FqCtx::new(3, 2, None).unwrap()
}

fn elems(fq: &FqCtx, v: &[u64]) -> Vec<Fq> {
    v.iter().map(|&c| fq.elem(c % fq.q())).collect()
}

fn poly(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..3, 0..=max_len)
}

fn nonzero_poly(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..3, 1..=max_len).prop_map(|mut v| {
        *v.last_mut().unwrap() = 1 + v.last().unwrap() % 2;
        v
    })
}

proptest! {
    #[test]
    fn f9_field_laws(a in 0u64..9, b in 0u64..9, c in 0u64..9) {
        let k = f9();
        let (a, b, c) = (k.elem(a), k.elem(b), k.elem(c));
        prop_assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
        prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
        prop_assert_eq!(k.add(&a, &k.neg(&a)), k.zero());
        if !a.is_zero() {
            prop_assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), k.one());
        }
        prop_assert_eq!(k.frobenius(&k.add(&a, &b)), k.add(&k.frobenius(&a), &k.frobenius(&b)));
    }

    #[test]
    fn extension_field_laws(a in prop::collection::vec(0u64..3, 4), b in prop::collection::vec(0u64..3, 4)) {
        let base = f3();
        let k = ResidueField::least(base.clone(), 4, Provenance::Plain);
        let (x, y) = (k.from_coords(&elems(&base, &a)), k.from_coords(&elems(&base, &b)));
        prop_assert_eq!(k.frobenius(&k.mul(&x, &y)), k.mul(&k.frobenius(&x), &k.frobenius(&y)));
        prop_assert_eq!(k.frobenius_iter(&x, 4), x.clone());
        if !k.is_zero(&y) {
            prop_assert_eq!(k.mul(&k.div(&x, &y).unwrap(), &y), x.clone());
        }
        prop_assert_eq!(k.to_coords(&x), elems(&base, &a));
    }

    #[test]
    fn polynomial_division(a in poly(8), b in nonzero_poly(5)) {
        let fq = f3();
        let r = PolyRing::new(fq.clone());
        let (a, b) = (r.trim(elems(&fq, &a)), r.trim(elems(&fq, &b)));
        let (q, rem) = r.divrem(&a, &b).unwrap();
        prop_assert_eq!(r.add_p(&r.mul_p(&q, &b), &rem), a.clone());
        prop_assert!(r.degree(&rem).is_none_or(|d| d < r.degree(&b).unwrap()));
        let g = r.gcd(&a, &b);
        prop_assert!(r.rem_p(&b, &g).is_empty());
        prop_assert!(r.rem_p(&a, &g).is_empty());
    }

    #[test]
    fn rational_field_laws(a in poly(3), b in nonzero_poly(3), c in poly(3), d in nonzero_poly(3)) {
        let fq = f3();
        let f = RationalFunctionField::new(fq.clone());
        let x = f.fraction(&elems(&fq, &a), &elems(&fq, &b)).unwrap();
        let y = f.fraction(&elems(&fq, &c), &elems(&fq, &d)).unwrap();
        prop_assert_eq!(f.sub(&f.add(&x, &y), &y), x.clone());
        prop_assert_eq!(f.mul(&x, &y), f.mul(&y, &x));
        if !f.is_zero(&y) {
            prop_assert_eq!(f.mul(&f.div(&x, &y).unwrap(), &y), x.clone());
        }
        prop_assert_eq!(f.frobenius(&x), f.pow(&x, 3));
    }

    #[test]
    fn skew_ring_laws(f in prop::collection::vec(poly(2), 0..3), g in prop::collection::vec(poly(2), 0..3), h in prop::collection::vec(poly(2), 0..3)) {
        let fq = f3();
        let field = RationalFunctionField::new(fq.clone());
        let s = SkewRing::new(field.clone());
        let lift = |v: &Vec<Vec<u64>>| s.trim(v.iter().map(|c| field.from_poly(field.poly_ring().trim(elems(&fq, c)))).collect());
        let (f, g, h) = (lift(&f), lift(&g), lift(&h));
        prop_assert_eq!(s.mul(&s.mul(&f, &g), &h), s.mul(&f, &s.mul(&g, &h)));
        prop_assert_eq!(s.mul(&f, &s.add(&g, &h)), s.add(&s.mul(&f, &g), &s.mul(&f, &h)));
        prop_assert_eq!(s.mul(&s.add(&f, &g), &h), s.add(&s.mul(&f, &h), &s.mul(&g, &h)));
    }

    #[test]
    fn skew_eval_composes(f in prop::collection::vec(0u64..9, 0..4), g in prop::collection::vec(0u64..9, 0..4), x in prop::collection::vec(0u64..3, 6)) {
        let base = f3();
        let k = ResidueField::least(base.clone(), 6, Provenance::Plain);
        let s = SkewRing::new(k.clone());
        // Coefficients drawn from F_3-span of 1 and the generator.
        let lift = |v: &Vec<u64>| s.trim(v.iter().map(|&c| k.add(&k.from_fq(base.elem(c % 3)), &k.mul(&k.generator(), &k.from_fq(base.elem(c / 3))))).collect());
        let (f, g) = (lift(&f), lift(&g));
        let x = k.from_coords(&elems(&base, &x));
        prop_assert_eq!(s.eval(&s.mul(&f, &g), &x), s.eval(&f, &s.eval(&g, &x)));
    }

    #[test]
    fn kernel_vectors_are_annihilated(rows in prop::collection::vec(prop::collection::vec(0u64..9, 5), 1..5)) {
        let k = f9();
        let m = Matrix::from_rows(rows.iter().map(|r| elems(&k, r)).collect()).unwrap();
        let ker = matrix_kernel(&k, &m);
        prop_assert_eq!(ker.len() + rank(&k, &m), 5);
        for v in &ker {
            prop_assert!(mat_vec(&k, &m, v).unwrap().iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn residue_map_injective_below_place_degree(a in poly(3), b in poly(3), idx in 0usize..8) {
        let fq = f3();
        let places = monic_irreducibles(&fq, 4);
        let p = &places[idx % places.len()];
        let r = residue_map(&fq, p);
        let ring = PolyRing::new(fq.clone());
        let (a, b) = (ring.trim(elems(&fq, &a)), ring.trim(elems(&fq, &b)));
        prop_assert_eq!(r.map_poly(&a) == r.map_poly(&b), a == b);
    }

    #[test]
    fn symbol_is_multiplicative(a in nonzero_poly(4), b in nonzero_poly(4), idx in 0usize..20) {
        let fq = FqCtx::prime(5).unwrap();
        let places = places_up_to(&fq, 2);
        let p = &places[idx % places.len()];
        let ring = PolyRing::new(fq.clone());
        let (a, b) = (elems(&fq, &a), elems(&fq, &b));
        let ab = ring.mul_p(&a, &b);
        match (power_residue_symbol(&fq, &a, p), power_residue_symbol(&fq, &b, p)) {
            (Ok(x), Ok(y)) => prop_assert_eq!(power_residue_symbol(&fq, &ab, p).unwrap(), fq.mul_fq(x, y)),
            _ => prop_assert!(power_residue_symbol(&fq, &ab, p).is_err()),
        }
    }

    #[test]
    fn phi_is_a_homomorphism(a in poly(3), b in poly(3), g1 in poly(2), g2 in nonzero_poly(2)) {
        let fq = f3();
        let phi = DrinfeldModule::from_polys(&fq, &[elems(&fq, &g1), elems(&fq, &g2)]).unwrap();
        let ring = PolyRing::new(fq.clone());
        let (a, b) = (ring.trim(elems(&fq, &a)), ring.trim(elems(&fq, &b)));
        let s = phi.skew();
        prop_assert_eq!(phi.phi_image(&ring.mul_p(&a, &b)), s.mul(&phi.phi_image(&a), &phi.phi_image(&b)));
        prop_assert_eq!(phi.phi_image(&ring.add_p(&a, &b)), s.add(&phi.phi_image(&a), &phi.phi_image(&b)));
    }

    #[test]
    fn twists_compose(a in nonzero_poly(2), b in nonzero_poly(2), g1 in poly(2), g2 in nonzero_poly(2)) {
        let fq = f3();
        let phi = DrinfeldModule::from_polys(&fq, &[elems(&fq, &g1), elems(&fq, &g2)]).unwrap();
        let ring = PolyRing::new(fq.clone());
        let (a, b) = (elems(&fq, &a), elems(&fq, &b));
        let left = phi.twist2(&a).unwrap().twist2(&b).unwrap();
        prop_assert_eq!(left, phi.twist2(&ring.mul_p(&a, &b)).unwrap());
    }

    #[test]
    fn skew_render_round_trips(f in prop::collection::vec((poly(2), nonzero_poly(2)), 0..3)) {
        let fq = f3();
        let field = RationalFunctionField::new(fq.clone());
        let s = SkewRing::new(field.clone());
        let v = s.trim(f.iter().map(|(n, d)| field.fraction(&elems(&fq, n), &elems(&fq, d)).unwrap()).collect());
        let text = render_skew_rational(&fq, &v);
        prop_assert_eq!(parse_skew(&fq, &text).unwrap(), v);
    }

    #[test]
    fn density_is_monotone(seed in any::<u64>()) {
        let fq = f3();
        let h = |p: &Place, salt: u64| {
            let x = p.generator().iter().fold(seed ^ salt, |acc, c| acc.wrapping_mul(31).wrapping_add(c.value() as u64));
            x.wrapping_mul(0x9E3779B97F4A7C15) >> 62
        };
        let big = density_estimate(&fq, 5, Parallelism::Sequential, |p| Some(h(p, 1) != 0));
        let small = density_estimate(&fq, 5, Parallelism::Sequential, |p| Some(h(p, 1) != 0 && h(p, 2) == 0));
        let all = density_estimate(&fq, 5, Parallelism::Sequential, |_| Some(true));
        prop_assert_eq!(all.ratio, 1.0);
        for ((s, b), a) in small.trajectory.iter().zip(&big.trajectory).zip(&all.trajectory) {
            prop_assert!(s.numerator <= b.numerator);
            prop_assert!(b.numerator <= a.numerator);
        }
    }
}

fn random_matrix(k: &FqCtx, n: usize, v: &[u64]) -> Matrix<Fq> {
    Matrix::new(n, n, elems(k, &v[..n * n])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn newton_matches_direct_charpoly(p in prop::sample::select(vec![5u64, 7]), n in 2usize..7, v in prop::collection::vec(0u64..7, 49)) {
        let k = FqCtx::prime(p).unwrap();
        let m = random_matrix(&k, n, &v);
        let traces = power_traces(&k, &m, n).unwrap();
        let res = newton_reconstruct(&k, &traces, n);
        if (n as u64) < p {
            prop_assert_eq!(charpoly_from_elementary(&k, &res.unwrap()), charpoly(&k, &m).unwrap());
        } else {
            let is_char_div = matches!(res, Err(drinfeld_lab::Error::CharacteristicDivision { .. }));
            prop_assert!(is_char_div);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn intertwiner_on_conjugates(e in 1u32..3, n in 1usize..4, a in prop::collection::vec(0u64..9, 9), b in prop::collection::vec(0u64..9, 9), x in prop::collection::vec(0u64..9, 9)) {
        let k = FqCtx::new(3, e, None).unwrap();
        let x0 = random_matrix(&k, n, &x);
        prop_assume!(inverse(&k, &x0).unwrap().is_some());
        let x0i = inverse(&k, &x0).unwrap().unwrap();
        let conj = |m: &Matrix<Fq>| mat_mul(&k, &mat_mul(&k, &x0, m).unwrap(), &x0i).unwrap();
        let (ma, mb) = (random_matrix(&k, n, &a), random_matrix(&k, n, &b));
        let pairs = vec![(ma.clone(), conj(&ma)), (mb.clone(), conj(&mb))];
        let x = intertwiner_solve(&k, &pairs, &IntertwinerOptions::default()).unwrap().unwrap();
        for (m, nn) in &pairs {
            prop_assert_eq!(mat_mul(&k, &x, m).unwrap(), mat_mul(&k, nn, &x).unwrap());
        }
        // Perturb one target so its charpoly changes; no intertwiner may exist.
        let mut bad = conj(&mb);
        let shifted = k.add(bad.get(0, 0), &k.one());
        bad.set(0, 0, shifted);
        prop_assume!(charpoly(&k, &bad).unwrap() != charpoly(&k, &mb).unwrap());
        let pairs = vec![(ma.clone(), conj(&ma)), (mb, bad)];
        prop_assert!(intertwiner_solve(&k, &pairs, &IntertwinerOptions::default()).unwrap().is_none());
    }
}

#[test]
fn irreducible_counts_match_necklace_formula() {
    for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let fq = FqCtx::new(p, e, None).unwrap();
        let q = fq.q();
        for d in 1..=4usize {
            let total: u64 = (1..=d)
                .filter(|k| d % k == 0)
                .map(|k| k as u64 * monic_irreducibles(&fq, k).len() as u64)
                .sum();
            assert_eq!(total, q.pow(d as u32), "q={q} d={d}");
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let fq = f3();
    let phi = DrinfeldModule::from_polys(&fq, &[elems(&fq, &[0, 1]), elems(&fq, &[1, 0, 1])]).unwrap();
    let tw = phi.twist2(&elems(&fq, &[0, 1])).unwrap();
    let a = scan_traces(&phi, &tw, 4, ScanMode::Charpoly, Parallelism::Parallel).unwrap();
    let b = scan_traces(&phi, &tw, 4, ScanMode::Charpoly, Parallelism::Sequential).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.csv(), b.csv());
}
