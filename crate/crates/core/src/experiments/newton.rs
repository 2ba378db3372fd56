use crate::algebra::matrix::{identity, mat_mul, trace, Matrix};
use crate::algebra::poly::Poly;
use crate::algebra::ring::Field;
use crate::error::{Error, Result};

/// Elementary symmetric functions `e_1..e_n` from power sums `p_1..p_n`
/// via `k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i`.
pub fn newton_reconstruct<K: Field>(k: &K, traces: &[K::Elem], n: usize) -> Result<Vec<K::Elem>> {
    if n == 0 {
        return Err(Error::BadInput("dimension must be at least 1".into()));
    }
    if traces.len() < n {
        return Err(Error::DimensionMismatch(format!("{} traces for dimension {n}", traces.len())));
    }
    let fq = k.base();
    let p = fq.p();
    let mut e = vec![k.one()];
    for step in 1..=n {
        if (step as u64).is_multiple_of(p) {
            return Err(Error::CharacteristicDivision { k: step, p });
        }
        let mut acc = k.zero();
        for i in 1..=step {
            let term = k.mul(&e[step - i], &traces[i - 1]);
            acc = if i % 2 == 1 { k.add(&acc, &term) } else { k.sub(&acc, &term) };
        }
        let inv = k.inv(&k.from_fq(fq.from_int(step as i64))).expect("step is a unit");
        e.push(k.mul(&acc, &inv));
    }
    e.remove(0);
    Ok(e)
}

/// `tr(M), tr(M^2), ..., tr(M^n)`.
pub fn power_traces<K: Field>(k: &K, m: &Matrix<K::Elem>, n: usize) -> Result<Vec<K::Elem>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    let mut pw = identity(k, m.rows());
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        pw = mat_mul(k, &pw, m)?;
        out.push(trace(k, &pw)?);
    }
    Ok(out)
}

/// Ascending coefficients of `X^n - e_1 X^{n-1} + ... + (-1)^n e_n`.
pub fn charpoly_from_elementary<K: Field>(k: &K, e: &[K::Elem]) -> Poly<K::Elem> {
    let n = e.len();
    let mut out = vec![k.zero(); n + 1];
    out[n] = k.one();
    for (i, c) in e.iter().enumerate() {
        let j = i + 1;
        out[n - j] = if j % 2 == 1 { k.neg(c) } else { c.clone() };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fq::{Fq, FqCtx};
    use crate::algebra::matrix::charpoly;

    fn els(v: &[u32]) -> Vec<Fq> {
        v.iter().map(|&c| Fq(c)).collect()
    }

    #[test]
    fn diag_one_two_over_f3() {
        let k = FqCtx::prime(3).unwrap();
        let e = newton_reconstruct(&k, &els(&[0, 2]), 2).unwrap();
        assert_eq!(e, els(&[0, 2]));
        assert_eq!(charpoly_from_elementary(&k, &e), els(&[2, 0, 1]));
        let m = Matrix::from_rows(vec![els(&[1, 0]), els(&[0, 2])]).unwrap();
        assert_eq!(power_traces(&k, &m, 2).unwrap(), els(&[0, 2]));
        assert_eq!(charpoly(&k, &m).unwrap(), els(&[2, 0, 1]));
    }

    #[test]
    fn identity_case() {
        let k = FqCtx::prime(3).unwrap();
        let e = newton_reconstruct(&k, &els(&[2, 2]), 2).unwrap();
        assert_eq!(e, els(&[2, 1]));
        // (X - 1)^2 = X^2 + X + 1 over F_3.
        assert_eq!(charpoly_from_elementary(&k, &e), els(&[1, 1, 1]));
    }

    #[test]
    fn division_by_characteristic() {
        let k = FqCtx::prime(3).unwrap();
        assert_eq!(
            newton_reconstruct(&k, &els(&[1, 2, 0]), 3),
            Err(Error::CharacteristicDivision { k: 3, p: 3 })
        );
        let k2 = FqCtx::prime(2).unwrap();
        assert_eq!(
            newton_reconstruct(&k2, &els(&[1, 1]), 2),
            Err(Error::CharacteristicDivision { k: 2, p: 2 })
        );
    }
}
