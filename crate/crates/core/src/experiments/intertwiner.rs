use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::matrix::{is_invertible, matrix_kernel, Matrix};
use crate::algebra::ring::FiniteField;
use crate::error::{Error, Result};

const EXHAUSTIVE_MAX_DIM: usize = 2;
const EXHAUSTIVE_MAX_FIELD: u64 = 81;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntertwinerOptions {
    pub seed: u64,
    /// Random combinations tried when the solution space is too large to
    /// enumerate.
    pub max_trials: usize,
}

impl Default for IntertwinerOptions {
    fn default() -> Self {
        Self { seed: 0, max_trials: 1000 }
    }
}

fn combine<K: FiniteField>(k: &K, basis: &[Vec<K::Elem>], coeffs: &[K::Elem]) -> Vec<K::Elem> {
    let mut v = vec![k.zero(); basis[0].len()];
    for (b, c) in basis.iter().zip(coeffs) {
        if k.is_zero(c) {
            continue;
        }
        for (x, y) in v.iter_mut().zip(b) {
            *x = k.add(x, &k.mul(c, y));
        }
    }
    v
}

/// Finds an invertible `X` with `X M_i = N_i X` for every pair, searching the
/// solution space exhaustively when it is small and by seeded sampling
/// otherwise. `None` means no invertible intertwiner was found.
pub fn intertwiner_solve<K: FiniteField>(
    k: &K,
    pairs: &[(Matrix<K::Elem>, Matrix<K::Elem>)],
    opts: &IntertwinerOptions,
) -> Result<Option<Matrix<K::Elem>>> {
    let Some((m0, _)) = pairs.first() else {
        return Err(Error::BadInput("no matrix pairs".into()));
    };
    let n = m0.rows();
    for (m, nn) in pairs {
        if !m.is_square() || !nn.is_square() || m.rows() != n || nn.rows() != n {
            return Err(Error::DimensionMismatch(format!("expected {n}x{n} matrices")));
        }
    }
    // Unknown X[a][b] sits at column a*n + b; one row per entry per pair.
    let mut rows = Vec::with_capacity(pairs.len() * n * n);
    for (m, nn) in pairs {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![k.zero(); n * n];
                for l in 0..n {
                    row[i * n + l] = k.add(&row[i * n + l], m.get(l, j));
                    row[l * n + j] = k.sub(&row[l * n + j], nn.get(i, l));
                }
                rows.push(row);
            }
        }
    }
    let basis = matrix_kernel(k, &Matrix::from_rows(rows)?);
    if basis.is_empty() {
        return Ok(None);
    }
    let to_matrix = |v: Vec<K::Elem>| Matrix::new(n, n, v).expect("n*n entries");
    for b in &basis {
        let x = to_matrix(b.clone());
        if is_invertible(k, &x) {
            return Ok(Some(x));
        }
    }
    let fq = k.base();
    let size = fq.q().checked_pow(k.degree() as u32);
    let dim = basis.len();
    if dim <= EXHAUSTIVE_MAX_DIM && size.is_some_and(|s| s <= EXHAUSTIVE_MAX_FIELD) {
        let els = all_elements(k);
        let total = els.len().pow(dim as u32);
        for idx in 1..total {
            let mut v = idx;
            let coeffs: Vec<_> = (0..dim)
                .map(|_| {
                    let c = els[v % els.len()].clone();
                    v /= els.len();
                    c
                })
                .collect();
            let x = to_matrix(combine(k, &basis, &coeffs));
            if is_invertible(k, &x) {
                return Ok(Some(x));
            }
        }
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let q = fq.q();
    for _ in 0..opts.max_trials {
        let coeffs: Vec<_> = (0..dim)
            .map(|_| {
                let c: Vec<_> = (0..k.degree()).map(|_| fq.elem(rng.gen_range(0..q))).collect();
                k.from_coords(&c)
            })
            .collect();
        let x = to_matrix(combine(k, &basis, &coeffs));
        if is_invertible(k, &x) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

fn all_elements<K: FiniteField>(k: &K) -> Vec<K::Elem> {
    let fq = k.base();
    let q = fq.q();
    let m = k.degree();
    let total = q.pow(m as u32);
    (0..total)
        .map(|mut idx| {
            let c: Vec<_> = (0..m)
                .map(|_| {
                    let d = fq.elem(idx % q);
                    idx /= q;
                    d
                })
                .collect();
            k.from_coords(&c)
        })
        .collect()
}
