//! Dense matrices over a field context.
//!
//! Matrices are plain row-major data; the field is passed to each operation.

use serde::Serialize;

use super::poly::Poly;
use super::ring::Field;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution<E> {
    Unique(Vec<E>),
    None,
    /// A particular solution together with a kernel basis.
    Affine { particular: Vec<E>, kernel: Vec<Vec<E>> },
}

impl<E: Clone> Matrix<E> {
    pub fn new(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(rows: usize, cols: &[Vec<E>]) -> Result<Self> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("column length".into()));
        }
        let data =
            (0..rows).flat_map(|i| cols.iter().map(move |c| c[i].clone())).collect();
        Ok(Self { rows, cols: cols.len(), data })
    }

    pub fn filled(rows: usize, cols: usize, e: E) -> Self {
        Self { rows, cols, data: vec![e; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: E) {
        self.data[i * self.cols + j] = e;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn map<F, G: Clone>(&self, f: F) -> Matrix<G>
    where
        F: Fn(&E) -> G,
    {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

pub fn identity<K: Field>(k: &K, n: usize) -> Matrix<K::Elem> {
    let mut m = Matrix::filled(n, n, k.zero());
    for i in 0..n {
        m.set(i, i, k.one());
    }
    m
}

pub fn zero_matrix<K: Field>(k: &K, rows: usize, cols: usize) -> Matrix<K::Elem> {
    Matrix::filled(rows, cols, k.zero())
}

pub fn mat_mul<K: Field>(
    k: &K,
    a: &Matrix<K::Elem>,
    b: &Matrix<K::Elem>,
) -> Result<Matrix<K::Elem>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = zero_matrix(k, a.rows, b.cols);
    for i in 0..a.rows {
        for t in 0..a.cols {
            let x = a.get(i, t);
            if k.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let y = b.get(t, j);
                if k.is_zero(y) {
                    continue;
                }
                let v = k.add(out.get(i, j), &k.mul(x, y));
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

pub fn mat_vec<K: Field>(k: &K, a: &Matrix<K::Elem>, v: &[K::Elem]) -> Result<Vec<K::Elem>> {
    if a.cols != v.len() {
        return Err(Error::DimensionMismatch("vector length".into()));
    }
    Ok((0..a.rows)
        .map(|i| {
            a.row(i)
                .iter()
                .zip(v)
                .fold(k.zero(), |acc, (x, y)| k.add(&acc, &k.mul(x, y)))
        })
        .collect())
}

pub fn mat_add<K: Field>(
    k: &K,
    a: &Matrix<K::Elem>,
    b: &Matrix<K::Elem>,
) -> Result<Matrix<K::Elem>> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::DimensionMismatch("matrix sum".into()));
    }
    let data = a.data.iter().zip(&b.data).map(|(x, y)| k.add(x, y)).collect();
    Ok(Matrix { rows: a.rows, cols: a.cols, data })
}

pub fn mat_scale<K: Field>(k: &K, c: &K::Elem, a: &Matrix<K::Elem>) -> Matrix<K::Elem> {
    a.map(|x| k.mul(c, x))
}

pub fn trace<K: Field>(k: &K, a: &Matrix<K::Elem>) -> Result<K::Elem> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("trace of a non-square matrix".into()));
    }
    Ok((0..a.rows).fold(k.zero(), |acc, i| k.add(&acc, a.get(i, i))))
}

/// Reduced row echelon form; returns the reduced matrix and its pivot columns.
pub fn rref<K: Field>(k: &K, a: &Matrix<K::Elem>) -> (Matrix<K::Elem>, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !k.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = k.inv(m.get(r, c)).expect("nonzero pivot");
        for j in c..m.cols {
            let v = k.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || k.is_zero(m.get(i, c)) {
                continue;
            }
            let f = m.get(i, c).clone();
            for j in c..m.cols {
                let v = k.sub(m.get(i, j), &k.mul(&f, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<K: Field>(k: &K, a: &Matrix<K::Elem>) -> usize {
    rref(k, a).1.len()
}

/// A basis of `{x : A x = 0}`, one vector per free column, in column order.
pub fn matrix_kernel<K: Field>(k: &K, a: &Matrix<K::Elem>) -> Vec<Vec<K::Elem>> {
    let (m, pivots) = rref(k, a);
    let mut is_pivot = vec![false; a.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..a.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![k.zero(); a.cols];
            v[f] = k.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = k.neg(m.get(r, f));
            }
            v
        })
        .collect()
}

/// Solves `A x = b`.
pub fn solve<K: Field>(
    k: &K,
    a: &Matrix<K::Elem>,
    b: &[K::Elem],
) -> Result<Solution<K::Elem>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch("right-hand side length".into()));
    }
    // Augment and reduce.
    let mut aug = Vec::with_capacity(a.rows * (a.cols + 1));
    for i in 0..a.rows {
        aug.extend_from_slice(a.row(i));
        aug.push(b[i].clone());
    }
    let aug = Matrix { rows: a.rows, cols: a.cols + 1, data: aug };
    let (m, pivots) = rref(k, &aug);
    if pivots.last() == Some(&a.cols) {
        return Ok(Solution::None);
    }
    let mut x = vec![k.zero(); a.cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m.get(r, a.cols).clone();
    }
    let kernel = matrix_kernel(k, a);
    if kernel.is_empty() {
        Ok(Solution::Unique(x))
    } else {
        Ok(Solution::Affine { particular: x, kernel })
    }
}

pub fn det<K: Field>(k: &K, a: &Matrix<K::Elem>) -> Result<K::Elem> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let mut m = a.clone();
    let n = m.rows;
    let mut d = k.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !k.is_zero(m.get(i, c))) else {
            return Ok(k.zero());
        };
        if p != c {
            m.swap_rows(p, c);
            d = k.neg(&d);
        }
        let piv = m.get(c, c).clone();
        d = k.mul(&d, &piv);
        let inv = k.inv(&piv).unwrap();
        for i in c + 1..n {
            if k.is_zero(m.get(i, c)) {
                continue;
            }
            let f = k.mul(m.get(i, c), &inv);
            for j in c..n {
                let v = k.sub(m.get(i, j), &k.mul(&f, m.get(c, j)));
                m.set(i, j, v);
            }
        }
    }
    Ok(d)
}

/// The inverse, or `None` for a singular matrix.
pub fn inverse<K: Field>(k: &K, a: &Matrix<K::Elem>) -> Result<Option<Matrix<K::Elem>>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let n = a.rows;
    let mut aug = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        aug.extend_from_slice(a.row(i));
        for j in 0..n {
            aug.push(if i == j { k.one() } else { k.zero() });
        }
    }
    let (m, pivots) = rref(k, &Matrix { rows: n, cols: 2 * n, data: aug });
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Ok(None);
    }
    let data = (0..n).flat_map(|i| m.row(i)[n..].to_vec()).collect();
    Ok(Some(Matrix { rows: n, cols: n, data }))
}

pub fn is_invertible<K: Field>(k: &K, a: &Matrix<K::Elem>) -> bool {
    a.is_square() && rank(k, a) == a.rows
}

/// `det(X I - A)`, monic, ascending coefficients. Reduces to upper Hessenberg
/// form by similarity and then runs the standard recurrence.
pub fn charpoly<K: Field>(k: &K, a: &Matrix<K::Elem>) -> Result<Poly<K::Elem>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("charpoly of a non-square matrix".into()));
    }
    let n = a.rows;
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !k.is_zero(h.get(i, m - 1))) else {
            continue;
        };
        if i != m {
            h.swap_rows(i, m);
            for r in 0..n {
                h.data.swap(r * n + i, r * n + m);
            }
        }
        let inv = k.inv(h.get(m, m - 1)).unwrap();
        for j in m + 1..n {
            if k.is_zero(h.get(j, m - 1)) {
                continue;
            }
            let u = k.mul(h.get(j, m - 1), &inv);
            for c in 0..n {
                let v = k.sub(h.get(j, c), &k.mul(&u, h.get(m, c)));
                h.set(j, c, v);
            }
            for r in 0..n {
                let v = k.add(h.get(r, m), &k.mul(&u, h.get(r, j)));
                h.set(r, m, v);
            }
        }
    }
    // p[0] = 1; p[m] = (X - h[m-1][m-1]) p[m-1]
    //   - sum_{i=1}^{m-1} h[m-1-i][m-1] * prod_{j=m-i}^{m-1} h[j][j-1] * p[m-1-i].
    let mut p: Vec<Vec<K::Elem>> = vec![vec![k.one()]];
    for m in 1..=n {
        let prev = &p[m - 1];
        let mut next = vec![k.zero(); m + 1];
        for (d, c) in prev.iter().enumerate() {
            next[d + 1] = k.add(&next[d + 1], c);
            next[d] = k.sub(&next[d], &k.mul(h.get(m - 1, m - 1), c));
        }
        let mut prod = k.one();
        for i in 1..m {
            prod = k.mul(&prod, h.get(m - i, m - i - 1));
            let coef = k.mul(h.get(m - 1 - i, m - 1), &prod);
            if k.is_zero(&coef) {
                continue;
            }
            for (d, c) in p[m - 1 - i].iter().enumerate() {
                next[d] = k.sub(&next[d], &k.mul(&coef, c));
            }
        }
        p.push(next);
    }
    Ok(p.pop().unwrap())
}
