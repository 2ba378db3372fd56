//! Torsion `phi[l]` of a reduced module and the matrix of Frobenius on it.

use super::ReducedModule;
use crate::algebra::ext::{ExtElem, Provenance, ResidueField};
use crate::algebra::fq::{Fq, FqCtx};
use crate::algebra::poly::PolyRing;
use crate::algebra::matrix::{matrix_kernel, rank, solve, Matrix, Solution};
use crate::algebra::place::Place;
use crate::algebra::ring::{FiniteField, FrobeniusRing};
use crate::error::{Error, Result};
use crate::skew::{SkewPoly, SkewRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorsionOptions {
    /// Largest degree of the torsion field over A/P that is tried.
    pub max_field_degree: usize,
}

impl Default for TorsionOptions {
    fn default() -> Self {
        Self { max_field_degree: 120 }
    }
}


#[derive(Clone, Debug)]
pub struct TorsionData {
    ell: Place,
    ell_field: ResidueField,
    field: ResidueField,
    basis: Vec<ExtElem<Fq>>,
    field_degree: usize,
    residue_root: ExtElem<Fq>,
    kernel_dim: usize,
    matrix: Matrix<ExtElem<Fq>>,
}

impl TorsionData {
    pub fn ell(&self) -> &Place {
        &self.ell
    }

    /// A/l, in which the matrix entries live.
    pub fn ell_field(&self) -> &ResidueField {
        &self.ell_field
    }

    /// The field F_{q^{dm}} containing all of `phi[l]`.
    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    /// Degree of the torsion field over A/P.
    pub fn field_degree(&self) -> usize {
        self.field_degree
    }

    /// Image of the generator of A/P in the torsion field.
    pub fn residue_root(&self) -> &ExtElem<Fq> {
        &self.residue_root
    }

    /// Embeds an element of A/P into the torsion field.
    pub fn embed(&self, c: &ExtElem<Fq>) -> ExtElem<Fq> {
        embed_with(&self.field, &self.residue_root, c)
    }

    /// The chosen A/l-basis of `phi[l]`.
    pub fn basis(&self) -> &[ExtElem<Fq>] {
        &self.basis
    }

    /// Dimension of `phi[l]` over F_q, so `|phi[l]| = q^kernel_dim`.
    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    /// Column `i` holds the coordinates of `Frob(b_i)` in the basis.
    pub fn matrix(&self) -> &Matrix<ExtElem<Fq>> {
        &self.matrix
    }
}

/// The F_q-matrix of `x -> f(x)` on `l`, in the coordinate basis.
fn linearized_matrix(l: &ResidueField, s: &SkewRing<ResidueField>, f: &SkewPoly<ExtElem<Fq>>) -> Matrix<Fq> {
    let n = l.degree();
    let cols: Vec<Vec<Fq>> = (0..n)
        .map(|i| {
            let mut e = vec![Fq::ZERO; n];
            e[i] = Fq::ONE;
            l.to_coords(&s.eval(f, &l.from_coords(&e)))
        })
        .collect();
    Matrix::from_columns(n, &cols).unwrap()
}

fn embed_with(l: &ResidueField, root: &ExtElem<Fq>, c: &ExtElem<Fq>) -> ExtElem<Fq> {
    let mut acc = l.zero();
    for x in c.iter().rev() {
        acc = l.add(&l.mul(&acc, root), &l.from_fq(*x));
    }
    acc
}

/// Computes `phi[l]` over the least extension of A/P containing it, a greedy
/// A/l-basis, and the matrix of the `deg P`-th power of Frobenius.
pub fn torsion_frobenius_matrix(
    reduced: &ReducedModule,
    ell: &Place,
    opts: &TorsionOptions,
) -> Result<TorsionData> {
    let fq: &FqCtx = reduced.field().base();
    if ell == reduced.place() {
        return Err(Error::BadInput("l must differ from the place of reduction".into()));
    }
    let r = reduced.rank();
    let dl = ell.degree();
    let d = reduced.place().degree();
    let target = r * dl;
    let phi_ell = reduced.phi_image(ell.generator());

    for m in 1..=opts.max_field_degree {
        // F_{q^{dm}} over F_q, with A/P embedded through the least root of P.
        let l = ResidueField::least(fq.clone(), d * m, Provenance::Torsion);
        let lx = PolyRing::new(l.clone());
        let lifted: Vec<_> = reduced.place().generator().iter().map(|c| l.from_fq(*c)).collect();
        let root = lx.split_roots(&lifted).swap_remove(0);
        let s = SkewRing::new(l.clone());
        let embed =
            |f: &[ExtElem<Fq>]| reduced.skew().map_coeffs(&s, f, |c| embed_with(&l, &root, c));
        let f_ell = embed(&phi_ell);
        let kernel = matrix_kernel(fq, &linearized_matrix(&l, &s, &f_ell));
        if kernel.len() > target {
            return Err(Error::Anomaly(format!(
                "torsion of dimension {} exceeds {target}",
                kernel.len()
            )));
        }
        if kernel.len() < target {
            continue;
        }

        let phi_t = embed(reduced.phi_t());
        // Greedy basis: keep a kernel vector when it is outside the A/l-span
        // of those already kept.
        let mut basis: Vec<ExtElem<Fq>> = Vec::new();
        let mut span_cols: Vec<Vec<Fq>> = Vec::new();
        for v in &kernel {
            if basis.len() == r {
                break;
            }
            let mut trial = span_cols.clone();
            trial.push(v.clone());
            let mtx = Matrix::from_columns(v.len(), &trial).unwrap();
            if rank(fq, &mtx) == span_cols.len() {
                continue;
            }
            let b = l.from_coords(v);
            let mut x = b.clone();
            for _ in 0..dl {
                span_cols.push(l.to_coords(&x));
                x = s.eval(&phi_t, &x);
            }
            basis.push(b);
        }
        if basis.len() != r {
            return Err(Error::Anomaly("torsion is not free over A/l".into()));
        }
        let span = Matrix::from_columns(l.degree(), &span_cols).unwrap();

        let ell_field = ell.residue_field(fq);
        let mut entries = vec![ell_field.zero(); r * r];
        for (i, b) in basis.iter().enumerate() {
            let fb = l.frobenius_iter(b, d);
            let coords = match solve(fq, &span, &l.to_coords(&fb))? {
                Solution::Unique(x) => x,
                _ => return Err(Error::Anomaly("Frobenius image outside the torsion span".into())),
            };
            for j in 0..r {
                entries[j * r + i] = ell_field.from_poly(&coords[j * dl..(j + 1) * dl]);
            }
        }
        let matrix = Matrix::new(r, r, entries).unwrap();
        return Ok(TorsionData {
            ell: ell.clone(),
            ell_field,
            field: l,
            basis,
            field_degree: m,
            residue_root: root,
            kernel_dim: target,
            matrix,
        });
    }
    Err(Error::TorsionFieldCapExceeded { cap: opts.max_field_degree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::{charpoly, is_invertible};
    use crate::drinfeld::DrinfeldModule;

    #[test]
    fn carlitz_torsion_at_t() {
        // P = T+1, l = T: kernel of Tx + x^3 over the reduction.
        let fq = FqCtx::prime(3).unwrap();
        let c = DrinfeldModule::carlitz(&fq);
        let p = Place::new(&fq, vec![Fq(1), Fq(1)]).unwrap();
        let ell = Place::new(&fq, vec![Fq(0), Fq(1)]).unwrap();
        let red = c.reduce_at(&p).unwrap();
        let t = torsion_frobenius_matrix(&red, &ell, &TorsionOptions::default()).unwrap();
        assert_eq!(t.kernel_dim(), 1);
        assert_eq!(t.basis().len(), 1);
        // T = -1 mod P, so x^2 = 1 has roots in F_3: the field degree is 1.
        assert_eq!(t.field_degree(), 1);
        let l = t.field();
        let b = &t.basis()[0];
        let s = SkewRing::new(l.clone());
        let phi_t = red.skew().map_coeffs(&s, red.phi_t(), |x| t.embed(x));
        assert!(l.is_zero(&s.eval(&phi_t, b)));
        assert!(is_invertible(t.ell_field(), t.matrix()));
    }

    #[test]
    fn frobenius_commutes_with_t_action() {
        let fq = FqCtx::prime(3).unwrap();
        let phi = DrinfeldModule::from_polys(&fq, &[vec![Fq(1)], vec![Fq(1), Fq(1)]]).unwrap();
        let ell = Place::new(&fq, vec![Fq(0), Fq(1)]).unwrap();
        let p = Place::new(&fq, vec![Fq(1), Fq(0), Fq(1)]).unwrap();
        let red = phi.reduce_at(&p).unwrap();
        let t = torsion_frobenius_matrix(&red, &ell, &TorsionOptions::default()).unwrap();
        assert_eq!(t.kernel_dim(), 2);
        let l = t.field();
        let s = SkewRing::new(l.clone());
        let phi_t = red.skew().map_coeffs(&s, red.phi_t(), |x| t.embed(x));
        for b in t.basis() {
            let lhs = s.eval(&phi_t, &l.frobenius_iter(b, 2));
            let rhs = l.frobenius_iter(&s.eval(&phi_t, b), 2);
            assert_eq!(lhs, rhs);
        }
        assert_eq!(charpoly(t.ell_field(), t.matrix()).unwrap().len(), 3);
    }

    #[test]
    fn cap_and_bad_input() {
        let fq = FqCtx::prime(3).unwrap();
        let phi = DrinfeldModule::from_polys(&fq, &[vec![Fq(1)], vec![Fq(1)]]).unwrap();
        let ell = Place::new(&fq, vec![Fq(1), Fq(0), Fq(1)]).unwrap();
        let red = phi.reduce_at(&ell).unwrap();
        assert!(matches!(
            torsion_frobenius_matrix(&red, &ell, &TorsionOptions::default()),
            Err(Error::BadInput(_))
        ));
        let p = Place::new(&fq, vec![Fq(0), Fq(1)]).unwrap();
        let red = phi.reduce_at(&p).unwrap();
        let tiny = TorsionOptions { max_field_degree: 0 };
        assert_eq!(
            torsion_frobenius_matrix(&red, &ell, &tiny).unwrap_err(),
            Error::TorsionFieldCapExceeded { cap: 0 }
        );
    }
}
