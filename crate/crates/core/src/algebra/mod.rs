//! Exact arithmetic: F_q, its extensions, A = F_q[T], F = F_q(T), places and
//! linear algebra.

pub mod ext;
pub mod fq;
pub mod matrix;
pub mod place;
pub mod poly;
pub mod rational;
pub mod ring;
pub mod sparse;
pub mod text;

pub use ext::{ExtElem, ExtField, Provenance, ResidueField, TowerField};
pub use fq::{make_field_context, Fq, FqCtx};
pub use matrix::{matrix_kernel, Matrix, Solution};
pub use place::{
    irreducible_test, monic_irreducibles, places_up_to, power_residue_symbol, residue_map, Place,
    ResidueMap,
};
pub use poly::{Poly, PolyRing};
pub use rational::{RationalFunction, RationalFunctionField};
pub use ring::{Field, FiniteField, FrobeniusRing};
pub use sparse::{SparsePoly, SparsePolyRing};
