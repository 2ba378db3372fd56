use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::algebra::matrix::{identity, inverse, mat_mul, Matrix};
use crate::algebra::ring::Field;
use crate::error::{Error, Result};

/// A finite matrix group given by generators, with its elements enumerated
/// in sorted order.
#[derive(Clone, Debug)]
pub struct MatrixGroup<E> {
    generators: Vec<Matrix<E>>,
    elements: Vec<Matrix<E>>,
    index: HashMap<Matrix<E>, usize>,
}

impl<E: Clone + Eq + Hash + Ord> MatrixGroup<E> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix<E>] {
        &self.elements
    }

    pub fn generators(&self) -> &[Matrix<E>] {
        &self.generators
    }

    pub fn index_of(&self, m: &Matrix<E>) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn contains(&self, m: &Matrix<E>) -> bool {
        self.index.contains_key(m)
    }
}

/// The group generated by invertible `n x n` matrices, by breadth-first
/// closure from the identity. Fails once more than `cap` elements appear.
pub fn generate_group<K>(
    k: &K,
    n: usize,
    generators: &[Matrix<K::Elem>],
    cap: usize,
) -> Result<MatrixGroup<K::Elem>>
where
    K: Field,
    K::Elem: Eq + Hash + Ord,
{
    let mut gens: Vec<Matrix<K::Elem>> = Vec::new();
    for g in generators {
        if !g.is_square() || g.rows() != n {
            return Err(Error::DimensionMismatch(format!("expected {n}x{n} generators")));
        }
        if inverse(k, g)?.is_none() {
            return Err(Error::BadInput("generator is singular".into()));
        }
        if !gens.contains(g) {
            gens.push(g.clone());
        }
    }
    gens.sort();
    let id = identity(k, n);
    let mut seen: HashSet<Matrix<K::Elem>> = HashSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = mat_mul(k, &x, g)?;
            if seen.contains(&y) {
                continue;
            }
            if seen.len() >= cap {
                return Err(Error::GroupCapExceeded { cap });
            }
            seen.insert(y.clone());
            queue.push_back(y);
        }
    }
    let mut elements: Vec<_> = seen.into_iter().collect();
    elements.sort();
    let index = elements.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    Ok(MatrixGroup { generators: gens, elements, index })
}

/// Conjugacy classes as sorted lists of element indices, ordered by their
/// least member. Orbits under conjugation by the generators suffice.
pub fn conjugacy_classes<K>(k: &K, group: &MatrixGroup<K::Elem>) -> Result<Vec<Vec<usize>>>
where
    K: Field,
    K::Elem: Eq + Hash + Ord,
{
    let conj: Vec<_> = group
        .generators
        .iter()
        .map(|g| Ok((g.clone(), inverse(k, g)?.expect("generators are invertible"))))
        .collect::<Result<_>>()?;
    let mut class_of = vec![usize::MAX; group.order()];
    let mut classes = Vec::new();
    for start in 0..group.order() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[start] = id;
        let mut members = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for (g, gi) in &conj {
                let y = mat_mul(k, &mat_mul(k, g, &group.elements[i])?, gi)?;
                let j = group.index_of(&y).ok_or_else(|| Error::Anomaly("group not closed".into()))?;
                if class_of[j] == usize::MAX {
                    class_of[j] = id;
                    members.push(j);
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    Ok(classes)
}
