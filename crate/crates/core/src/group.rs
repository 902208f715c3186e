//! Generic finite-group plumbing: breadth-first closure, element orders and
//! explicit subgroups stored as sorted element lists.

use std::collections::{HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

/// Closures larger than this are refused.
pub const CLOSURE_LIMIT: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("subgroup closure exceeded {0} elements")]
    TooLarge(usize),
    #[error("empty generator list")]
    NoGenerators,
    #[error("elements belong to different group contexts")]
    ContextMismatch,
    #[error("invalid group element: {0}")]
    InvalidElement(String),
    #[error("the identity has no classification")]
    Identity,
    #[error("group of order {order} is wild (divisible by p = {p})")]
    Wild { order: usize, p: u64 },
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

pub trait Group {
    type Elem: Copy + Eq + Hash + Ord + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn compose(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inverse(&self, a: Self::Elem) -> Self::Elem;

    fn power(&self, a: Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.identity();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.compose(acc, base);
            }
            base = self.compose(base, base);
            e >>= 1;
        }
        acc
    }

    fn order_of(&self, a: Self::Elem) -> u64 {
        let id = self.identity();
        let mut x = a;
        let mut n = 1;
        while x != id {
            x = self.compose(x, a);
            n += 1;
        }
        n
    }

    fn commutator(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        let ab = self.compose(a, b);
        let ba = self.compose(b, a);
        self.compose(ab, self.inverse(ba))
    }
}

/// An explicit subgroup: a generating set and the sorted list of all elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup<E> {
    gens: Vec<E>,
    elements: Vec<E>,
}

impl<E: Copy + Ord + Eq + Hash + Debug> Subgroup<E> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn generators(&self) -> &[E] {
        &self.gens
    }

    pub fn contains(&self, x: &E) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup<E>) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    pub fn intersection_elements(&self, other: &Subgroup<E>) -> Vec<E> {
        self.elements.iter().copied().filter(|x| other.contains(x)).collect()
    }
}

pub fn closure<G: Group>(g: &G, gens: &[G::Elem]) -> Result<Subgroup<G::Elem>, GroupError> {
    closure_with_limit(g, gens, CLOSURE_LIMIT)
}

pub fn closure_with_limit<G: Group>(
    g: &G,
    gens: &[G::Elem],
    limit: usize,
) -> Result<Subgroup<G::Elem>, GroupError> {
    let id = g.identity();
    let gens: Vec<G::Elem> = {
        let mut v: Vec<_> = gens.iter().copied().filter(|&x| x != id).collect();
        v.sort();
        v.dedup();
        v
    };
    let mut seen: HashSet<G::Elem> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id);
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for &s in &gens {
            let y = g.compose(x, s);
            if seen.insert(y) {
                if seen.len() > limit {
                    return Err(GroupError::TooLarge(limit));
                }
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<_> = seen.into_iter().collect();
    elements.sort();
    Ok(Subgroup { gens, elements })
}

/// Wraps a list known to be closed under composition, choosing a small
/// generating set greedily.
pub fn subgroup_from_elements<G: Group>(
    g: &G,
    elements: Vec<G::Elem>,
) -> Result<Subgroup<G::Elem>, GroupError> {
    let mut elements = elements;
    elements.sort();
    elements.dedup();
    let mut gens = Vec::new();
    let mut current = closure(g, &[])?;
    for &x in &elements {
        if current.order() == elements.len() {
            break;
        }
        if !current.contains(&x) {
            gens.push(x);
            current = closure(g, &gens)?;
        }
    }
    if current.elements != elements {
        return Err(GroupError::Inconsistent("element list is not a subgroup".into()));
    }
    Ok(current)
}

/// Multiset of element orders, as sorted `(order, count)` pairs.
pub fn order_statistics<G: Group>(g: &G, h: &Subgroup<G::Elem>) -> Vec<(u64, usize)> {
    let mut counts = std::collections::BTreeMap::new();
    for &x in h.elements() {
        *counts.entry(g.order_of(x)).or_insert(0usize) += 1;
    }
    counts.into_iter().collect()
}

/// Checks closure of an element list under composition and inversion.
pub fn is_closed<G: Group>(g: &G, h: &Subgroup<G::Elem>) -> bool {
    h.contains(&g.identity())
        && h.elements().iter().all(|&x| h.contains(&g.inverse(x)))
        && h.generators().iter().all(|&s| h.elements().iter().all(|&x| h.contains(&g.compose(x, s))))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Integers modulo n under addition.
    struct Cyclic(u64);

    impl Group for Cyclic {
        type Elem = u64;
        fn identity(&self) -> u64 {
            0
        }
        fn compose(&self, a: u64, b: u64) -> u64 {
            (a + b) % self.0
        }
        fn inverse(&self, a: u64) -> u64 {
            (self.0 - a) % self.0
        }
    }

    #[test]
    fn cyclic_closures() {
        let g = Cyclic(12);
        assert_eq!(closure(&g, &[8]).unwrap().order(), 3);
        assert_eq!(closure(&g, &[8, 3]).unwrap().order(), 12);
        assert_eq!(closure(&g, &[]).unwrap().order(), 1);
        assert_eq!(g.order_of(4), 3);
        assert_eq!(g.power(5, 3), 3);
        assert!(closure_with_limit(&g, &[1], 5).is_err());
    }

    #[test]
    fn from_elements_rejects_non_subgroups() {
        let g = Cyclic(12);
        assert_eq!(subgroup_from_elements(&g, vec![0, 4, 8]).unwrap().order(), 3);
        assert!(subgroup_from_elements(&g, vec![0, 4]).is_err());
    }
}
