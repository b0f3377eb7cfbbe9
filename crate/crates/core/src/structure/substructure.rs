use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{Permutation, Structure, UStructure};
use crate::tuples::{TupleSet, TupleSpace};
use crate::{Error, Result};

/// The substructure generated by `v` (relational vocabularies: just the
/// restriction), renumbered so that element `j` is the `j`-th smallest member
/// of `v`. Its core is `core ∩ v`.
pub fn generated_substructure(a: &UStructure, v: &BTreeSet<usize>) -> Result<UStructure> {
    let n = a.n();
    if let Some(&x) = v.iter().find(|&&x| x >= a.size()) {
        return Err(Error::TupleOutOfRange { tuple: vec![x], size: a.size() });
    }
    let in_core = v.iter().filter(|&&x| a.in_core(x)).count();
    let out_core = v.len() - in_core;
    if in_core < n || out_core < n {
        return Err(Error::Precondition(format!(
            "generating set needs at least {n} core and {n} non-core elements, got {in_core} and {out_core}"
        )));
    }
    let elements: Vec<usize> = v.iter().copied().collect();
    let mut position = vec![usize::MAX; a.size()];
    for (j, &x) in elements.iter().enumerate() {
        position[x] = j;
    }
    let mut base = Structure::new(elements.len(), a.vocab().clone())?;
    for (name, rel) in a.base().relations() {
        let space = TupleSpace::new(elements.len(), rel.arity());
        let mut restricted = TupleSet::empty(space);
        for t in rel.iter().filter(|t| t.iter().all(|&x| position[x] != usize::MAX)) {
            let mapped: Vec<usize> = t.iter().map(|&x| position[x]).collect();
            restricted.insert(&mapped)?;
        }
        base.set_relation(name, restricted)?;
    }
    let core = elements.iter().enumerate().filter(|(_, &x)| a.in_core(x)).map(|(j, _)| j);
    UStructure::new(base, core)
}

/// Whether the bijection `f: A -> B` maps core onto core and is an isomorphism.
pub fn core_bijection_isomorphism(a: &UStructure, b: &UStructure, f: &[usize]) -> Result<bool> {
    if a.size() != b.size() {
        return Err(Error::Precondition(format!("universe sizes differ: {} vs {}", a.size(), b.size())));
    }
    if a.vocab() != b.vocab() {
        return Err(Error::VocabularyMismatch(format!("{} vs {}", a.vocab(), b.vocab())));
    }
    if f.len() != a.size() {
        return Err(Error::NotABijection);
    }
    let f = Permutation::from_images(f.to_vec()).ok_or(Error::NotABijection)?;
    if (0..a.size()).any(|x| a.in_core(x) != b.in_core(f.apply(x))) {
        return Ok(false);
    }
    Ok(a.base().relations().all(|(name, rel)| {
        let target = b.base().relation(name).expect("same vocabulary");
        rel.map(|x| f.apply(x)) == *target
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{canonical_strong, core_preserving_maps};

    #[test]
    fn whole_universe_is_identity() {
        let a = canonical_strong(3, 3, 3).unwrap();
        let all: BTreeSet<usize> = (0..6).collect();
        assert_eq!(generated_substructure(&a, &all).unwrap(), a);
    }

    #[test]
    fn restriction_gives_smaller_canonical() {
        let a = canonical_strong(3, 4, 4).unwrap();
        let v = BTreeSet::from([0, 1, 2, 5, 6, 7]);
        let b = generated_substructure(&a, &v).unwrap();
        let small = canonical_strong(3, 3, 3).unwrap();
        assert_eq!(b.size(), 6);
        assert!(core_bijection_isomorphism(&b, &small, &[0, 1, 2, 3, 4, 5]).unwrap());
    }

    #[test]
    fn too_small_generating_set() {
        let a = canonical_strong(3, 4, 4).unwrap();
        let v = BTreeSet::from([0, 1, 5, 6, 7]);
        assert!(matches!(generated_substructure(&a, &v), Err(Error::Precondition(_))));
    }

    #[test]
    fn isomorphism_checks() {
        let a = canonical_strong(3, 3, 3).unwrap();
        let id: Vec<usize> = (0..6).collect();
        assert!(core_bijection_isomorphism(&a, &a, &id).unwrap());
        for f in core_preserving_maps(&a) {
            assert!(core_bijection_isomorphism(&a, &a, f.images()).unwrap());
        }
        assert!(!core_bijection_isomorphism(&a, &a, &[3, 1, 2, 0, 4, 5]).unwrap());
        assert_eq!(core_bijection_isomorphism(&a, &a, &[0, 0, 2, 3, 4, 5]), Err(Error::NotABijection));
    }
}
