use alloc::vec::Vec;

use crate::algebra::{compute_joint_partition, AtomSet, TypePartition};
use crate::structure::{Structure, StructureFamily};
use crate::syntax::Formula;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "outcome", rename_all = "kebab-case"))]
pub enum Separation {
    /// A sentence valid in every member of the first family and in no member
    /// of the second.
    Separator { formula: Formula, comparisons: usize },
    /// Members of the two families realising the same joint atoms; no formula
    /// of the logic tells them apart.
    Inseparable { first: usize, second: usize },
}

fn profile_literal(part: &TypePartition, atom: usize, positive: bool) -> Formula {
    let body = Formula::exists_all(part.n(), part.defining_formula(atom));
    if positive {
        body
    } else {
        body.not()
    }
}

/// [`separate`] on bare structures. An empty first family is separated by
/// `false`, an empty second one by `true`.
pub fn separate_structures(k0: &[&Structure], k1: &[&Structure]) -> Result<Separation> {
    if k0.is_empty() {
        return Ok(Separation::Separator { formula: Formula::False, comparisons: 0 });
    }
    if k1.is_empty() {
        return Ok(Separation::Separator { formula: Formula::True, comparisons: 0 });
    }
    let all: Vec<&Structure> = k0.iter().chain(k1).copied().collect();
    let part = compute_joint_partition(&all)?;
    let profiles: Vec<AtomSet> = (0..all.len()).map(|m| part.realised(m)).collect();
    let (p0, p1) = profiles.split_at(k0.len());
    for (a, pa) in p0.iter().enumerate() {
        if let Some(b) = p1.iter().position(|pb| pb == pa) {
            return Ok(Separation::Inseparable { first: a, second: b });
        }
    }
    let mut distinct0: Vec<&AtomSet> = Vec::new();
    for p in p0 {
        if !distinct0.contains(&p) {
            distinct0.push(p);
        }
    }
    let mut distinct1: Vec<&AtomSet> = Vec::new();
    for p in p1 {
        if !distinct1.contains(&p) {
            distinct1.push(p);
        }
    }
    let mut comparisons = 0;
    let disjuncts = distinct0.iter().map(|p| {
        let mut chosen: Vec<usize> = Vec::new();
        for q in &distinct1 {
            comparisons += 1;
            if chosen.iter().any(|&a| p.contains(a) != q.contains(a)) {
                continue;
            }
            let atom = p.symmetric_difference(q).next().expect("profiles differ");
            chosen.push(atom);
        }
        chosen.sort_unstable();
        Formula::conjunction(chosen.into_iter().map(|a| profile_literal(&part, a, p.contains(a))))
    });
    let formula = Formula::disjunction(disjuncts.collect::<Vec<_>>());
    Ok(Separation::Separator { formula, comparisons })
}

/// A sentence true in every member of `k0` and false in every member of `k1`,
/// built from the joint atoms each member realises.
pub fn separate(k0: &StructureFamily, k1: &StructureFamily) -> Result<Separation> {
    let a: Vec<&Structure> = k0.members().iter().map(|m| m.base()).collect();
    let b: Vec<&Structure> = k1.members().iter().map(|m| m.base()).collect();
    separate_structures(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{canonical_strong, unary_u_structure, validates, UnaryShape};
    use crate::syntax::Vocabulary;
    use crate::Error;
    use alloc::vec;

    #[test]
    fn separates_by_realised_atoms() {
        let k0 = StructureFamily::new(vec![canonical_strong(3, 3, 3).unwrap()]).unwrap();
        let empty_p = unary_u_structure(3, 3, 3, &[("P", UnaryShape::Empty), ("Q", UnaryShape::Core)]).unwrap();
        let k1 = StructureFamily::new(vec![empty_p.clone()]).unwrap();
        let Separation::Separator { formula, .. } = separate(&k0, &k1).unwrap() else { panic!() };
        assert!(validates(k0.members()[0].base(), &formula).unwrap());
        assert!(!validates(empty_p.base(), &formula).unwrap());
    }

    #[test]
    fn copies_are_inseparable() {
        let k = StructureFamily::new(vec![canonical_strong(3, 3, 3).unwrap()]).unwrap();
        assert_eq!(separate(&k, &k).unwrap(), Separation::Inseparable { first: 0, second: 0 });
        let eq = Vocabulary::new(3).unwrap();
        let a = StructureFamily::new(vec![canonical_strong(3, 3, 3).unwrap().reduct(&eq).unwrap()]).unwrap();
        // three variables cannot count past three
        let b = StructureFamily::new(vec![canonical_strong(3, 4, 4).unwrap().reduct(&eq).unwrap()]).unwrap();
        assert_eq!(separate(&a, &b).unwrap(), Separation::Inseparable { first: 0, second: 0 });
    }

    #[test]
    fn empty_sides_and_mismatch() {
        let a = canonical_strong(3, 3, 3).unwrap();
        assert_eq!(
            separate_structures(&[], &[a.base()]).unwrap(),
            Separation::Separator { formula: Formula::False, comparisons: 0 }
        );
        let eq = a.reduct(&Vocabulary::new(3).unwrap()).unwrap();
        assert!(matches!(separate_structures(&[a.base()], &[eq.base()]), Err(Error::VocabularyMismatch(_))));
    }
}
