use alloc::format;
use alloc::vec::Vec;

use super::{Structure, StructureFamily};
use crate::syntax::{voc_of, Formula};
use crate::tuples::TupleSet;
use crate::{Error, Result};

fn check_formula(f: &Formula, a: &Structure) -> Result<()> {
    let needed = voc_of(f, a.n());
    if !needed.is_subset_of(a.vocab()) {
        return Err(Error::VocabularyMismatch(format!("formula uses {needed}, structure interprets {}", a.vocab())));
    }
    f.check(a.vocab())
}

/// Tarskian truth of `f` in `a` under an assignment of all `n` variables.
pub fn evaluate(f: &Formula, a: &Structure, assignment: &[usize]) -> Result<bool> {
    check_formula(f, a)?;
    if assignment.len() != a.n() {
        return Err(Error::TupleLength { tuple: assignment.to_vec(), expected: a.n() });
    }
    a.check_tuple(assignment)?;
    let mut s = assignment.to_vec();
    Ok(holds(f, a, &mut s))
}

fn holds(f: &Formula, a: &Structure, s: &mut [usize]) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq(i, j) => s[*i] == s[*j],
        Formula::Atom(name, args) => {
            let point: Vec<usize> = args.iter().map(|&v| s[v]).collect();
            a.relation(name).is_some_and(|rel| rel.contains(&point))
        }
        Formula::Not(b) => !holds(b, a, s),
        Formula::And(l, r) => holds(l, a, s) && holds(r, a, s),
        Formula::Or(l, r) => holds(l, a, s) || holds(r, a, s),
        Formula::Implies(l, r) => !holds(l, a, s) || holds(r, a, s),
        Formula::Iff(l, r) => holds(l, a, s) == holds(r, a, s),
        Formula::Exists(v, b) => {
            let saved = s[*v];
            let found = (0..a.size()).any(|x| {
                s[*v] = x;
                holds(b, a, s)
            });
            s[*v] = saved;
            found
        }
        Formula::Forall(v, b) => {
            let saved = s[*v];
            let all = (0..a.size()).all(|x| {
                s[*v] = x;
                holds(b, a, s)
            });
            s[*v] = saved;
            all
        }
    }
}

/// `[f] = { s in ^nA : a |= f[s] }`, computed bottom-up on sets of `n`-tuples.
pub fn definable_set(f: &Formula, a: &Structure) -> Result<TupleSet> {
    check_formula(f, a)?;
    Ok(satisfaction(&f.desugar(), a))
}

fn satisfaction(f: &Formula, a: &Structure) -> TupleSet {
    let space = a.space();
    match f {
        Formula::True => TupleSet::full(space),
        Formula::False => TupleSet::empty(space),
        Formula::Eq(i, j) => TupleSet::diagonal(space, *i, *j),
        Formula::Atom(name, args) => {
            let rel = a.relation(name).expect("checked against vocabulary");
            let rel_space = rel.space();
            let mut point = alloc::vec![0; args.len()];
            TupleSet::from_fn(space, |idx| {
                for (slot, &v) in point.iter_mut().zip(args) {
                    *slot = space.coord(idx, v);
                }
                rel.contains_index(rel_space.index(&point))
            })
        }
        Formula::Not(b) => satisfaction(b, a).complement(),
        Formula::And(l, r) => satisfaction(l, a).intersection(&satisfaction(r, a)),
        Formula::Or(l, r) => satisfaction(l, a).union(&satisfaction(r, a)),
        Formula::Implies(l, r) => satisfaction(l, a).complement().union(&satisfaction(r, a)),
        Formula::Iff(l, r) => {
            let (x, y) = (satisfaction(l, a), satisfaction(r, a));
            x.intersection(&y).union(&x.complement().intersection(&y.complement()))
        }
        Formula::Exists(v, b) => satisfaction(b, a).cylindrify(*v),
        Formula::Forall(v, b) => satisfaction(b, a).complement().cylindrify(*v).complement(),
    }
}

/// `f` holds under every assignment.
pub fn validates(a: &Structure, f: &Formula) -> Result<bool> {
    Ok(definable_set(f, a)?.is_full())
}

/// Which notion of consequence [`consequence_over`] decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ConsequenceMode {
    /// `phi |= psi`: every member validating `phi` validates `psi`.
    ValidityConsequence,
    /// `|= phi -> psi`: `[phi] ⊆ [psi]` in every member.
    ImplicationValidity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConsequenceWitness {
    pub member: usize,
    pub assignment: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Consequence {
    pub holds: bool,
    /// First failing member and the least assignment witnessing the failure.
    pub witness: Option<ConsequenceWitness>,
}

pub fn consequence_over(
    fam: &StructureFamily,
    phi: &Formula,
    psi: &Formula,
    mode: ConsequenceMode,
) -> Result<Consequence> {
    for (member, a) in fam.members().iter().enumerate() {
        let base = a.base();
        let phi_set = definable_set(phi, base)?;
        let psi_set = definable_set(psi, base)?;
        let gap = match mode {
            ConsequenceMode::ValidityConsequence if !phi_set.is_full() => None,
            ConsequenceMode::ValidityConsequence => psi_set.complement().indices().next(),
            ConsequenceMode::ImplicationValidity => phi_set.difference(&psi_set).indices().next(),
        };
        if let Some(idx) = gap {
            let assignment = base.space().tuple(idx);
            return Ok(Consequence { holds: false, witness: Some(ConsequenceWitness { member, assignment }) });
        }
    }
    Ok(Consequence { holds: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::canonical_strong;
    use crate::syntax::{parse_formula, Vocabulary};
    use alloc::vec;

    #[test]
    fn evaluation_examples() {
        let a = canonical_strong(3, 3, 3).unwrap();
        let vocab = a.vocab().clone();
        let f = |s: &str| parse_formula(s, &vocab).unwrap();
        assert!(evaluate(&f("v0 = v0"), a.base(), &[4, 1, 2]).unwrap());
        assert!(evaluate(&f("P(v0)"), a.base(), &[0, 5, 5]).unwrap());
        assert!(!evaluate(&f("P(v0)"), a.base(), &[3, 5, 5]).unwrap());
        let phi = f("P(v0) <-> !P(v1)");
        assert!(evaluate(&phi, a.base(), &[1, 4, 0]).unwrap());
        assert!(evaluate(&phi, a.base(), &[4, 1, 0]).unwrap());
        assert!(!evaluate(&phi, a.base(), &[1, 2, 0]).unwrap());
    }

    #[test]
    fn evaluation_errors() {
        let a = canonical_strong(3, 3, 3).unwrap();
        let other = Vocabulary::with_symbols(3, [("S", 1)]).unwrap();
        let s = parse_formula("S(v0)", &other).unwrap();
        assert!(matches!(evaluate(&s, a.base(), &[0, 0, 0]), Err(Error::VocabularyMismatch(_))));
        assert!(matches!(definable_set(&s, a.base()), Err(Error::VocabularyMismatch(_))));
        assert!(evaluate(&Formula::True, a.base(), &[0, 0]).is_err());
        assert!(evaluate(&Formula::True, a.base(), &[0, 0, 6]).is_err());
    }

    #[test]
    fn definable_set_counts() {
        let a = canonical_strong(3, 3, 3).unwrap();
        let vocab = a.vocab().clone();
        let f = |s: &str| parse_formula(s, &vocab).unwrap();
        assert_eq!(definable_set(&f("true"), a.base()).unwrap().len(), 216);
        assert_eq!(definable_set(&f("P(v0)"), a.base()).unwrap().len(), 108);
        assert_eq!(definable_set(&f("v0=v1 & !v0=v2"), a.base()).unwrap().len(), 30);
    }

    #[test]
    fn pointwise_and_setwise_agree() {
        let a = canonical_strong(3, 3, 3).unwrap();
        let vocab = a.vocab().clone();
        for text in ["A v1. P(v1) -> E v2. Q(v2) & !v2 = v0", "E v0. P(v0) & !P(v1) <-> v1 = v2", "A v0. A v1. v0 = v1"]
        {
            let f = parse_formula(text, &vocab).unwrap();
            let set = definable_set(&f, a.base()).unwrap();
            for t in a.base().space().iter() {
                assert_eq!(set.contains(&t), evaluate(&f, a.base(), &t).unwrap(), "{text} at {t:?}");
            }
        }
    }

    #[test]
    fn consequence_modes() {
        let a = canonical_strong(3, 3, 3).unwrap();
        let vocab = a.vocab().clone();
        let fam = StructureFamily::new(vec![a]).unwrap();
        let f = |s: &str| parse_formula(s, &vocab).unwrap();
        let phi = f("P(v0) <-> !P(v1)");
        let psi = f("(Q(v0) <-> Q(v2)) | (Q(v1) <-> Q(v2))");
        let imp = consequence_over(&fam, &phi, &psi, ConsequenceMode::ImplicationValidity).unwrap();
        assert!(imp.holds);
        let vac = consequence_over(&fam, &phi, &Formula::False, ConsequenceMode::ValidityConsequence).unwrap();
        assert!(vac.holds);
        let bad =
            consequence_over(&fam, &Formula::True, &Formula::False, ConsequenceMode::ValidityConsequence).unwrap();
        assert!(!bad.holds);
        assert_eq!(bad.witness, Some(ConsequenceWitness { member: 0, assignment: vec![0, 0, 0] }));
    }
}
