mod common;

use std::collections::BTreeSet;

use common::{oracle_atoms, random_structure, random_u_structure, rng};
use cylab_core::algebra::{compute_joint_partition, is_definable};
use cylab_core::structure::{canonical_strong, definable_set, unary_u_structure, UnaryShape};
use cylab_core::{build_csn, compute_type_partition, sim_signature, Structure, TupleSet, Vocabulary};
use proptest::prelude::*;
use rand::Rng;

fn partition_atoms(a: &Structure) -> Vec<TupleSet> {
    let p = compute_type_partition(a).unwrap();
    (0..p.atom_count())
        .map(|k| {
            let mut s = p.empty_set();
            s.insert(k);
            p.to_tuples(0, &s)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_matches_splitter_oracle(seed in any::<u64>(), size in 1usize..=5, shape in 0usize..4) {
        let symbols: &[(&str, usize)] = match shape {
            0 => &[],
            1 => &[("P", 1)],
            2 => &[("E", 2)],
            _ => &[("P", 1), ("R", 3)],
        };
        let a = random_structure(&mut rng(seed), 3, size, symbols, 0.4);
        prop_assert_eq!(partition_atoms(&a), oracle_atoms(&a));
    }

    #[test]
    fn defining_formulas_evaluate_to_their_atoms(seed in any::<u64>(), size in 2usize..=5) {
        let a = random_structure(&mut rng(seed), 3, size, &[("E", 2)], 0.3);
        let p = compute_type_partition(&a).unwrap();
        for atom in 0..p.atom_count() {
            let mut s = p.empty_set();
            s.insert(atom);
            prop_assert_eq!(definable_set(&p.defining_formula(atom), &a).unwrap(), p.to_tuples(0, &s));
        }
    }
}

#[test]
fn atom_level_cylindrification_agrees_with_tuples() {
    let mut r = rng(7);
    let structures = [
        canonical_strong(3, 3, 3).unwrap().into_base(),
        random_structure(&mut r, 3, 5, &[("E", 2)], 0.35),
        random_u_structure(&mut r, 3, 3, 4, &[("P", 1), ("E", 2)]).into_base(),
    ];
    for a in &structures {
        let alg = build_csn(a).unwrap();
        for _ in 0..500 {
            let x = alg.from_atoms((0..alg.atom_count()).filter(|_| r.gen_bool(0.3))).unwrap();
            let tuples = alg.to_tuples(&x).unwrap();
            for i in 0..3 {
                let atom_level = alg.to_tuples(&alg.cylindrify(i, &x).unwrap()).unwrap();
                assert_eq!(atom_level, tuples.cylindrify(i));
            }
            let y = alg.from_atoms((0..alg.atom_count()).filter(|_| r.gen_bool(0.5))).unwrap();
            let ty = alg.to_tuples(&y).unwrap();
            assert_eq!(alg.to_tuples(&alg.meet(&x, &y).unwrap()).unwrap(), tuples.intersection(&ty));
            assert_eq!(alg.to_tuples(&alg.join(&x, &y).unwrap()).unwrap(), tuples.union(&ty));
            assert_eq!(alg.to_tuples(&alg.complement(&x).unwrap()).unwrap(), tuples.complement());
            let cx = alg.cylindrify(0, &x).unwrap();
            assert_eq!(alg.cylindrify(0, &cx).unwrap(), cx);
        }
        assert_eq!(alg.cylindrify(1, &alg.zero()).unwrap(), alg.zero());
        assert_eq!(alg.cylindrify(1, &alg.one()).unwrap(), alg.one());
    }
}

#[test]
fn equality_only_brute_force() {
    // definable sets of a pure set with at least n points are exactly the
    // unions of kernel classes
    let a = Structure::new(6, Vocabulary::new(3).unwrap()).unwrap();
    let alg = build_csn(&a).unwrap();
    let space = a.space();
    let mut kernels: Vec<Vec<usize>> = Vec::new();
    for t in space.iter() {
        let k = cylab_core::kernel(&t).labels().to_vec();
        if !kernels.contains(&k) {
            kernels.push(k);
        }
    }
    assert_eq!(kernels.len(), 5);
    let mut count = 0;
    for mask in 0u32..1 << kernels.len() {
        let rel = TupleSet::from_fn(space, |idx| {
            let k = cylab_core::kernel(&space.tuple(idx)).labels().to_vec();
            mask >> kernels.iter().position(|x| *x == k).unwrap() & 1 == 1
        });
        assert!(alg.element_of(&rel).is_some());
        count += 1;
    }
    assert_eq!(count, 1 << alg.carrier_log2());
}

#[test]
fn atoms_are_sim_closed_and_bounded() {
    let mut r = rng(11);
    for k in 0..40 {
        let core = 3 + k % 2;
        let cocore = 3 + (k / 2) % 3;
        let a = random_u_structure(&mut r, 3, core, cocore, &[("P", 1), ("E", 2)]);
        let p = compute_type_partition(a.base()).unwrap();
        assert!(p.atom_count() <= 22);
        let space = a.base().space();
        for atom in 0..p.atom_count() {
            let mut s = p.empty_set();
            s.insert(atom);
            let tuples = p.to_tuples(0, &s);
            let sigs: BTreeSet<_> = tuples.iter().map(|t| sim_signature(&t, a.core())).collect();
            let closure = TupleSet::from_fn(space, |idx| sigs.contains(&sim_signature(&space.tuple(idx), a.core())));
            assert_eq!(closure, tuples);
        }
    }
}

#[test]
fn strong_structures_refine_the_core_reduct() {
    let a = canonical_strong(3, 3, 3).unwrap();
    let full = build_csn(a.base()).unwrap();
    let core = build_csn(&a.core_structure()).unwrap();
    assert_eq!(core.atom_count(), 22);
    for atom in 0..full.atom_count() {
        let x = full.atom(atom).unwrap();
        assert!(core.element_of(&full.to_tuples(&x).unwrap()).is_some());
    }
}

#[test]
fn switching_function() {
    for a in [
        canonical_strong(3, 3, 3).unwrap(),
        canonical_strong(3, 4, 3).unwrap(),
        unary_u_structure(3, 3, 3, &[("P", UnaryShape::Full)]).unwrap(),
    ] {
        let alg = build_csn(a.base()).unwrap();
        for atom in 0..alg.atom_count() {
            let mut x = alg.atom(atom).unwrap();
            for i in 0..3 {
                x = alg.cylindrify(i, &x).unwrap();
            }
            assert_eq!(x, alg.one());
        }
    }
}

#[test]
fn column_invariance_of_unary_definables() {
    let a = canonical_strong(3, 3, 4).unwrap();
    let alg = build_csn(a.base()).unwrap();
    let space = a.base().space();
    for s in alg.unary_definables() {
        for col in 0..3 {
            let rel = TupleSet::from_fn(space, |idx| s.contains(&space.coord(idx, col)));
            assert!(is_definable(&rel, &alg).is_some(), "column {col} of {s:?}");
        }
    }
}

#[test]
fn unary_definables_of_u_structures() {
    let mut r = rng(3);
    for _ in 0..30 {
        let a = random_u_structure(&mut r, 3, 3, 4, &[("P", 1), ("E", 2)]);
        let alg = build_csn(a.base()).unwrap();
        let all: BTreeSet<usize> = (0..a.size()).collect();
        let core = a.core().clone();
        let cocore: BTreeSet<usize> = a.cocore().into_iter().collect();
        for s in alg.unary_definables() {
            assert!(s.is_empty() || s == all || s == core || s == cocore);
        }
    }
}

#[test]
fn joint_partition_restricts_to_members() {
    let mut r = rng(5);
    let a = random_structure(&mut r, 3, 4, &[("E", 2)], 0.4);
    let b = random_structure(&mut r, 3, 5, &[("E", 2)], 0.4);
    let joint = compute_joint_partition(&[&a, &b]).unwrap();
    for (m, s) in [&a, &b].into_iter().enumerate() {
        // every single-structure atom is a union of joint atoms and vice versa
        let own = compute_type_partition(s).unwrap();
        for idx in 0..s.space().len() {
            for jdx in 0..s.space().len() {
                let same_joint = joint.atom_of_index(m, idx) == joint.atom_of_index(m, jdx);
                let same_own = own.atom_of_index(0, idx) == own.atom_of_index(0, jdx);
                assert_eq!(same_joint, same_own);
            }
        }
    }
}
