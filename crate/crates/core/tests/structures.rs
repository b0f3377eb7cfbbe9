mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{random_u_structure, rng};
use cylab_core::structure::{core_preserving_maps, AutomorphismFinder};
use cylab_core::{
    canonical_strong, definable_set, evaluate, generated_substructure, sim_closure, sim_signature, Formula, Structure,
    TupleSet, TupleSpace, UStructure, Vocabulary,
};
use proptest::prelude::*;

#[test]
fn sim_is_an_equivalence() {
    for size in 1..=6 {
        for core_size in 0..=size {
            let core: BTreeSet<usize> = (0..core_size).collect();
            for k in 1..=3 {
                let tuples: Vec<Vec<usize>> = TupleSpace::new(size, k).iter().collect();
                let sim = |s: &[usize], z: &[usize]| {
                    // the definition: same kernel, same core membership per place
                    (0..k).all(|i| (0..k).all(|j| (s[i] == s[j]) == (z[i] == z[j])))
                        && (0..k).all(|i| core.contains(&s[i]) == core.contains(&z[i]))
                };
                for s in &tuples {
                    assert!(sim(s, s));
                    for z in &tuples {
                        assert_eq!(sim(s, z), sim(z, s));
                        assert_eq!(sim(s, z), sim_signature(s, &core) == sim_signature(z, &core));
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sim_closure_is_a_closure_operator(bits in prop::collection::vec(any::<bool>(), 36), extra in prop::collection::vec(any::<bool>(), 36), core_size in 0usize..=6) {
        let space = TupleSpace::new(6, 2);
        let core: BTreeSet<usize> = (0..core_size).collect();
        let x = TupleSet::from_fn(space, |i| bits[i]);
        let y = x.union(&TupleSet::from_fn(space, |i| extra[i]));
        let cx = sim_closure(&x, &core);
        prop_assert!(x.is_subset(&cx));
        prop_assert!(cx.is_subset(&sim_closure(&y, &core)));
        prop_assert_eq!(sim_closure(&cx, &core), cx);
    }
}

#[test]
fn core_preserving_maps_are_automorphisms() {
    let mut r = rng(1);
    for (core, cocore) in [(3, 3), (3, 3), (3, 3)] {
        let a = random_u_structure(&mut r, 3, core, cocore, &[("P", 1), ("E", 2), ("R", 3)]);
        let maps: Vec<_> = core_preserving_maps(&a).collect();
        assert_eq!(maps.len(), 36);
        assert!(maps[0].is_identity());
        for f in maps {
            assert!(f.is_automorphism_of(a.base()));
        }
    }
}

/// Formulas over `{P, Q}` up to nesting depth 3, one per pair of satisfaction
/// sets in the two structures.
fn formula_sweep(a: &Structure, b: &Structure) -> Vec<Formula> {
    let mut seen: BTreeMap<(Vec<usize>, Vec<usize>), ()> = BTreeMap::new();
    let mut levels: Vec<Vec<(Formula, TupleSet, TupleSet)>> = Vec::new();
    let mut add = |f: Formula, level: &mut Vec<(Formula, TupleSet, TupleSet)>| {
        let sa = definable_set(&f, a).unwrap();
        let sb = definable_set(&f, b).unwrap();
        let key = (sa.indices().collect(), sb.indices().collect());
        if seen.insert(key, ()).is_none() {
            level.push((f, sa, sb));
        }
    };
    let mut base = Vec::new();
    for i in 0..3 {
        add(Formula::atom("P", [i]), &mut base);
        add(Formula::atom("Q", [i]), &mut base);
        for j in i + 1..3 {
            add(Formula::Eq(i, j), &mut base);
        }
    }
    levels.push(base);
    for _ in 0..3 {
        let known: Vec<Formula> = levels.iter().flatten().map(|(f, _, _)| f.clone()).collect();
        let mut next = Vec::new();
        for f in &known {
            add(f.clone().not(), &mut next);
            for v in 0..3 {
                add(Formula::exists(v, f.clone()), &mut next);
            }
            for g in &known {
                add(f.clone().and(g.clone()), &mut next);
            }
        }
        levels.push(next);
    }
    levels.into_iter().flatten().map(|(f, _, _)| f).collect()
}

#[test]
fn generated_substructure_is_elementary() {
    let a = canonical_strong(3, 4, 4).unwrap();
    let v: BTreeSet<usize> = [0, 1, 2, 5, 6, 7].into();
    let b = generated_substructure(&a, &v).unwrap();
    let order: Vec<usize> = v.iter().copied().collect();
    let formulas = formula_sweep(a.base(), b.base());
    assert!(formulas.len() > 20);
    let small = b.base().space();
    for f in &formulas {
        for idx in 0..small.len() {
            let t = small.tuple(idx);
            let lifted: Vec<usize> = t.iter().map(|&x| order[x]).collect();
            assert_eq!(evaluate(f, a.base(), &lifted).unwrap(), evaluate(f, b.base(), &t).unwrap(), "{f}");
            // Tarski-Vaught: witnesses for a quantifier can be found inside V
            for i in 0..3 {
                let big = evaluate(&Formula::exists(i, f.clone()), a.base(), &lifted).unwrap();
                let inside = order.iter().any(|&x| {
                    let mut w = lifted.clone();
                    w[i] = x;
                    evaluate(f, a.base(), &w).unwrap()
                });
                assert_eq!(big, inside, "{f} at {lifted:?}, v{i}");
            }
        }
    }
}

#[test]
fn automorphisms_exist_exactly_for_equal_types() {
    let mut r = rng(9);
    for _ in 0..4 {
        let a: UStructure = random_u_structure(&mut r, 3, 3, 3, &[("P", 1), ("E", 2)]);
        let finder = AutomorphismFinder::new(&a).unwrap();
        let maps: Vec<_> =
            cylab_core::structure::all_permutations(a.size()).filter(|f| f.is_automorphism_of(a.base())).collect();
        for s in TupleSpace::new(6, 2).iter() {
            for t in TupleSpace::new(6, 2).iter() {
                let exists = maps.iter().any(|f| f.apply_tuple(&s) == t);
                let found = finder.find(&s, &t).unwrap();
                assert_eq!(found.is_some(), exists, "{s:?} -> {t:?}");
                if let Some(f) = found {
                    assert_eq!(f.apply_tuple(&s), t);
                    assert!(f.is_automorphism_of(a.base()));
                }
            }
        }
    }
}

#[test]
fn equivalent_structures_are_isomorphic_by_core_bijections() {
    let a = canonical_strong(3, 3, 3).unwrap();
    let b = canonical_strong(3, 3, 3).unwrap();
    let eq = Vocabulary::new(3).unwrap();
    assert!(cylab_core::core_bijection_isomorphism(&a, &b, &[2, 0, 1, 5, 3, 4]).unwrap());
    assert!(!cylab_core::core_bijection_isomorphism(&a, &b, &[3, 0, 1, 2, 4, 5]).unwrap());
    let (ar, br) = (a.reduct(&eq).unwrap(), b.reduct(&eq).unwrap());
    assert!(cylab_core::core_bijection_isomorphism(&ar, &br, &[1, 2, 0, 4, 5, 3]).unwrap());
}
