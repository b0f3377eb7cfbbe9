#![allow(dead_code)]

use std::collections::BTreeSet;

use cylab_core::structure::enumerate_signatures;
use cylab_core::{sim_signature, Structure, TupleSet, TupleSpace, UStructure, Vocabulary};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Relations drawn tuple by tuple with probability `density`.
pub fn random_structure(
    rng: &mut impl Rng,
    n: usize,
    size: usize,
    symbols: &[(&str, usize)],
    density: f64,
) -> Structure {
    let vocab = Vocabulary::with_symbols(n, symbols.iter().copied()).unwrap();
    let mut a = Structure::new(size, vocab).unwrap();
    for &(name, arity) in symbols {
        let space = TupleSpace::new(size, arity);
        let rel = TupleSet::from_fn(space, |_| rng.gen_bool(density));
        a.set_relation(name, rel).unwrap();
    }
    a
}

/// Each relation is a random union of `~`-classes.
pub fn random_u_structure(
    rng: &mut impl Rng,
    n: usize,
    core: usize,
    cocore: usize,
    symbols: &[(&str, usize)],
) -> UStructure {
    let size = core + cocore;
    let core_set: BTreeSet<usize> = (0..core).collect();
    let vocab = Vocabulary::with_symbols(n, symbols.iter().copied()).unwrap();
    let mut a = Structure::new(size, vocab).unwrap();
    for &(name, arity) in symbols {
        let chosen: Vec<_> =
            enumerate_signatures(arity, true, true).into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        let space = TupleSpace::new(size, arity);
        let rel = TupleSet::from_fn(space, |idx| chosen.contains(&sim_signature(&space.tuple(idx), &core_set)));
        a.set_relation(name, rel).unwrap();
    }
    UStructure::new(a, 0..core).unwrap()
}

/// Atomic formulas' satisfaction sets, computed directly.
fn atomic_sets(a: &Structure) -> Vec<TupleSet> {
    let n = a.n();
    let space = a.space();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            out.push(TupleSet::diagonal(space, i, j));
        }
    }
    for (_, rel) in a.relations() {
        for args in TupleSpace::new(n, rel.arity()).iter() {
            out.push(TupleSet::from_fn(space, |idx| {
                let t = space.tuple(idx);
                rel.contains(&args.iter().map(|&v| t[v]).collect::<Vec<_>>())
            }));
        }
    }
    out
}

fn refine(blocks: Vec<TupleSet>, splitter: &TupleSet) -> (Vec<TupleSet>, bool) {
    let mut changed = false;
    let mut out = Vec::with_capacity(blocks.len());
    for b in blocks {
        let inside = b.intersection(splitter);
        let outside = b.difference(splitter);
        if inside.is_empty() || outside.is_empty() {
            out.push(b);
        } else {
            changed = true;
            out.push(inside);
            out.push(outside);
        }
    }
    (out, changed)
}

/// Atoms of the smallest set of relations containing every atomic formula's
/// set and closed under Boolean operations and cylindrification, by splitting
/// with `c_i(B)` for every block `B` until nothing changes. Sorted by least
/// member.
pub fn oracle_atoms(a: &Structure) -> Vec<TupleSet> {
    let mut blocks = vec![TupleSet::full(a.space())];
    for s in atomic_sets(a) {
        blocks = refine(blocks, &s).0;
    }
    loop {
        let mut changed = false;
        let splitters: Vec<TupleSet> = blocks.iter().flat_map(|b| (0..a.n()).map(move |i| b.cylindrify(i))).collect();
        for s in &splitters {
            let (next, c) = refine(blocks, s);
            blocks = next;
            changed |= c;
        }
        if !changed {
            break;
        }
    }
    blocks.sort_by_key(|b| b.indices().next());
    blocks
}
