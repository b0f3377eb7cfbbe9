//! Seeded random U-structures and formulas.

use std::collections::BTreeSet;

use cylab_core::structure::{enumerate_signatures, unary_u_structure, UnaryShape};
use cylab_core::{sim_signature, Formula, Structure, StructureFamily, TupleSet, TupleSpace, UStructure, Vocabulary};
use rand::seq::SliceRandom;
use rand::Rng;

/// A U-structure over `symbols` whose relations are random unions of
/// `~`-classes. The universe is `0..size`; the core is a random subset with at
/// least `n` points on each side.
pub fn random_u_structure(rng: &mut impl Rng, n: usize, size: usize, symbols: &[(&str, usize)]) -> UStructure {
    assert!(size >= 2 * n, "a U-structure needs at least 2n points");
    let core_size = rng.gen_range(n..=size - n);
    let mut points: Vec<usize> = (0..size).collect();
    points.shuffle(rng);
    let core: BTreeSet<usize> = points[..core_size].iter().copied().collect();
    let vocab = Vocabulary::with_symbols(n, symbols.iter().copied()).expect("valid symbols");
    let mut a = Structure::new(size, vocab).expect("nonempty");
    for &(name, arity) in symbols {
        let chosen: Vec<_> =
            enumerate_signatures(arity, true, true).into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        let space = TupleSpace::new(size, arity);
        let rel = TupleSet::from_fn(space, |idx| chosen.contains(&sim_signature(&space.tuple(idx), &core)));
        a.set_relation(name, rel).expect("declared symbol");
    }
    UStructure::new(a, core).expect("relations are unions of ~-classes")
}

/// Vocabulary drawn for a corpus member: a unary `P`, and independently a
/// binary `E` and a ternary `R` when `n` allows.
pub fn random_symbols(rng: &mut impl Rng, n: usize) -> Vec<(&'static str, usize)> {
    let mut out = vec![("P", 1)];
    if n >= 2 && rng.gen_bool(0.7) {
        out.push(("E", 2));
    }
    if n >= 3 && rng.gen_bool(0.4) {
        out.push(("R", 3));
    }
    out
}

/// Standard family: `P = Q = core` on a few sizes.
pub fn default_family(n: usize) -> StructureFamily {
    let members = [(n, n), (n, n + 1), (n + 1, n)]
        .into_iter()
        .map(|(c, cc)| cylab_core::canonical_strong(n, c, cc).expect("sizes at least n"))
        .collect();
    StructureFamily::new(members).expect("shared vocabulary")
}

/// Three structures over `{P, Q}` with each relation equal to the core or to
/// its complement. Every one-symbol reduct of one member is equivalent to that
/// of any other, so reducts amalgamate inside the family.
pub fn interpolation_family(n: usize) -> StructureFamily {
    use UnaryShape::{Cocore, Core};
    let members = vec![
        unary_u_structure(n, n, n, &[("P", Core), ("Q", Core)]).expect("valid"),
        unary_u_structure(n, n, n + 1, &[("P", Core), ("Q", Cocore)]).expect("valid"),
        unary_u_structure(n, n + 1, n, &[("P", Cocore), ("Q", Cocore)]).expect("valid"),
    ];
    StructureFamily::new(members).expect("shared vocabulary")
}

/// A random formula of nesting depth at most `depth` over unary symbols.
pub fn random_formula(rng: &mut impl Rng, n: usize, symbols: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return if !symbols.is_empty() && rng.gen_bool(0.8) {
            Formula::atom(*symbols.choose(rng).expect("nonempty"), [rng.gen_range(0..n)])
        } else {
            Formula::Eq(rng.gen_range(0..n), rng.gen_range(0..n))
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => random_formula(rng, n, symbols, d).not(),
        1 => random_formula(rng, n, symbols, d).and(random_formula(rng, n, symbols, d)),
        2 => random_formula(rng, n, symbols, d).or(random_formula(rng, n, symbols, d)),
        3 => random_formula(rng, n, symbols, d).implies(random_formula(rng, n, symbols, d)),
        4 => Formula::exists(rng.gen_range(0..n), random_formula(rng, n, symbols, d)),
        _ => Formula::forall(rng.gen_range(0..n), random_formula(rng, n, symbols, d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corpus_members_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for size in 6..=8 {
            let symbols = random_symbols(&mut rng, 3);
            let a = random_u_structure(&mut rng, 3, size, &symbols);
            assert_eq!(a.size(), size);
            assert!(a.core().len() >= 3 && a.cocore().len() >= 3);
        }
    }

    #[test]
    fn families_are_well_formed() {
        assert_eq!(default_family(3).len(), 3);
        assert_eq!(interpolation_family(3).vocab().len(), 2);
    }
}
