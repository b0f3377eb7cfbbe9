//! Brute-force oracles over plain `Vec<bool>` relations, sharing nothing with
//! the library beyond reading a structure's relation memberships.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cylab_core::{Formula, Structure, UStructure};

/// A set of `n`-tuples over `0..size`, indexed lexicographically.
pub type Rel = Vec<bool>;

pub fn all_tuples(size: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                (0..size).map(move |x| {
                    let mut u = t.clone();
                    u.push(x);
                    u
                })
            })
            .collect();
    }
    out
}

pub fn index_of(size: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &x| acc * size + x)
}

/// `{s : some s' agreeing with s off place i lies in r}`.
pub fn cyl(size: usize, n: usize, r: &Rel, i: usize) -> Rel {
    let stride = size.pow((n - 1 - i) as u32);
    (0..r.len())
        .map(|idx| {
            let base = idx - (idx / stride % size) * stride;
            (0..size).any(|x| r[base + x * stride])
        })
        .collect()
}

/// Satisfaction set of `f` in `a`, bottom-up.
pub fn sat(f: &Formula, a: &Structure) -> Rel {
    let tuples = all_tuples(a.size(), a.n());
    sat_in(f, a, &tuples)
}

fn sat_in(f: &Formula, a: &Structure, tuples: &[Vec<usize>]) -> Rel {
    let (size, n) = (a.size(), a.n());
    let go = |g: &Formula| sat_in(g, a, tuples);
    match f {
        Formula::True => vec![true; tuples.len()],
        Formula::False => vec![false; tuples.len()],
        Formula::Eq(i, j) => tuples.iter().map(|t| t[*i] == t[*j]).collect(),
        Formula::Atom(name, args) => {
            let rel = a.relation(name).expect("symbol interpreted");
            tuples.iter().map(|t| rel.contains(&args.iter().map(|&v| t[v]).collect::<Vec<_>>())).collect()
        }
        Formula::Not(b) => go(b).into_iter().map(|x| !x).collect(),
        Formula::And(l, r) => zip(go(l), go(r), |x, y| x && y),
        Formula::Or(l, r) => zip(go(l), go(r), |x, y| x || y),
        Formula::Implies(l, r) => zip(go(l), go(r), |x, y| !x || y),
        Formula::Iff(l, r) => zip(go(l), go(r), |x, y| x == y),
        Formula::Exists(v, b) => cyl(size, n, &go(b), *v),
        Formula::Forall(v, b) => {
            let neg: Rel = go(b).into_iter().map(|x| !x).collect();
            cyl(size, n, &neg, *v).into_iter().map(|x| !x).collect()
        }
    }
}

fn zip(x: Rel, y: Rel, op: impl Fn(bool, bool) -> bool) -> Rel {
    x.into_iter().zip(y).map(|(a, b)| op(a, b)).collect()
}

pub fn symbols_of(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::True | Formula::False | Formula::Eq(..) => {}
        Formula::Atom(name, _) => {
            out.insert(name.clone());
        }
        Formula::Not(b) | Formula::Exists(_, b) | Formula::Forall(_, b) => symbols_of(b, out),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            symbols_of(l, out);
            symbols_of(r, out);
        }
    }
}

pub fn symbols(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    symbols_of(f, &mut out);
    out
}

/// Equality pattern plus core membership of each place.
pub fn sim_class(t: &[usize], core: &BTreeSet<usize>) -> (Vec<usize>, Vec<bool>) {
    let mut first: BTreeMap<usize, usize> = BTreeMap::new();
    let pattern = t
        .iter()
        .map(|&x| {
            let next = first.len();
            *first.entry(x).or_insert(next)
        })
        .collect();
    (pattern, t.iter().map(|x| core.contains(x)).collect())
}

pub fn kernel_class(t: &[usize]) -> Vec<usize> {
    sim_class(t, &BTreeSet::new()).0
}

/// Relations are unions of `~`-classes and both sides have `n` points.
pub fn is_u_structure(a: &UStructure) -> bool {
    let core = a.core();
    let n = a.n();
    if core.len() < n || a.size() - core.len() < n {
        return false;
    }
    a.base().relations().all(|(_, rel)| {
        let mut verdict: BTreeMap<_, bool> = BTreeMap::new();
        all_tuples(a.size(), rel.arity())
            .iter()
            .all(|t| *verdict.entry(sim_class(t, core)).or_insert(rel.contains(t)) == rel.contains(t))
    })
}

fn split(blocks: Vec<Rel>, by: &Rel) -> (Vec<Rel>, bool) {
    let mut changed = false;
    let mut out = Vec::new();
    for b in blocks {
        let inside: Rel = b.iter().zip(by).map(|(&x, &y)| x && y).collect();
        let outside: Rel = b.iter().zip(by).map(|(&x, &y)| x && !y).collect();
        if inside.contains(&true) && outside.contains(&true) {
            changed = true;
            out.push(inside);
            out.push(outside);
        } else {
            out.push(b);
        }
    }
    (out, changed)
}

/// Atoms of the least family of `n`-ary relations containing the atomic
/// formulas' sets and closed under Boolean operations and cylindrifications.
/// Sorted by least member.
pub fn oracle_atoms(a: &Structure) -> Vec<Rel> {
    let (size, n) = (a.size(), a.n());
    let mut blocks = vec![vec![true; size.pow(n as u32)]];
    let mut atomic = Vec::new();
    for i in 0..n {
        for j in 0..n {
            atomic.push(Formula::Eq(i, j));
        }
    }
    for (name, rel) in a.relations() {
        for args in all_tuples(n, rel.arity()) {
            atomic.push(Formula::Atom(name.to_string(), args));
        }
    }
    for f in &atomic {
        blocks = split(blocks, &sat(f, a)).0;
    }
    loop {
        let splitters: Vec<Rel> = blocks.iter().flat_map(|b| (0..n).map(|i| cyl(size, n, b, i))).collect();
        let mut changed = false;
        for s in &splitters {
            let (next, c) = split(blocks, s);
            blocks = next;
            changed |= c;
        }
        if !changed {
            break;
        }
    }
    blocks.sort_by_key(|b| b.iter().position(|&x| x));
    blocks
}

/// Whether `r` is a union of the given atoms.
pub fn is_union_of(r: &Rel, atoms: &[Rel]) -> bool {
    atoms.iter().all(|b| {
        let mut members = b.iter().zip(r).filter(|(&x, _)| x).map(|(_, &y)| y);
        let first = members.next().unwrap_or(false);
        members.all(|y| y == first)
    })
}

pub fn permutations(size: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; size], &mut out);
    out
}

pub fn is_automorphism(f: &[usize], a: &Structure) -> bool {
    a.relations().all(|(_, rel)| {
        all_tuples(a.size(), rel.arity())
            .iter()
            .all(|t| rel.contains(t) == rel.contains(&t.iter().map(|&x| f[x]).collect::<Vec<_>>()))
    })
}

pub fn automorphisms(a: &Structure) -> Vec<Vec<usize>> {
    permutations(a.size()).into_iter().filter(|f| is_automorphism(f, a)).collect()
}

/// Orbit id (least member's index) of each `k`-tuple under the group.
pub fn orbits(size: usize, k: usize, group: &[Vec<usize>]) -> Vec<usize> {
    let tuples = all_tuples(size, k);
    let mut ids = vec![usize::MAX; tuples.len()];
    for (idx, t) in tuples.iter().enumerate() {
        if ids[idx] == usize::MAX {
            for f in group {
                ids[index_of(size, &t.iter().map(|&x| f[x]).collect::<Vec<_>>())] = idx;
            }
        }
    }
    ids
}

/// Whether every permutation in the group maps `r` (of any arity) onto itself.
pub fn invariant(r: &cylab_core::TupleSet, group: &[Vec<usize>]) -> bool {
    let size = r.space().size();
    let tuples = all_tuples(size, r.arity());
    group
        .iter()
        .all(|f| tuples.iter().all(|t| r.contains(t) == r.contains(&t.iter().map(|&x| f[x]).collect::<Vec<_>>())))
}
