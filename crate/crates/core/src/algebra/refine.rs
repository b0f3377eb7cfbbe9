//! Partition refinement for the `n`-pebble game.
//!
//! Stage 0 groups `n`-tuples by atomic type (equalities between coordinates
//! and membership of every coordinate pattern in every relation). Stage `k+1`
//! splits a stage-`k` class by the set of stage-`k` classes reachable by
//! changing one coordinate `i`, for each `i`. The fixpoint is the partition
//! into `L_n`-types.
//!
//! Each class records the literals that set it apart from the other classes it
//! was split from, which is enough to write down a defining formula on demand.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::structure::Structure;
use crate::syntax::{Formula, Vocabulary};
use crate::tuples::{TupleSet, TupleSpace};
use crate::{Error, Result};

/// A set of atom ids.
pub type AtomSet = FixedBitSet;

#[derive(Debug, Clone, PartialEq, Eq)]
enum AtomicLiteral {
    Eq(usize, usize),
    Rel(String, Vec<usize>),
}

impl AtomicLiteral {
    fn formula(&self) -> Formula {
        match self {
            AtomicLiteral::Eq(i, j) => Formula::Eq(*i, *j),
            AtomicLiteral::Rel(name, args) => Formula::Atom(name.clone(), args.clone()),
        }
    }
}

/// `[!] E v_var. delta(class)` where `class` belongs to the previous stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ReachLiteral {
    var: usize,
    class: u32,
    positive: bool,
}

#[derive(Debug, Clone)]
struct SplitStage {
    parent: Vec<u32>,
    literals: Vec<Vec<ReachLiteral>>,
}

/// Partition of the `n`-tuples of one or more structures (over a common
/// vocabulary) into `L_n`-types. Tuples of different structures share an atom
/// exactly when no formula tells them apart.
///
/// Atoms are numbered by their least member, members ordered by structure and
/// then lexicographically.
#[derive(Debug, Clone)]
pub struct TypePartition {
    vocab: Vocabulary,
    spaces: Vec<TupleSpace>,
    offsets: Vec<usize>,
    atom_of: Vec<u32>,
    atom_count: usize,
    representatives: Vec<usize>,
    adjacency: Vec<Vec<Vec<u32>>>,
    atomic_literals: Vec<AtomicLiteral>,
    base_literals: Vec<Vec<(usize, bool)>>,
    splits: Vec<SplitStage>,
}

fn atomic_literals(vocab: &Vocabulary) -> Vec<AtomicLiteral> {
    let n = vocab.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(AtomicLiteral::Eq(i, j));
        }
    }
    for sym in vocab.symbols() {
        let patterns = TupleSpace::new(n, sym.arity);
        for args in patterns.iter() {
            out.push(AtomicLiteral::Rel(sym.name.clone(), args));
        }
    }
    out
}

/// Picks, for `class`, literals excluding every other candidate: the first
/// distinguishing position against each candidate not yet excluded.
fn separating_positions<F>(class: usize, candidates: &[usize], differ_at: F) -> Vec<usize>
where
    F: Fn(usize, usize) -> Option<usize>,
{
    let mut chosen: Vec<usize> = Vec::new();
    for &other in candidates.iter().filter(|&&c| c != class) {
        let excluded = chosen.iter().any(|&pos| differ_at(other, pos) == Some(pos));
        if !excluded {
            if let Some(pos) = differ_at(other, usize::MAX) {
                chosen.push(pos);
            }
        }
    }
    chosen.sort_unstable();
    chosen.dedup();
    chosen
}

pub fn compute_type_partition(a: &Structure) -> Result<TypePartition> {
    compute_joint_partition(&[a])
}

/// Joint refinement over the disjoint union of `structures`; coordinates are
/// only ever changed within one structure.
pub fn compute_joint_partition(structures: &[&Structure]) -> Result<TypePartition> {
    let first = structures.first().ok_or(Error::EmptyFamily)?;
    let vocab = first.vocab().clone();
    for s in structures.iter().skip(1) {
        if s.vocab() != &vocab {
            return Err(Error::VocabularyMismatch(format!("{} vs {}", s.vocab(), vocab)));
        }
    }
    let n = vocab.n();
    let spaces: Vec<TupleSpace> = structures.iter().map(|s| s.space()).collect();
    let mut offsets = Vec::with_capacity(spaces.len() + 1);
    let mut total = 0;
    for sp in &spaces {
        offsets.push(total);
        total += sp.len();
    }
    offsets.push(total);

    // stage 0: atomic types
    let literals = atomic_literals(&vocab);
    let mut truth_of_class: Vec<Vec<bool>> = Vec::new();
    let mut class_of_truth: BTreeMap<Vec<bool>, u32> = BTreeMap::new();
    let mut colour = vec![0u32; total];
    let mut buf = vec![0usize; n];
    for (m, s) in structures.iter().enumerate() {
        let sp = spaces[m];
        for idx in 0..sp.len() {
            sp.decode_into(idx, &mut buf);
            let truth: Vec<bool> = literals
                .iter()
                .map(|lit| match lit {
                    AtomicLiteral::Eq(i, j) => buf[*i] == buf[*j],
                    AtomicLiteral::Rel(name, args) => {
                        let rel = s.relation(name).expect("shared vocabulary");
                        let point: Vec<usize> = args.iter().map(|&v| buf[v]).collect();
                        rel.contains_index(rel.space().index(&point))
                    }
                })
                .collect();
            let next = class_of_truth.len() as u32;
            let c = *class_of_truth.entry(truth.clone()).or_insert_with(|| {
                truth_of_class.push(truth);
                next
            });
            colour[offsets[m] + idx] = c;
        }
    }
    let base_count = truth_of_class.len();
    let all_base: Vec<usize> = (0..base_count).collect();
    let base_literals: Vec<Vec<(usize, bool)>> = (0..base_count)
        .map(|c| {
            let mine = &truth_of_class[c];
            let differ_at = |other: usize, pos: usize| -> Option<usize> {
                let theirs = &truth_of_class[other];
                if pos != usize::MAX {
                    return (mine[pos] != theirs[pos]).then_some(pos);
                }
                (0..mine.len()).find(|&p| mine[p] != theirs[p])
            };
            separating_positions(c, &all_base, differ_at).into_iter().map(|p| (p, mine[p])).collect()
        })
        .collect();

    // stages 1..: split by reachable classes
    let mut splits: Vec<SplitStage> = Vec::new();
    let mut count = base_count;
    loop {
        let mut class_of_sig: BTreeMap<(u32, Vec<Vec<u32>>), u32> = BTreeMap::new();
        let mut sig_of_class: Vec<(u32, Vec<Vec<u32>>)> = Vec::new();
        let mut next_colour = vec![0u32; total];
        for (m, sp) in spaces.iter().enumerate() {
            let off = offsets[m];
            for idx in 0..sp.len() {
                let reach = neighbour_colours(&colour, off, *sp, idx, n);
                let sig = (colour[off + idx], reach);
                let next = class_of_sig.len() as u32;
                let c = *class_of_sig.entry(sig.clone()).or_insert_with(|| {
                    sig_of_class.push(sig);
                    next
                });
                next_colour[off + idx] = c;
            }
        }
        if sig_of_class.len() == count {
            break;
        }
        count = sig_of_class.len();
        let mut children: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (c, (parent, _)) in sig_of_class.iter().enumerate() {
            children.entry(*parent).or_default().push(c);
        }
        let literals_of = (0..count)
            .map(|c| {
                let (parent, reach) = &sig_of_class[c];
                let siblings = &children[parent];
                if siblings.len() == 1 {
                    return Vec::new();
                }
                // positions enumerate (var, previous class) pairs
                let width = sig_of_class.len().max(1) + colour.iter().copied().max().unwrap_or(0) as usize + 1;
                let has = |r: &[Vec<u32>], pos: usize| r[pos / width].binary_search(&((pos % width) as u32)).is_ok();
                let differ_at = |other: usize, pos: usize| -> Option<usize> {
                    let theirs = &sig_of_class[other].1;
                    if pos != usize::MAX {
                        return (has(reach, pos) != has(theirs, pos)).then_some(pos);
                    }
                    (0..n).find_map(|var| {
                        let mut merged: Vec<u32> = reach[var].iter().chain(&theirs[var]).copied().collect();
                        merged.sort_unstable();
                        merged.dedup();
                        merged.into_iter().map(|d| var * width + d as usize).find(|&p| has(reach, p) != has(theirs, p))
                    })
                };
                separating_positions(c, siblings, differ_at)
                    .into_iter()
                    .map(|p| ReachLiteral { var: p / width, class: (p % width) as u32, positive: has(reach, p) })
                    .collect()
            })
            .collect();
        splits.push(SplitStage { parent: sig_of_class.iter().map(|(p, _)| *p).collect(), literals: literals_of });
        colour = next_colour;
    }

    let atom_count = count;
    let mut representatives = vec![usize::MAX; atom_count];
    for (g, &c) in colour.iter().enumerate() {
        if representatives[c as usize] == usize::MAX {
            representatives[c as usize] = g;
        }
    }
    let mut adjacency = vec![vec![Vec::new(); atom_count]; n];
    for (a, &g) in representatives.iter().enumerate() {
        let m = offsets.partition_point(|&o| o <= g) - 1;
        let reach = neighbour_colours(&colour, offsets[m], spaces[m], g - offsets[m], n);
        for (i, r) in reach.into_iter().enumerate() {
            adjacency[i][a] = r;
        }
    }
    Ok(TypePartition {
        vocab,
        spaces,
        offsets,
        atom_of: colour,
        atom_count,
        representatives,
        adjacency,
        atomic_literals: literals,
        base_literals,
        splits,
    })
}

fn neighbour_colours(colour: &[u32], off: usize, sp: TupleSpace, idx: usize, n: usize) -> Vec<Vec<u32>> {
    (0..n)
        .map(|i| {
            let mut seen: Vec<u32> = (0..sp.size()).map(|x| colour[off + sp.with_coord(idx, i, x)]).collect();
            seen.sort_unstable();
            seen.dedup();
            seen
        })
        .collect()
}

impl TypePartition {
    pub fn n(&self) -> usize {
        self.vocab.n()
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn member_count(&self) -> usize {
        self.spaces.len()
    }

    pub fn member_space(&self, member: usize) -> TupleSpace {
        self.spaces[member]
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    /// Number of refinement rounds that split some class.
    pub fn rounds(&self) -> usize {
        self.splits.len()
    }

    pub fn atom_of_index(&self, member: usize, idx: usize) -> usize {
        self.atom_of[self.offsets[member] + idx] as usize
    }

    pub fn atom_of(&self, member: usize, tuple: &[usize]) -> Result<usize> {
        let idx = self.spaces[member].checked_index(tuple)?;
        Ok(self.atom_of_index(member, idx))
    }

    /// The least member of the atom, as `(structure, tuple)`.
    pub fn representative(&self, atom: usize) -> (usize, Vec<usize>) {
        let g = self.representatives[atom];
        let m = self.offsets.partition_point(|&o| o <= g) - 1;
        (m, self.spaces[m].tuple(g - self.offsets[m]))
    }

    /// Atoms reachable from `atom` by changing coordinate `i`.
    pub fn adjacent(&self, i: usize, atom: usize) -> &[u32] {
        &self.adjacency[i][atom]
    }

    /// Total number of tuples in each atom, summed over structures.
    pub fn atom_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.atom_count];
        for &c in &self.atom_of {
            sizes[c as usize] += 1;
        }
        sizes
    }

    pub fn empty_set(&self) -> AtomSet {
        AtomSet::with_capacity(self.atom_count)
    }

    pub fn full_set(&self) -> AtomSet {
        let mut set = self.empty_set();
        set.insert_range(..);
        set
    }

    /// Atoms realised in one structure.
    pub fn realised(&self, member: usize) -> AtomSet {
        let mut set = self.empty_set();
        for &c in &self.atom_of[self.offsets[member]..self.offsets[member + 1]] {
            set.insert(c as usize);
        }
        set
    }

    /// `c_i` on atom sets.
    pub fn cylindrify(&self, i: usize, atoms: &AtomSet) -> AtomSet {
        let mut out = self.empty_set();
        for a in atoms.ones() {
            for &b in &self.adjacency[i][a] {
                out.insert(b as usize);
            }
        }
        out
    }

    /// The tuples of one structure lying in the given atoms.
    pub fn to_tuples(&self, member: usize, atoms: &AtomSet) -> TupleSet {
        let off = self.offsets[member];
        TupleSet::from_fn(self.spaces[member], |idx| atoms.contains(self.atom_of[off + idx] as usize))
    }

    /// The atoms meeting `rel` in one structure.
    pub fn closure_of(&self, member: usize, rel: &TupleSet) -> AtomSet {
        let off = self.offsets[member];
        let mut set = self.empty_set();
        for idx in rel.indices() {
            set.insert(self.atom_of[off + idx] as usize);
        }
        set
    }

    /// `Some(atoms)` if `rel` is exactly a union of atoms within `member`.
    pub fn atoms_of_relation(&self, member: usize, rel: &TupleSet) -> Option<AtomSet> {
        if rel.space() != self.spaces[member] {
            return None;
        }
        let atoms = self.closure_of(member, rel);
        (self.to_tuples(member, &atoms) == *rel).then_some(atoms)
    }

    /// A formula defining `atom` in every structure of the partition.
    pub fn defining_formula(&self, atom: usize) -> Formula {
        let mut memo = BTreeMap::new();
        self.class_formula(self.splits.len(), atom as u32, &mut memo)
    }

    /// Disjunction of the atoms' defining formulas in atom order; `false` for
    /// no atoms and `true` for all of them.
    pub fn union_formula(&self, atoms: &AtomSet) -> Formula {
        if atoms.count_ones(..) == self.atom_count {
            return Formula::True;
        }
        let mut memo = BTreeMap::new();
        Formula::disjunction(atoms.ones().map(|a| self.class_formula(self.splits.len(), a as u32, &mut memo)))
    }

    /// Node count of [`Self::defining_formula`] without building it.
    pub fn formula_size(&self, atom: usize) -> u128 {
        let mut memo = BTreeMap::new();
        self.class_size(self.splits.len(), atom as u32, &mut memo)
    }

    fn class_formula(&self, stage: usize, class: u32, memo: &mut BTreeMap<(usize, u32), Formula>) -> Formula {
        if let Some(f) = memo.get(&(stage, class)) {
            return f.clone();
        }
        let f = if stage == 0 {
            Formula::conjunction(self.base_literals[class as usize].iter().map(|&(pos, positive)| {
                let atom = self.atomic_literals[pos].formula();
                if positive {
                    atom
                } else {
                    atom.not()
                }
            }))
        } else {
            let split = &self.splits[stage - 1];
            let parent = self.class_formula(stage - 1, split.parent[class as usize], memo);
            let lits: Vec<Formula> = split.literals[class as usize]
                .iter()
                .map(|lit| {
                    let body = Formula::exists(lit.var, self.class_formula(stage - 1, lit.class, memo));
                    if lit.positive {
                        body
                    } else {
                        body.not()
                    }
                })
                .collect();
            if lits.is_empty() {
                parent
            } else if parent == Formula::True {
                Formula::conjunction(lits)
            } else {
                Formula::conjunction(core::iter::once(parent).chain(lits))
            }
        };
        memo.insert((stage, class), f.clone());
        f
    }

    fn class_size(&self, stage: usize, class: u32, memo: &mut BTreeMap<(usize, u32), u128>) -> u128 {
        if let Some(&s) = memo.get(&(stage, class)) {
            return s;
        }
        let s = if stage == 0 {
            let lits = &self.base_literals[class as usize];
            let negs = lits.iter().filter(|(_, p)| !p).count() as u128;
            let k = lits.len() as u128;
            if k == 0 {
                1
            } else {
                k + negs + (k - 1)
            }
        } else {
            let split = &self.splits[stage - 1];
            let parent = self.class_size(stage - 1, split.parent[class as usize], memo);
            let lits = &split.literals[class as usize];
            let mut total = parent;
            for lit in lits {
                let body = 1 + self.class_size(stage - 1, lit.class, memo) + u128::from(!lit.positive);
                total = total.saturating_add(body).saturating_add(1);
            }
            total
        };
        memo.insert((stage, class), s);
        s
    }
}
