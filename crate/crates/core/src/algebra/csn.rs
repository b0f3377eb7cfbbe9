use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use super::refine::{compute_type_partition, AtomSet, TypePartition};
use crate::structure::Structure;
use crate::syntax::{CylindricTerm, Formula};
use crate::tuples::TupleSet;
use crate::{Error, Result};

static NEXT_ID: AtomicU64 = AtomicU64::new(0);

/// An element of a [`CsnAlgebra`]: a set of atoms, tagged with the algebra it
/// belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    algebra: u64,
    atoms: AtomSet,
}

impl Element {
    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn atom_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.atoms.ones()
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.count_ones(..)
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_clear()
    }
}

/// `Cs_n(A)`: the `n`-ary relations definable in `A` with the `n`-variable
/// logic, represented as sets of atoms of the type partition.
#[derive(Debug, Clone)]
pub struct CsnAlgebra {
    id: u64,
    structure: Structure,
    partition: TypePartition,
}

/// Summary statistics of a [`CsnAlgebra`].
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CsnReport {
    pub atoms: usize,
    pub carrier_log2: usize,
    pub unary_definables: Vec<Vec<usize>>,
    pub atom_sizes: Vec<usize>,
}

pub fn build_csn(a: &Structure) -> Result<CsnAlgebra> {
    let partition = compute_type_partition(a)?;
    Ok(CsnAlgebra { id: NEXT_ID.fetch_add(1, Ordering::Relaxed), structure: a.clone(), partition })
}

/// A formula defining `rel` in `alg`'s structure, if `rel` is an element.
pub fn is_definable(rel: &TupleSet, alg: &CsnAlgebra) -> Option<Formula> {
    alg.element_of(rel).map(|x| alg.partition.union_formula(&x.atoms))
}

pub fn unary_definables(alg: &CsnAlgebra) -> Vec<BTreeSet<usize>> {
    alg.unary_definables()
}

impl CsnAlgebra {
    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn partition(&self) -> &TypePartition {
        &self.partition
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }

    pub fn atom_count(&self) -> usize {
        self.partition.atom_count()
    }

    /// `log2` of the number of elements.
    pub fn carrier_log2(&self) -> usize {
        self.atom_count()
    }

    fn wrap(&self, atoms: AtomSet) -> Element {
        Element { algebra: self.id, atoms }
    }

    fn own(&self, x: &Element) -> Result<()> {
        if x.algebra == self.id {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    fn check_var(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::VariableOutOfRange { index: i, n: self.n() })
        }
    }

    pub fn zero(&self) -> Element {
        self.wrap(self.partition.empty_set())
    }

    pub fn one(&self) -> Element {
        self.wrap(self.partition.full_set())
    }

    pub fn atom(&self, a: usize) -> Option<Element> {
        (a < self.atom_count()).then(|| {
            let mut set = self.partition.empty_set();
            set.insert(a);
            self.wrap(set)
        })
    }

    pub fn from_atoms(&self, atoms: impl IntoIterator<Item = usize>) -> Option<Element> {
        let mut set = self.partition.empty_set();
        for a in atoms {
            if a >= self.atom_count() {
                return None;
            }
            set.insert(a);
        }
        Some(self.wrap(set))
    }

    fn atoms_where(&self, pred: impl Fn(&[usize]) -> bool) -> AtomSet {
        let mut set = self.partition.empty_set();
        for a in 0..self.atom_count() {
            if pred(&self.partition.representative(a).1) {
                set.insert(a);
            }
        }
        set
    }

    /// `d_ij = {s : s_i = s_j}`.
    pub fn diagonal(&self, i: usize, j: usize) -> Result<Element> {
        self.check_var(i)?;
        self.check_var(j)?;
        Ok(self.wrap(self.atoms_where(|s| s[i] == s[j])))
    }

    /// `[R(v0, ..., v_{k-1})]`.
    pub fn generator(&self, name: &str) -> Result<Element> {
        let rel = self.structure.relation(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        let k = rel.arity();
        Ok(self.wrap(self.atoms_where(|s| rel.contains(&s[..k]))))
    }

    /// Tuples whose first `m` entries are pairwise distinct.
    pub fn dstar(&self, m: usize) -> Result<Element> {
        if m > self.n() {
            return Err(Error::VariableOutOfRange { index: m, n: self.n() });
        }
        Ok(self.wrap(self.atoms_where(|s| (0..m).all(|i| (i + 1..m).all(|j| s[i] != s[j])))))
    }

    pub fn meet(&self, x: &Element, y: &Element) -> Result<Element> {
        self.own(x)?;
        self.own(y)?;
        Ok(self.wrap(&x.atoms & &y.atoms))
    }

    pub fn join(&self, x: &Element, y: &Element) -> Result<Element> {
        self.own(x)?;
        self.own(y)?;
        Ok(self.wrap(&x.atoms | &y.atoms))
    }

    pub fn complement(&self, x: &Element) -> Result<Element> {
        self.own(x)?;
        let mut atoms = x.atoms.clone();
        atoms.toggle_range(..);
        Ok(self.wrap(atoms))
    }

    pub fn cylindrify(&self, i: usize, x: &Element) -> Result<Element> {
        self.own(x)?;
        self.check_var(i)?;
        Ok(self.wrap(self.partition.cylindrify(i, &x.atoms)))
    }

    pub fn is_subset(&self, x: &Element, y: &Element) -> Result<bool> {
        self.own(x)?;
        self.own(y)?;
        Ok(x.atoms.is_subset(&y.atoms))
    }

    pub fn contains_tuple(&self, x: &Element, tuple: &[usize]) -> Result<bool> {
        self.own(x)?;
        Ok(x.atoms.contains(self.partition.atom_of(0, tuple)?))
    }

    pub fn to_tuples(&self, x: &Element) -> Result<TupleSet> {
        self.own(x)?;
        Ok(self.partition.to_tuples(0, &x.atoms))
    }

    /// `Some` iff `rel` is a union of atoms.
    pub fn element_of(&self, rel: &TupleSet) -> Option<Element> {
        self.partition.atoms_of_relation(0, rel).map(|atoms| self.wrap(atoms))
    }

    /// Least element containing `rel`.
    pub fn closure_of(&self, rel: &TupleSet) -> Result<Element> {
        if rel.space() != self.structure.space() {
            return Err(Error::LengthMismatch { left: rel.arity(), right: self.n() });
        }
        Ok(self.wrap(self.partition.closure_of(0, rel)))
    }

    pub fn defining_formula(&self, x: &Element) -> Result<Formula> {
        self.own(x)?;
        Ok(self.partition.union_formula(&x.atoms))
    }

    pub fn eval_term(&self, t: &CylindricTerm) -> Result<Element> {
        Ok(match t {
            CylindricTerm::Zero => self.zero(),
            CylindricTerm::One => self.one(),
            CylindricTerm::Generator(name) => self.generator(name)?,
            CylindricTerm::Diagonal(i, j) => self.diagonal(*i, *j)?,
            CylindricTerm::Meet(a, b) => self.meet(&self.eval_term(a)?, &self.eval_term(b)?)?,
            CylindricTerm::Complement(a) => self.complement(&self.eval_term(a)?)?,
            CylindricTerm::Cyl(i, a) => self.cylindrify(*i, &self.eval_term(a)?)?,
        })
    }

    /// `c_m c_{m+1} ... c_{n-1} x`.
    pub fn cylinder_above(&self, m: usize, x: &Element) -> Result<Element> {
        self.own(x)?;
        let mut atoms = x.atoms.clone();
        for i in m..self.n() {
            atoms = self.partition.cylindrify(i, &atoms);
        }
        Ok(self.wrap(atoms))
    }

    /// The minimal nonzero elements not depending on coordinates `>= m`,
    /// ordered by least atom. Every such element is a union of these blocks.
    pub fn m_ary_blocks(&self, m: usize) -> Result<Vec<Element>> {
        if m == 0 || m > self.n() {
            return Err(Error::VariableOutOfRange { index: m, n: self.n() });
        }
        let mut covered = self.partition.empty_set();
        let mut blocks = Vec::new();
        for a in 0..self.atom_count() {
            if covered.contains(a) {
                continue;
            }
            let block = self.cylinder_above(m, &self.atom(a).expect("atom in range"))?;
            covered.union_with(&block.atoms);
            blocks.push(block);
        }
        Ok(blocks)
    }

    /// All elements `x` with `c_k x = x` for every `k >= m`.
    pub fn m_ary_definables(&self, m: usize) -> Result<MaryDefinables<'_>> {
        let blocks = self.m_ary_blocks(m)?;
        Ok(MaryDefinables { alg: self, blocks, next: 0, done: false })
    }

    /// Subsets `S` of the universe with `{s : s_0 in S}` an element, ordered by
    /// size and then lexicographically.
    pub fn unary_definables(&self) -> Vec<BTreeSet<usize>> {
        let blocks = self.m_ary_blocks(1).expect("n >= 1");
        let columns: Vec<BTreeSet<usize>> = blocks
            .iter()
            .map(|b| {
                (0..self.structure.size())
                    .filter(|&x| {
                        let mut t = alloc::vec![x; self.n()];
                        t[1..].fill(0);
                        b.atoms.contains(self.partition.atom_of(0, &t).expect("in range"))
                    })
                    .collect()
            })
            .collect();
        let mut out: Vec<BTreeSet<usize>> = (0u64..1 << columns.len())
            .map(|mask| {
                columns
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .flat_map(|(_, c)| c.iter().copied())
                    .collect()
            })
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn report(&self) -> CsnReport {
        CsnReport {
            atoms: self.atom_count(),
            carrier_log2: self.carrier_log2(),
            unary_definables: self.unary_definables().into_iter().map(|s| s.into_iter().collect()).collect(),
            atom_sizes: self.partition.atom_sizes(),
        }
    }
}

/// Iterator over the unions of a list of blocks, in binary counting order.
#[derive(Debug, Clone)]
pub struct MaryDefinables<'a> {
    alg: &'a CsnAlgebra,
    blocks: Vec<Element>,
    next: u128,
    done: bool,
}

impl MaryDefinables<'_> {
    pub fn blocks(&self) -> &[Element] {
        &self.blocks
    }

    /// Total number of elements, `2^blocks`.
    pub fn total(&self) -> u128 {
        1u128 << self.blocks.len()
    }
}

impl Iterator for MaryDefinables<'_> {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        if self.done || self.next >= self.total() {
            self.done = true;
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let mut atoms = self.alg.partition.empty_set();
        for (k, b) in self.blocks.iter().enumerate() {
            if mask >> k & 1 == 1 {
                atoms.union_with(&b.atoms);
            }
        }
        Some(self.alg.wrap(atoms))
    }
}
