use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::sim::validate_u_structure;
use crate::syntax::Vocabulary;
use crate::tuples::{TupleSet, TupleSpace};
use crate::{Error, Result};

/// A finite relational structure with universe `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    size: usize,
    vocab: Vocabulary,
    relations: BTreeMap<String, TupleSet>,
}

impl Structure {
    /// Every symbol of `vocab` starts out interpreted as the empty relation.
    pub fn new(size: usize, vocab: Vocabulary) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyUniverse);
        }
        let relations =
            vocab.symbols().map(|sym| (sym.name, TupleSet::empty(TupleSpace::new(size, sym.arity)))).collect();
        Ok(Structure { size, vocab, relations })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Variable count of the logic this structure is read in.
    pub fn n(&self) -> usize {
        self.vocab.n()
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    /// The space of `n`-tuples, where elements of the cylindric set algebra live.
    pub fn space(&self) -> TupleSpace {
        TupleSpace::new(self.size, self.n())
    }

    pub fn relation(&self, name: &str) -> Option<&TupleSet> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &TupleSet)> + '_ {
        self.relations.iter().map(|(name, rel)| (name.as_str(), rel))
    }

    pub fn set_relation(&mut self, name: &str, rel: TupleSet) -> Result<()> {
        let arity = self.vocab.arity(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        if rel.space() != TupleSpace::new(self.size, arity) {
            return Err(Error::ArityMismatch { symbol: name.to_string(), expected: arity, found: rel.arity() });
        }
        self.relations.insert(name.to_string(), rel);
        Ok(())
    }

    /// Replaces the interpretation of `name` with the given tuples.
    pub fn with_tuples<I, T>(mut self, name: &str, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[usize]>,
    {
        let arity = self.vocab.arity(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        let rel = TupleSet::from_tuples(TupleSpace::new(self.size, arity), tuples)?;
        self.set_relation(name, rel)?;
        Ok(self)
    }

    /// Adds a new symbol to the vocabulary together with its interpretation.
    pub fn expand(&self, name: &str, rel: TupleSet) -> Result<Structure> {
        let mut out = self.clone();
        out.vocab.add(name, rel.arity())?;
        out.relations.insert(name.to_string(), TupleSet::empty(TupleSpace::new(self.size, rel.arity())));
        out.set_relation(name, rel)?;
        Ok(out)
    }

    /// Forgets every relation outside `vocab`, which must be a sub-vocabulary.
    pub fn reduct(&self, vocab: &Vocabulary) -> Result<Structure> {
        if !vocab.is_subset_of(&self.vocab) || vocab.n() != self.n() {
            return Err(Error::VocabularyMismatch(format!("{vocab} is not a sub-vocabulary of {}", self.vocab)));
        }
        let relations = self
            .relations
            .iter()
            .filter(|(name, _)| vocab.contains(name))
            .map(|(name, rel)| (name.clone(), rel.clone()))
            .collect();
        Ok(Structure { size: self.size, vocab: vocab.clone(), relations })
    }

    pub(crate) fn check_tuple(&self, tuple: &[usize]) -> Result<()> {
        match tuple.iter().find(|&&x| x >= self.size) {
            Some(_) => Err(Error::TupleOutOfRange { tuple: tuple.to_vec(), size: self.size }),
            None => Ok(()),
        }
    }
}

/// A structure with a distinguished core, where every relation is closed
/// under `~` and both the core and its complement have at least `n` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UStructure {
    base: Structure,
    core: BTreeSet<usize>,
}

impl UStructure {
    pub fn new(base: Structure, core: impl IntoIterator<Item = usize>) -> Result<Self> {
        let core: BTreeSet<usize> = core.into_iter().collect();
        let report = validate_u_structure(&base, &core);
        if !report.is_ok() {
            return Err(Error::InvalidUStructure(report));
        }
        Ok(UStructure { base, core })
    }

    pub fn base(&self) -> &Structure {
        &self.base
    }

    pub fn into_base(self) -> Structure {
        self.base
    }

    pub fn core(&self) -> &BTreeSet<usize> {
        &self.core
    }

    pub fn in_core(&self, x: usize) -> bool {
        self.core.contains(&x)
    }

    pub fn cocore(&self) -> Vec<usize> {
        (0..self.size()).filter(|x| !self.core.contains(x)).collect()
    }

    pub fn size(&self) -> usize {
        self.base.size
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.base.vocab
    }

    /// Reducts of U-structures are U-structures with the same core.
    pub fn reduct(&self, vocab: &Vocabulary) -> Result<UStructure> {
        Ok(UStructure { base: self.base.reduct(vocab)?, core: self.core.clone() })
    }

    /// `{ s in ^nA : s_0 in core }`, the core as an element of the `n`-ary algebra.
    pub fn core_column(&self) -> TupleSet {
        let space = self.base.space();
        TupleSet::from_fn(space, |idx| self.core.contains(&space.coord(idx, 0)))
    }

    /// A fresh relation name not used by the vocabulary.
    pub fn fresh_name(&self, stem: &str) -> String {
        let mut name = stem.to_string();
        let mut k = 0;
        while self.vocab().contains(&name) {
            k += 1;
            name = format!("{stem}{k}");
        }
        name
    }

    /// `<A, core>`: same universe, the core as the only relation.
    pub fn core_structure(&self) -> Structure {
        let name = self.fresh_name("Core");
        let vocab = Vocabulary::with_symbols(self.n(), [(name.clone(), 1)]).expect("fresh unary symbol");
        Structure::new(self.size(), vocab)
            .and_then(|s| s.with_tuples(&name, self.core.iter().map(|&x| [x])))
            .expect("core lies inside the universe")
    }
}

/// Non-empty list of U-structures over one vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureFamily {
    members: Vec<UStructure>,
}

impl StructureFamily {
    pub fn new(members: Vec<UStructure>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyFamily)?;
        for (idx, member) in members.iter().enumerate().skip(1) {
            if member.vocab() != first.vocab() {
                return Err(Error::VocabularyMismatch(format!(
                    "member {idx} has vocabulary {} (n = {}), member 0 has {} (n = {})",
                    member.vocab(),
                    member.n(),
                    first.vocab(),
                    first.n()
                )));
            }
        }
        Ok(StructureFamily { members })
    }

    pub fn members(&self) -> &[UStructure] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn vocab(&self) -> &Vocabulary {
        self.members[0].vocab()
    }

    pub fn n(&self) -> usize {
        self.members[0].n()
    }

    pub fn reduct(&self, vocab: &Vocabulary) -> Result<StructureFamily> {
        let members = self.members.iter().map(|m| m.reduct(vocab)).collect::<Result<Vec<_>>>()?;
        Ok(StructureFamily { members })
    }
}

/// How a unary relation of [`unary_u_structure`] sits relative to the core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum UnaryShape {
    Empty,
    Full,
    Core,
    Cocore,
}

/// Universe `0..core_size + cocore_size` with core `0..core_size` and the
/// given unary relations.
pub fn unary_u_structure(
    n: usize,
    core_size: usize,
    cocore_size: usize,
    relations: &[(&str, UnaryShape)],
) -> Result<UStructure> {
    if core_size < n || cocore_size < n {
        return Err(Error::Precondition(format!(
            "core ({core_size}) and co-core ({cocore_size}) must each have at least n = {n} elements"
        )));
    }
    let size = core_size + cocore_size;
    let vocab = Vocabulary::with_symbols(n, relations.iter().map(|(name, _)| (*name, 1)))?;
    let mut base = Structure::new(size, vocab)?;
    for (name, shape) in relations {
        let members: Vec<usize> = match shape {
            UnaryShape::Empty => Vec::new(),
            UnaryShape::Full => (0..size).collect(),
            UnaryShape::Core => (0..core_size).collect(),
            UnaryShape::Cocore => (core_size..size).collect(),
        };
        base = base.with_tuples(name, members.into_iter().map(|x| [x]))?;
    }
    UStructure::new(base, 0..core_size)
}

/// Finite counterpart of the structure with two unary relations `P = Q = core`:
/// universe `0..core_size + cocore_size`, core `0..core_size`.
pub fn canonical_strong(n: usize, core_size: usize, cocore_size: usize) -> Result<UStructure> {
    unary_u_structure(n, core_size, cocore_size, &[("P", UnaryShape::Core), ("Q", UnaryShape::Core)])
}
