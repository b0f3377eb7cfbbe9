use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::algebra::{build_csn, CsnAlgebra};
use crate::structure::{all_permutations, core_preserving_maps, Permutation, Structure, UStructure};
use crate::syntax::{Formula, Vocabulary};
use crate::tuples::{TupleSet, TupleSpace};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DefinabilityTarget {
    /// A symbol of the structure's full vocabulary.
    Symbol(String),
    /// A raw relation of arity at most `n`.
    Tuples(TupleSet),
}

#[derive(Debug, Clone)]
pub struct DefinabilityProblem {
    pub structure: UStructure,
    pub language: Vocabulary,
    pub target: DefinabilityTarget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "outcome", rename_all = "kebab-case"))]
pub enum SvenoniusOutcome {
    /// A formula over the language defining the target.
    Explicit { formula: Formula },
    /// An automorphism of the reduct moving `tuple` out of the target.
    NotInvariant { automorphism: Permutation, tuple: Vec<usize> },
    /// Every automorphism preserves the target yet it is not a union of atoms.
    NotDefinable,
}

/// The automorphism group of `a|_language`.
///
/// When the reduct defines the core, every automorphism preserves it and the
/// core-preserving permutations are the candidates; otherwise all
/// permutations are.
pub fn automorphisms_of_reduct(a: &UStructure, language: &Vocabulary) -> Result<Vec<Permutation>> {
    Ok(SvenoniusSolver::new(a, language)?.group)
}

/// Reusable state for many targets over one structure and language.
#[derive(Debug, Clone)]
pub struct SvenoniusSolver {
    reduct: Structure,
    algebra: CsnAlgebra,
    group: Vec<Permutation>,
    core_definable: bool,
    /// For each arity `k <= n`, an orbit id per `k`-tuple (least member's index).
    orbits: Vec<Vec<usize>>,
}

fn orbit_ids(group: &[Permutation], space: TupleSpace) -> Vec<usize> {
    let mut ids = alloc::vec![usize::MAX; space.len()];
    for idx in 0..space.len() {
        if ids[idx] != usize::MAX {
            continue;
        }
        let t = space.tuple(idx);
        for f in group {
            ids[space.index(&f.apply_tuple(&t))] = idx;
        }
    }
    ids
}

impl SvenoniusSolver {
    pub fn new(a: &UStructure, language: &Vocabulary) -> Result<Self> {
        for name in language.names() {
            if a.vocab().arity(name) != language.arity(name) {
                return Err(Error::UnknownSymbol(name.to_string()));
            }
        }
        let reduct = a.base().reduct(language)?;
        let algebra = build_csn(&reduct)?;
        let core_definable = algebra.element_of(&a.core_column()).is_some();
        let group: Vec<Permutation> = if core_definable {
            core_preserving_maps(a).filter(|f| f.is_automorphism_of(&reduct)).collect()
        } else {
            all_permutations(a.size()).filter(|f| f.is_automorphism_of(&reduct)).collect()
        };
        let orbits = (0..=a.n()).map(|k| orbit_ids(&group, TupleSpace::new(a.size(), k))).collect();
        Ok(SvenoniusSolver { reduct, algebra, group, core_definable, orbits })
    }

    pub fn group(&self) -> &[Permutation] {
        &self.group
    }

    pub fn core_definable(&self) -> bool {
        self.core_definable
    }

    pub fn algebra(&self) -> &CsnAlgebra {
        &self.algebra
    }

    /// `{s in A^n : s restricted to the first arity(rel) places lies in rel}`.
    pub fn cylinder(&self, rel: &TupleSet) -> Result<TupleSet> {
        let n = self.reduct.n();
        if rel.arity() > n {
            return Err(Error::ArityOutOfRange { symbol: "target".to_string(), arity: rel.arity(), n });
        }
        if rel.space().size() != self.reduct.size() {
            return Err(Error::Precondition(format!(
                "target lives on {} points, the structure has {}",
                rel.space().size(),
                self.reduct.size()
            )));
        }
        let space = self.reduct.space();
        let k = rel.arity();
        let sub = TupleSpace::new(space.size(), k);
        let shift = space.len() / sub.len();
        Ok(TupleSet::from_fn(space, |idx| rel.contains_index(idx / shift)))
    }

    pub fn solve(&self, rel: &TupleSet) -> Result<SvenoniusOutcome> {
        let cylinder = self.cylinder(rel)?;
        let orbit = &self.orbits[rel.arity()];
        let space = rel.space();
        let escape = (0..space.len()).find(|&u| rel.contains_index(u) != rel.contains_index(orbit[u]));
        if let Some(u) = escape {
            let (inside, outside) = if rel.contains_index(u) { (u, orbit[u]) } else { (orbit[u], u) };
            let t = space.tuple(inside);
            let target = space.tuple(outside);
            let f = self.group.iter().find(|f| f.apply_tuple(&t) == target).expect("same orbit");
            return Ok(SvenoniusOutcome::NotInvariant { automorphism: f.clone(), tuple: t });
        }
        Ok(match self.algebra.element_of(&cylinder) {
            Some(x) => SvenoniusOutcome::Explicit { formula: self.algebra.defining_formula(&x)? },
            None => SvenoniusOutcome::NotDefinable,
        })
    }
}

/// Synthesises an explicit definition of the target over the language when
/// every automorphism of the reduct preserves it.
pub fn svenonius_explicit(p: &DefinabilityProblem) -> Result<SvenoniusOutcome> {
    let rel = match &p.target {
        DefinabilityTarget::Symbol(name) => {
            p.structure.base().relation(name).ok_or_else(|| Error::UnknownSymbol(name.clone()))?.clone()
        }
        DefinabilityTarget::Tuples(rel) => rel.clone(),
    };
    SvenoniusSolver::new(&p.structure, &p.language)?.solve(&rel)
}

/// Whether `r` is implicitly defined over `language` by the pair: equal
/// reducts force equal interpretations of `r`.
pub fn implicit_defines(a: &UStructure, b: &UStructure, language: &Vocabulary, r: &str) -> Result<bool> {
    if a.size() != b.size() {
        return Err(Error::Precondition(format!("universes differ: {} vs {}", a.size(), b.size())));
    }
    if a.vocab() != b.vocab() {
        return Err(Error::VocabularyMismatch(format!("{} vs {}", a.vocab(), b.vocab())));
    }
    if language.contains(r) {
        return Err(Error::Precondition(format!("{r} belongs to the defining language")));
    }
    let ra = a.base().relation(r).ok_or_else(|| Error::UnknownSymbol(r.to_string()))?;
    let rb = b.base().relation(r).expect("shared vocabulary");
    if a.base().reduct(language)? != b.base().reduct(language)? {
        return Ok(true);
    }
    Ok(ra == rb)
}
