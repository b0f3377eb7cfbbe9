use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::algebra::{build_csn, is_definable, CsnAlgebra, Element};
use crate::structure::{validate_u_structure, UStructure};
use crate::syntax::{Formula, Vocabulary};
use crate::{Error, Result};

fn check_sub_vocabulary(a: &UStructure, v: &Vocabulary) -> Result<()> {
    for name in v.names() {
        if a.vocab().arity(name) != v.arity(name) {
            return Err(Error::UnknownSymbol(name.to_string()));
        }
    }
    Ok(())
}

/// A formula over `v` defining the core (as `{s : s_0 in core}`) in the
/// `v`-reduct, if there is one.
pub fn core_definable_in_reduct(a: &UStructure, v: &Vocabulary) -> Result<Option<Formula>> {
    check_sub_vocabulary(a, v)?;
    let alg = build_csn(&a.base().reduct(v)?)?;
    Ok(is_definable(&a.core_column(), &alg))
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StrongCertificate {
    /// Sub-vocabularies in which the core is not definable; these were checked.
    pub checked: Vec<Vec<String>>,
    /// Sub-vocabularies skipped because they define the core.
    pub core_definable: Vec<Vec<String>>,
    /// Pairs of blocks examined, over all checked vocabularies, `m` and `i, j`.
    pub pairs_examined: usize,
}

/// `X != c_i X ∩ c_j X ∩ dstar(m)` for the `m`-ary definable `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StrongCounterexample {
    pub vocabulary: Vec<String>,
    pub m: usize,
    /// `X` as a set of `m`-tuples.
    pub relation: Vec<Vec<usize>>,
    pub i: usize,
    pub j: usize,
    /// An `n`-tuple in `c_i X ∩ c_j X ∩ dstar(m)` but not in `X`.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "outcome", rename_all = "kebab-case"))]
pub enum StrongOutcome {
    Strong(StrongCertificate),
    NotStrong(StrongCounterexample),
}

impl StrongOutcome {
    pub fn is_strong(&self) -> bool {
        matches!(self, StrongOutcome::Strong(_))
    }
}

fn names(v: &Vocabulary) -> Vec<String> {
    v.names().map(String::from).collect()
}

fn prefixes(alg: &CsnAlgebra, x: &Element, m: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = alg
        .to_tuples(x)
        .expect("own element")
        .iter()
        .map(|mut t| {
            t.truncate(m);
            t
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Checks the strongness condition in every sub-vocabulary that does not
/// define the core.
///
/// For a fixed `m, i, j` the condition holds for every definable `X` inside
/// `dstar(m)` iff `c_i a ∩ c_j b ∩ dstar(m) ⊆ a ∪ b` for all minimal such
/// `a, b`, since both sides distribute over unions. Failures are reported in
/// the order: vocabulary, `m`, `X` by (size, blocks), `(i, j)`.
pub fn is_strong_u_structure(a: &UStructure) -> Result<StrongOutcome> {
    let report = validate_u_structure(a.base(), a.core());
    if !report.is_ok() {
        return Err(Error::InvalidUStructure(report));
    }
    let n = a.n();
    let column = a.core_column();
    let mut cert = StrongCertificate { checked: Vec::new(), core_definable: Vec::new(), pairs_examined: 0 };
    for v in a.vocab().subsets() {
        let alg = build_csn(&a.base().reduct(&v)?)?;
        if alg.element_of(&column).is_some() {
            cert.core_definable.push(names(&v));
            continue;
        }
        for m in 2..=n {
            let dstar = alg.dstar(m)?;
            let blocks: Vec<Element> =
                alg.m_ary_blocks(m)?.into_iter().filter(|b| alg.is_subset(b, &dstar).expect("own elements")).collect();
            let mut pairs: Vec<(usize, usize)> = (0..blocks.len()).map(|k| (k, k)).collect();
            for p in 0..blocks.len() {
                for q in p + 1..blocks.len() {
                    pairs.push((p, q));
                }
            }
            for (p, q) in pairs {
                let x = alg.join(&blocks[p], &blocks[q])?;
                for i in 0..m {
                    for j in (0..m).filter(|&j| j != i) {
                        cert.pairs_examined += 1;
                        let ci = alg.cylindrify(i, &x)?;
                        let cj = alg.cylindrify(j, &x)?;
                        let rhs = alg.meet(&alg.meet(&ci, &cj)?, &dstar)?;
                        if alg.is_subset(&rhs, &x)? {
                            continue;
                        }
                        let escape = alg.meet(&rhs, &alg.complement(&x)?)?;
                        let atom = escape.atom_ids().next().expect("nonempty difference");
                        return Ok(StrongOutcome::NotStrong(StrongCounterexample {
                            vocabulary: names(&v),
                            m,
                            relation: prefixes(&alg, &x, m),
                            i,
                            j,
                            witness: alg.partition().representative(atom).1,
                        }));
                    }
                }
            }
        }
        cert.checked.push(names(&v));
    }
    Ok(StrongOutcome::Strong(cert))
}
