use alloc::format;
use alloc::vec::Vec;

use super::interpolate::{find_interpolant, InterpolationMode, InterpolationOutcome, InterpolationProblem};
use crate::algebra::build_csn;
use crate::structure::{canonical_strong, consequence_over, evaluate, ConsequenceMode, StructureFamily, UStructure};
use crate::syntax::{parse_formula, Formula, Vocabulary};
use crate::{Error, Result};

/// `phi(v0, v1) = P(v0) <-> !P(v1)` and
/// `psi(v0, v1, v2) = (Q(v0) <-> Q(v2)) | (Q(v1) <-> Q(v2))`.
pub fn counterexample_formulas(vocab: &Vocabulary) -> Result<(Formula, Formula)> {
    Ok((parse_formula("P(v0) <-> !P(v1)", vocab)?, parse_formula("(Q(v0) <-> Q(v2)) | (Q(v1) <-> Q(v2))", vocab)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CounterexampleReport {
    pub n: usize,
    /// `[phi] ⊆ [psi]` on the canonical structure.
    pub implication_valid: bool,
    /// Strong interpolation search returned no interpolant.
    pub strong_none: bool,
    /// Every equality-only element containing the `phi`-tuple also contains
    /// the tuple outside `[psi]`.
    pub witness_replayed: bool,
    /// Weak interpolation search found an interpolant.
    pub weak_found: bool,
    pub weak_interpolant: Option<Formula>,
    /// Equality-only elements exhausted during the replay.
    pub elements_checked: u64,
    pub phi_tuple: Vec<usize>,
    pub psi_tuple: Vec<usize>,
}

impl CounterexampleReport {
    pub fn passes(&self) -> bool {
        self.implication_valid && self.strong_none && self.witness_replayed && self.weak_found
    }
}

/// Replays the failure of strong interpolation on `canonical_strong(n, n, n)`.
///
/// With `a = 0` in the core, `b = n` outside it, `a' = 0`, `b' = 1` and
/// `c = n + 1`, the tuple `(a, b, c, c, ...)` satisfies `phi` while
/// `(a', b', c, c, ...)` falsifies `psi`, and the two have the same kernel, so
/// no formula built from equality alone separates them.
pub fn verify_counterexample(n: usize) -> Result<CounterexampleReport> {
    if n < 3 {
        return Err(Error::Precondition(format!("the counterexample needs n >= 3, got {n}")));
    }
    let a: UStructure = canonical_strong(n, n, n)?;
    let (phi, psi) = counterexample_formulas(a.vocab())?;
    let family = StructureFamily::new(alloc::vec![a.clone()])?;
    let implication_valid = consequence_over(&family, &phi, &psi, ConsequenceMode::ImplicationValidity)?.holds;

    let mut problem = InterpolationProblem { phi, psi, family, mode: InterpolationMode::Strong };
    let strong = find_interpolant(&problem)?;
    let strong_none = matches!(strong.outcome, InterpolationOutcome::None { .. });
    problem.mode = InterpolationMode::Weak;
    let weak = find_interpolant(&problem)?;
    let weak_interpolant = weak.interpolant().cloned();

    let mut phi_tuple = alloc::vec![n + 1; n];
    phi_tuple[0] = 0;
    phi_tuple[1] = n;
    let mut psi_tuple = phi_tuple.clone();
    psi_tuple[1] = 1;
    let base = a.base();
    let tuples_ok = evaluate(&problem.phi, base, &phi_tuple)? && !evaluate(&problem.psi, base, &psi_tuple)?;
    let eq = build_csn(&base.reduct(&Vocabulary::new(n)?)?)?;
    let mut elements_checked = 0u64;
    let mut replay = tuples_ok;
    for x in eq.m_ary_definables(n)? {
        elements_checked += 1;
        if eq.contains_tuple(&x, &phi_tuple)? && !eq.contains_tuple(&x, &psi_tuple)? {
            replay = false;
        }
    }
    Ok(CounterexampleReport {
        n,
        implication_valid,
        strong_none,
        witness_replayed: replay,
        weak_found: weak_interpolant.is_some(),
        weak_interpolant,
        elements_checked,
        phi_tuple,
        psi_tuple,
    })
}
