use alloc::string::String;
use alloc::vec::Vec;

use super::separate::{separate_structures, Separation};
use crate::algebra::compute_joint_partition;
use crate::structure::{
    consequence_over, definable_set, validates, ConsequenceMode, ConsequenceWitness, Structure, StructureFamily,
};
use crate::syntax::{voc_of, Formula, Vocabulary};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum InterpolationMode {
    /// `phi |= theta` and `theta |= psi` (validity consequence).
    Weak,
    /// `|= phi -> theta` and `|= theta -> psi`.
    Strong,
}

impl InterpolationMode {
    fn consequence(self) -> ConsequenceMode {
        match self {
            InterpolationMode::Weak => ConsequenceMode::ValidityConsequence,
            InterpolationMode::Strong => ConsequenceMode::ImplicationValidity,
        }
    }
}

#[derive(Debug, Clone)]
pub struct InterpolationProblem {
    pub phi: Formula,
    pub psi: Formula,
    pub family: StructureFamily,
    pub mode: InterpolationMode,
}

/// Why no interpolant exists over the family.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum Refutation {
    /// A member validating `phi` and a member not validating `psi` whose
    /// reducts to the common vocabulary realise the same atoms.
    Inseparable { model: usize, countermodel: usize },
    /// The least candidate containing `[phi]` contains `atom`, which in
    /// `structure` holds `tuple` outside `[psi]`.
    AtomEscapes { structure: usize, atom: usize, tuple: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "outcome", rename_all = "kebab-case"))]
pub enum InterpolationOutcome {
    Found {
        interpolant: Formula,
    },
    /// `phi` does not entail `psi` on the family in the mode's sense.
    HypothesisFails {
        witness: ConsequenceWitness,
    },
    None {
        witness: Refutation,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InterpolationReport {
    pub mode: InterpolationMode,
    pub common_vocabulary: Vec<String>,
    pub outcome: InterpolationOutcome,
    /// Weak mode: profile comparisons. Strong mode: size of the candidate
    /// space, all of which is decided by the least candidate.
    pub candidates_examined: u128,
}

impl InterpolationReport {
    pub fn interpolant(&self) -> Option<&Formula> {
        match &self.outcome {
            InterpolationOutcome::Found { interpolant } => Some(interpolant),
            _ => None,
        }
    }
}

fn common_vocabulary(p: &InterpolationProblem) -> Result<Vocabulary> {
    let vocab = p.family.vocab();
    p.phi.check(vocab)?;
    p.psi.check(vocab)?;
    let n = vocab.n();
    let both = voc_of(&p.phi, n).intersection(&voc_of(&p.psi, n));
    vocab.restrict(both.names())
}

/// Searches for an interpolant over the common vocabulary of `phi` and `psi`,
/// relative to the family.
pub fn find_interpolant(p: &InterpolationProblem) -> Result<InterpolationReport> {
    let common = common_vocabulary(p)?;
    let names = common.names().map(String::from).collect();
    let hypothesis = consequence_over(&p.family, &p.phi, &p.psi, p.mode.consequence())?;
    let report = |outcome, candidates_examined| InterpolationReport {
        mode: p.mode,
        common_vocabulary: names,
        outcome,
        candidates_examined,
    };
    if let Some(witness) = hypothesis.witness {
        return Ok(report(InterpolationOutcome::HypothesisFails { witness }, 0));
    }
    let reducts: Vec<Structure> = p.family.members().iter().map(|m| m.base().reduct(&common)).collect::<Result<_>>()?;
    match p.mode {
        InterpolationMode::Weak => {
            let mut k0 = Vec::new();
            let mut k1 = Vec::new();
            for (idx, member) in p.family.members().iter().enumerate() {
                if validates(member.base(), &p.phi)? {
                    k0.push(idx);
                }
                if !validates(member.base(), &p.psi)? {
                    k1.push(idx);
                }
            }
            let side = |idx: &[usize]| idx.iter().map(|&i| &reducts[i]).collect::<Vec<_>>();
            Ok(match separate_structures(&side(&k0), &side(&k1))? {
                Separation::Separator { formula, comparisons } => {
                    report(InterpolationOutcome::Found { interpolant: formula }, comparisons as u128)
                }
                Separation::Inseparable { first, second } => report(
                    InterpolationOutcome::None {
                        witness: Refutation::Inseparable { model: k0[first], countermodel: k1[second] },
                    },
                    1,
                ),
            })
        }
        InterpolationMode::Strong => {
            let refs: Vec<&Structure> = reducts.iter().collect();
            let part = compute_joint_partition(&refs)?;
            let space = 1u128.checked_shl(part.atom_count() as u32).unwrap_or(u128::MAX);
            let mut closure = part.empty_set();
            let mut psi_sets = Vec::with_capacity(reducts.len());
            for (m, member) in p.family.members().iter().enumerate() {
                closure.union_with(&part.closure_of(m, &definable_set(&p.phi, member.base())?));
                psi_sets.push(definable_set(&p.psi, member.base())?);
            }
            for (m, psi_set) in psi_sets.iter().enumerate() {
                let theta = part.to_tuples(m, &closure);
                if let Some(idx) = theta.difference(psi_set).indices().next() {
                    let witness = Refutation::AtomEscapes {
                        structure: m,
                        atom: part.atom_of_index(m, idx),
                        tuple: theta.space().tuple(idx),
                    };
                    return Ok(report(InterpolationOutcome::None { witness }, space));
                }
            }
            Ok(report(InterpolationOutcome::Found { interpolant: part.union_formula(&closure) }, space))
        }
    }
}

/// Re-checks an interpolant by evaluation: vocabulary inside the common one
/// and both inclusions of the mode on every member.
pub fn check_interpolant(p: &InterpolationProblem, theta: &Formula) -> Result<bool> {
    let common = common_vocabulary(p)?;
    if !voc_of(theta, common.n()).names().all(|s| common.contains(s)) {
        return Ok(false);
    }
    let mode = p.mode.consequence();
    Ok(consequence_over(&p.family, &p.phi, theta, mode)?.holds
        && consequence_over(&p.family, theta, &p.psi, mode)?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::canonical_strong;
    use crate::syntax::parse_formula;
    use alloc::vec;

    fn problem(phi: &str, psi: &str, mode: InterpolationMode) -> InterpolationProblem {
        let family = StructureFamily::new(vec![canonical_strong(3, 3, 3).unwrap()]).unwrap();
        let vocab = family.vocab().clone();
        InterpolationProblem {
            phi: parse_formula(phi, &vocab).unwrap(),
            psi: parse_formula(psi, &vocab).unwrap(),
            family,
            mode,
        }
    }

    const PHI: &str = "P(v0) <-> !P(v1)";
    const PSI: &str = "(Q(v0) <-> Q(v2)) | (Q(v1) <-> Q(v2))";

    #[test]
    fn identity_interpolant() {
        let p = problem("P(v0)", "P(v0)", InterpolationMode::Strong);
        let r = find_interpolant(&p).unwrap();
        let theta = r.interpolant().unwrap();
        assert!(check_interpolant(&p, theta).unwrap());
    }

    #[test]
    fn strong_fails_on_the_counterexample() {
        let p = problem(PHI, PSI, InterpolationMode::Strong);
        let r = find_interpolant(&p).unwrap();
        assert!(r.common_vocabulary.is_empty());
        assert_eq!(r.candidates_examined, 32);
        let InterpolationOutcome::None { witness: Refutation::AtomEscapes { structure, tuple, .. } } = r.outcome else {
            panic!("{:?}", r.outcome)
        };
        assert_eq!(structure, 0);
        let a = p.family.members()[0].base();
        assert!(!crate::structure::evaluate(&p.psi, a, &tuple).unwrap());
    }

    #[test]
    fn weak_succeeds_on_the_counterexample() {
        let p = problem(PHI, PSI, InterpolationMode::Weak);
        let r = find_interpolant(&p).unwrap();
        assert_eq!(r.interpolant(), Some(&Formula::False));
        assert!(check_interpolant(&p, &Formula::False).unwrap());
    }

    #[test]
    fn hypothesis_failure_is_reported() {
        let p = problem("true", "false", InterpolationMode::Weak);
        let r = find_interpolant(&p).unwrap();
        assert!(matches!(r.outcome, InterpolationOutcome::HypothesisFails { .. }));
    }
}
