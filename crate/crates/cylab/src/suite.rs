//! The verification suite: eleven checks on seeded corpora, each timed
//! against its runtime budget.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use cylab_core::algebra::CsnAlgebra;
use cylab_core::lab::{
    check_interpolant, find_interpolant, is_strong_u_structure, verify_counterexample, InterpolationMode,
    InterpolationOutcome, InterpolationProblem, SvenoniusOutcome, SvenoniusSolver,
};
use cylab_core::structure::{all_permutations, consequence_over, AutomorphismFinder, ConsequenceMode, Kernel};
use cylab_core::{
    build_csn, canonical_strong, compute_type_partition, definable_set, enumerate_signatures, generated_substructure,
    sim_closure, sim_signature, validate_u_structure, voc_of, Formula, Structure, TupleSet, TupleSpace, UStructure,
    Vocabulary,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus;

/// Environment variable overriding the worker count of the suite's pool.
pub const THREADS_ENV: &str = "CYLAB_THREADS";

pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

/// Corpus sizes above this trigger a runtime warning.
pub const SIZE_WARNING: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Order of the canonical structure (criterion 1) and of the
    /// counterexample (criterion 8). Other criteria are stated for `n = 3`.
    pub n: usize,
    /// Largest universe in the random corpus; sizes run from 6 to this.
    pub size: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { n: 3, size: 8, seed: DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: Option<u128>,
}

impl CriterionResult {
    pub fn within_limit(&self) -> bool {
        self.limit_ms.map_or(true, |limit| self.elapsed_ms < limit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub threads: usize,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

type Check = fn(&SuiteConfig) -> Result<String, String>;

/// `(id, name, runtime budget in ms, check)`.
pub const CRITERIA: [(usize, &str, Option<u128>, Check); 11] = [
    (1, "canonical structure is a strong U-structure", Some(5_000), canonical_strongness),
    (2, "unary definables are among the four core sets", Some(30_000), unary_definables_bounded),
    (3, "type-partition atoms are ~-closed", None, atoms_sim_closed),
    (4, "full algebra lies inside the core-reduct algebra", None, core_reduct_containment),
    (5, "signature and atom counts", Some(1_000), signature_counts),
    (6, "equal types are exactly the automorphic pairs", Some(60_000), automorphism_types),
    (7, "generated substructure is elementary", None, substructure_elementary),
    (8, "strong interpolation fails, weak succeeds", Some(10_000), counterexample),
    (9, "weak interpolants exist on the family", None, weak_interpolation),
    (10, "invariant relations are exactly the explicitly definable ones", Some(120_000), svenonius),
    (11, "c0...c(n-1) of a nonzero element is one", None, switching),
];

pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |t| t.get()))
}

/// Runs the criteria in order. Each one may fan out over a local pool whose
/// size comes from [`THREADS_ENV`].
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    run_selected(config, &(1..=CRITERIA.len()).collect::<Vec<_>>())
}

pub fn run_selected(config: &SuiteConfig, ids: &[usize]) -> SuiteReport {
    let threads = thread_count();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    let criteria = CRITERIA
        .iter()
        .filter(|(id, ..)| ids.contains(id))
        .map(|&(id, name, limit_ms, check)| {
            let start = Instant::now();
            let outcome = pool.install(|| check(config));
            let elapsed_ms = start.elapsed().as_millis();
            let (ok, detail) = match outcome {
                Ok(detail) => (true, detail),
                Err(detail) => (false, detail),
            };
            let mut result = CriterionResult { id, name: name.to_string(), passed: ok, detail, elapsed_ms, limit_ms };
            if ok && !result.within_limit() {
                result.passed = false;
                result.detail = format!("{}; over the {} ms budget", result.detail, limit_ms.unwrap_or_default());
            }
            result
        })
        .collect();
    SuiteReport { config: *config, threads, criteria }
}

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn core_err(e: cylab_core::Error) -> String {
    e.to_string()
}

/// The shared random corpus of criteria 2, 3 and 11: 200 U-structures with
/// `n = 3` and universes cycling through `6..=size`.
pub fn random_corpus(config: &SuiteConfig) -> Vec<UStructure> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let sizes: Vec<usize> = (6..=config.size.max(6)).collect();
    (0..200)
        .map(|k| {
            let symbols = corpus::random_symbols(&mut rng, 3);
            corpus::random_u_structure(&mut rng, 3, sizes[k % sizes.len()], &symbols)
        })
        .collect()
}

fn canonical_strongness(config: &SuiteConfig) -> Result<String, String> {
    let n = config.n;
    let a = canonical_strong(n, n, n).map_err(core_err)?;
    let report = validate_u_structure(a.base(), a.core());
    if !report.is_ok() {
        return fail(format!("validation: {report}"));
    }
    match is_strong_u_structure(&a).map_err(core_err)? {
        cylab_core::lab::StrongOutcome::Strong(cert) => Ok(format!(
            "canonical({n},{n},{n}): {} vocabularies checked, {} define the core, {} block pairs",
            cert.checked.len(),
            cert.core_definable.len(),
            cert.pairs_examined
        )),
        cylab_core::lab::StrongOutcome::NotStrong(w) => fail(format!("not strong: {w:?}")),
    }
}

fn unary_definables_bounded(config: &SuiteConfig) -> Result<String, String> {
    let corpus = random_corpus(config);
    let violations: Vec<String> = corpus
        .par_iter()
        .enumerate()
        .filter_map(|(k, a)| {
            let alg = build_csn(a.base()).ok()?;
            let all: BTreeSet<usize> = (0..a.size()).collect();
            let cocore: BTreeSet<usize> = a.cocore().into_iter().collect();
            let allowed = [BTreeSet::new(), all, a.core().clone(), cocore];
            let bad: Vec<_> = alg.unary_definables().into_iter().filter(|s| !allowed.contains(s)).collect();
            (!bad.is_empty()).then(|| format!("structure {k}: {bad:?}"))
        })
        .collect();
    if violations.is_empty() {
        Ok(format!("{} structures, 0 violations", corpus.len()))
    } else {
        fail(format!("{} violations, first {}", violations.len(), violations[0]))
    }
}

fn atoms_sim_closed(config: &SuiteConfig) -> Result<String, String> {
    let corpus = random_corpus(config);
    let counts: Vec<Result<usize, String>> = corpus
        .par_iter()
        .enumerate()
        .map(|(k, a)| {
            let part = compute_type_partition(a.base()).map_err(core_err)?;
            for atom in 0..part.atom_count() {
                let mut one = part.empty_set();
                one.insert(atom);
                let tuples = part.to_tuples(0, &one);
                if sim_closure(&tuples, a.core()) != tuples {
                    return fail(format!("structure {k}, atom {atom} is not ~-closed"));
                }
            }
            Ok(part.atom_count())
        })
        .collect();
    let mut atoms = 0;
    for c in counts {
        atoms += c?;
    }
    Ok(format!("{} structures, {atoms} atoms, 0 violations", corpus.len()))
}

fn core_reduct_containment(_: &SuiteConfig) -> Result<String, String> {
    let a = canonical_strong(3, 3, 3).map_err(core_err)?;
    let full = build_csn(a.base()).map_err(core_err)?;
    let core = build_csn(&a.core_structure()).map_err(core_err)?;
    for atom in 0..full.atom_count() {
        let x = full.atom(atom).expect("in range");
        let tuples = full.to_tuples(&x).map_err(core_err)?;
        if core.element_of(&tuples).is_none() {
            return fail(format!("atom {atom} of the full algebra is not in the core-reduct algebra"));
        }
    }
    Ok(format!("{} full atoms, each a union of the {} core-reduct atoms", full.atom_count(), core.atom_count()))
}

/// Kernel classes of `n`-tuples (equality-only invariant sets are unions of
/// these) and `~`-classes (core-invariant sets are unions of these).
fn class_counts(a: &UStructure) -> (usize, usize) {
    let space = a.base().space();
    let kernels: BTreeSet<Vec<usize>> = space.iter().map(|t| cylab_core::kernel(&t).labels().to_vec()).collect();
    let sigs: BTreeSet<_> = space.iter().map(|t| sim_signature(&t, a.core())).collect();
    (kernels.len(), sigs.len())
}

fn signature_counts(_: &SuiteConfig) -> Result<String, String> {
    let a = canonical_strong(3, 3, 3).map_err(core_err)?;
    let signatures = enumerate_signatures(3, true, true).len();
    let core_atoms = compute_type_partition(&a.core_structure()).map_err(core_err)?.atom_count();
    let eq = a.base().reduct(&Vocabulary::new(3).map_err(core_err)?).map_err(core_err)?;
    let eq_alg = build_csn(&eq).map_err(core_err)?;
    let (kernel_classes, sim_classes) = class_counts(&a);
    let got = (signatures, core_atoms, eq_alg.atom_count(), eq_alg.carrier_log2());
    if got != (22, 22, 5, 5) || sim_classes != 22 || kernel_classes != 5 || Kernel::all(3).len() != 5 {
        return fail(format!(
            "signatures {signatures}, core atoms {core_atoms}, equality atoms {}, carrier 2^{}; \
             oracle: {sim_classes} ~-classes, {kernel_classes} kernel classes",
            got.2, got.3
        ));
    }
    // every equality-only element is a union of kernel classes, and conversely
    let space = eq.space();
    let mut by_kernel: BTreeMap<Vec<usize>, TupleSet> = BTreeMap::new();
    for idx in 0..space.len() {
        let key = cylab_core::kernel(&space.tuple(idx)).labels().to_vec();
        by_kernel.entry(key).or_insert_with(|| TupleSet::empty(space)).insert_index(idx);
    }
    let classes: Vec<&TupleSet> = by_kernel.values().collect();
    let mut carrier = 0;
    for mask in 0u32..1 << classes.len() {
        let union = classes
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .fold(TupleSet::empty(space), |acc, (_, c)| acc.union(c));
        if eq_alg.element_of(&union).is_some() {
            carrier += 1;
        }
    }
    if carrier != 32 {
        return fail(format!("only {carrier} of 32 kernel-class unions are elements"));
    }
    Ok("22 signatures, 22 core-reduct atoms, 5 equality atoms, carrier 32".to_string())
}

fn tuples_up_to(size: usize, n: usize) -> Vec<Vec<usize>> {
    (1..=n).flat_map(|k| TupleSpace::new(size, k).iter().collect::<Vec<_>>()).collect()
}

fn automorphism_types(_: &SuiteConfig) -> Result<String, String> {
    let a = canonical_strong(3, 3, 3).map_err(core_err)?;
    let finder = AutomorphismFinder::new(&a).map_err(core_err)?;
    let tuples = tuples_up_to(a.size(), 3);
    let rows: Vec<Result<(usize, usize), String>> = tuples
        .par_iter()
        .map(|s| {
            let (mut same, mut pairs) = (0, 0);
            for t in tuples.iter().filter(|t| t.len() == s.len()) {
                pairs += 1;
                let equal = finder.same_type(s, t).map_err(core_err)?;
                match finder.find(s, t).map_err(core_err)? {
                    Some(f) if equal => {
                        if !f.is_automorphism_of(a.base()) || f.apply_tuple(s) != *t {
                            return fail(format!("bad automorphism for {s:?} -> {t:?}"));
                        }
                        same += 1;
                    }
                    None if !equal => {}
                    other => return fail(format!("{s:?} -> {t:?}: same type {equal}, found {other:?}")),
                }
            }
            Ok((same, pairs))
        })
        .collect();
    let (mut same, mut pairs) = (0, 0);
    for r in rows {
        let (s, p) = r?;
        same += s;
        pairs += p;
    }
    Ok(format!("{pairs} pairs, {same} automorphic"))
}

/// Formulas over `{P, Q}` up to nesting depth 3 built from `not`, `and` and
/// `exists`, keeping one per pair of satisfaction sets in `a` and `b`.
pub fn formula_sweep(a: &Structure, b: &Structure) -> Vec<Formula> {
    let mut seen = BTreeSet::new();
    let mut all: Vec<Formula> = Vec::new();
    let mut add = |f: Formula, out: &mut Vec<Formula>| {
        let key = (
            definable_set(&f, a).expect("vocabulary").indices().collect::<Vec<_>>(),
            definable_set(&f, b).expect("vocabulary").indices().collect::<Vec<_>>(),
        );
        if seen.insert(key) {
            out.push(f);
        }
    };
    let n = a.n();
    for i in 0..n {
        add(Formula::atom("P", [i]), &mut all);
        add(Formula::atom("Q", [i]), &mut all);
        for j in i + 1..n {
            add(Formula::Eq(i, j), &mut all);
        }
    }
    for _ in 0..3 {
        let known = all.clone();
        for f in &known {
            add(f.clone().not(), &mut all);
            for v in 0..n {
                add(Formula::exists(v, f.clone()), &mut all);
            }
            for g in &known {
                add(f.clone().and(g.clone()), &mut all);
            }
        }
    }
    all
}

fn substructure_elementary(_: &SuiteConfig) -> Result<String, String> {
    let a = canonical_strong(3, 4, 4).map_err(core_err)?;
    let v: BTreeSet<usize> = [0, 1, 2, 5, 6, 7].into();
    let b = generated_substructure(&a, &v).map_err(core_err)?;
    let order: Vec<usize> = v.iter().copied().collect();
    let formulas = formula_sweep(a.base(), b.base());
    let small = b.base().space();
    let big = a.base().space();
    let lifted: Vec<usize> = (0..small.len())
        .map(|idx| big.index(&small.tuple(idx).iter().map(|&x| order[x]).collect::<Vec<_>>()))
        .collect();
    let bad = formulas.par_iter().find_any(|f| {
        let in_a = definable_set(f, a.base()).expect("vocabulary");
        let in_b = definable_set(f, b.base()).expect("vocabulary");
        (0..small.len()).any(|idx| in_b.contains_index(idx) != in_a.contains_index(lifted[idx]))
    });
    match bad {
        Some(f) => fail(format!("discrepancy on {f}")),
        None => Ok(format!("{} formulas x {} tuples, 0 discrepancies", formulas.len(), small.len())),
    }
}

fn counterexample(config: &SuiteConfig) -> Result<String, String> {
    let r = verify_counterexample(config.n).map_err(core_err)?;
    let expected_elements = 1u64 << bell(config.n);
    if r.passes() && r.elements_checked == expected_elements {
        Ok(format!(
            "n = {}: implication valid, strong none ({} elements replayed), weak interpolant {}",
            r.n,
            r.elements_checked,
            r.weak_interpolant.as_ref().map(ToString::to_string).unwrap_or_default()
        ))
    } else {
        fail(format!("{r:?}"))
    }
}

/// Number of set partitions of an `n`-set, which is the number of kernels.
fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("nonempty")];
        for x in &row {
            next.push(next.last().expect("nonempty") + x);
        }
        row = next;
    }
    row[0]
}

/// Random pairs `(phi, psi)` over `{P, Q}` such that `phi |= psi` on the
/// family, half of them with `phi` valid in some member.
pub fn entailment_pairs(seed: u64, family: &cylab_core::StructureFamily, count: usize) -> Vec<(Formula, Formula)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = family.n();
    let valid_somewhere =
        |f: &Formula| family.members().iter().any(|m| definable_set(f, m.base()).expect("vocabulary").is_full());
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 200_000 {
        attempts += 1;
        let take = rng.gen_range(1..=2);
        let syms: Vec<&str> = ["P", "Q"].choose_multiple(&mut rng, take).copied().collect();
        let mut phi = corpus::random_formula(&mut rng, n, &syms, 3);
        let mut psi = corpus::random_formula(&mut rng, n, &["P", "Q"], 3);
        match rng.gen_range(0..3) {
            0 => psi = phi.clone().or(psi),
            1 => phi = psi.clone().and(phi),
            _ => {}
        }
        let nonvacuous = valid_somewhere(&phi);
        if out.len() % 2 == 0 && !nonvacuous {
            continue;
        }
        let holds =
            consequence_over(family, &phi, &psi, ConsequenceMode::ValidityConsequence).expect("vocabulary").holds;
        if holds {
            out.push((phi, psi));
        }
    }
    out
}

fn weak_interpolation(config: &SuiteConfig) -> Result<String, String> {
    let family = corpus::interpolation_family(3);
    let pairs = entailment_pairs(config.seed, &family, 50);
    if pairs.len() < 50 {
        return fail(format!("only {} entailed pairs generated", pairs.len()));
    }
    let results: Vec<Result<(), String>> = pairs
        .par_iter()
        .map(|(phi, psi)| {
            let p = InterpolationProblem {
                phi: phi.clone(),
                psi: psi.clone(),
                family: family.clone(),
                mode: InterpolationMode::Weak,
            };
            let report = find_interpolant(&p).map_err(core_err)?;
            let InterpolationOutcome::Found { interpolant } = &report.outcome else {
                return fail(format!("no interpolant for {phi} |= {psi}: {:?}", report.outcome));
            };
            let common = voc_of(phi, 3).intersection(&voc_of(psi, 3));
            if !voc_of(interpolant, 3).is_subset_of(&common) || !check_interpolant(&p, interpolant).map_err(core_err)? {
                return fail(format!("{interpolant} fails the post-check for {phi} |= {psi}"));
            }
            Ok(())
        })
        .collect();
    let failures: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    if let Some(first) = failures.first() {
        return fail(format!("{} of 50 pairs failed, first: {first}", failures.len()));
    }
    Ok("50 of 50 entailed pairs interpolated and post-checked".to_string())
}

/// Targets of criterion 10 on a structure of `size` points: all unary
/// subsets, all equality-only ternary elements and `random` unions of atoms
/// of the full algebra.
pub fn svenonius_targets(alg: &CsnAlgebra, eq: &CsnAlgebra, seed: u64, random: usize) -> Vec<TupleSet> {
    let size = alg.structure().size();
    let unary = TupleSpace::new(size, 1);
    let mut out: Vec<TupleSet> =
        (0u32..1 << size).map(|mask| TupleSet::from_fn(unary, |x| mask >> x & 1 == 1)).collect();
    for x in eq.m_ary_definables(3).expect("n = 3") {
        out.push(eq.to_tuples(&x).expect("own element"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let atoms = (0..alg.atom_count()).filter(|_| rng.gen_bool(0.5));
        out.push(alg.to_tuples(&alg.from_atoms(atoms).expect("in range")).expect("own element"));
    }
    out
}

fn svenonius(config: &SuiteConfig) -> Result<String, String> {
    let a = canonical_strong(3, 3, 3).map_err(core_err)?;
    let alg = build_csn(a.base()).map_err(core_err)?;
    let eq =
        build_csn(&a.base().reduct(&Vocabulary::new(3).map_err(core_err)?).map_err(core_err)?).map_err(core_err)?;
    let targets = svenonius_targets(&alg, &eq, config.seed, 500);
    let mut explicit = 0;
    let mut checked = 0;
    for language in a.vocab().subsets() {
        let reduct = a.base().reduct(&language).map_err(core_err)?;
        let group: Vec<_> = all_permutations(a.size()).filter(|f| f.is_automorphism_of(&reduct)).collect();
        let solver = SvenoniusSolver::new(&a, &language).map_err(core_err)?;
        let rows: Vec<Result<bool, String>> = targets
            .par_iter()
            .map(|rel| {
                let invariant = group.iter().all(|f| f.preserves(rel));
                match solver.solve(rel).map_err(core_err)? {
                    SvenoniusOutcome::Explicit { formula } => {
                        if !invariant {
                            return fail(format!("{language}: formula {formula} for a non-invariant relation"));
                        }
                        if !voc_of(&formula, 3).is_subset_of(&language) {
                            return fail(format!("{language}: {formula} leaves the language"));
                        }
                        let set = definable_set(&formula, a.base()).map_err(core_err)?;
                        if set != solver.cylinder(rel).map_err(core_err)? {
                            return fail(format!("{language}: {formula} does not define the target"));
                        }
                        Ok(true)
                    }
                    other if invariant => fail(format!("{language}: invariant relation answered {other:?}")),
                    SvenoniusOutcome::NotInvariant { automorphism, tuple } => {
                        if !automorphism.is_automorphism_of(&reduct)
                            || !rel.contains(&tuple)
                            || rel.contains(&automorphism.apply_tuple(&tuple))
                        {
                            return fail(format!("{language}: bad non-invariance witness"));
                        }
                        Ok(false)
                    }
                    SvenoniusOutcome::NotDefinable => fail("NotDefinable for a non-invariant relation"),
                }
            })
            .collect();
        for r in rows {
            checked += 1;
            explicit += usize::from(r?);
        }
    }
    Ok(format!("{checked} (language, target) cases, {explicit} explicit, the rest refuted by an automorphism"))
}

fn switching(config: &SuiteConfig) -> Result<String, String> {
    let corpus = random_corpus(config);
    let rows: Vec<Result<(usize, u64), String>> = corpus
        .par_iter()
        .enumerate()
        .map(|(k, a)| {
            let alg = build_csn(a.base()).map_err(core_err)?;
            let one = alg.one();
            let top = |x: &cylab_core::Element| -> Result<cylab_core::Element, String> {
                let mut y = x.clone();
                for i in 0..alg.n() {
                    y = alg.cylindrify(i, &y).map_err(core_err)?;
                }
                Ok(y)
            };
            // tuple level, atom by atom; cylindrification is additive
            for atom in 0..alg.atom_count() {
                let x = alg.atom(atom).expect("in range");
                let mut t = alg.to_tuples(&x).map_err(core_err)?;
                for i in 0..alg.n() {
                    t = t.cylindrify(i);
                }
                if !t.is_full() || top(&x)? != one {
                    return fail(format!("structure {k}, atom {atom}"));
                }
            }
            let mut elements = 0;
            if alg.atom_count() <= 14 {
                for mask in 1u32..1 << alg.atom_count() {
                    let x = alg.from_atoms((0..alg.atom_count()).filter(|b| mask >> b & 1 == 1)).expect("in range");
                    if top(&x)? != one {
                        return fail(format!("structure {k}, element {mask:#x}"));
                    }
                    elements += 1;
                }
            }
            Ok((alg.atom_count(), elements))
        })
        .collect();
    let (mut atoms, mut elements) = (0, 0);
    for r in rows {
        let (a, e) = r?;
        atoms += a;
        elements += e;
    }
    Ok(format!("{} algebras, {atoms} atoms, {elements} elements enumerated, 0 violations", corpus.len()))
}
