use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use cylab::corpus;
use cylab::io::{self, StructureFile};
use cylab::suite::{self, SuiteConfig};
use cylab_core::algebra::{build_csn, is_definable};
use cylab_core::lab::{
    find_interpolant, is_strong_u_structure, separate_structures, InterpolationMode, InterpolationOutcome,
    InterpolationProblem, Separation, StrongOutcome, SvenoniusOutcome, SvenoniusSolver,
};
use cylab_core::{
    definable_set, evaluate, find_automorphism, parse_formula, validate_u_structure, Formula, Structure,
    StructureFamily, TupleSet, UStructure, Vocabulary,
};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "cylab", version, about = "Finite-variable logic over structures with a core")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Number of variables; must match every structure file given.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Weak,
    Strong,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a structure file as a U-structure.
    Check { path: PathBuf },
    /// Certify strongness, or print a failing (V, X, i, j).
    Strong { path: PathBuf },
    /// Search for an interpolant over a family (default: canonical structures of three sizes).
    Interpolate {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        paths: Vec<PathBuf>,
    },
    /// Run the verification suite.
    #[command(name = "verify-paper")]
    Verify {
        #[arg(long, default_value_t = suite::DEFAULT_SEED)]
        seed: u64,
        /// Largest universe in the random corpus.
        #[arg(long, default_value_t = 8)]
        size: usize,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
    /// Atom count, carrier size and unary definables of the set algebra.
    Csn {
        path: PathBuf,
        /// Comma-separated symbols to keep; empty for equality only.
        #[arg(long)]
        reduct: Option<String>,
    },
    /// Truth of a formula under an assignment of all variables.
    Eval {
        path: PathBuf,
        #[arg(short = 'f', long)]
        formula: String,
        #[arg(long, value_delimiter = ',')]
        assignment: Vec<usize>,
    },
    /// Whether a formula's set or a relation is definable in a reduct.
    Definable {
        path: PathBuf,
        #[arg(short = 'f', long, conflicts_with = "relation", required_unless_present = "relation")]
        formula: Option<String>,
        #[arg(long)]
        relation: Option<String>,
        #[arg(long)]
        reduct: Option<String>,
    },
    /// An automorphism mapping one tuple onto another.
    Automorphism {
        path: PathBuf,
        #[arg(long, value_delimiter = ',')]
        from: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        to: Vec<usize>,
    },
    /// Explicit definition of a relation from automorphism invariance.
    Svenonius {
        path: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        reduct: Option<String>,
    },
    /// A sentence true in every K0 structure and false in every K1 structure.
    Separate {
        #[arg(long, num_args = 1.., required = true)]
        k0: Vec<PathBuf>,
        #[arg(long, num_args = 1.., required = true)]
        k1: Vec<PathBuf>,
    },
    /// Write the structure with P = Q = core as JSON.
    Canonical {
        #[arg(long, default_value_t = 3)]
        core: usize,
        #[arg(long, default_value_t = 3)]
        cocore: usize,
    },
}

/// 0: the property holds; 1: it fails and a witness was printed.
struct Verdict(bool);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Verdict(true)) => ExitCode::SUCCESS,
        Ok(Verdict(false)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, report: &impl Serialize, human: impl FnOnce() -> String) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(report).expect("plain data"));
    } else {
        println!("{}", human());
    }
}

fn load(cli: &Cli, path: &Path) -> Result<StructureFile> {
    let file = io::read_structure(path)?;
    if let Some(n) = cli.n {
        if n != file.n {
            bail!("{}: file has n = {}, --n is {n}", path.display(), file.n);
        }
    }
    if file.n < 2 {
        bail!("{}: n must be at least 2", path.display());
    }
    Ok(file)
}

fn load_u(cli: &Cli, path: &Path) -> Result<UStructure> {
    load(cli, path)?.to_u_structure().with_context(|| format!("{} is not a U-structure", path.display()))
}

fn load_plain(cli: &Cli, path: &Path) -> Result<Structure> {
    load(cli, path)?.to_structure().with_context(|| path.display().to_string())
}

fn reduct_vocab(vocab: &Vocabulary, reduct: &Option<String>) -> Result<Vocabulary> {
    match reduct {
        None => Ok(vocab.clone()),
        Some(list) => {
            let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            Ok(vocab.restrict(names)?)
        }
    }
}

fn names(v: &Vocabulary) -> Vec<String> {
    v.names().map(String::from).collect()
}

/// `{s : (s_0, ..., s_{k-1}) in rel}` as an `n`-ary relation.
fn cylinder(rel: &TupleSet, a: &Structure) -> Result<TupleSet> {
    let space = a.space();
    if rel.arity() > space.arity() {
        bail!("relation of arity {} exceeds n = {}", rel.arity(), space.arity());
    }
    let shift = space.len() / rel.space().len();
    Ok(TupleSet::from_fn(space, |idx| rel.contains_index(idx / shift)))
}

fn run(cli: &Cli) -> Result<Verdict> {
    match &cli.command {
        Command::Check { path } => {
            let file = load(cli, path)?;
            let base = file.to_structure()?;
            let core: BTreeSet<usize> = file.core.clone().unwrap_or_default().into_iter().collect();
            let report = validate_u_structure(&base, &core);
            let ok = report.is_ok();
            emit(cli, &json!({"valid": ok, "violations": report.violations}), || {
                if ok {
                    "valid U-structure".to_string()
                } else {
                    report.violations.iter().map(|v| format!("violation {v}")).collect::<Vec<_>>().join("\n")
                }
            });
            Ok(Verdict(ok))
        }
        Command::Strong { path } => {
            let a = load_u(cli, path)?;
            let outcome = is_strong_u_structure(&a)?;
            emit(cli, &outcome, || match &outcome {
                StrongOutcome::Strong(c) => format!(
                    "strong: {} sub-vocabularies checked, {} define the core, {} block pairs examined",
                    c.checked.len(),
                    c.core_definable.len(),
                    c.pairs_examined
                ),
                StrongOutcome::NotStrong(w) => {
                    let (i, j, m) = (w.i, w.j, w.m);
                    let head =
                        format!("not strong: V = {{{}}}, m = {m}, X = {:?}", w.vocabulary.join(", "), w.relation);
                    format!("{head}, i = {i}, j = {j}, witness {:?} in c{i}X & c{j}X & D*{m} but not in X", w.witness)
                }
            });
            Ok(Verdict(outcome.is_strong()))
        }
        Command::Interpolate { mode, phi, psi, paths } => {
            let (family, described) = if paths.is_empty() {
                let n = cli.n.unwrap_or(3);
                if n < 2 {
                    bail!("n must be at least 2");
                }
                let sizes = [(n, n), (n, n + 1), (n + 1, n)];
                (corpus::default_family(n), sizes.iter().map(|(c, cc)| format!("canonical({n},{c},{cc})")).collect())
            } else {
                let members = paths.iter().map(|p| load_u(cli, p)).collect::<Result<Vec<_>>>()?;
                (StructureFamily::new(members)?, paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>())
            };
            let vocab = family.vocab();
            let problem = InterpolationProblem {
                phi: parse_formula(phi, vocab).context("--phi")?,
                psi: parse_formula(psi, vocab).context("--psi")?,
                family,
                mode: match mode {
                    Mode::Weak => InterpolationMode::Weak,
                    Mode::Strong => InterpolationMode::Strong,
                },
            };
            let report = find_interpolant(&problem)?;
            let mut value = serde_json::to_value(&report)?;
            value["family"] = json!(described);
            emit(cli, &value, || {
                let head = format!(
                    "{} interpolation over {{{}}}, relative to {}",
                    if matches!(mode, Mode::Weak) { "weak" } else { "strong" },
                    report.common_vocabulary.join(", "),
                    described.join(", ")
                );
                let body = match &report.outcome {
                    InterpolationOutcome::Found { interpolant } => format!("interpolant: {interpolant}"),
                    InterpolationOutcome::HypothesisFails { witness } => {
                        format!("hypothesis fails in member {} at {:?}", witness.member, witness.assignment)
                    }
                    InterpolationOutcome::None { witness } => format!("no interpolant: {witness:?}"),
                };
                format!("{head}\n{body}\ncandidates examined: {}", report.candidates_examined)
            });
            Ok(Verdict(report.interpolant().is_some()))
        }
        Command::Verify { seed, size, only } => {
            let n = cli.n.unwrap_or(3);
            if n < 3 {
                bail!("the suite needs n >= 3, got {n}");
            }
            if *size < 6 {
                bail!("--size must be at least 6 (two sides of at least 3 points)");
            }
            if *size > suite::SIZE_WARNING {
                eprintln!("warning: --size {size} is above {}; criteria 2, 3 and 11 may run long", suite::SIZE_WARNING);
            }
            if let Some(bad) = only.iter().find(|&&id| id == 0 || id > suite::CRITERIA.len()) {
                bail!("no criterion {bad}");
            }
            let config = SuiteConfig { n, size: *size, seed: *seed };
            let report = if only.is_empty() { suite::run_suite(&config) } else { suite::run_selected(&config, only) };
            emit(cli, &report, || {
                let mut lines = vec![format!("seed {seed}, n = {n}, size <= {size}, {} threads", report.threads)];
                for c in &report.criteria {
                    let limit = c.limit_ms.map(|l| format!(" / {l} ms")).unwrap_or_default();
                    lines.push(format!(
                        "{} {:>2}  {:>7} ms{limit}  {}: {}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.id,
                        c.elapsed_ms,
                        c.name,
                        c.detail
                    ));
                }
                lines.join("\n")
            });
            Ok(Verdict(report.all_passed()))
        }
        Command::Csn { path, reduct } => {
            let a = load_plain(cli, path)?;
            let v = reduct_vocab(a.vocab(), reduct)?;
            let report = build_csn(&a.reduct(&v)?)?.report();
            emit(cli, &report, || {
                format!(
                    "vocabulary {{{}}}\natoms: {}\ncarrier: 2^{}\nunary definables: {:?}\natom sizes: {:?}",
                    names(&v).join(", "),
                    report.atoms,
                    report.carrier_log2,
                    report.unary_definables,
                    report.atom_sizes
                )
            });
            Ok(Verdict(true))
        }
        Command::Eval { path, formula, assignment } => {
            let a = load_plain(cli, path)?;
            let f = parse_formula(formula, a.vocab())?;
            let holds = evaluate(&f, &a, assignment)?;
            emit(cli, &json!({"formula": f, "assignment": assignment, "holds": holds}), || {
                format!("{f} {} at {assignment:?}", if holds { "holds" } else { "fails" })
            });
            Ok(Verdict(holds))
        }
        Command::Definable { path, formula, relation, reduct } => {
            let a = load_plain(cli, path)?;
            let rel = match (formula, relation) {
                (Some(text), _) => definable_set(&parse_formula(text, a.vocab())?, &a)?,
                (None, Some(name)) => {
                    let rel = a.relation(name).with_context(|| format!("unknown relation {name}"))?;
                    cylinder(rel, &a)?
                }
                (None, None) => bail!("give --formula or --relation"),
            };
            let v = reduct_vocab(a.vocab(), reduct)?;
            let alg = build_csn(&a.reduct(&v)?)?;
            let found: Option<Formula> = is_definable(&rel, &alg);
            emit(
                cli,
                &json!({"vocabulary": names(&v), "definable": found.is_some(), "formula": found}),
                || match &found {
                    Some(f) => format!("definable over {{{}}}: {f}", names(&v).join(", ")),
                    None => format!("not definable over {{{}}}", names(&v).join(", ")),
                },
            );
            Ok(Verdict(found.is_some()))
        }
        Command::Automorphism { path, from, to } => {
            let a = load_u(cli, path)?;
            let found = find_automorphism(&a, from, to)?;
            emit(cli, &json!({"from": from, "to": to, "automorphism": found}), || match &found {
                Some(f) => format!("automorphism {:?} maps {from:?} to {to:?}", f.images()),
                None => format!("no automorphism maps {from:?} to {to:?}"),
            });
            Ok(Verdict(found.is_some()))
        }
        Command::Svenonius { path, target, reduct } => {
            let a = load_u(cli, path)?;
            let v = reduct_vocab(a.vocab(), reduct)?;
            let rel = a.base().relation(target).with_context(|| format!("unknown relation {target}"))?;
            let outcome = SvenoniusSolver::new(&a, &v)?.solve(rel)?;
            emit(cli, &outcome, || match &outcome {
                SvenoniusOutcome::Explicit { formula } => {
                    format!("{target} is defined over {{{}}} by {formula}", names(&v).join(", "))
                }
                SvenoniusOutcome::NotInvariant { automorphism, tuple } => {
                    format!("automorphism {:?} of the reduct moves {tuple:?} out of {target}", automorphism.images())
                }
                SvenoniusOutcome::NotDefinable => format!("{target} is invariant but not a union of atoms"),
            });
            Ok(Verdict(matches!(outcome, SvenoniusOutcome::Explicit { .. })))
        }
        Command::Separate { k0, k1 } => {
            let first = k0.iter().map(|p| load_plain(cli, p)).collect::<Result<Vec<_>>>()?;
            let second = k1.iter().map(|p| load_plain(cli, p)).collect::<Result<Vec<_>>>()?;
            let outcome = separate_structures(&first.iter().collect::<Vec<_>>(), &second.iter().collect::<Vec<_>>())?;
            emit(cli, &outcome, || match &outcome {
                Separation::Separator { formula, .. } => format!("separator: {formula}"),
                Separation::Inseparable { first, second } => format!(
                    "inseparable: {} and {} realise the same atoms",
                    k0[*first].display(),
                    k1[*second].display()
                ),
            });
            Ok(Verdict(matches!(outcome, Separation::Separator { .. })))
        }
        Command::Canonical { core, cocore } => {
            let n = cli.n.unwrap_or(3);
            let a = cylab_core::canonical_strong(n, *core, *cocore)?;
            println!("{}", io::to_json(&StructureFile::from_u_structure(&a)));
            Ok(Verdict(true))
        }
    }
}
