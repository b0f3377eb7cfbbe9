//! Procedures built on the algebra: strongness certification, separation of
//! finite families, weak and strong interpolant search, and definability via
//! automorphisms.

mod counterexample;
mod interpolate;
mod separate;
mod strong;
mod svenonius;

pub use counterexample::{counterexample_formulas, verify_counterexample, CounterexampleReport};
pub use interpolate::{
    check_interpolant, find_interpolant, InterpolationMode, InterpolationOutcome, InterpolationProblem,
    InterpolationReport, Refutation,
};
pub use separate::{separate, separate_structures, Separation};
pub use strong::{
    core_definable_in_reduct, is_strong_u_structure, StrongCertificate, StrongCounterexample, StrongOutcome,
};
pub use svenonius::{
    automorphisms_of_reduct, implicit_defines, svenonius_explicit, DefinabilityProblem, DefinabilityTarget,
    SvenoniusOutcome, SvenoniusSolver,
};
