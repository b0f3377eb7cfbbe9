//! Finite relational structures, structures with a core, and the machinery
//! around the `~` relation on tuples.

mod automorphism;
mod eval;
mod model;
mod perm;
mod sim;
mod substructure;

pub use automorphism::{find_automorphism, AutomorphismFinder};
pub use eval::{
    consequence_over, definable_set, evaluate, validates, Consequence, ConsequenceMode, ConsequenceWitness,
};
pub use model::{canonical_strong, unary_u_structure, Structure, StructureFamily, UStructure, UnaryShape};
pub use perm::{all_permutations, core_preserving_maps, AllPermutations, CorePreservingMaps, Permutation};
pub use sim::{
    enumerate_signatures, kernel, sim_closure, sim_signature, validate_u_structure, Kernel, SimSignature,
    ValidationReport, Violation,
};
pub use substructure::{core_bijection_isomorphism, generated_substructure};
