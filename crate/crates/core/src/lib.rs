//! Finite-variable first-order logic over finite relational structures that
//! carry a distinguished *core* subset.
//!
//! The crate is `no_std` (it only needs `alloc`) and is organised bottom-up:
//!
//! * [`syntax`]: vocabularies, formulas of the `n`-variable fragment, the
//!   concrete grammar, and cylindric terms.
//! * [`tuples`]: dense bitset-backed relations over `size^arity` tuples.
//! * [`structure`]: structures, core structures and the `~` relation,
//!   evaluation, automorphisms and generated substructures.
//! * [`algebra`]: the `n`-pebble type partition and the cylindric set algebra
//!   built on top of it.
//! * [`lab`]: strongness certification, separation, weak and strong
//!   interpolant search, and automorphism-driven definability synthesis.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod algebra;
mod error;
pub mod lab;
pub mod structure;
pub mod syntax;
pub mod tuples;

pub use error::{Error, Result};

pub use algebra::{build_csn, compute_joint_partition, compute_type_partition, CsnAlgebra, Element, TypePartition};
pub use structure::{
    canonical_strong, core_bijection_isomorphism, core_preserving_maps, definable_set, enumerate_signatures, evaluate,
    find_automorphism, generated_substructure, kernel, sim_closure, sim_signature, validate_u_structure, Kernel,
    Permutation, SimSignature, Structure, StructureFamily, UStructure,
};
pub use syntax::{parse_formula, render_formula, term_to_formula, voc_of, CylindricTerm, Formula, Vocabulary};
pub use tuples::{TupleSet, TupleSpace};
