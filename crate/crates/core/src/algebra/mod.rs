//! The `n`-variable type partition of a finite structure and the cylindric set
//! algebra `Cs_n(A)` built from it.
//!
//! Every element of `Cs_n(A)` is a union of atoms of the partition and every
//! union of atoms is an element, so the carrier is represented implicitly as
//! the powerset of atoms.

mod csn;
mod refine;

pub use csn::{build_csn, is_definable, unary_definables, CsnAlgebra, CsnReport, Element, MaryDefinables};
pub use refine::{compute_joint_partition, compute_type_partition, AtomSet, TypePartition};
