//! File formats, seeded corpora and the verification suite behind the `cylab`
//! command-line tool.

pub mod corpus;
pub mod io;
pub mod suite;
