//! Formula and term language of the `n`-variable fragment.

mod formula;
mod parse;
mod render;
mod term;
mod vocab;

pub use formula::{free_vars, voc_of, Formula, Var};
pub use parse::{parse_formula, parse_formula_inferring};
pub use render::render_formula;
pub use term::{term_to_formula, CylindricTerm};
pub use vocab::{Symbol, Vocabulary, DEFAULT_VARIABLES};
