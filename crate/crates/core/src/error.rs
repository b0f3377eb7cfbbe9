use alloc::string::String;
use alloc::vec::Vec;

use crate::structure::ValidationReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown relation symbol `{0}`")]
    UnknownSymbol(String),

    #[error("relation symbol `{symbol}` has arity {expected} but was given {found} argument(s)")]
    ArityMismatch { symbol: String, expected: usize, found: usize },

    #[error("variable v{index} is out of range: only v0..v{} exist", .n - 1)]
    VariableOutOfRange { index: usize, n: usize },

    #[error("invalid relation symbol `{name}`: {reason}")]
    InvalidSymbol { name: String, reason: &'static str },

    #[error("relation symbol `{0}` declared twice")]
    DuplicateSymbol(String),

    #[error("relation symbol `{symbol}` has arity {arity}, outside 1..={n}")]
    ArityOutOfRange { symbol: String, arity: usize, n: usize },

    #[error("variable count must be at least 1")]
    ZeroVariables,

    #[error("universe must be non-empty")]
    EmptyUniverse,

    #[error("tuple {tuple:?} has an entry outside the universe 0..{size}")]
    TupleOutOfRange { tuple: Vec<usize>, size: usize },

    #[error("tuple {tuple:?} has length {}, expected {expected}", .tuple.len())]
    TupleLength { tuple: Vec<usize>, expected: usize },

    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),

    #[error("variable counts differ: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("not a valid U-structure: {0}")]
    InvalidUStructure(ValidationReport),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("tuples have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("map is not a bijection of the universe")]
    NotABijection,

    #[error("elements belong to different algebras")]
    MixedAlgebras,

    #[error("empty structure family")]
    EmptyFamily,
}
