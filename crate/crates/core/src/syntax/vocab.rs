use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Number of variables used when nothing else is specified.
pub const DEFAULT_VARIABLES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// Relation symbols with their arities, together with the variable count `n`
/// of the logic they are used in.
///
/// Equality is built in and never listed, so the equality-only vocabulary is
/// the empty one. Symbols are kept ordered by name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    n: usize,
    symbols: BTreeMap<String, usize>,
}

pub(crate) fn check_symbol_name(name: &str) -> Result<()> {
    let bad = |reason| Err(Error::InvalidSymbol { name: name.to_string(), reason });
    let mut chars = name.chars();
    match chars.next() {
        None => return bad("empty name"),
        Some(c) if !(c.is_ascii_alphabetic() || c == '_') => return bad("must start with a letter or `_`"),
        _ => {}
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return bad("only ASCII letters, digits and `_` are allowed");
    }
    if name == "true" || name == "false" {
        return bad("reserved word");
    }
    if is_variable_name(name) {
        return bad("clashes with variable syntax");
    }
    Ok(())
}

pub(crate) fn is_variable_name(name: &str) -> bool {
    name.len() > 1 && name.starts_with('v') && name[1..].bytes().all(|b| b.is_ascii_digit())
}

impl Vocabulary {
    /// The equality-only vocabulary for `n` variables.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroVariables);
        }
        Ok(Vocabulary { n, symbols: BTreeMap::new() })
    }

    pub fn with_symbols<I, S>(n: usize, symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut vocab = Vocabulary::new(n)?;
        for (name, arity) in symbols {
            vocab.add(name, arity)?;
        }
        Ok(vocab)
    }

    pub fn add(&mut self, name: impl Into<String>, arity: usize) -> Result<()> {
        let name = name.into();
        check_symbol_name(&name)?;
        if arity == 0 || arity > self.n {
            return Err(Error::ArityOutOfRange { symbol: name, arity, n: self.n });
        }
        if self.symbols.contains_key(&name) {
            return Err(Error::DuplicateSymbol(name));
        }
        self.symbols.insert(name, arity);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.symbols.keys().map(String::as_str)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols.iter().map(|(name, &arity)| Symbol { name: name.clone(), arity })
    }

    /// `self` is contained in `other` with matching arities (variable counts are
    /// not compared).
    pub fn is_subset_of(&self, other: &Vocabulary) -> bool {
        self.symbols.iter().all(|(name, arity)| other.symbols.get(name) == Some(arity))
    }

    /// The sub-vocabulary with the given names.
    pub fn restrict<'a, I>(&self, names: I) -> Result<Vocabulary>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut out = Vocabulary::new(self.n)?;
        for name in names {
            let arity = self.arity(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            if !out.contains(name) {
                out.symbols.insert(name.to_string(), arity);
            }
        }
        Ok(out)
    }

    /// Symbols present in both vocabularies with the same arity.
    pub fn intersection(&self, other: &Vocabulary) -> Vocabulary {
        let symbols = self
            .symbols
            .iter()
            .filter(|(name, arity)| other.symbols.get(*name) == Some(*arity))
            .map(|(name, &arity)| (name.clone(), arity))
            .collect();
        Vocabulary { n: self.n, symbols }
    }

    /// All `2^len` sub-vocabularies, indexed by bitmask over the name order.
    pub fn subsets(&self) -> Vec<Vocabulary> {
        let entries: Vec<(&String, &usize)> = self.symbols.iter().collect();
        (0u64..(1u64 << entries.len()))
            .map(|mask| Vocabulary {
                n: self.n,
                symbols: entries
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask >> bit & 1 == 1)
                    .map(|(_, (name, arity))| ((*name).clone(), **arity))
                    .collect(),
            })
            .collect()
    }

    pub(crate) fn insert_unchecked(&mut self, name: String, arity: usize) {
        self.symbols.entry(name).or_insert(arity);
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (idx, (name, arity)) in self.symbols.iter().enumerate() {
            if idx > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}/{arity}")?;
        }
        f.write_str("}")
    }
}
