use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::Vocabulary;
use crate::{Error, Result};

/// Index of one of the variables `v0 .. v(n-1)`.
pub type Var = usize;

/// A formula of first-order logic restricted to the variables `v0 .. v(n-1)`,
/// over a purely relational vocabulary with built-in equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Eq(Var, Var),
    Atom(String, Vec<Var>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn atom(symbol: impl Into<String>, args: impl Into<Vec<Var>>) -> Formula {
        Formula::Atom(symbol.into(), args.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Formula) -> Formula {
        Formula::Iff(Box::new(self), Box::new(rhs))
    }

    pub fn exists(var: Var, body: Formula) -> Formula {
        Formula::Exists(var, Box::new(body))
    }

    pub fn forall(var: Var, body: Formula) -> Formula {
        Formula::Forall(var, Box::new(body))
    }

    /// `E v0. E v1. ... E v(n-1). body`
    pub fn exists_all(n: usize, body: Formula) -> Formula {
        (0..n).rev().fold(body, |acc, v| Formula::exists(v, acc))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        let mut iter = parts.into_iter();
        match iter.next() {
            None => Formula::True,
            Some(first) => iter.fold(first, Formula::and),
        }
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        let mut iter = parts.into_iter();
        match iter.next() {
            None => Formula::False,
            Some(first) => iter.fold(first, Formula::or),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Atom(..) => 1,
            Formula::Not(b) | Formula::Exists(_, b) | Formula::Forall(_, b) => 1 + b.size(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                1 + l.size() + r.size()
            }
        }
    }

    /// Largest variable index mentioned anywhere, bound or free.
    pub fn max_var(&self) -> Option<Var> {
        match self {
            Formula::True | Formula::False => None,
            Formula::Eq(i, j) => Some(*i.max(j)),
            Formula::Atom(_, args) => args.iter().copied().max(),
            Formula::Not(b) => b.max_var(),
            Formula::Exists(v, b) | Formula::Forall(v, b) => Some(b.max_var().map_or(*v, |m| m.max(*v))),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                match (l.max_var(), r.max_var()) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    (a, b) => a.or(b),
                }
            }
        }
    }

    /// Rewrites `A v. body` to `!E v. !body`, recursively.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Atom(..) => self.clone(),
            Formula::Not(b) => b.desugar().not(),
            Formula::And(l, r) => l.desugar().and(r.desugar()),
            Formula::Or(l, r) => l.desugar().or(r.desugar()),
            Formula::Implies(l, r) => l.desugar().implies(r.desugar()),
            Formula::Iff(l, r) => l.desugar().iff(r.desugar()),
            Formula::Exists(v, b) => Formula::exists(*v, b.desugar()),
            Formula::Forall(v, b) => Formula::exists(*v, b.desugar().not()).not(),
        }
    }

    pub(crate) fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a str, &'a [Var])) {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) => {}
            Formula::Atom(name, args) => f(name, args),
            Formula::Not(b) | Formula::Exists(_, b) | Formula::Forall(_, b) => b.visit_atoms(f),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.visit_atoms(f);
                r.visit_atoms(f);
            }
        }
    }

    /// Checks that the formula is well formed over `vocab`: known symbols,
    /// matching arities, and variable indices below `vocab.n()`.
    pub fn check(&self, vocab: &Vocabulary) -> Result<()> {
        let n = vocab.n();
        let check_var = |v: Var| if v < n { Ok(()) } else { Err(Error::VariableOutOfRange { index: v, n }) };
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::Eq(i, j) => check_var(*i).and(check_var(*j)),
            Formula::Atom(name, args) => {
                let arity = vocab.arity(name).ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
                if arity != args.len() {
                    return Err(Error::ArityMismatch { symbol: name.clone(), expected: arity, found: args.len() });
                }
                args.iter().try_for_each(|&v| check_var(v))
            }
            Formula::Not(b) => b.check(vocab),
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                check_var(*v)?;
                b.check(vocab)
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.check(vocab)?;
                r.check(vocab)
            }
        }
    }
}

/// Free variables of `f`.
pub fn free_vars(f: &Formula) -> BTreeSet<Var> {
    match f {
        Formula::True | Formula::False => BTreeSet::new(),
        Formula::Eq(i, j) => BTreeSet::from([*i, *j]),
        Formula::Atom(_, args) => args.iter().copied().collect(),
        Formula::Not(b) => free_vars(b),
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            let mut inner = free_vars(b);
            inner.remove(v);
            inner
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            let mut out = free_vars(l);
            out.extend(free_vars(r));
            out
        }
    }
}

/// The smallest vocabulary (for `n` variables) in which `f` is a formula.
///
/// Arities are read off the atoms; a well-formed formula uses every symbol with
/// a single arity, otherwise the first occurrence wins.
pub fn voc_of(f: &Formula, n: usize) -> Vocabulary {
    let mut vocab = Vocabulary::new(n.max(1)).expect("n >= 1");
    f.visit_atoms(&mut |name, args| vocab.insert_unchecked(name.to_string(), args.len()));
    vocab
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render_formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(v: Var) -> Formula {
        Formula::atom("P", vec![v])
    }
    fn q(v: Var) -> Formula {
        Formula::atom("Q", vec![v])
    }

    #[test]
    fn free_variables() {
        assert_eq!(free_vars(&Formula::Eq(0, 1)), BTreeSet::from([0, 1]));
        assert_eq!(free_vars(&Formula::exists(1, Formula::Eq(0, 1))), BTreeSet::from([0]));
        // (Q(x) <-> Q(z)) | (Q(y) <-> Q(z))
        let psi = q(0).iff(q(2)).or(q(1).iff(q(2)));
        assert_eq!(free_vars(&psi), BTreeSet::from([0, 1, 2]));
        // variable reuse: v0 free outside, bound inside
        let reuse = p(0).and(Formula::exists(0, p(0)));
        assert_eq!(free_vars(&reuse), BTreeSet::from([0]));
    }

    #[test]
    fn vocabulary_of_formulas() {
        assert!(voc_of(&Formula::Eq(0, 1), 3).is_empty());
        let phi = p(0).iff(p(1).not());
        assert_eq!(voc_of(&phi, 3).names().collect::<Vec<_>>(), vec!["P"]);
        assert_eq!(voc_of(&p(0).and(q(1)), 3).names().collect::<Vec<_>>(), vec!["P", "Q"]);
    }

    #[test]
    fn desugar_removes_forall() {
        let f = Formula::forall(0, p(0));
        assert_eq!(f.desugar(), Formula::exists(0, p(0).not()).not());
    }

    #[test]
    fn check_reports_errors() {
        let vocab = Vocabulary::with_symbols(3, [("P", 1)]).unwrap();
        assert!(p(2).check(&vocab).is_ok());
        assert_eq!(p(3).check(&vocab), Err(Error::VariableOutOfRange { index: 3, n: 3 }));
        assert_eq!(q(0).check(&vocab), Err(Error::UnknownSymbol("Q".into())));
        assert!(matches!(Formula::atom("P", vec![0, 1]).check(&vocab), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn connective_helpers() {
        assert_eq!(Formula::conjunction([]), Formula::True);
        assert_eq!(Formula::disjunction([]), Formula::False);
        assert_eq!(Formula::conjunction([p(0), q(0), p(1)]), p(0).and(q(0)).and(p(1)));
        assert_eq!(Formula::exists_all(2, p(0)), Formula::exists(0, Formula::exists(1, p(0))));
        assert_eq!(p(0).and(q(1)).size(), 3);
    }
}
