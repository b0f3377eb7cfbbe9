use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Formula, Var, Vocabulary};
use crate::{Error, Result};

/// A term of the cylindric set algebra signature over the generators `[R]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CylindricTerm {
    Zero,
    One,
    Generator(String),
    Diagonal(Var, Var),
    Meet(Box<CylindricTerm>, Box<CylindricTerm>),
    Complement(Box<CylindricTerm>),
    Cyl(Var, Box<CylindricTerm>),
}

impl CylindricTerm {
    pub fn meet(self, rhs: CylindricTerm) -> CylindricTerm {
        CylindricTerm::Meet(Box::new(self), Box::new(rhs))
    }

    pub fn complement(self) -> CylindricTerm {
        CylindricTerm::Complement(Box::new(self))
    }

    pub fn cyl(var: Var, inner: CylindricTerm) -> CylindricTerm {
        CylindricTerm::Cyl(var, Box::new(inner))
    }

    /// Generator symbols occurring in the term.
    pub fn generators(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            CylindricTerm::Generator(name) => {
                out.insert(name);
            }
            CylindricTerm::Meet(l, r) => {
                l.collect_generators(out);
                r.collect_generators(out);
            }
            CylindricTerm::Complement(t) | CylindricTerm::Cyl(_, t) => t.collect_generators(out),
            CylindricTerm::Zero | CylindricTerm::One | CylindricTerm::Diagonal(..) => {}
        }
    }
}

/// The formula whose satisfaction set is the value of `t`: `[R]` becomes
/// `R(v0, ..., v(ar-1))`, meet and complement become `&` and `!`, `c_i`
/// becomes `E vi.` and `d_ij` becomes `vi = vj`.
pub fn term_to_formula(t: &CylindricTerm, vocab: &Vocabulary) -> Result<Formula> {
    let n = vocab.n();
    let check = |v: Var| if v < n { Ok(v) } else { Err(Error::VariableOutOfRange { index: v, n }) };
    Ok(match t {
        CylindricTerm::Zero => Formula::False,
        CylindricTerm::One => Formula::True,
        CylindricTerm::Generator(name) => {
            let arity = vocab.arity(name).ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            Formula::Atom(name.clone(), (0..arity).collect::<Vec<_>>())
        }
        CylindricTerm::Diagonal(i, j) => Formula::Eq(check(*i)?, check(*j)?),
        CylindricTerm::Meet(l, r) => term_to_formula(l, vocab)?.and(term_to_formula(r, vocab)?),
        CylindricTerm::Complement(inner) => term_to_formula(inner, vocab)?.not(),
        CylindricTerm::Cyl(i, inner) => Formula::exists(check(*i)?, term_to_formula(inner, vocab)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn translations() {
        let vocab = Vocabulary::with_symbols(3, [("P", 2)]).unwrap();
        assert_eq!(term_to_formula(&CylindricTerm::Diagonal(0, 1), &vocab).unwrap(), Formula::Eq(0, 1));
        assert_eq!(
            term_to_formula(&CylindricTerm::cyl(0, CylindricTerm::Generator("P".into())), &vocab).unwrap(),
            Formula::exists(0, Formula::atom("P", vec![0, 1]))
        );
        assert_eq!(term_to_formula(&CylindricTerm::Zero.complement(), &vocab).unwrap(), Formula::False.not());
        assert_eq!(
            term_to_formula(&CylindricTerm::Generator("Q".into()), &vocab),
            Err(Error::UnknownSymbol("Q".into()))
        );
        assert!(term_to_formula(&CylindricTerm::Diagonal(0, 3), &vocab).is_err());
    }
}
