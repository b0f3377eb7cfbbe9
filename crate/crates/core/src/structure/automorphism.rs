use alloc::vec::Vec;

use super::{Permutation, UStructure};
use crate::algebra::{build_csn, CsnAlgebra, Element};
use crate::{Error, Result};

/// Finds automorphisms of a U-structure mapping one tuple onto another.
///
/// Two tuples are mapped onto each other exactly when they have the same
/// `n`-variable type, read off the type partition of the structure.
#[derive(Debug, Clone)]
pub struct AutomorphismFinder<'a> {
    structure: &'a UStructure,
    algebra: CsnAlgebra,
    core_definable: bool,
}

impl<'a> AutomorphismFinder<'a> {
    pub fn new(structure: &'a UStructure) -> Result<Self> {
        let algebra = build_csn(structure.base())?;
        let core_definable = algebra.element_of(&structure.core_column()).is_some();
        Ok(AutomorphismFinder { structure, algebra, core_definable })
    }

    pub fn algebra(&self) -> &CsnAlgebra {
        &self.algebra
    }

    pub fn core_definable(&self) -> bool {
        self.core_definable
    }

    fn check(&self, t: &[usize]) -> Result<()> {
        let n = self.structure.n();
        if t.len() > n {
            return Err(Error::TupleLength { tuple: t.to_vec(), expected: n });
        }
        if t.iter().any(|&x| x >= self.structure.size()) {
            return Err(Error::TupleOutOfRange { tuple: t.to_vec(), size: self.structure.size() });
        }
        Ok(())
    }

    /// The type of a tuple of length `k <= n`, as the element
    /// `c_k ... c_{n-1}` of the atom of any padding of it.
    pub fn type_of(&self, t: &[usize]) -> Result<Element> {
        self.check(t)?;
        let mut padded = t.to_vec();
        padded.resize(self.structure.n(), 0);
        let atom = self.algebra.partition().atom_of(0, &padded)?;
        self.algebra.cylinder_above(t.len(), &self.algebra.atom(atom).expect("atom in range"))
    }

    pub fn same_type(&self, a: &[usize], b: &[usize]) -> Result<bool> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
        }
        Ok(self.type_of(a)? == self.type_of(b)?)
    }

    /// An automorphism `f` with `f(a) = b`, or `None` if the types differ.
    pub fn find(&self, a: &[usize], b: &[usize]) -> Result<Option<Permutation>> {
        if !self.same_type(a, b)? {
            return Ok(None);
        }
        let size = self.structure.size();
        let mut images = alloc::vec![usize::MAX; size];
        let mut used = alloc::vec![false; size];
        for (&x, &y) in a.iter().zip(b) {
            if images[x] == usize::MAX {
                if used[y] {
                    return Ok(None);
                }
                images[x] = y;
                used[y] = true;
            } else if images[x] != y {
                return Ok(None);
            }
        }
        // greedy extension: the rest in order, core to core when that matters
        let mut greedy = images.clone();
        let mut free: Vec<usize> = (0..size).filter(|&y| !used[y]).collect();
        for (x, slot) in greedy.iter_mut().enumerate() {
            if *slot != usize::MAX {
                continue;
            }
            let pos = free
                .iter()
                .position(|&y| !self.core_definable || self.structure.in_core(y) == self.structure.in_core(x))
                .unwrap_or(0);
            if free.is_empty() {
                return Ok(None);
            }
            *slot = free.remove(pos);
        }
        if let Some(f) = Permutation::from_images(greedy) {
            if f.is_automorphism_of(self.structure.base()) {
                return Ok(Some(f));
            }
        }
        Ok(self.search(&mut images, &mut used, 0))
    }

    fn search(&self, images: &mut [usize], used: &mut [bool], x: usize) -> Option<Permutation> {
        if x == images.len() {
            let f = Permutation::from_images(images.to_vec())?;
            return f.is_automorphism_of(self.structure.base()).then_some(f);
        }
        if images[x] != usize::MAX {
            return self.search(images, used, x + 1);
        }
        for y in 0..images.len() {
            if used[y] || (self.core_definable && self.structure.in_core(y) != self.structure.in_core(x)) {
                continue;
            }
            images[x] = y;
            used[y] = true;
            let found = self.search(images, used, x + 1);
            images[x] = usize::MAX;
            used[y] = false;
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

pub fn find_automorphism(a: &UStructure, s: &[usize], t: &[usize]) -> Result<Option<Permutation>> {
    AutomorphismFinder::new(a)?.find(s, t)
}
