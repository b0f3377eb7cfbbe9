use alloc::vec::Vec;

use super::{Structure, UStructure};
use crate::tuples::TupleSet;

/// A permutation of the universe `0..size`, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(size: usize) -> Self {
        Permutation((0..size).collect())
    }

    /// `None` unless `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = alloc::vec![false; images.len()];
        for &y in &images {
            if y >= images.len() || core::mem::replace(&mut seen[y], true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn apply_tuple(&self, t: &[usize]) -> Vec<usize> {
        t.iter().map(|&x| self.0[x]).collect()
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = alloc::vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// `f[rel] = rel`.
    pub fn preserves(&self, rel: &TupleSet) -> bool {
        rel.map(|x| self.0[x]) == *rel
    }

    pub fn is_automorphism_of(&self, a: &Structure) -> bool {
        self.size() == a.size() && a.relations().all(|(_, rel)| self.preserves(rel))
    }
}

/// Rearranges `xs` into the next permutation in lexicographic order; returns
/// false (leaving `xs` sorted ascending) after the last one.
pub(crate) fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Every permutation of `0..size`, identity first, in lexicographic order of
/// image tables.
#[derive(Debug, Clone)]
pub struct AllPermutations {
    current: Vec<usize>,
    done: bool,
}

pub fn all_permutations(size: usize) -> AllPermutations {
    AllPermutations { current: (0..size).collect(), done: false }
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let out = Permutation(self.current.clone());
        self.done = !next_permutation(&mut self.current);
        Some(out)
    }
}

/// Permutations mapping the core onto itself: every arrangement of the core
/// combined with every arrangement of its complement, identity first.
#[derive(Debug, Clone)]
pub struct CorePreservingMaps {
    size: usize,
    core: Vec<usize>,
    cocore: Vec<usize>,
    core_images: Vec<usize>,
    cocore_images: Vec<usize>,
    done: bool,
}

pub fn core_preserving_maps(a: &UStructure) -> CorePreservingMaps {
    let core: Vec<usize> = a.core().iter().copied().collect();
    let cocore = a.cocore();
    CorePreservingMaps {
        size: a.size(),
        core_images: core.clone(),
        cocore_images: cocore.clone(),
        core,
        cocore,
        done: false,
    }
}

impl Iterator for CorePreservingMaps {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let mut images = alloc::vec![0; self.size];
        for (&x, &y) in self.core.iter().zip(&self.core_images) {
            images[x] = y;
        }
        for (&x, &y) in self.cocore.iter().zip(&self.cocore_images) {
            images[x] = y;
        }
        if !next_permutation(&mut self.cocore_images) {
            self.done = !next_permutation(&mut self.core_images);
        }
        Some(Permutation(images))
    }
}
