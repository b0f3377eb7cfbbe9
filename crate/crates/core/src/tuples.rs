//! Dense relations: a `k`-ary relation over a universe of `size` elements is a
//! bitset over the `size^k` tuples, indexed big-endian so that index order is
//! lexicographic tuple order.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use fixedbitset::FixedBitSet;

use crate::{Error, Result};

/// All `arity`-tuples over `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TupleSpace {
    size: usize,
    arity: usize,
}

impl TupleSpace {
    pub fn new(size: usize, arity: usize) -> Self {
        TupleSpace { size, arity }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `size^arity`.
    pub fn len(&self) -> usize {
        self.size.pow(self.arity as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distance between indices of tuples that differ by one at coordinate `i`.
    pub fn stride(&self, i: usize) -> usize {
        self.size.pow((self.arity - 1 - i) as u32)
    }

    pub fn index(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.arity);
        tuple.iter().fold(0, |acc, &x| acc * self.size + x)
    }

    pub fn checked_index(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.arity {
            return Err(Error::TupleLength { tuple: tuple.to_vec(), expected: self.arity });
        }
        if tuple.iter().any(|&x| x >= self.size) {
            return Err(Error::TupleOutOfRange { tuple: tuple.to_vec(), size: self.size });
        }
        Ok(self.index(tuple))
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = index % self.size;
            index /= self.size;
        }
    }

    pub fn tuple(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.arity];
        self.decode_into(index, &mut out);
        out
    }

    /// Coordinate `i` of the tuple with the given index.
    pub fn coord(&self, index: usize, i: usize) -> usize {
        index / self.stride(i) % self.size
    }

    /// Index of the tuple obtained by setting coordinate `i` to `value`.
    pub fn with_coord(&self, index: usize, i: usize, value: usize) -> usize {
        let stride = self.stride(i);
        index - self.coord(index, i) * stride + value * stride
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len()).map(move |idx| self.tuple(idx))
    }
}

/// A set of tuples from one [`TupleSpace`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TupleSet {
    space: TupleSpace,
    bits: FixedBitSet,
}

impl TupleSet {
    pub fn empty(space: TupleSpace) -> Self {
        TupleSet { space, bits: FixedBitSet::with_capacity(space.len()) }
    }

    pub fn full(space: TupleSpace) -> Self {
        let mut set = TupleSet::empty(space);
        set.bits.insert_range(..);
        set
    }

    pub fn from_tuples<I, T>(space: TupleSpace, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[usize]>,
    {
        let mut set = TupleSet::empty(space);
        for t in tuples {
            set.insert(t.as_ref())?;
        }
        Ok(set)
    }

    /// The set of tuples whose index satisfies `pred`.
    pub fn from_fn(space: TupleSpace, mut pred: impl FnMut(usize) -> bool) -> Self {
        let mut set = TupleSet::empty(space);
        for idx in 0..space.len() {
            if pred(idx) {
                set.bits.insert(idx);
            }
        }
        set
    }

    /// `{ s : s_i = s_j }`.
    pub fn diagonal(space: TupleSpace, i: usize, j: usize) -> Self {
        TupleSet::from_fn(space, |idx| space.coord(idx, i) == space.coord(idx, j))
    }

    pub fn space(&self) -> TupleSpace {
        self.space
    }

    pub fn arity(&self) -> usize {
        self.space.arity
    }

    pub fn insert(&mut self, tuple: &[usize]) -> Result<bool> {
        let idx = self.space.checked_index(tuple)?;
        Ok(!self.bits.put(idx))
    }

    pub fn insert_index(&mut self, idx: usize) {
        self.bits.insert(idx);
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.space.checked_index(tuple).is_ok_and(|idx| self.bits.contains(idx))
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.bits.contains(idx)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.space.len()
    }

    /// Member indices in increasing (lexicographic) order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    /// Members in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.bits.ones().map(move |idx| self.space.tuple(idx))
    }

    pub fn union(&self, other: &TupleSet) -> TupleSet {
        debug_assert_eq!(self.space, other.space);
        let mut out = self.clone();
        out.bits.union_with(&other.bits);
        out
    }

    pub fn intersection(&self, other: &TupleSet) -> TupleSet {
        debug_assert_eq!(self.space, other.space);
        let mut out = self.clone();
        out.bits.intersect_with(&other.bits);
        out
    }

    pub fn difference(&self, other: &TupleSet) -> TupleSet {
        debug_assert_eq!(self.space, other.space);
        let mut out = self.clone();
        out.bits.difference_with(&other.bits);
        out
    }

    pub fn complement(&self) -> TupleSet {
        let mut out = self.clone();
        out.bits.toggle_range(..);
        out
    }

    pub fn is_subset(&self, other: &TupleSet) -> bool {
        self.space == other.space && self.bits.is_subset(&other.bits)
    }

    /// `{ s : some t agreeing with s off coordinate i is in self }`.
    pub fn cylindrify(&self, i: usize) -> TupleSet {
        let space = self.space;
        let stride = space.stride(i);
        let block = stride * space.size;
        let mut out = TupleSet::empty(space);
        for base in (0..space.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                let hit = (0..space.size).any(|x| self.bits.contains(start + x * stride));
                if hit {
                    for x in 0..space.size {
                        out.bits.insert(start + x * stride);
                    }
                }
            }
        }
        out
    }

    /// Image under a map of the universe applied coordinatewise.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> TupleSet {
        let mut out = TupleSet::empty(self.space);
        let mut buf = vec![0; self.space.arity];
        for idx in self.bits.ones() {
            self.space.decode_into(idx, &mut buf);
            for x in buf.iter_mut() {
                *x = f(*x);
            }
            out.bits.insert(self.space.index(&buf));
        }
        out
    }
}

impl fmt::Debug for TupleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_is_lexicographic() {
        let space = TupleSpace::new(3, 2);
        assert_eq!(space.len(), 9);
        let all: Vec<_> = space.iter().collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(space.index(&[2, 1]), 7);
        assert_eq!(space.coord(7, 0), 2);
        assert_eq!(space.with_coord(7, 1, 0), 6);
        assert!(space.checked_index(&[3, 0]).is_err());
        assert!(space.checked_index(&[0]).is_err());
    }

    #[test]
    fn cylindrify_matches_definition() {
        let space = TupleSpace::new(3, 3);
        let set = TupleSet::from_tuples(space, [[0, 1, 2], [2, 2, 0]]).unwrap();
        for i in 0..3 {
            let cyl = set.cylindrify(i);
            for t in space.iter() {
                let expected = (0..3).any(|x| {
                    let mut u = t.clone();
                    u[i] = x;
                    set.contains(&u)
                });
                assert_eq!(cyl.contains(&t), expected, "coordinate {i} tuple {t:?}");
            }
        }
    }

    #[test]
    fn boolean_operations() {
        let space = TupleSpace::new(2, 2);
        let d = TupleSet::diagonal(space, 0, 1);
        assert_eq!(d.len(), 2);
        assert_eq!(d.complement().len(), 2);
        assert!(d.union(&d.complement()).is_full());
        assert!(d.intersection(&d.complement()).is_empty());
        assert!(d.is_subset(&TupleSet::full(space)));
        assert_eq!(d.map(|x| 1 - x), d);
    }
}
