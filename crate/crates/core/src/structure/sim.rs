use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::Structure;
use crate::tuples::{TupleSet, TupleSpace};

/// Equality pattern of a tuple, stored as a restricted growth string: entry `i`
/// is the index of the block of coordinate `i`, blocks numbered by first
/// occurrence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Kernel(Vec<usize>);

impl Kernel {
    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.0.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (i, &b) in self.0.iter().enumerate() {
            blocks[b].push(i);
        }
        blocks
    }

    /// Whether coordinates `i` and `j` coincide.
    pub fn equal(&self, i: usize, j: usize) -> bool {
        self.0[i] == self.0[j]
    }

    /// All set partitions of `0..k`, in lexicographic order of their labels.
    pub fn all(k: usize) -> Vec<Kernel> {
        fn extend(prefix: &mut Vec<usize>, k: usize, out: &mut Vec<Kernel>) {
            if prefix.len() == k {
                out.push(Kernel(prefix.clone()));
                return;
            }
            let next = prefix.iter().max().map_or(0, |m| m + 1);
            for label in 0..=next {
                prefix.push(label);
                extend(prefix, k, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        extend(&mut Vec::with_capacity(k), k, &mut out);
        out
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (b, block) in self.blocks().iter().enumerate() {
            if b > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (k, i) in block.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{i}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// The partition of coordinates induced by equal entries.
pub fn kernel(s: &[usize]) -> Kernel {
    let mut seen: Vec<usize> = Vec::new();
    Kernel(
        s.iter()
            .map(|x| match seen.iter().position(|y| y == x) {
                Some(b) => b,
                None => {
                    seen.push(*x);
                    seen.len() - 1
                }
            })
            .collect(),
    )
}

/// The `~`-class of a tuple: its kernel and, per block, whether the block's
/// element lies in the core.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimSignature {
    pub kernel: Kernel,
    pub core_flags: Vec<bool>,
}

pub(crate) fn signature_with(s: &[usize], in_core: impl Fn(usize) -> bool) -> SimSignature {
    let kernel = kernel(s);
    let mut core_flags = vec![false; kernel.block_count()];
    for (i, &b) in kernel.labels().iter().enumerate() {
        core_flags[b] = in_core(s[i]);
    }
    SimSignature { kernel, core_flags }
}

/// `s ~ z` iff `sim_signature(s, core) == sim_signature(z, core)`.
pub fn sim_signature(s: &[usize], core: &BTreeSet<usize>) -> SimSignature {
    signature_with(s, |x| core.contains(&x))
}

/// All `~`-classes of `k`-tuples that can occur when the core (respectively its
/// complement) is non-empty. With both sides of size at least `k` the count is
/// the sum over partitions of `0..k` of `2^blocks`.
pub fn enumerate_signatures(k: usize, core_nonempty: bool, cocore_nonempty: bool) -> Vec<SimSignature> {
    let mut out = Vec::new();
    for kernel in Kernel::all(k) {
        let blocks = kernel.block_count();
        for mask in 0u64..(1 << blocks) {
            let core_flags: Vec<bool> = (0..blocks).map(|b| mask >> b & 1 == 1).collect();
            let uses_core = core_flags.iter().any(|&f| f);
            let uses_cocore = core_flags.iter().any(|&f| !f);
            if (uses_core && !core_nonempty) || (uses_cocore && !cocore_nonempty) {
                continue;
            }
            out.push(SimSignature { kernel: kernel.clone(), core_flags });
        }
    }
    out
}

/// The smallest `~`-closed relation containing `rel`.
pub fn sim_closure(rel: &TupleSet, core: &BTreeSet<usize>) -> TupleSet {
    let space = rel.space();
    let classes: BTreeSet<SimSignature> = rel.iter().map(|t| sim_signature(&t, core)).collect();
    let mut buf = vec![0; space.arity()];
    TupleSet::from_fn(space, |idx| {
        space.decode_into(idx, &mut buf);
        classes.contains(&sim_signature(&buf, core))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum Violation {
    /// The core has fewer than `n` elements.
    CoreSize {
        found: usize,
        required: usize,
    },
    /// The complement of the core has fewer than `n` elements.
    CocoreSize {
        found: usize,
        required: usize,
    },
    CoreOutOfRange {
        element: usize,
        size: usize,
    },
    /// `member ~ missing`, `member` is in the relation and `missing` is not.
    NotClosed {
        symbol: String,
        member: Vec<usize>,
        missing: Vec<usize>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CoreSize { found, required } => write!(f, "core-size: |core| = {found} < {required}"),
            Violation::CocoreSize { found, required } => write!(f, "cocore-size: |A - core| = {found} < {required}"),
            Violation::CoreOutOfRange { element, size } => {
                write!(f, "core-range: core element {element} outside universe 0..{size}")
            }
            Violation::NotClosed { symbol, member, missing } => {
                write!(f, "not-closed: {symbol} contains {member:?} ~ {missing:?} but not {missing:?}")
            }
        }
    }
}

/// Outcome of [`validate_u_structure`]; violations are data, not errors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the U-structure conditions for `c` with the given core. For each
/// relation that is not `~`-closed, the lexicographically first member with a
/// missing `~`-equivalent (and the first such equivalent) is reported.
pub fn validate_u_structure(c: &Structure, core: &BTreeSet<usize>) -> ValidationReport {
    let n = c.n();
    let size = c.size();
    let mut violations = Vec::new();
    for &x in core.iter().filter(|&&x| x >= size) {
        violations.push(Violation::CoreOutOfRange { element: x, size });
    }
    let core_size = core.iter().filter(|&&x| x < size).count();
    if core_size < n {
        violations.push(Violation::CoreSize { found: core_size, required: n });
    }
    if size - core_size < n {
        violations.push(Violation::CocoreSize { found: size - core_size, required: n });
    }
    for (name, rel) in c.relations() {
        if let Some((member, missing)) = closure_witness(rel, core) {
            violations.push(Violation::NotClosed { symbol: name.into(), member, missing });
        }
    }
    ValidationReport { violations }
}

fn closure_witness(rel: &TupleSet, core: &BTreeSet<usize>) -> Option<(Vec<usize>, Vec<usize>)> {
    let space: TupleSpace = rel.space();
    // bucket every tuple by its class, in lexicographic order
    let mut classes: BTreeMap<SimSignature, Vec<usize>> = BTreeMap::new();
    let mut buf = vec![0; space.arity()];
    for idx in 0..space.len() {
        space.decode_into(idx, &mut buf);
        classes.entry(sim_signature(&buf, core)).or_default().push(idx);
    }
    for idx in rel.indices() {
        let member = space.tuple(idx);
        let class = &classes[&sim_signature(&member, core)];
        if let Some(&gap) = class.iter().find(|&&z| !rel.contains_index(z)) {
            return Some((member, space.tuple(gap)));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Vocabulary;
    use alloc::string::ToString;

    fn labels(blocks: &Kernel) -> Vec<Vec<usize>> {
        blocks.blocks()
    }

    #[test]
    fn kernels() {
        assert_eq!(labels(&kernel(&[4, 4, 4])), vec![vec![0, 1, 2]]);
        assert_eq!(labels(&kernel(&[0, 3, 0])), vec![vec![0, 2], vec![1]]);
        assert_eq!(labels(&kernel(&[0, 1, 2])), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(kernel(&[0, 3, 0]).to_string(), "{{0,2},{1}}");
    }

    #[test]
    fn signatures() {
        let core = BTreeSet::from([0, 1, 2]);
        let s = sim_signature(&[0, 3], &core);
        assert_eq!(s.kernel.blocks(), vec![vec![0], vec![1]]);
        assert_eq!(s.core_flags, vec![true, false]);
        assert_eq!(sim_signature(&[1, 4], &core), s);
        let t = sim_signature(&[0, 0, 5], &core);
        assert_eq!(t.kernel.blocks(), vec![vec![0, 1], vec![2]]);
        assert_eq!(t.core_flags, vec![true, false]);
    }

    #[test]
    fn signature_counts() {
        assert_eq!(enumerate_signatures(1, true, true).len(), 2);
        assert_eq!(enumerate_signatures(2, true, true).len(), 6);
        assert_eq!(enumerate_signatures(3, true, true).len(), 22);
        assert_eq!(enumerate_signatures(3, false, true).len(), 5);
        assert_eq!(enumerate_signatures(0, true, true).len(), 1);
        // Bell numbers
        assert_eq!(Kernel::all(4).len(), 15);
        assert_eq!(Kernel::all(5).len(), 52);
    }

    #[test]
    fn closure() {
        let core = BTreeSet::from([0, 1, 2]);
        let space = TupleSpace::new(6, 2);
        assert!(sim_closure(&TupleSet::empty(space), &core).is_empty());
        let single = TupleSet::from_tuples(space, [[0, 3]]).unwrap();
        let closed = sim_closure(&single, &core);
        assert_eq!(closed.len(), 9);
        assert!(closed.iter().all(|t| t[0] < 3 && t[1] >= 3));
        assert_eq!(sim_closure(&closed, &core), closed);
    }

    #[test]
    fn validation() {
        let vocab = Vocabulary::with_symbols(3, [("R", 2)]).unwrap();
        let empty = Structure::new(6, vocab.clone()).unwrap();
        let report = validate_u_structure(&empty, &BTreeSet::from([0, 1]));
        assert_eq!(report.violations, vec![Violation::CoreSize { found: 2, required: 3 }]);

        let r = Structure::new(6, vocab).unwrap().with_tuples("R", [[0, 3]]).unwrap();
        let report = validate_u_structure(&r, &BTreeSet::from([0, 1, 2]));
        assert_eq!(
            report.violations,
            vec![Violation::NotClosed { symbol: "R".into(), member: vec![0, 3], missing: vec![0, 4] }]
        );
        assert!(validate_u_structure(&empty, &BTreeSet::from([0, 1, 2])).is_ok());
        let report = validate_u_structure(&empty, &BTreeSet::from([0, 1, 2, 3, 9]));
        assert!(report.violations.contains(&Violation::CoreOutOfRange { element: 9, size: 6 }));
        assert!(report.violations.contains(&Violation::CocoreSize { found: 2, required: 3 }));
    }
}
