//! Decompositions and set partitions of a ground set, with the restriction
//! operations the substitution construction is built on.
//!
//! A decomposition is an ordered tuple of pairwise disjoint (possibly empty)
//! subsets covering the ground set; a partition is an unordered family of
//! nonempty disjoint blocks, stored sorted by minimum label. The empty set
//! has exactly one decomposition into k parts and exactly one (empty)
//! partition; both are first-class values here.

use std::fmt;

use crate::error::{Error, Result};
use crate::label::{Bijection, Label, LabelSet};

/// An ordered decomposition I = P_1 ⊔ ... ⊔ P_k with empty parts allowed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Decomposition {
    parts: Vec<LabelSet>,
}

impl Decomposition {
    pub fn new(parts: Vec<LabelSet>) -> Result<Self> {
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                if !parts[i].is_disjoint_from(&parts[j]) {
                    return Err(Error::Domain(format!(
                        "decomposition parts {} and {} overlap",
                        parts[i], parts[j]
                    )));
                }
            }
        }
        Ok(Decomposition { parts })
    }

    pub fn parts(&self) -> &[LabelSet] {
        &self.parts
    }

    pub fn ground(&self) -> LabelSet {
        self.parts
            .iter()
            .fold(LabelSet::empty(), |acc, p| acc.union(p))
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All k^|I| ordered decompositions of `ground` into k parts, in counting
/// order: each label is a base-k digit, the smallest label most significant.
/// For ({a}, 2) this yields [({a},∅), (∅,{a})].
pub fn enumerate_decompositions(ground: &LabelSet, k: usize) -> Vec<Decomposition> {
    assert!(k >= 1, "decompositions need at least one part");
    let n = ground.len();
    let total = k.checked_pow(n as u32).expect("decomposition count overflow");
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; n];
    loop {
        let mut parts = vec![Vec::new(); k];
        for (i, l) in ground.iter().enumerate() {
            parts[digits[i]].push(l.clone());
        }
        out.push(Decomposition {
            parts: parts.into_iter().map(LabelSet::new).collect(),
        });
        // increment the least significant digit (the largest label)
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < k {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Convenience: all two-part decompositions (S, T) of `ground`.
pub fn two_part_decompositions(ground: &LabelSet) -> Vec<(LabelSet, LabelSet)> {
    enumerate_decompositions(ground, 2)
        .into_iter()
        .map(|d| {
            let mut it = d.parts.into_iter();
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

/// A set partition: nonempty disjoint blocks, sorted by minimum label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    blocks: Vec<LabelSet>,
}

impl SetPartition {
    pub fn new(blocks: impl IntoIterator<Item = LabelSet>) -> Result<Self> {
        let mut blocks: Vec<LabelSet> = blocks.into_iter().collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::Domain("partition block is empty".into()));
            }
        }
        blocks.sort();
        for w in blocks.windows(2) {
            if !w[0].is_disjoint_from(&w[1]) {
                return Err(Error::Domain(format!(
                    "partition blocks {} and {} overlap",
                    w[0], w[1]
                )));
            }
        }
        Ok(SetPartition { blocks })
    }

    pub fn empty() -> Self {
        SetPartition { blocks: Vec::new() }
    }

    pub fn blocks(&self) -> &[LabelSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn ground(&self) -> LabelSet {
        self.blocks
            .iter()
            .fold(LabelSet::empty(), |acc, b| acc.union(b))
    }

    pub fn block_of(&self, l: &Label) -> Option<&LabelSet> {
        self.blocks.iter().find(|b| b.contains(l))
    }

    /// The blocks of the partition, each wrapped as a block label. This is the
    /// ground set the outer term of a composite structure lives on.
    pub fn block_labels(&self) -> LabelSet {
        LabelSet::new(self.blocks.iter().map(|b| Label::block(b.clone())))
    }

    /// X^T: the sub-family of blocks meeting T, as block labels.
    pub fn support_blocks(&self, t: &LabelSet) -> LabelSet {
        LabelSet::new(
            self.blocks
                .iter()
                .filter(|b| !b.is_disjoint_from(t))
                .map(|b| Label::block((*b).clone())),
        )
    }

    /// X_T: the partition of T by intersecting blocks with T.
    pub fn restrict(&self, t: &LabelSet) -> SetPartition {
        SetPartition {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.intersect(t))
                .filter(|b| !b.is_empty())
                .collect(),
        }
    }

    /// The canonical bijection X^T → X_T sending a block B meeting T to B ∩ T,
    /// as a bijection of block labels.
    pub fn restriction_bijection(&self, t: &LabelSet) -> Bijection {
        Bijection::from_pairs(self.blocks.iter().filter_map(|b| {
            let bt = b.intersect(t);
            if bt.is_empty() {
                None
            } else {
                Some((Label::block(b.clone()), Label::block(bt)))
            }
        }))
        .expect("blocks are disjoint, so intersections with T are distinct")
    }

    /// Union of two partitions with disjoint grounds.
    pub fn union_disjoint(&self, other: &SetPartition) -> Result<SetPartition> {
        SetPartition::new(self.blocks.iter().chain(other.blocks.iter()).cloned())
    }

    /// Blocks grouped by size, ascending; each group keeps block order.
    pub fn group_blocks_by_size(&self) -> Vec<(usize, Vec<LabelSet>)> {
        let mut groups: std::collections::BTreeMap<usize, Vec<LabelSet>> =
            std::collections::BTreeMap::new();
        for b in &self.blocks {
            groups.entry(b.len()).or_default().push(b.clone());
        }
        groups.into_iter().collect()
    }

    /// (X', X''): blocks of size >= r and blocks of size < r.
    pub fn large_small_split(&self, r: usize) -> (SetPartition, SetPartition) {
        let (large, small): (Vec<_>, Vec<_>) =
            self.blocks.iter().cloned().partition(|b| b.len() >= r);
        (
            SetPartition { blocks: large },
            SetPartition { blocks: small },
        )
    }

    /// Relabels every block along a bijection of ground labels.
    pub fn relabel(&self, sigma: &Bijection) -> Result<SetPartition> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            blocks.push(sigma.map_set(b)?);
        }
        blocks.sort();
        Ok(SetPartition { blocks })
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            let mut first = true;
            for l in b {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{l}")?;
                first = false;
            }
        }
        Ok(())
    }
}

/// All partitions of `ground` in restricted-growth-string order.
pub fn enumerate_partitions(ground: &LabelSet) -> Vec<SetPartition> {
    let n = ground.len();
    let labels: Vec<&Label> = ground.iter().collect();
    let mut out = Vec::new();
    if n == 0 {
        out.push(SetPartition::empty());
        return out;
    }
    // rgs[i] = block index of the i-th label; rgs[i] <= 1 + max(rgs[..i])
    let mut rgs = vec![0usize; n];
    loop {
        let k = rgs.iter().copied().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); k];
        for (i, l) in labels.iter().enumerate() {
            blocks[rgs[i]].push((*l).clone());
        }
        out.push(SetPartition {
            // first occurrences are increasing, so blocks come out sorted by min
            blocks: blocks.into_iter().map(LabelSet::new).collect(),
        });
        // next restricted growth string, lexicographically
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let cap = rgs[..i].iter().copied().max().unwrap() + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                for d in rgs.iter_mut().skip(i + 1) {
                    *d = 0;
                }
                break;
            }
            rgs[i] = 0;
        }
    }
}
