//! Ground-set labels, finite label sets, and bijections between them.
//!
//! A [`Label`] is either an atomic token or a *block label*: a label standing
//! for a set of other labels. Block labels are how a composite structure's
//! outer term lives on "the set of blocks" of a partition — the blocks
//! themselves become the labels, so plain relabeling covers everything the
//! substitution construction needs, including nested composites.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A label: an atomic token, or a block of labels acting as a single label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Atom(String),
    Block(LabelSet),
}

impl Label {
    pub fn atom(s: impl Into<String>) -> Self {
        let s = s.into();
        debug_assert!(is_valid_atom(&s), "invalid atom token {s:?}");
        Label::Atom(s)
    }

    pub fn block(set: LabelSet) -> Self {
        Label::Block(set)
    }

    /// The member set of a block label; errors on atoms.
    pub fn as_block(&self) -> Result<&LabelSet> {
        match self {
            Label::Block(set) => Ok(set),
            Label::Atom(a) => Err(Error::Domain(format!("label {a:?} is not a block label"))),
        }
    }
}

/// Atom tokens are short and must not collide with the set/term syntax.
pub fn is_valid_atom(s: &str) -> bool {
    !s.is_empty()
        && s.len() <= 16
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => write!(f, "{s}"),
            // Blocks render as the concatenation of their members, paper-style:
            // the block {a,c,e} prints as "ace".
            Label::Block(set) => {
                for l in set.iter() {
                    write!(f, "{l}")?;
                }
                Ok(())
            }
        }
    }
}

/// A finite set of labels, stored strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabelSet(Vec<Label>);

impl LabelSet {
    pub fn empty() -> Self {
        LabelSet(Vec::new())
    }

    pub fn singleton(l: Label) -> Self {
        LabelSet(vec![l])
    }

    /// Builds a set from arbitrary labels; panics on duplicates (duplicate
    /// ground labels are a programming error, not recoverable input).
    pub fn new(labels: impl IntoIterator<Item = Label>) -> Self {
        let mut v: Vec<Label> = labels.into_iter().collect();
        v.sort();
        for w in v.windows(2) {
            assert!(w[0] != w[1], "duplicate label {} in label set", w[0]);
        }
        LabelSet(v)
    }

    /// Duplicate-checked variant for untrusted input.
    pub fn try_new(labels: impl IntoIterator<Item = Label>) -> Result<Self> {
        let mut v: Vec<Label> = labels.into_iter().collect();
        v.sort();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Domain(format!("duplicate label {}", w[0])));
            }
        }
        Ok(LabelSet(v))
    }

    pub fn from_atoms<S: Into<String>>(atoms: impl IntoIterator<Item = S>) -> Self {
        Self::new(atoms.into_iter().map(|s| Label::atom(s)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Label> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Label] {
        &self.0
    }

    pub fn contains(&self, l: &Label) -> bool {
        self.0.binary_search(l).is_ok()
    }

    pub fn min(&self) -> Option<&Label> {
        self.0.first()
    }

    pub fn union(&self, other: &LabelSet) -> LabelSet {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        v.sort();
        v.dedup();
        LabelSet(v)
    }

    pub fn intersect(&self, other: &LabelSet) -> LabelSet {
        LabelSet(
            self.0
                .iter()
                .filter(|l| other.contains(l))
                .cloned()
                .collect(),
        )
    }

    pub fn minus(&self, other: &LabelSet) -> LabelSet {
        LabelSet(
            self.0
                .iter()
                .filter(|l| !other.contains(l))
                .cloned()
                .collect(),
        )
    }

    pub fn is_subset_of(&self, other: &LabelSet) -> bool {
        self.0.iter().all(|l| other.contains(l))
    }

    pub fn is_disjoint_from(&self, other: &LabelSet) -> bool {
        self.0.iter().all(|l| !other.contains(l))
    }
}

impl IntoIterator for LabelSet {
    type Item = Label;
    type IntoIter = std::vec::IntoIter<Label>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a LabelSet {
    type Item = &'a Label;
    type IntoIter = std::slice::Iter<'a, Label>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// The canonical ground set for exhaustive suites: labels "1".."n".
pub fn canonical_labels(n: usize) -> LabelSet {
    assert!(n <= 9, "canonical label universe stops at 9");
    LabelSet::from_atoms((1..=n).map(|i| i.to_string()))
}

/// A bijection between two finite label sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bijection {
    map: BTreeMap<Label, Label>,
}

impl Bijection {
    pub fn identity(set: &LabelSet) -> Self {
        Bijection {
            map: set.iter().map(|l| (l.clone(), l.clone())).collect(),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Label, Label)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (k, v) in pairs {
            if !seen.insert(v.clone()) {
                return Err(Error::Domain(format!("bijection image {v} repeated")));
            }
            if map.insert(k.clone(), v).is_some() {
                return Err(Error::Domain(format!("bijection source {k} repeated")));
            }
        }
        Ok(Bijection { map })
    }

    /// Pairs the i-th smallest of `dom` with the i-th smallest of `cod`.
    pub fn order_matching(dom: &LabelSet, cod: &LabelSet) -> Result<Self> {
        if dom.len() != cod.len() {
            return Err(Error::Domain(format!(
                "cannot match {dom} with {cod}: sizes differ"
            )));
        }
        Ok(Bijection {
            map: dom.iter().cloned().zip(cod.iter().cloned()).collect(),
        })
    }

    /// The involution sending the i-th smallest label of `set` to the i-th largest.
    pub fn reversal(set: &LabelSet) -> Self {
        Bijection {
            map: set
                .iter()
                .cloned()
                .zip(set.iter().rev().cloned())
                .collect(),
        }
    }

    pub fn domain(&self) -> LabelSet {
        LabelSet::new(self.map.keys().cloned())
    }

    pub fn codomain(&self) -> LabelSet {
        LabelSet::new(self.map.values().cloned())
    }

    pub fn apply(&self, l: &Label) -> Result<Label> {
        self.map
            .get(l)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("label {l} outside bijection domain")))
    }

    pub fn map_set(&self, set: &LabelSet) -> Result<LabelSet> {
        let mut out = Vec::with_capacity(set.len());
        for l in set {
            out.push(self.apply(l)?);
        }
        out.sort();
        Ok(LabelSet(out))
    }

    pub fn inverse(&self) -> Self {
        Bijection {
            map: self.map.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
        }
    }

    /// `self` after `first`: (self ∘ first)(x) = self(first(x)).
    pub fn compose_after(&self, first: &Bijection) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, v) in &first.map {
            map.insert(k.clone(), self.apply(v)?);
        }
        Ok(Bijection { map })
    }

    /// Restriction of the bijection to a subset of its domain.
    pub fn restrict(&self, dom: &LabelSet) -> Result<Self> {
        let mut map = BTreeMap::new();
        for l in dom {
            map.insert(l.clone(), self.apply(l)?);
        }
        Ok(Bijection { map })
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Label, &Label)> {
        self.map.iter()
    }
}

impl fmt::Display for Bijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (k, v)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}->{v}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(s: &str) -> LabelSet {
        LabelSet::from_atoms(s.chars().map(|c| c.to_string()))
    }

    #[test]
    fn label_order_is_total_and_blocks_sort_by_members() {
        let a = Label::atom("a");
        let b = Label::atom("b");
        let ab = Label::block(ls("ab"));
        let ac = Label::block(ls("ac"));
        assert!(a < b);
        assert!(a < ab, "atoms order before blocks");
        assert!(ab < ac);
    }

    #[test]
    fn block_display_concatenates_members() {
        let blk = Label::block(ls("cae"));
        assert_eq!(blk.to_string(), "ace");
    }

    #[test]
    fn set_operations() {
        let s = ls("abc");
        let t = ls("bcd");
        assert_eq!(s.intersect(&t), ls("bc"));
        assert_eq!(s.minus(&t), ls("a"));
        assert_eq!(s.union(&t), ls("abcd"));
        assert!(ls("ab").is_subset_of(&s));
        assert!(ls("").is_subset_of(&s));
        assert!(ls("").is_disjoint_from(&ls("")));
        assert_eq!(LabelSet::empty().len(), 0);
    }

    #[test]
    #[should_panic(expected = "duplicate label")]
    fn duplicate_labels_panic() {
        LabelSet::from_atoms(["a", "a"]);
    }

    #[test]
    fn bijection_round_trip() {
        let sigma = Bijection::order_matching(&ls("abc"), &ls("xyz")).unwrap();
        assert_eq!(sigma.apply(&Label::atom("b")).unwrap(), Label::atom("y"));
        assert_eq!(sigma.map_set(&ls("ac")).unwrap(), ls("xz"));
        let back = sigma.inverse().compose_after(&sigma).unwrap();
        assert_eq!(back, Bijection::identity(&ls("abc")));
        assert!(sigma.apply(&Label::atom("q")).is_err());
    }

    #[test]
    fn reversal_is_an_involution() {
        let r = Bijection::reversal(&ls("abcd"));
        assert_eq!(r.apply(&Label::atom("a")).unwrap(), Label::atom("d"));
        assert_eq!(r.compose_after(&r).unwrap(), Bijection::identity(&ls("abcd")));
    }
}
