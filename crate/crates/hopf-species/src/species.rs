//! Vector species presented by basis enumeration.
//!
//! A `Species` value denotes a linearized vector species: for every finite
//! label set it enumerates a canonical ordered basis, and terms relabel
//! functorially along bijections. The enumeration orders are fixed (documented
//! per constructor) so that output is deterministic byte for byte.

use itertools::Itertools;
use std::fmt;

use crate::error::{Error, Result};
use crate::label::{Label, LabelSet};
use crate::partition::{enumerate_partitions, two_part_decompositions};
use crate::term::{Composite, Graph, Poset, Side, Term};

/// Degree filters for truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trunc {
    /// Keep only degree n.
    Eq(usize),
    /// Drop degree 0 (the positive part).
    Positive,
    /// Keep degrees < r.
    Below(usize),
    /// Keep degrees >= r.
    AtLeast(usize),
}

impl Trunc {
    pub fn keeps(&self, n: usize) -> bool {
        match self {
            Trunc::Eq(m) => n == *m,
            Trunc::Positive => n > 0,
            Trunc::Below(r) => n < *r,
            Trunc::AtLeast(r) => n >= *r,
        }
    }
}

/// A species expression. `basis` enumerates the canonical basis per label set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Species {
    /// The unit species: one basis element on the empty set, zero elsewhere.
    One,
    /// Sets: a single structure on every label set.
    E,
    /// Linear orders.
    L,
    /// Simple graphs.
    G,
    /// Directed cycles (positive: nothing on the empty set).
    Cyc,
    /// Strict partial orders.
    Poset,
    Truncate(Box<Species>, Trunc),
    Sum(Box<Species>, Box<Species>),
    Hadamard(Box<Species>, Box<Species>),
    Cauchy(Box<Species>, Box<Species>),
    /// Substitution p ∘ q; invariant: q is positive (use [`Species::substitute`]).
    Substitute(Box<Species>, Box<Species>),
}

/// Poset bases are enumerated by brute force over relation bitmasks; past
/// this many labels the mask space is out of desk scale.
pub const MAX_POSET_LABELS: usize = 5;

/// Graph bases double per edge slot; past this many labels the basis itself
/// is out of desk scale.
pub const MAX_GRAPH_LABELS: usize = 6;

impl Species {
    pub fn positive(self) -> Species {
        Species::Truncate(Box::new(self), Trunc::Positive)
    }

    /// Checked substitution: the inner species must be positive.
    pub fn substitute(outer: Species, inner: Species) -> Result<Species> {
        if !inner.is_positive() {
            return Err(Error::Precondition(format!(
                "substitution needs a positive inner species; {inner} has a basis element on ∅"
            )));
        }
        Ok(Species::Substitute(Box::new(outer), Box::new(inner)))
    }

    pub fn is_positive(&self) -> bool {
        self.basis(&LabelSet::empty()).is_empty()
    }

    /// Connected: exactly one basis element on the empty set.
    pub fn is_connected(&self) -> bool {
        self.basis(&LabelSet::empty()).len() == 1
    }

    pub fn dim(&self, ground: &LabelSet) -> usize {
        self.basis(ground).len()
    }

    /// The canonical ordered basis on `ground`.
    ///
    /// Panics on poset enumeration past [`MAX_POSET_LABELS`]; use
    /// [`Species::basis_checked`] on untrusted sizes.
    pub fn basis(&self, ground: &LabelSet) -> Vec<Term> {
        match self {
            Species::One => {
                if ground.is_empty() {
                    vec![Term::Star(LabelSet::empty())]
                } else {
                    Vec::new()
                }
            }
            Species::E => vec![Term::Star(ground.clone())],
            Species::L => {
                let n = ground.len();
                ground
                    .iter()
                    .cloned()
                    .permutations(n)
                    .map(Term::Order)
                    .collect()
            }
            Species::G => {
                let pairs = label_pairs(ground);
                edge_subsets(&pairs)
                    .map(|edges| {
                        Term::Graph(Graph {
                            vertices: ground.clone(),
                            edges,
                        })
                    })
                    .collect()
            }
            Species::Cyc => {
                if ground.is_empty() {
                    return Vec::new();
                }
                let first = ground.min().unwrap().clone();
                let rest: Vec<Label> = ground.iter().skip(1).cloned().collect();
                let k = rest.len();
                rest.into_iter()
                    .permutations(k)
                    .map(|mut tail| {
                        let mut cycle = vec![first.clone()];
                        cycle.append(&mut tail);
                        Term::Cycle(cycle)
                    })
                    .collect()
            }
            Species::Poset => enumerate_posets(ground)
                .into_iter()
                .map(Term::Poset)
                .collect(),
            Species::Truncate(inner, mode) => {
                if mode.keeps(ground.len()) {
                    inner.basis(ground)
                } else {
                    Vec::new()
                }
            }
            Species::Sum(a, b) => {
                let mut out: Vec<Term> = a
                    .basis(ground)
                    .into_iter()
                    .map(|t| Term::Tagged(Side::Left, Box::new(t)))
                    .collect();
                out.extend(
                    b.basis(ground)
                        .into_iter()
                        .map(|t| Term::Tagged(Side::Right, Box::new(t))),
                );
                out
            }
            Species::Hadamard(a, b) => {
                let rights = b.basis(ground);
                a.basis(ground)
                    .into_iter()
                    .cartesian_product(rights)
                    .map(|(x, y)| Term::Pair(Box::new(x), Box::new(y)))
                    .collect()
            }
            Species::Cauchy(a, b) => {
                let mut out = Vec::new();
                for (s, t) in two_part_decompositions(ground) {
                    for x in a.basis(&s) {
                        for y in b.basis(&t) {
                            out.push(Term::Cauchy(Box::new(x.clone()), Box::new(y)));
                        }
                    }
                }
                out
            }
            Species::Substitute(p, q) => {
                let mut out = Vec::new();
                for partition in enumerate_partitions(ground) {
                    let outer_ground = partition.block_labels();
                    let outers = p.basis(&outer_ground);
                    if outers.is_empty() {
                        continue;
                    }
                    let block_bases: Vec<Vec<Term>> = partition
                        .blocks()
                        .iter()
                        .map(|b| q.basis(b))
                        .collect();
                    if block_bases.iter().any(|bb| bb.is_empty()) {
                        continue;
                    }
                    for outer in &outers {
                        let choices = block_bases
                            .iter()
                            .map(|bb| bb.iter())
                            .multi_cartesian_product();
                        if partition.is_empty() {
                            // empty product: the lone composite over the empty partition
                            out.push(Term::Composite(
                                Composite::new(outer.clone(), []).expect("empty composite"),
                            ));
                            continue;
                        }
                        for choice in choices {
                            let inner = partition
                                .blocks()
                                .iter()
                                .cloned()
                                .zip(choice.into_iter().cloned());
                            out.push(Term::Composite(
                                Composite::new(outer.clone(), inner)
                                    .expect("enumerated composite is valid"),
                            ));
                        }
                    }
                }
                out
            }
        }
    }

    /// `basis` with desk-scale guards instead of panics.
    pub fn basis_checked(&self, ground: &LabelSet) -> Result<Vec<Term>> {
        self.guard_scale(ground)?;
        Ok(self.basis(ground))
    }

    fn guard_scale(&self, ground: &LabelSet) -> Result<()> {
        match self {
            Species::Poset => {
                if ground.len() > MAX_POSET_LABELS {
                    return Err(Error::Unsupported(format!(
                        "poset enumeration on {} labels (limit {MAX_POSET_LABELS})",
                        ground.len()
                    )));
                }
                Ok(())
            }
            Species::G => {
                if ground.len() > MAX_GRAPH_LABELS {
                    return Err(Error::Unsupported(format!(
                        "graph enumeration on {} labels (limit {MAX_GRAPH_LABELS})",
                        ground.len()
                    )));
                }
                Ok(())
            }
            Species::One | Species::E | Species::L | Species::Cyc => Ok(()),
            Species::Truncate(inner, mode) => {
                if mode.keeps(ground.len()) {
                    inner.guard_scale(ground)
                } else {
                    Ok(())
                }
            }
            Species::Sum(a, b) | Species::Hadamard(a, b) => {
                a.guard_scale(ground)?;
                b.guard_scale(ground)
            }
            Species::Cauchy(a, b) => {
                // subsets only shrink, so the full ground bounds both factors
                for sub in subsets_of(ground) {
                    a.guard_scale(&sub)?;
                    b.guard_scale(&sub)?;
                }
                Ok(())
            }
            Species::Substitute(p, q) => {
                for sub in subsets_of(ground) {
                    q.guard_scale(&sub)?;
                }
                // the outer species sees at most |ground| block labels; check
                // the worst case via a same-size canonical set of block labels
                let singleton_blocks = LabelSet::new(
                    ground
                        .iter()
                        .map(|l| Label::block(LabelSet::singleton(l.clone()))),
                );
                p.guard_scale(&singleton_blocks)
            }
        }
    }

    /// Structural membership check: is `t` a basis term of `self` on `ground`?
    pub fn validate_term(&self, ground: &LabelSet, t: &Term) -> Result<()> {
        let fail = |why: &str| -> Result<()> {
            Err(Error::Domain(format!(
                "term {t} is not a basis element of {self} on {ground}: {why}"
            )))
        };
        match (self, t) {
            (Species::One, Term::Star(s)) if ground.is_empty() && s.is_empty() => Ok(()),
            (Species::One, _) => fail("the unit species is concentrated on ∅"),
            (Species::E, Term::Star(s)) if s == ground => Ok(()),
            (Species::E, _) => fail("expected the star on the full ground set"),
            (Species::L, Term::Order(ls)) => {
                if LabelSet::try_new(ls.iter().cloned())? == *ground {
                    Ok(())
                } else {
                    fail("order does not list the ground set")
                }
            }
            (Species::L, _) => fail("expected a linear order"),
            (Species::G, Term::Graph(g)) => {
                if g.vertices != *ground {
                    return fail("vertex set mismatch");
                }
                // re-validate edge invariants for untrusted terms
                Graph::new(g.vertices.clone(), g.edges.iter().cloned())?;
                Ok(())
            }
            (Species::G, _) => fail("expected a graph"),
            (Species::Cyc, Term::Cycle(ls)) => {
                if ls.is_empty() {
                    return fail("cycles are positive");
                }
                if LabelSet::try_new(ls.iter().cloned())? != *ground {
                    return fail("cycle does not visit the ground set");
                }
                if crate::term::canonical_cycle(ls.clone()) != *ls {
                    return fail("cycle is not in canonical rotation");
                }
                Ok(())
            }
            (Species::Cyc, _) => fail("expected a cycle"),
            (Species::Poset, Term::Poset(p)) => {
                if p.elements != *ground {
                    return fail("element set mismatch");
                }
                Poset::new(p.elements.clone(), p.relation.iter().cloned())?;
                Ok(())
            }
            (Species::Poset, _) => fail("expected a poset"),
            (Species::Truncate(inner, mode), _) => {
                if !mode.keeps(ground.len()) {
                    return fail("degree removed by truncation");
                }
                inner.validate_term(ground, t)
            }
            (Species::Sum(a, _), Term::Tagged(Side::Left, inner)) => {
                a.validate_term(ground, inner)
            }
            (Species::Sum(_, b), Term::Tagged(Side::Right, inner)) => {
                b.validate_term(ground, inner)
            }
            (Species::Sum(..), _) => fail("expected a tagged term"),
            (Species::Hadamard(a, b), Term::Pair(x, y)) => {
                a.validate_term(ground, x)?;
                b.validate_term(ground, y)
            }
            (Species::Hadamard(..), _) => fail("expected a Hadamard pair"),
            (Species::Cauchy(a, b), Term::Cauchy(x, y)) => {
                let (sx, sy) = (x.support(), y.support());
                if !sx.is_disjoint_from(&sy) || sx.union(&sy) != *ground {
                    return fail("Cauchy factors must decompose the ground set");
                }
                a.validate_term(&sx, x)?;
                b.validate_term(&sy, y)
            }
            (Species::Cauchy(..), _) => fail("expected a Cauchy pair"),
            (Species::Substitute(p, q), Term::Composite(c)) => {
                if c.ground() != *ground {
                    return fail("composite ground set mismatch");
                }
                let partition = c.partition();
                p.validate_term(&partition.block_labels(), &c.outer)?;
                for (block, inner) in &c.inner {
                    q.validate_term(block, inner)?;
                }
                Ok(())
            }
            (Species::Substitute(..), _) => fail("expected a composite"),
        }
    }
}

fn subsets_of(ground: &LabelSet) -> Vec<LabelSet> {
    let labels: Vec<&Label> = ground.iter().collect();
    (0..(1usize << labels.len()))
        .map(|mask| {
            LabelSet::new(
                labels
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, l)| (*l).clone()),
            )
        })
        .collect()
}

/// All unordered label pairs, lexicographically.
fn label_pairs(ground: &LabelSet) -> Vec<(Label, Label)> {
    let labels: Vec<&Label> = ground.iter().collect();
    let mut pairs = Vec::new();
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            pairs.push((labels[i].clone(), labels[j].clone()));
        }
    }
    pairs
}

/// Edge sets in ascending bitmask order over the fixed pair list.
fn edge_subsets(
    pairs: &[(Label, Label)],
) -> impl Iterator<Item = std::collections::BTreeSet<(Label, Label)>> + '_ {
    assert!(pairs.len() < 63, "graph enumeration out of desk scale");
    (0u64..(1u64 << pairs.len())).map(move |mask| {
        pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| p.clone())
            .collect()
    })
}

/// All strict partial orders by brute force over relation bitmasks, in
/// ascending mask order over the lexicographic list of ordered pairs.
fn enumerate_posets(ground: &LabelSet) -> Vec<Poset> {
    let n = ground.len();
    assert!(
        n <= MAX_POSET_LABELS,
        "poset enumeration on {n} labels is out of desk scale"
    );
    let labels: Vec<&Label> = ground.iter().collect();
    let mut ordered_pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                ordered_pairs.push((i, j));
            }
        }
    }
    let mut out = Vec::new();
    'mask: for mask in 0u64..(1u64 << ordered_pairs.len()) {
        // adjacency rows as bitsets over label indices
        let mut row = vec![0u8; n];
        for (bit, (i, j)) in ordered_pairs.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                row[*i] |= 1 << j;
            }
        }
        // antisymmetry
        for i in 0..n {
            for j in i + 1..n {
                if row[i] & (1 << j) != 0 && row[j] & (1 << i) != 0 {
                    continue 'mask;
                }
            }
        }
        // transitivity: closure must not add anything
        let mut closure = row.clone();
        for k in 0..n {
            for i in 0..n {
                if closure[i] & (1 << k) != 0 {
                    closure[i] |= closure[k];
                }
            }
        }
        if closure != row {
            continue;
        }
        let relation = ordered_pairs
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask & (1 << *bit) != 0)
            .map(|(_, (i, j))| (labels[*i].clone(), labels[*j].clone()))
            .collect();
        out.push(Poset {
            elements: ground.clone(),
            relation,
        });
    }
    out
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Species::One => write!(f, "One"),
            Species::E => write!(f, "E"),
            Species::L => write!(f, "L"),
            Species::G => write!(f, "G"),
            Species::Cyc => write!(f, "cyc"),
            Species::Poset => write!(f, "Pos"),
            Species::Truncate(inner, Trunc::Positive)
                if matches!(
                    **inner,
                    Species::E | Species::L | Species::G | Species::Poset
                ) =>
            {
                write!(f, "{inner}+")
            }
            Species::Truncate(inner, Trunc::Positive) => write!(f, "trunc({inner},+)"),
            Species::Truncate(inner, Trunc::Eq(n)) => write!(f, "trunc({inner},=,{n})"),
            Species::Truncate(inner, Trunc::Below(r)) => write!(f, "trunc({inner},<,{r})"),
            Species::Truncate(inner, Trunc::AtLeast(r)) => write!(f, "trunc({inner},>=,{r})"),
            Species::Sum(a, b) => write!(f, "({a} + {b})"),
            Species::Hadamard(a, b) => write!(f, "({a} * {b})"),
            Species::Cauchy(a, b) => write!(f, "({a} . {b})"),
            Species::Substitute(a, b) => write!(f, "({a} o {b})"),
        }
    }
}
