//! Basis terms of every species this crate ships, as one ordered value type.
//!
//! Structure maps act on single basis terms and return linear combinations,
//! so one shared term type keeps heterogeneous constructions (a graph of
//! blocks whose blocks carry linear orders, say) out of the type system and
//! in the data, where the substitution construction needs them. Every term
//! knows its support; relabeling is structural recursion along a bijection.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::label::{Bijection, Label, LabelSet};
use crate::partition::SetPartition;

/// An undirected simple graph on a vertex set; edges stored as sorted pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    pub vertices: LabelSet,
    pub edges: BTreeSet<(Label, Label)>,
}

impl Graph {
    pub fn new(vertices: LabelSet, edges: impl IntoIterator<Item = (Label, Label)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::Domain(format!("loop edge at {a}")));
            }
            if !vertices.contains(&a) || !vertices.contains(&b) {
                return Err(Error::Domain(format!("edge {a}-{b} leaves vertex set")));
            }
            set.insert(if a <= b { (a, b) } else { (b, a) });
        }
        Ok(Graph {
            vertices,
            edges: set,
        })
    }

    pub fn discrete(vertices: LabelSet) -> Self {
        Graph {
            vertices,
            edges: BTreeSet::new(),
        }
    }

    pub fn induced(&self, u: &LabelSet) -> Graph {
        Graph {
            vertices: self.vertices.intersect(u),
            edges: self
                .edges
                .iter()
                .filter(|(a, b)| u.contains(a) && u.contains(b))
                .cloned()
                .collect(),
        }
    }
}

/// A strict partial order: irreflexive transitive `x < y` pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poset {
    pub elements: LabelSet,
    pub relation: BTreeSet<(Label, Label)>,
}

impl Poset {
    pub fn new(
        elements: LabelSet,
        relation: impl IntoIterator<Item = (Label, Label)>,
    ) -> Result<Self> {
        let relation: BTreeSet<(Label, Label)> = relation.into_iter().collect();
        for (a, b) in &relation {
            if a == b {
                return Err(Error::Domain(format!("reflexive pair at {a}")));
            }
            if !elements.contains(a) || !elements.contains(b) {
                return Err(Error::Domain(format!("pair {a}<{b} leaves element set")));
            }
            if relation.contains(&(b.clone(), a.clone())) {
                return Err(Error::Domain(format!("antisymmetry fails on {a},{b}")));
            }
        }
        for (a, b) in &relation {
            for (c, d) in &relation {
                if b == c && !relation.contains(&(a.clone(), d.clone())) {
                    return Err(Error::Domain(format!(
                        "relation not transitively closed: {a}<{b}<{d}"
                    )));
                }
            }
        }
        Ok(Poset { elements, relation })
    }

    pub fn antichain(elements: LabelSet) -> Self {
        Poset {
            elements,
            relation: BTreeSet::new(),
        }
    }

    /// The chain ordered as the given sequence.
    pub fn chain(order: &[Label]) -> Self {
        let mut relation = BTreeSet::new();
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                relation.insert((order[i].clone(), order[j].clone()));
            }
        }
        Poset {
            elements: LabelSet::new(order.iter().cloned()),
            relation,
        }
    }

    pub fn induced(&self, u: &LabelSet) -> Poset {
        Poset {
            elements: self.elements.intersect(u),
            relation: self
                .relation
                .iter()
                .filter(|(a, b)| u.contains(a) && u.contains(b))
                .cloned()
                .collect(),
        }
    }

    pub fn less(&self, a: &Label, b: &Label) -> bool {
        self.relation.contains(&(a.clone(), b.clone()))
    }
}

/// A composite structure: an outer term living on the blocks of a partition
/// (as block labels) and one inner term per block. Inner entries are sorted
/// by block, matching the partition's canonical block order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composite {
    pub outer: Box<Term>,
    pub inner: Vec<(LabelSet, Term)>,
}

impl Composite {
    pub fn new(outer: Term, inner: impl IntoIterator<Item = (LabelSet, Term)>) -> Result<Self> {
        let mut inner: Vec<(LabelSet, Term)> = inner.into_iter().collect();
        inner.sort_by(|a, b| a.0.cmp(&b.0));
        let partition = SetPartition::new(inner.iter().map(|(b, _)| b.clone()))?;
        if outer.support() != partition.block_labels() {
            return Err(Error::Domain(format!(
                "outer term lives on {} but blocks are {}",
                outer.support(),
                partition.block_labels()
            )));
        }
        for (block, t) in &inner {
            if &t.support() != block {
                return Err(Error::Domain(format!(
                    "inner term on {} placed at block {}",
                    t.support(),
                    block
                )));
            }
        }
        Ok(Composite {
            outer: Box::new(outer),
            inner,
        })
    }

    pub fn partition(&self) -> SetPartition {
        SetPartition::new(self.inner.iter().map(|(b, _)| b.clone()))
            .expect("composite invariant: blocks form a partition")
    }

    pub fn ground(&self) -> LabelSet {
        self.inner
            .iter()
            .fold(LabelSet::empty(), |acc, (b, _)| acc.union(b))
    }

    pub fn inner_term(&self, block: &LabelSet) -> Option<&Term> {
        self.inner
            .iter()
            .find(|(b, _)| b == block)
            .map(|(_, t)| t)
    }
}

/// Which side of a sum species a term came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A basis term of some species on its support set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// A linear order, listed first to last.
    Order(Vec<Label>),
    /// The unique set structure on its support.
    Star(LabelSet),
    Graph(Graph),
    /// A directed cycle, stored in canonical rotation (minimum label first).
    Cycle(Vec<Label>),
    Poset(Poset),
    Composite(Composite),
    /// Sum-species tag.
    Tagged(Side, Box<Term>),
    /// Hadamard pair: two terms on the same support.
    Pair(Box<Term>, Box<Term>),
    /// Cauchy pair: two terms on disjoint supports.
    Cauchy(Box<Term>, Box<Term>),
}

/// Canonical rotation of a nonempty cycle: minimum label first.
pub fn canonical_cycle(mut labels: Vec<Label>) -> Vec<Label> {
    if labels.is_empty() {
        return labels;
    }
    let min_at = labels
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    labels.rotate_left(min_at);
    labels
}

impl Term {
    pub fn order(labels: impl IntoIterator<Item = Label>) -> Result<Term> {
        let labels: Vec<Label> = labels.into_iter().collect();
        LabelSet::try_new(labels.iter().cloned())?;
        Ok(Term::Order(labels))
    }

    pub fn cycle(labels: impl IntoIterator<Item = Label>) -> Result<Term> {
        let labels: Vec<Label> = labels.into_iter().collect();
        if labels.is_empty() {
            return Err(Error::Domain("cycles need at least one label".into()));
        }
        LabelSet::try_new(labels.iter().cloned())?;
        Ok(Term::Cycle(canonical_cycle(labels)))
    }

    pub fn support(&self) -> LabelSet {
        match self {
            Term::Order(ls) => LabelSet::new(ls.iter().cloned()),
            Term::Star(s) => s.clone(),
            Term::Graph(g) => g.vertices.clone(),
            Term::Cycle(ls) => LabelSet::new(ls.iter().cloned()),
            Term::Poset(p) => p.elements.clone(),
            Term::Composite(c) => c.ground(),
            Term::Tagged(_, t) => t.support(),
            Term::Pair(a, _) => a.support(),
            Term::Cauchy(a, b) => a.support().union(&b.support()),
        }
    }

    /// Functorial relabeling along a bijection covering the support.
    pub fn relabel(&self, sigma: &Bijection) -> Result<Term> {
        Ok(match self {
            Term::Order(ls) => Term::Order(
                ls.iter()
                    .map(|l| sigma.apply(l))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Term::Star(s) => Term::Star(sigma.map_set(s)?),
            Term::Graph(g) => {
                let vertices = sigma.map_set(&g.vertices)?;
                let mut edges = BTreeSet::new();
                for (a, b) in &g.edges {
                    let (a, b) = (sigma.apply(a)?, sigma.apply(b)?);
                    edges.insert(if a <= b { (a, b) } else { (b, a) });
                }
                Term::Graph(Graph { vertices, edges })
            }
            Term::Cycle(ls) => Term::Cycle(canonical_cycle(
                ls.iter()
                    .map(|l| sigma.apply(l))
                    .collect::<Result<Vec<_>>>()?,
            )),
            Term::Poset(p) => {
                let elements = sigma.map_set(&p.elements)?;
                let mut relation = BTreeSet::new();
                for (a, b) in &p.relation {
                    relation.insert((sigma.apply(a)?, sigma.apply(b)?));
                }
                Term::Poset(Poset { elements, relation })
            }
            Term::Composite(c) => {
                // blocks move along sigma; the outer term moves along the
                // induced bijection of block labels
                let mut block_map = Vec::new();
                let mut inner = Vec::new();
                for (block, t) in &c.inner {
                    let new_block = sigma.map_set(block)?;
                    let restricted = sigma.restrict(block)?;
                    block_map.push((Label::block(block.clone()), Label::block(new_block.clone())));
                    inner.push((new_block, t.relabel(&restricted)?));
                }
                let outer_sigma = Bijection::from_pairs(block_map)?;
                let outer = c.outer.relabel(&outer_sigma)?;
                inner.sort_by(|a, b| a.0.cmp(&b.0));
                Term::Composite(Composite {
                    outer: Box::new(outer),
                    inner,
                })
            }
            Term::Tagged(side, t) => Term::Tagged(*side, Box::new(t.relabel(sigma)?)),
            Term::Pair(a, b) => Term::Pair(
                Box::new(a.relabel(sigma)?),
                Box::new(b.relabel(sigma)?),
            ),
            Term::Cauchy(a, b) => Term::Cauchy(
                Box::new(a.relabel(sigma)?),
                Box::new(b.relabel(sigma)?),
            ),
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Order(ls) => {
                write!(f, "(")?;
                for (i, l) in ls.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, ")")
            }
            Term::Star(s) => write!(f, "*{s}"),
            Term::Graph(g) => {
                write!(f, "{{{}", g.vertices)?;
                if !g.edges.is_empty() {
                    write!(f, " ;")?;
                    for (a, b) in &g.edges {
                        write!(f, " {a}-{b}")?;
                    }
                }
                write!(f, "}}")
            }
            Term::Cycle(ls) => {
                write!(f, "cyc(")?;
                for (i, l) in ls.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, ")")
            }
            Term::Poset(p) => {
                write!(f, "P{{{}", p.elements)?;
                if !p.relation.is_empty() {
                    write!(f, " ;")?;
                    for (a, b) in &p.relation {
                        write!(f, " {a}<{b}")?;
                    }
                }
                write!(f, "}}")
            }
            Term::Composite(c) => {
                write!(f, "[{} ∘", c.outer)?;
                for (i, (block, t)) in c.inner.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    let blk = Label::block(block.clone());
                    write!(f, " {blk}:{t}")?;
                }
                write!(f, "]")
            }
            Term::Tagged(Side::Left, t) => write!(f, "inl({t})"),
            Term::Tagged(Side::Right, t) => write!(f, "inr({t})"),
            Term::Pair(a, b) => write!(f, "⟨{a} & {b}⟩"),
            Term::Cauchy(a, b) => write!(f, "({a} · {b})"),
        }
    }
}
