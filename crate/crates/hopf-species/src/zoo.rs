//! Set-level Hopf structure for the example species, and the named maps
//! between them.
//!
//! Each zoo monoid is linearized: μ sends basis terms to basis terms, and the
//! coproduct is Δ_{S,T}(x) = x|_S ⊗ x|_T for the restriction maps below.

use crate::error::{Error, Result};
use crate::label::LabelSet;
use crate::lincomb::{inverse_factorial, LinComb};
use crate::species::Species;
use crate::term::{canonical_cycle, Graph, Poset, Term};

/// The bimonoids presented by set maps: orders, sets, graphs, posets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ZooKind {
    L,
    E,
    G,
    Poset,
}

impl ZooKind {
    pub fn species(&self) -> Species {
        match self {
            ZooKind::L => Species::L,
            ZooKind::E => Species::E,
            ZooKind::G => Species::G,
            ZooKind::Poset => Species::Poset,
        }
    }
}

/// μ_{S,T} on basis terms with disjoint supports: concatenation for orders,
/// union for stars, disjoint union for graphs and posets.
pub fn zoo_mu(kind: ZooKind, x: &Term, y: &Term) -> Result<Term> {
    let (sx, sy) = (x.support(), y.support());
    if !sx.is_disjoint_from(&sy) {
        return Err(Error::Domain(format!(
            "product factors must have disjoint supports; got {sx} and {sy}"
        )));
    }
    match (kind, x, y) {
        (ZooKind::L, Term::Order(a), Term::Order(b)) => {
            Ok(Term::Order(a.iter().chain(b.iter()).cloned().collect()))
        }
        (ZooKind::E, Term::Star(_), Term::Star(_)) => Ok(Term::Star(sx.union(&sy))),
        (ZooKind::G, Term::Graph(a), Term::Graph(b)) => Ok(Term::Graph(Graph {
            vertices: sx.union(&sy),
            edges: a.edges.iter().chain(b.edges.iter()).cloned().collect(),
        })),
        (ZooKind::Poset, Term::Poset(a), Term::Poset(b)) => Ok(Term::Poset(Poset {
            elements: sx.union(&sy),
            relation: a
                .relation
                .iter()
                .chain(b.relation.iter())
                .cloned()
                .collect(),
        })),
        _ => Err(Error::Domain(format!(
            "terms {x}, {y} do not belong to the {} monoid",
            kind.species()
        ))),
    }
}

/// Restriction x|_U: subsequence, sub-star, induced subgraph, induced
/// subposet. `u` must be a subset of the support.
pub fn zoo_rho(kind: ZooKind, u: &LabelSet, x: &Term) -> Result<Term> {
    let supp = x.support();
    if !u.is_subset_of(&supp) {
        return Err(Error::Domain(format!(
            "cannot restrict a term on {supp} to the non-subset {u}"
        )));
    }
    match (kind, x) {
        (ZooKind::L, Term::Order(ls)) => Ok(Term::Order(
            ls.iter().filter(|l| u.contains(l)).cloned().collect(),
        )),
        (ZooKind::E, Term::Star(_)) => Ok(Term::Star(u.clone())),
        (ZooKind::G, Term::Graph(g)) => Ok(Term::Graph(g.induced(u))),
        (ZooKind::Poset, Term::Poset(p)) => Ok(Term::Poset(p.induced(u))),
        _ => Err(Error::Domain(format!(
            "term {x} does not belong to the {} monoid",
            kind.species()
        ))),
    }
}

/// Restriction of a cyclic order: keep the labels of `u` in cycle order.
/// `u` must be a nonempty subset of the support (cycles are positive).
pub fn cyc_rho(u: &LabelSet, x: &Term) -> Result<Term> {
    let Term::Cycle(ls) = x else {
        return Err(Error::Domain(format!("term {x} is not a cycle")));
    };
    if u.is_empty() {
        return Err(Error::Domain(
            "cycles are positive; restriction to ∅ is undefined".into(),
        ));
    }
    if !u.is_subset_of(&x.support()) {
        return Err(Error::Domain(format!(
            "cannot restrict a cycle on {} to the non-subset {u}",
            x.support()
        )));
    }
    Ok(Term::Cycle(canonical_cycle(
        ls.iter().filter(|l| u.contains(l)).cloned().collect(),
    )))
}

/// The named maps between zoo species. Each acts term by term and is natural
/// in the label set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ZooMap {
    /// G → E: every graph to the star on its vertices (a bimonoid map that
    /// also intertwines restrictions).
    TauGE,
    /// L → E: forget the order (abelianization).
    TauLE,
    /// E → Pos: the star to the antichain (intertwines restrictions).
    Alpha,
    /// E → Pos: the star to the average of all chains. A comonoid map, but
    /// not one that intertwines restrictions (the coefficients are not 0/1).
    Lambda,
    /// L₊ → cyc: close a linear order into its cycle.
    ThetaLCyc,
}

impl ZooMap {
    pub fn name(&self) -> &'static str {
        match self {
            ZooMap::TauGE => "tau_GE",
            ZooMap::TauLE => "tau_LE",
            ZooMap::Alpha => "alpha",
            ZooMap::Lambda => "lambda",
            ZooMap::ThetaLCyc => "theta_Lcyc",
        }
    }

    /// Domain and codomain, at the level of carrier species.
    pub fn signature(&self) -> (Species, Species) {
        match self {
            ZooMap::TauGE => (Species::G, Species::E),
            ZooMap::TauLE => (Species::L, Species::E),
            ZooMap::Alpha | ZooMap::Lambda => (Species::E, Species::Poset),
            ZooMap::ThetaLCyc => (Species::L.positive(), Species::Cyc),
        }
    }

    pub fn apply(&self, x: &Term) -> Result<LinComb<Term>> {
        let supp = x.support();
        match self {
            ZooMap::TauGE => match x {
                Term::Graph(_) => Ok(LinComb::unit(Term::Star(supp))),
                _ => Err(Error::Domain(format!("tau_GE expects a graph, got {x}"))),
            },
            ZooMap::TauLE => match x {
                Term::Order(_) => Ok(LinComb::unit(Term::Star(supp))),
                _ => Err(Error::Domain(format!("tau_LE expects an order, got {x}"))),
            },
            ZooMap::Alpha => match x {
                Term::Star(s) => Ok(LinComb::unit(Term::Poset(Poset::antichain(s.clone())))),
                _ => Err(Error::Domain(format!("alpha expects a star, got {x}"))),
            },
            ZooMap::Lambda => match x {
                Term::Star(s) => {
                    let coeff = inverse_factorial(s.len());
                    let chains = Species::L
                        .basis(s)
                        .into_iter()
                        .map(|t| match t {
                            Term::Order(ls) => Term::Poset(Poset::chain(&ls)),
                            _ => unreachable!("L enumerates orders"),
                        })
                        .map(|t| (t, coeff.clone()));
                    Ok(LinComb::from_pairs(chains))
                }
                _ => Err(Error::Domain(format!("lambda expects a star, got {x}"))),
            },
            ZooMap::ThetaLCyc => match x {
                Term::Order(ls) if !ls.is_empty() => {
                    Ok(LinComb::unit(Term::Cycle(canonical_cycle(ls.clone()))))
                }
                Term::Order(_) => Err(Error::Domain(
                    "theta_Lcyc is defined on positive degrees only".into(),
                )),
                _ => Err(Error::Domain(format!(
                    "theta_Lcyc expects an order, got {x}"
                ))),
            },
        }
    }
}

impl std::fmt::Display for ZooMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
