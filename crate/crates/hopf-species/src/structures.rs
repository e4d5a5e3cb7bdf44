//! (Bi)monoid and comonoid structures on species carriers.
//!
//! `Bimonoid` and `Comonoid` are closed under the constructions in this
//! crate: zoo structures, Cauchy products, substitution, truncation, and
//! composition of comonoids. Structure maps dispatch per kind; hypotheses
//! that a construction needs (linearized, cocommutative, commutative
//! coproducts/products) are certified by exhaustive scan up to a bound and
//! cached per object.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::label::{Bijection, Label, LabelSet};
use crate::lincomb::LinComb;
use crate::partition::two_part_decompositions;
use crate::species::{Species, Trunc};
use crate::tee::{composite_delta, composite_mu};
use crate::term::Term;
use crate::zoo::{cyc_rho, zoo_mu, zoo_rho, ZooKind};

/// Coproduct access used by the generic law checkers and engines.
pub trait ComonoidOps: Sync {
    fn carrier(&self) -> Species;
    fn name(&self) -> String;
    /// Positive comonoids define Δ_{S,T} only for S, T both nonempty.
    fn proper_only(&self) -> bool;
    fn delta(&self, s: &LabelSet, t: &LabelSet, x: &Term) -> Result<LinComb<(Term, Term)>>;
}

/// Product access on top of [`ComonoidOps`].
pub trait BimonoidOps: ComonoidOps {
    fn mu(&self, x: &Term, y: &Term) -> Result<LinComb<Term>>;

    /// The basis term spanning the carrier on ∅.
    fn unit_term(&self) -> Term {
        self.carrier()
            .basis(&LabelSet::empty())
            .into_iter()
            .next()
            .expect("bimonoid carriers are connected")
    }
}

/// Deliberate structure faults, for exercising failure reporting and the
/// hypothesis gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fault {
    /// After multiplying with a singleton left factor, transpose the two
    /// smallest labels of the result. Breaks associativity.
    MuTwist,
    /// Zero out the coproduct on proper splits. Breaks the linearized
    /// hypothesis and μ/Δ compatibility.
    DeltaZero,
    /// Relabel the right coproduct factor by the order-reversing bijection
    /// of its support. Stays linearized but breaks cocommutativity.
    DeltaSkew,
}

impl Fault {
    pub fn name(&self) -> &'static str {
        match self {
            Fault::MuTwist => "mu-twist",
            Fault::DeltaZero => "delta-zero",
            Fault::DeltaSkew => "delta-skew",
        }
    }
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Hypotheses that can be certified by exhaustive scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CertKind {
    /// Δ_{S,T} sends every basis term to a single basis tensor, coefficient 1.
    Linearized,
    /// Δ_{S,T} = twist ∘ Δ_{T,S}.
    Cocommutative,
    /// μ_{S,T} = μ_{T,S} ∘ twist.
    Commutative,
}

impl CertKind {
    fn describe(&self) -> &'static str {
        match self {
            CertKind::Linearized => "a linearized coproduct",
            CertKind::Cocommutative => "a cocommutative coproduct",
            CertKind::Commutative => "a commutative product",
        }
    }
}

/// Per-object memo of certified hypotheses: kind -> largest verified bound.
#[derive(Clone, Debug, Default)]
pub struct CertCache(Arc<Mutex<BTreeMap<CertKind, usize>>>);

impl CertCache {
    fn covers(&self, kind: CertKind, bound: usize) -> bool {
        self.0
            .lock()
            .unwrap()
            .get(&kind)
            .is_some_and(|b| *b >= bound)
    }

    fn record(&self, kind: CertKind, bound: usize) {
        let mut map = self.0.lock().unwrap();
        let entry = map.entry(kind).or_insert(bound);
        *entry = (*entry).max(bound);
    }
}

/// The default exhaustive bound for hypothesis certification at build time.
pub const DEFAULT_CERT_BOUND: usize = 3;

#[derive(Debug)]
pub enum BimonoidKind {
    Zoo(ZooKind),
    /// The substitution bimonoid on b∘p. Built through [`Bimonoid::tee`],
    /// which certifies the hypotheses on b.
    Tee { b: Bimonoid, p: Comonoid },
    CauchyProd(Bimonoid, Bimonoid),
    Corrupted { base: Bimonoid, fault: Fault },
}

/// A bimonoid structure on an explicit species carrier.
#[derive(Clone, Debug)]
pub struct Bimonoid {
    kind: Arc<BimonoidKind>,
    certs: CertCache,
}

impl Bimonoid {
    pub fn zoo(kind: ZooKind) -> Bimonoid {
        Bimonoid::from_kind(BimonoidKind::Zoo(kind))
    }

    pub fn cauchy(a: Bimonoid, b: Bimonoid) -> Bimonoid {
        Bimonoid::from_kind(BimonoidKind::CauchyProd(a, b))
    }

    pub fn corrupted(base: Bimonoid, fault: Fault) -> Bimonoid {
        Bimonoid::from_kind(BimonoidKind::Corrupted { base, fault })
    }

    fn from_kind(kind: BimonoidKind) -> Bimonoid {
        Bimonoid {
            kind: Arc::new(kind),
            certs: CertCache::default(),
        }
    }

    /// Builds the substitution bimonoid on b∘p, refusing with a named
    /// hypothesis when b is not connected, not linearized, or not
    /// cocommutative (each certified exhaustively up to `cert_bound`).
    pub fn tee(b: Bimonoid, p: Comonoid, cert_bound: usize) -> Result<Bimonoid> {
        let construction = format!("T[{}]({})", b.name(), p.name());
        if !b.carrier().is_connected() {
            return Err(Error::MissingHypothesis {
                construction,
                hypothesis: "a connected outer bimonoid".into(),
                detail: format!("{} is not connected", b.name()),
            });
        }
        certify_coproduct(&b, &b.certs, CertKind::Linearized, cert_bound, &construction)?;
        certify_coproduct(
            &b,
            &b.certs,
            CertKind::Cocommutative,
            cert_bound,
            &construction,
        )?;
        Ok(Bimonoid::from_kind(BimonoidKind::Tee { b, p }))
    }

    pub fn kind(&self) -> &BimonoidKind {
        &self.kind
    }

    pub fn certs(&self) -> &CertCache {
        &self.certs
    }

    /// Restriction map x|_u, read off the coproduct: the left factor of
    /// Δ_{U, I∖U}(x). Defined whenever that coproduct is a single basis
    /// tensor, which the T-construction hypotheses guarantee.
    pub fn rho(&self, u: &LabelSet, x: &Term) -> Result<Term> {
        match &*self.kind {
            BimonoidKind::Zoo(k) => zoo_rho(*k, u, x),
            _ => {
                let supp = x.support();
                if !u.is_subset_of(&supp) {
                    return Err(Error::Domain(format!(
                        "cannot restrict a term on {supp} to the non-subset {u}"
                    )));
                }
                let rest = supp.minus(u);
                let split = self.delta(u, &rest, x)?;
                match split.as_single_unit() {
                    Some((l, _)) => Ok(l.clone()),
                    None => Err(Error::MissingCapability(format!(
                        "{} has no restriction maps: Δ_{{{u},{rest}}} is not a single basis tensor",
                        self.name()
                    ))),
                }
            }
        }
    }
}

impl ComonoidOps for Bimonoid {
    fn carrier(&self) -> Species {
        match &*self.kind {
            BimonoidKind::Zoo(k) => k.species(),
            BimonoidKind::Tee { b, p } => {
                Species::Substitute(Box::new(b.carrier()), Box::new(p.carrier()))
            }
            BimonoidKind::CauchyProd(a, b) => {
                Species::Cauchy(Box::new(a.carrier()), Box::new(b.carrier()))
            }
            BimonoidKind::Corrupted { base, .. } => base.carrier(),
        }
    }

    fn name(&self) -> String {
        match &*self.kind {
            BimonoidKind::Zoo(k) => k.species().to_string(),
            BimonoidKind::Tee { b, p } => format!("T[{}]({})", b.name(), p.name()),
            BimonoidKind::CauchyProd(a, b) => format!("({} . {})", a.name(), b.name()),
            BimonoidKind::Corrupted { base, fault } => format!("{}#{fault}", base.name()),
        }
    }

    fn proper_only(&self) -> bool {
        false
    }

    fn delta(&self, s: &LabelSet, t: &LabelSet, x: &Term) -> Result<LinComb<(Term, Term)>> {
        let supp = x.support();
        if !s.is_disjoint_from(t) || s.union(t) != supp {
            return Err(Error::Domain(format!(
                "Δ needs a two-part decomposition of {supp}; got {s} and {t}"
            )));
        }
        match &*self.kind {
            BimonoidKind::Zoo(k) => Ok(LinComb::unit((zoo_rho(*k, s, x)?, zoo_rho(*k, t, x)?))),
            BimonoidKind::Tee { b, p } => {
                let Term::Composite(c) = x else {
                    return Err(Error::Domain(format!("{} expects composites, got {x}", self.name())));
                };
                composite_delta(
                    &|u, outer| b.rho(u, outer),
                    &|si, ti, inner| p.delta(si, ti, inner),
                    s,
                    t,
                    c,
                )
            }
            BimonoidKind::CauchyProd(a, b) => {
                let Term::Cauchy(x1, x2) = x else {
                    return Err(Error::Domain(format!("{} expects pairs, got {x}", self.name())));
                };
                let (g1, g2) = (x1.support(), x2.support());
                let d1 = a.delta(&s.intersect(&g1), &t.intersect(&g1), x1)?;
                let d2 = b.delta(&s.intersect(&g2), &t.intersect(&g2), x2)?;
                let mut out = LinComb::zero();
                for ((l1, r1), c1) in d1.iter() {
                    for ((l2, r2), c2) in d2.iter() {
                        out.add_term(
                            (
                                Term::Cauchy(Box::new(l1.clone()), Box::new(l2.clone())),
                                Term::Cauchy(Box::new(r1.clone()), Box::new(r2.clone())),
                            ),
                            c1.clone() * c2.clone(),
                        );
                    }
                }
                Ok(out)
            }
            BimonoidKind::Corrupted { base, fault } => match fault {
                Fault::DeltaZero => {
                    if s.is_empty() || t.is_empty() {
                        base.delta(s, t, x)
                    } else {
                        Ok(LinComb::zero())
                    }
                }
                Fault::DeltaSkew => {
                    let split = base.delta(s, t, x)?;
                    if s.is_empty() || t.is_empty() {
                        return Ok(split);
                    }
                    let rev = Bijection::reversal(t);
                    split.try_map_terms(|(l, r)| Ok((l.clone(), r.relabel(&rev)?)))
                }
                Fault::MuTwist => base.delta(s, t, x),
            },
        }
    }
}

impl BimonoidOps for Bimonoid {
    fn mu(&self, x: &Term, y: &Term) -> Result<LinComb<Term>> {
        match &*self.kind {
            BimonoidKind::Zoo(k) => Ok(LinComb::unit(zoo_mu(*k, x, y)?)),
            BimonoidKind::Tee { b, .. } => {
                let (Term::Composite(cx), Term::Composite(cy)) = (x, y) else {
                    return Err(Error::Domain(format!(
                        "{} expects composites, got {x} and {y}",
                        self.name()
                    )));
                };
                composite_mu(&|a, c| b.mu(a, c), cx, cy)
            }
            BimonoidKind::CauchyProd(a, b) => {
                let (Term::Cauchy(x1, x2), Term::Cauchy(y1, y2)) = (x, y) else {
                    return Err(Error::Domain(format!(
                        "{} expects pairs, got {x} and {y}",
                        self.name()
                    )));
                };
                let m1 = a.mu(x1, y1)?;
                let m2 = b.mu(x2, y2)?;
                let mut out = LinComb::zero();
                for (t1, c1) in m1.iter() {
                    for (t2, c2) in m2.iter() {
                        out.add_term(
                            Term::Cauchy(Box::new(t1.clone()), Box::new(t2.clone())),
                            c1.clone() * c2.clone(),
                        );
                    }
                }
                Ok(out)
            }
            BimonoidKind::Corrupted { base, fault } => {
                let product = base.mu(x, y)?;
                match fault {
                    Fault::MuTwist if x.support().len() == 1 => {
                        let ground = x.support().union(&y.support());
                        if ground.len() < 2 {
                            return Ok(product);
                        }
                        let mut iter = ground.iter();
                        let a = iter.next().unwrap().clone();
                        let b = iter.next().unwrap().clone();
                        let swap = transposition(&ground, &a, &b);
                        product.try_map_terms(|t| t.relabel(&swap))
                    }
                    _ => Ok(product),
                }
            }
        }
    }
}

fn transposition(set: &LabelSet, a: &Label, b: &Label) -> Bijection {
    Bijection::from_pairs(set.iter().map(|l| {
        if l == a {
            (a.clone(), b.clone())
        } else if l == b {
            (b.clone(), a.clone())
        } else {
            (l.clone(), l.clone())
        }
    }))
    .expect("transposition of distinct labels is a bijection")
}

#[derive(Debug)]
pub enum ComonoidKind {
    /// The positive part of a bimonoid, with the coproduct it inherits on
    /// proper splits.
    Positive(Bimonoid),
    /// Cycles, with restriction of cyclic orders.
    Cyc,
    /// Degree truncation below r (closed under proper splits).
    TruncBelow(Comonoid, usize),
    /// The comonoid on p∘q. Built through [`Comonoid::compose`], which
    /// certifies the hypotheses on p.
    Compose { outer: Comonoid, inner: Comonoid },
}

/// A positive comonoid structure on an explicit species carrier.
#[derive(Clone, Debug)]
pub struct Comonoid {
    kind: Arc<ComonoidKind>,
    certs: CertCache,
}

impl Comonoid {
    pub fn positive(h: Bimonoid) -> Comonoid {
        Comonoid::from_kind(ComonoidKind::Positive(h))
    }

    pub fn cyc() -> Comonoid {
        Comonoid::from_kind(ComonoidKind::Cyc)
    }

    pub fn trunc_below(c: Comonoid, r: usize) -> Comonoid {
        Comonoid::from_kind(ComonoidKind::TruncBelow(c, r))
    }

    /// The comonoid on p∘q, for p a cocommutative linearized comonoid
    /// (certified up to `cert_bound`) and q any positive comonoid.
    pub fn compose(outer: Comonoid, inner: Comonoid, cert_bound: usize) -> Result<Comonoid> {
        let construction = format!("({} o {})", outer.name(), inner.name());
        certify_coproduct(
            &outer,
            &outer.certs,
            CertKind::Linearized,
            cert_bound,
            &construction,
        )?;
        certify_coproduct(
            &outer,
            &outer.certs,
            CertKind::Cocommutative,
            cert_bound,
            &construction,
        )?;
        Ok(Comonoid::from_kind(ComonoidKind::Compose { outer, inner }))
    }

    fn from_kind(kind: ComonoidKind) -> Comonoid {
        Comonoid {
            kind: Arc::new(kind),
            certs: CertCache::default(),
        }
    }

    pub fn kind(&self) -> &ComonoidKind {
        &self.kind
    }

    pub fn certs(&self) -> &CertCache {
        &self.certs
    }

    /// Restriction map x|_u for nonempty u, read off the coproduct as for
    /// [`Bimonoid::rho`].
    pub fn rho(&self, u: &LabelSet, x: &Term) -> Result<Term> {
        let supp = x.support();
        if !u.is_subset_of(&supp) {
            return Err(Error::Domain(format!(
                "cannot restrict a term on {supp} to the non-subset {u}"
            )));
        }
        if u == &supp {
            return Ok(x.clone());
        }
        if u.is_empty() {
            return Err(Error::Domain(
                "positive comonoids have no restriction to ∅".into(),
            ));
        }
        match &*self.kind {
            ComonoidKind::Cyc => cyc_rho(u, x),
            _ => {
                let rest = supp.minus(u);
                let split = self.delta(u, &rest, x)?;
                match split.as_single_unit() {
                    Some((l, _)) => Ok(l.clone()),
                    None => Err(Error::MissingCapability(format!(
                        "{} has no restriction maps: Δ_{{{u},{rest}}} is not a single basis tensor",
                        self.name()
                    ))),
                }
            }
        }
    }
}

impl ComonoidOps for Comonoid {
    fn carrier(&self) -> Species {
        match &*self.kind {
            ComonoidKind::Positive(h) => h.carrier().positive(),
            ComonoidKind::Cyc => Species::Cyc,
            ComonoidKind::TruncBelow(c, r) => {
                Species::Truncate(Box::new(c.carrier()), Trunc::Below(*r))
            }
            ComonoidKind::Compose { outer, inner } => {
                Species::Substitute(Box::new(outer.carrier()), Box::new(inner.carrier()))
            }
        }
    }

    fn name(&self) -> String {
        match &*self.kind {
            ComonoidKind::Positive(h) => format!("{}+", h.name()),
            ComonoidKind::Cyc => "cyc".into(),
            ComonoidKind::TruncBelow(c, r) => format!("trunc({},<,{r})", c.name()),
            ComonoidKind::Compose { outer, inner } => {
                format!("({} o {})", outer.name(), inner.name())
            }
        }
    }

    fn proper_only(&self) -> bool {
        true
    }

    fn delta(&self, s: &LabelSet, t: &LabelSet, x: &Term) -> Result<LinComb<(Term, Term)>> {
        let supp = x.support();
        if s.is_empty() || t.is_empty() {
            return Err(Error::Precondition(format!(
                "positive comonoids define Δ_{{S,T}} for proper decompositions only; got {s} and {t}"
            )));
        }
        if !s.is_disjoint_from(t) || s.union(t) != supp {
            return Err(Error::Domain(format!(
                "Δ needs a two-part decomposition of {supp}; got {s} and {t}"
            )));
        }
        match &*self.kind {
            ComonoidKind::Positive(h) => h.delta(s, t, x),
            ComonoidKind::Cyc => Ok(LinComb::unit((cyc_rho(s, x)?, cyc_rho(t, x)?))),
            ComonoidKind::TruncBelow(c, _) => c.delta(s, t, x),
            ComonoidKind::Compose { outer, inner } => {
                let Term::Composite(cx) = x else {
                    return Err(Error::Domain(format!(
                        "{} expects composites, got {x}",
                        self.name()
                    )));
                };
                composite_delta(
                    &|u, o| outer.rho(u, o),
                    &|si, ti, i| inner.delta(si, ti, i),
                    s,
                    t,
                    cx,
                )
            }
        }
    }
}

/// Certifies a coproduct hypothesis by exhaustive scan over canonical label
/// sets of size ≤ bound, caching success; failure reports a witness.
pub fn certify_coproduct(
    h: &dyn ComonoidOps,
    cache: &CertCache,
    kind: CertKind,
    bound: usize,
    construction: &str,
) -> Result<()> {
    assert!(matches!(kind, CertKind::Linearized | CertKind::Cocommutative));
    if cache.covers(kind, bound) {
        return Ok(());
    }
    let carrier = h.carrier();
    for n in 0..=bound {
        let ground = crate::label::canonical_labels(n);
        for x in carrier.basis(&ground) {
            for (s, t) in two_part_decompositions(&ground) {
                if h.proper_only() && (s.is_empty() || t.is_empty()) {
                    continue;
                }
                let split = h.delta(&s, &t, &x)?;
                let witness = match kind {
                    CertKind::Linearized => {
                        if split.as_single_unit().is_some() {
                            continue;
                        }
                        format!(
                            "Δ_{{{s},{t}}}({x}) = {} is not a single basis tensor",
                            crate::lincomb::pair_string(&split)
                        )
                    }
                    CertKind::Cocommutative => {
                        let flipped = h
                            .delta(&t, &s, &x)?
                            .map_terms(|(l, r)| (r.clone(), l.clone()));
                        if flipped == split {
                            continue;
                        }
                        format!(
                            "Δ_{{{s},{t}}}({x}) = {} but twist∘Δ_{{{t},{s}}} gives {}",
                            crate::lincomb::pair_string(&split),
                            crate::lincomb::pair_string(&flipped)
                        )
                    }
                    CertKind::Commutative => unreachable!(),
                };
                return Err(Error::MissingHypothesis {
                    construction: construction.to_string(),
                    hypothesis: format!("{} on {}", kind.describe(), h.name()),
                    detail: witness,
                });
            }
        }
    }
    cache.record(kind, bound);
    Ok(())
}

/// Certifies commutativity of the product by exhaustive scan, as in
/// [`certify_coproduct`].
pub fn certify_commutative(
    h: &dyn BimonoidOps,
    cache: &CertCache,
    bound: usize,
    construction: &str,
) -> Result<()> {
    if cache.covers(CertKind::Commutative, bound) {
        return Ok(());
    }
    let carrier = h.carrier();
    for n in 0..=bound {
        let ground = crate::label::canonical_labels(n);
        for (s, t) in two_part_decompositions(&ground) {
            for x in carrier.basis(&s) {
                for y in carrier.basis(&t) {
                    let xy = h.mu(&x, &y)?;
                    let yx = h.mu(&y, &x)?;
                    if xy != yx {
                        return Err(Error::MissingHypothesis {
                            construction: construction.to_string(),
                            hypothesis: format!(
                                "{} on {}",
                                CertKind::Commutative.describe(),
                                h.name()
                            ),
                            detail: format!("μ({x},{y}) = {xy} but μ({y},{x}) = {yx}"),
                        });
                    }
                }
            }
        }
    }
    cache.record(CertKind::Commutative, bound);
    Ok(())
}

impl fmt::Display for Bimonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Comonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Composite, Graph};

    fn ls(s: &str) -> LabelSet {
        LabelSet::from_atoms(s.chars().map(|c| c.to_string()))
    }
    fn order(s: &str) -> Term {
        Term::Order(s.chars().map(|c| Label::atom(c.to_string())).collect())
    }

    #[test]
    fn zoo_bimonoid_conventions() {
        let l = Bimonoid::zoo(ZooKind::L);
        let abc = order("abc");
        // improper splits use the unit on the empty side
        assert_eq!(
            l.delta(&ls("abc"), &LabelSet::empty(), &abc).unwrap(),
            LinComb::unit((abc.clone(), order("")))
        );
        assert_eq!(
            l.delta(&LabelSet::empty(), &ls("abc"), &abc).unwrap(),
            LinComb::unit((order(""), abc.clone()))
        );
        assert_eq!(
            l.delta(&ls("ac"), &ls("b"), &abc).unwrap(),
            LinComb::unit((order("ac"), order("b")))
        );
        assert_eq!(l.unit_term(), order(""));
        assert_eq!(
            l.mu(&order(""), &abc).unwrap(),
            LinComb::unit(abc.clone())
        );
    }

    #[test]
    fn tee_construction_matches_the_engine() {
        let b = Bimonoid::zoo(ZooKind::L);
        let p = Comonoid::positive(Bimonoid::zoo(ZooKind::G));
        let lg = Bimonoid::tee(b, p, 2).unwrap();
        assert_eq!(lg.name(), "T[L](G+)");
        assert_eq!(lg.carrier().dim(&ls("abc")), 26);

        // restriction maps exist and restrict blockwise
        let block_ab = ls("ab");
        let x = Term::Composite(
            Composite::new(
                Term::Order(vec![Label::block(block_ab.clone()), Label::block(ls("c"))]),
                [
                    (
                        block_ab.clone(),
                        Term::Graph(
                            Graph::new(block_ab, [(Label::atom("a"), Label::atom("b"))]).unwrap(),
                        ),
                    ),
                    (ls("c"), Term::Graph(Graph::discrete(ls("c")))),
                ],
            )
            .unwrap(),
        );
        let restricted = lg.rho(&ls("bc"), &x).unwrap();
        let want = Term::Composite(
            Composite::new(
                Term::Order(vec![Label::block(ls("b")), Label::block(ls("c"))]),
                [
                    (ls("b"), Term::Graph(Graph::discrete(ls("b")))),
                    (ls("c"), Term::Graph(Graph::discrete(ls("c")))),
                ],
            )
            .unwrap(),
        );
        assert_eq!(restricted, want);
    }

    #[test]
    fn tee_refuses_a_non_cocommutative_outer_structure() {
        let skew = Bimonoid::corrupted(Bimonoid::zoo(ZooKind::L), Fault::DeltaSkew);
        let p = Comonoid::positive(Bimonoid::zoo(ZooKind::E));
        // the reversal fixes singletons, so the skew first shows at size 3
        let err = Bimonoid::tee(skew, p, 3).unwrap_err();
        match err {
            Error::MissingHypothesis { hypothesis, .. } => {
                assert!(hypothesis.contains("cocommutative"), "got: {hypothesis}");
            }
            other => panic!("expected a hypothesis refusal, got {other}"),
        }
    }

    #[test]
    fn tee_refuses_a_non_linearized_outer_structure() {
        let zeroed = Bimonoid::corrupted(Bimonoid::zoo(ZooKind::E), Fault::DeltaZero);
        let p = Comonoid::positive(Bimonoid::zoo(ZooKind::E));
        let err = Bimonoid::tee(zeroed, p, 2).unwrap_err();
        match err {
            Error::MissingHypothesis { hypothesis, .. } => {
                assert!(hypothesis.contains("linearized"), "got: {hypothesis}");
            }
            other => panic!("expected a hypothesis refusal, got {other}"),
        }
    }

    #[test]
    fn mu_twist_breaks_associativity() {
        let bad = Bimonoid::corrupted(Bimonoid::zoo(ZooKind::L), Fault::MuTwist);
        let (a, b, c) = (order("a"), order("b"), order("c"));
        let left = bad
            .mu(&a, &b)
            .unwrap()
            .bind(|t| bad.mu(t, &c))
            .unwrap();
        let right = bad
            .mu(&b, &c)
            .unwrap()
            .bind(|t| bad.mu(&a, t))
            .unwrap();
        assert_ne!(left, right);
    }

    #[test]
    fn cauchy_product_structure() {
        let ee = Bimonoid::cauchy(Bimonoid::zoo(ZooKind::E), Bimonoid::zoo(ZooKind::E));
        assert_eq!(ee.carrier().dim(&ls("ab")), 4);
        let unit = ee.unit_term();
        assert_eq!(
            unit,
            Term::Cauchy(
                Box::new(Term::Star(LabelSet::empty())),
                Box::new(Term::Star(LabelSet::empty()))
            )
        );
        let x = Term::Cauchy(
            Box::new(Term::Star(ls("a"))),
            Box::new(Term::Star(ls("b"))),
        );
        let y = Term::Cauchy(
            Box::new(Term::Star(ls("c"))),
            Box::new(Term::Star(LabelSet::empty())),
        );
        assert_eq!(
            ee.mu(&x, &y).unwrap(),
            LinComb::unit(Term::Cauchy(
                Box::new(Term::Star(ls("ac"))),
                Box::new(Term::Star(ls("b")))
            ))
        );
        // Δ splits coordinatewise and recombines
        let split = ee.delta(&ls("a"), &ls("b"), &x).unwrap();
        assert_eq!(
            split,
            LinComb::unit((
                Term::Cauchy(Box::new(Term::Star(ls("a"))), Box::new(Term::Star(LabelSet::empty()))),
                Term::Cauchy(Box::new(Term::Star(LabelSet::empty())), Box::new(Term::Star(ls("b")))),
            ))
        );
    }

    #[test]
    fn composed_comonoid_requires_cocommutative_outer() {
        let cyc = Comonoid::cyc();
        let e_pos = Comonoid::positive(Bimonoid::zoo(ZooKind::E));
        // cyc is cocommutative and linearized, so cyc∘E+ builds
        assert!(Comonoid::compose(cyc, e_pos.clone(), 3).is_ok());
        // a skewed outer comonoid is refused
        let skew = Comonoid::positive(Bimonoid::corrupted(
            Bimonoid::zoo(ZooKind::L),
            Fault::DeltaSkew,
        ));
        let err = Comonoid::compose(skew, e_pos, 3).unwrap_err();
        assert!(matches!(err, Error::MissingHypothesis { .. }));
    }

    #[test]
    fn composed_comonoid_splits_blocks_with_the_engine() {
        let l_pos = Comonoid::positive(Bimonoid::zoo(ZooKind::L));
        let e_pos = Comonoid::positive(Bimonoid::zoo(ZooKind::E));
        let le = Comonoid::compose(l_pos, e_pos, 3).unwrap();
        // term: blocks {a,b} and {c}, outer order (ab | c), stars inside
        let x = Term::Composite(
            Composite::new(
                Term::Order(vec![Label::block(ls("ab")), Label::block(ls("c"))]),
                [(ls("ab"), Term::Star(ls("ab"))), (ls("c"), Term::Star(ls("c")))],
            )
            .unwrap(),
        );
        let split = le.delta(&ls("a"), &ls("bc"), &x).unwrap();
        let left = Term::Composite(
            Composite::new(
                Term::Order(vec![Label::block(ls("a"))]),
                [(ls("a"), Term::Star(ls("a")))],
            )
            .unwrap(),
        );
        let right = Term::Composite(
            Composite::new(
                Term::Order(vec![Label::block(ls("b")), Label::block(ls("c"))]),
                [(ls("b"), Term::Star(ls("b"))), (ls("c"), Term::Star(ls("c")))],
            )
            .unwrap(),
        );
        assert_eq!(split, LinComb::unit((left, right)));
        // improper splits are refused on positive comonoids
        assert!(le.delta(&ls("abc"), &LabelSet::empty(), &x).is_err());
    }

    #[test]
    fn certification_caches_and_rechecks_cheaply() {
        let g = Bimonoid::zoo(ZooKind::G);
        certify_coproduct(&g, g.certs(), CertKind::Cocommutative, 3, "test").unwrap();
        assert!(g.certs().covers(CertKind::Cocommutative, 3));
        assert!(g.certs().covers(CertKind::Cocommutative, 2));
        assert!(!g.certs().covers(CertKind::Cocommutative, 4));
        certify_commutative(&g, g.certs(), 3, "test").unwrap();
        // L is not commutative
        let l = Bimonoid::zoo(ZooKind::L);
        assert!(certify_commutative(&l, l.certs(), 2, "test").is_err());
    }
}
