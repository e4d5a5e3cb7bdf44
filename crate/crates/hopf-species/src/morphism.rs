//! Linear maps between species carriers, and the named maps between the
//! substitution objects this crate builds.
//!
//! A [`Morphism`] acts on basis terms and extends linearly. Constructors that
//! need hypotheses (a restriction-intertwining bimonoid map, a comonoid map,
//! a cocommutative linearized inner comonoid, commutativity of the target)
//! certify them by exhaustive scan up to a bound and refuse with the failed
//! hypothesis named. The checkers here report morphism laws the same way
//! [`crate::verify`] reports structure laws.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec;
use crate::label::{canonical_labels, Bijection, Label, LabelSet};
use crate::linalg::Span;
use crate::lincomb::{pair_string, tensor2, LinComb};
use crate::species::Species;
use crate::structures::{
    certify_commutative, Bimonoid, BimonoidKind, BimonoidOps, Comonoid, ComonoidOps,
};
use crate::term::{Composite, Poset, Term};
use crate::verify::{factor_left, pairs, report, subsets, swap_two, Report, Witness};
use crate::zoo::{ZooKind, ZooMap};

#[derive(Clone)]
enum MorphKind {
    Identity,
    Zoo(ZooMap),
    /// Blockwise image of a substitution term: `tau` on the outer term,
    /// `theta` on every inner term, extended multilinearly.
    Blockwise {
        tau: Box<Morphism>,
        theta: Box<Morphism>,
    },
    /// Regrouping of nested substitution terms: forward sends a partition of
    /// block labels to the partition of their unions, inverse flattens back.
    Regroup { forward: bool },
    /// Inner embedding p → (b∘p)₊: one block carrying the whole term,
    /// decorated by the distinguished singleton term of the outer species.
    EmbedInner { outer: Species },
    /// Outer embedding b → b∘p: singleton blocks, each decorated by the
    /// distinguished singleton term of the inner species.
    EmbedOuter { inner: Species },
    /// Lump a poset of poset blocks into one poset on the underlying labels.
    PosetCollapse,
    /// Evaluate a block decomposition by the iterated product of `h`, in the
    /// order the outer term prescribes.
    BlockProduct { order: ZooKind, h: Bimonoid },
    /// `second ∘ first`.
    Compose {
        first: Box<Morphism>,
        second: Box<Morphism>,
    },
    Custom(Arc<dyn Fn(&Term) -> Result<LinComb<Term>> + Send + Sync>),
}

/// A linear map between species carriers, defined on basis terms.
#[derive(Clone)]
pub struct Morphism {
    name: String,
    source: Species,
    target: Species,
    kind: MorphKind,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Morphism")
            .field("name", &self.name)
            .field("source", &self.source)
            .field("target", &self.target)
            .finish_non_exhaustive()
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.source, self.target)
    }
}

impl Morphism {
    pub fn identity(on: Species) -> Morphism {
        Morphism {
            name: "id".into(),
            source: on.clone(),
            target: on,
            kind: MorphKind::Identity,
        }
    }

    pub fn zoo(map: ZooMap) -> Morphism {
        let (source, target) = map.signature();
        Morphism {
            name: map.name().into(),
            source,
            target,
            kind: MorphKind::Zoo(map),
        }
    }

    /// A map given directly by its action on basis terms. No laws are
    /// assumed; run the checkers to certify any.
    pub fn from_fn(
        name: impl Into<String>,
        source: Species,
        target: Species,
        f: impl Fn(&Term) -> Result<LinComb<Term>> + Send + Sync + 'static,
    ) -> Morphism {
        Morphism {
            name: name.into(),
            source,
            target,
            kind: MorphKind::Custom(Arc::new(f)),
        }
    }

    /// `self ∘ before`.
    pub fn after(self, before: Morphism) -> Morphism {
        let name = format!("{} ∘ {}", self.name, before.name);
        let source = before.source.clone();
        let target = self.target.clone();
        Morphism {
            name,
            source,
            target,
            kind: MorphKind::Compose {
                first: Box::new(before),
                second: Box::new(self),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Species {
        &self.source
    }

    pub fn target(&self) -> &Species {
        &self.target
    }

    pub fn apply(&self, x: &Term) -> Result<LinComb<Term>> {
        match &self.kind {
            MorphKind::Identity => Ok(LinComb::unit(x.clone())),
            MorphKind::Zoo(m) => m.apply(x),
            MorphKind::Blockwise { tau, theta } => {
                let Term::Composite(c) = x else {
                    return Err(Error::Domain(format!(
                        "{} expects substitution terms, got {x}",
                        self.name
                    )));
                };
                let outer_images = tau.apply(&c.outer)?;
                let mut inner_images: LinComb<Vec<(LabelSet, Term)>> = LinComb::unit(Vec::new());
                for (block, t) in &c.inner {
                    let image = theta.apply(t)?;
                    inner_images = inner_images.bind(|prefix| {
                        Ok::<_, Error>(image.map_terms(|ti| {
                            let mut next = prefix.clone();
                            next.push((block.clone(), ti.clone()));
                            next
                        }))
                    })?;
                }
                let mut out = LinComb::zero();
                for (o, co) in outer_images.iter() {
                    for (decorations, ci) in inner_images.iter() {
                        let term = Composite::new(o.clone(), decorations.iter().cloned())?;
                        out.add_term(Term::Composite(term), co * ci);
                    }
                }
                Ok(out)
            }
            MorphKind::Regroup { forward: true } => regroup_nested(x).map(LinComb::unit),
            MorphKind::Regroup { forward: false } => nest_regrouped(x).map(LinComb::unit),
            MorphKind::EmbedInner { outer } => {
                let supp = x.support();
                if supp.is_empty() {
                    return Err(Error::Domain(
                        "the inner embedding is defined in positive degrees only".into(),
                    ));
                }
                let decoration = distinguished_singleton(outer, Label::block(supp.clone()))?;
                let term = Composite::new(decoration, [(supp, x.clone())])?;
                Ok(LinComb::unit(Term::Composite(term)))
            }
            MorphKind::EmbedOuter { inner } => {
                let supp = x.support();
                let mut to_blocks = Vec::new();
                let mut decorations = Vec::new();
                for l in supp.iter() {
                    let block = LabelSet::singleton(l.clone());
                    to_blocks.push((l.clone(), Label::block(block.clone())));
                    decorations.push((block, distinguished_singleton(inner, l.clone())?));
                }
                let outer = x.relabel(&Bijection::from_pairs(to_blocks)?)?;
                Ok(LinComb::unit(Term::Composite(Composite::new(
                    outer,
                    decorations,
                )?)))
            }
            MorphKind::PosetCollapse => collapse_poset(x).map(LinComb::unit),
            MorphKind::BlockProduct { order, h } => {
                let Term::Composite(c) = x else {
                    return Err(Error::Domain(format!(
                        "{} expects substitution terms, got {x}",
                        self.name
                    )));
                };
                let sequence: Vec<LabelSet> = match (order, &*c.outer) {
                    (ZooKind::L, Term::Order(ls)) => ls
                        .iter()
                        .map(|l| Ok(l.as_block()?.clone()))
                        .collect::<Result<_>>()?,
                    (ZooKind::E, Term::Star(_)) => {
                        c.inner.iter().map(|(b, _)| b.clone()).collect()
                    }
                    _ => {
                        return Err(Error::Domain(format!(
                            "unexpected outer term {} for {}",
                            c.outer, self.name
                        )))
                    }
                };
                let mut acc = LinComb::unit(h.unit_term());
                for block in &sequence {
                    let t = c.inner_term(block).ok_or_else(|| {
                        Error::Domain("outer term names a block outside the partition".into())
                    })?;
                    acc = acc.bind(|a| h.mu(a, t))?;
                }
                Ok(acc)
            }
            MorphKind::Compose { first, second } => {
                first.apply(x)?.bind(|t| second.apply(t))
            }
            MorphKind::Custom(f) => f(x),
        }
    }

    pub fn apply_lin(&self, v: &LinComb<Term>) -> Result<LinComb<Term>> {
        v.bind(|t| self.apply(t))
    }
}

/// The unique basis term of `species` on `{label}`; refuses when the
/// singleton basis is empty or ambiguous, since then no canonical decoration
/// exists for the embeddings.
pub fn distinguished_singleton(species: &Species, label: Label) -> Result<Term> {
    let ground = LabelSet::singleton(label);
    let mut basis = species.basis(&ground);
    match basis.len() {
        1 => Ok(basis.pop().unwrap()),
        n => Err(Error::MissingCapability(format!(
            "no distinguished singleton term: {species} has {n} basis terms on {ground}"
        ))),
    }
}

/// Forward regrouping: a substitution term whose outer term is itself a
/// substitution term (blocks of blocks) becomes one substitution term over
/// the unions, with composite inner terms.
fn regroup_nested(x: &Term) -> Result<Term> {
    let Term::Composite(c) = x else {
        return Err(Error::Domain(format!("regrouping expects a composite, got {x}")));
    };
    let Term::Composite(w) = &*c.outer else {
        return Err(Error::Domain(format!(
            "regrouping expects a composite outer term, got {}",
            c.outer
        )));
    };
    let mut to_unions = Vec::new();
    let mut inner = Vec::new();
    for (group, mid_term) in &w.inner {
        let mut union = LabelSet::empty();
        let mut sub_inner = Vec::new();
        for block_label in group.iter() {
            let block = block_label.as_block()?;
            union = union.union(block);
            let t = c.inner_term(block).ok_or_else(|| {
                Error::Domain("nested partition names a block outside the fine partition".into())
            })?;
            sub_inner.push((block.clone(), t.clone()));
        }
        to_unions.push((Label::block(group.clone()), Label::block(union.clone())));
        inner.push((
            union,
            Term::Composite(Composite::new(mid_term.clone(), sub_inner)?),
        ));
    }
    let outer = w.outer.relabel(&Bijection::from_pairs(to_unions)?)?;
    Ok(Term::Composite(Composite::new(outer, inner)?))
}

/// Inverse regrouping: a substitution term whose inner terms are composites
/// becomes a nested substitution term over the fine partition.
fn nest_regrouped(x: &Term) -> Result<Term> {
    let Term::Composite(c) = x else {
        return Err(Error::Domain(format!("regrouping expects a composite, got {x}")));
    };
    let mut to_groups = Vec::new();
    let mut mid_inner = Vec::new();
    let mut fine_inner = Vec::new();
    for (coarse_block, t) in &c.inner {
        let Term::Composite(pq) = t else {
            return Err(Error::Domain(format!(
                "regrouping expects composite inner terms, got {t}"
            )));
        };
        let mut group_labels = Vec::new();
        for (fine_block, q_term) in &pq.inner {
            group_labels.push(Label::block(fine_block.clone()));
            fine_inner.push((fine_block.clone(), q_term.clone()));
        }
        let group = LabelSet::new(group_labels);
        to_groups.push((Label::block(coarse_block.clone()), Label::block(group.clone())));
        mid_inner.push((group, (*pq.outer).clone()));
    }
    let outer = c.outer.relabel(&Bijection::from_pairs(to_groups)?)?;
    let mid = Composite::new(outer, mid_inner)?;
    Ok(Term::Composite(Composite::new(
        Term::Composite(mid),
        fine_inner,
    )?))
}

/// x < y in the collapsed poset iff they share a block and the block poset
/// says so, or their blocks are related in the outer poset.
fn collapse_poset(x: &Term) -> Result<Term> {
    let Term::Composite(c) = x else {
        return Err(Error::Domain(format!(
            "poset_collapse expects a composite, got {x}"
        )));
    };
    let Term::Poset(outer) = &*c.outer else {
        return Err(Error::Domain(format!(
            "poset_collapse expects a poset of blocks, got {}",
            c.outer
        )));
    };
    let mut relation: Vec<(Label, Label)> = Vec::new();
    for (_, t) in &c.inner {
        let Term::Poset(inner) = t else {
            return Err(Error::Domain(format!(
                "poset_collapse expects poset blocks, got {t}"
            )));
        };
        relation.extend(inner.relation.iter().cloned());
    }
    for (b1, _) in &c.inner {
        for (b2, _) in &c.inner {
            if b1 != b2 && outer.less(&Label::block(b1.clone()), &Label::block(b2.clone())) {
                for a in b1.iter() {
                    for b in b2.iter() {
                        relation.push((a.clone(), b.clone()));
                    }
                }
            }
        }
    }
    Ok(Term::Poset(Poset::new(c.ground(), relation)?))
}

fn require_pass(construction: &str, hypothesis: &str, rep: Report) -> Result<()> {
    match rep.witness {
        None => Ok(()),
        Some(w) => Err(Error::MissingHypothesis {
            construction: construction.to_string(),
            hypothesis: hypothesis.to_string(),
            detail: format!("fails at {}: lhs = {}, rhs = {}", w.instance, w.lhs, w.rhs),
        }),
    }
}

/// Certifies the blockwise-map hypotheses: `tau` a restriction-intertwining
/// bimonoid map b → d and `theta` a comonoid map p → q, each by exhaustive
/// scan up to `cert_bound`.
pub(crate) fn certify_tau_theta(
    construction: &str,
    tau: &Morphism,
    theta: &Morphism,
    b: &Bimonoid,
    d: &Bimonoid,
    p: &Comonoid,
    q: &Comonoid,
    cert_bound: usize,
) -> Result<()> {
    require_pass(
        construction,
        &format!(
            "a restriction-intertwining outer map {}: {} -> {}",
            tau.name(),
            b.name(),
            d.name()
        ),
        check_restriction_intertwiner(tau, b, d, cert_bound)?,
    )?;
    require_pass(
        construction,
        &format!(
            "a bimonoid morphism {}: {} -> {}",
            tau.name(),
            b.name(),
            d.name()
        ),
        check_bimonoid_morphism(tau, b, d, cert_bound)?,
    )?;
    require_pass(
        construction,
        &format!(
            "a comonoid morphism {}: {} -> {}",
            theta.name(),
            p.name(),
            q.name()
        ),
        check_comonoid_morphism(theta, p, q, cert_bound)?,
    )
}

/// The blockwise map with no certificate gate, for callers that have already
/// run [`certify_tau_theta`].
pub(crate) fn blockwise_unchecked(
    tau: Morphism,
    theta: Morphism,
    source: Species,
    target: Species,
) -> Morphism {
    Morphism {
        name: format!("f[{},{}]", tau.name(), theta.name()),
        source,
        target,
        kind: MorphKind::Blockwise {
            tau: Box::new(tau),
            theta: Box::new(theta),
        },
    }
}

/// Blockwise map between substitution bimonoids, `tau` on outer terms and
/// `theta` on inner terms. Refuses unless `tau` is certified (up to
/// `cert_bound`) as a restriction-intertwining bimonoid map b → d and
/// `theta` as a comonoid map p → q; the result is then a bimonoid morphism
/// 𝒯(b,p) → 𝒯(d,q) on the nose, which [`check_bimonoid_morphism`] re-verifies
/// at any bound on demand.
pub fn f_tau_theta(
    tau: Morphism,
    theta: Morphism,
    b: &Bimonoid,
    d: &Bimonoid,
    p: &Comonoid,
    q: &Comonoid,
    cert_bound: usize,
) -> Result<Morphism> {
    let name = format!("f[{},{}]", tau.name(), theta.name());
    let construction = format!(
        "{name}: T[{}]({}) -> T[{}]({})",
        b.name(),
        p.name(),
        d.name(),
        q.name()
    );
    certify_tau_theta(&construction, &tau, &theta, b, d, p, q, cert_bound)?;
    let source = Species::Substitute(Box::new(b.carrier()), Box::new(p.carrier()));
    let target = Species::Substitute(Box::new(d.carrier()), Box::new(q.carrier()));
    Ok(blockwise_unchecked(tau, theta, source, target))
}

/// The regrouping isomorphism between iterated substitution over (b, p) and
/// q, and substitution over b and p∘q, as a (forward, inverse) pair.
///
/// The hypotheses (b fit for substitution; p cocommutative and linearized)
/// are certified by building both substitution structures, so a refusal
/// names the failed hypothesis exactly as the structure constructors do.
pub fn assoc_iso(
    b: &Bimonoid,
    p: &Comonoid,
    q: &Comonoid,
    cert_bound: usize,
) -> Result<(Morphism, Morphism)> {
    let nested = Bimonoid::tee(
        Bimonoid::tee(b.clone(), p.clone(), cert_bound)?,
        q.clone(),
        cert_bound,
    )?;
    let flat = Bimonoid::tee(
        b.clone(),
        Comonoid::compose(p.clone(), q.clone(), cert_bound)?,
        cert_bound,
    )?;
    let source = nested.carrier();
    let target = flat.carrier();
    Ok((
        Morphism {
            name: "assoc_iso".into(),
            source: source.clone(),
            target: target.clone(),
            kind: MorphKind::Regroup { forward: true },
        },
        Morphism {
            name: "assoc_iso_inv".into(),
            source: target,
            target: source,
            kind: MorphKind::Regroup { forward: false },
        },
    ))
}

/// Comonoid embedding of the inner comonoid: a term on I becomes the one-
/// block decomposition {I}, decorated by the distinguished singleton term of
/// the outer species. Refuses when no such decoration exists.
pub fn embed_p(tee: &Bimonoid) -> Result<Morphism> {
    let BimonoidKind::Tee { b, p } = tee.kind() else {
        return Err(Error::Precondition(format!(
            "embeddings are defined for substitution bimonoids; {} is not one",
            tee.name()
        )));
    };
    let outer = b.carrier();
    distinguished_singleton(&outer, Label::block(canonical_labels(1)))?;
    Ok(Morphism {
        name: format!("embed_p({})", tee.name()),
        source: p.carrier(),
        target: tee.carrier().positive(),
        kind: MorphKind::EmbedInner { outer },
    })
}

/// Bimonoid embedding of the outer bimonoid: a term on I moves to the
/// partition of I into singletons, each block decorated by the distinguished
/// singleton term of the inner species.
pub fn embed_b(tee: &Bimonoid) -> Result<Morphism> {
    let BimonoidKind::Tee { b, p } = tee.kind() else {
        return Err(Error::Precondition(format!(
            "embeddings are defined for substitution bimonoids; {} is not one",
            tee.name()
        )));
    };
    let inner = p.carrier();
    distinguished_singleton(&inner, Label::atom("1"))?;
    Ok(Morphism {
        name: format!("embed_b({})", tee.name()),
        source: b.carrier(),
        target: tee.carrier(),
        kind: MorphKind::EmbedOuter { inner },
    })
}

/// Lumping map from poset-of-posets substitution terms to plain posets.
pub fn poset_collapse() -> Morphism {
    Morphism {
        name: "poset_collapse".into(),
        source: Species::Substitute(
            Box::new(Species::Poset),
            Box::new(Species::Poset.positive()),
        ),
        target: Species::Poset,
        kind: MorphKind::PosetCollapse,
    }
}

/// Evaluation of a block decomposition by the iterated product of `h`: outer
/// L prescribes the multiplication order; outer E needs `h` commutative
/// (certified up to `cert_bound`) for the canonical block order to be
/// well-defined.
pub fn product_eval(order: ZooKind, h: &Bimonoid, cert_bound: usize) -> Result<Morphism> {
    let name = format!("eval[{}]({})", order.species(), h.name());
    match order {
        ZooKind::L => {}
        ZooKind::E => certify_commutative(h, h.certs(), cert_bound, &name)?,
        other => {
            return Err(Error::Unsupported(format!(
                "block-product evaluation is defined for outer L or E, not {}",
                other.species()
            )))
        }
    }
    Ok(Morphism {
        name,
        source: Species::Substitute(
            Box::new(order.species()),
            Box::new(h.carrier().positive()),
        ),
        target: h.carrier(),
        kind: MorphKind::BlockProduct {
            order,
            h: h.clone(),
        },
    })
}

fn object_line(f: &Morphism, src: &str, tgt: &str) -> String {
    format!("{}: {} -> {}", f.name(), src, tgt)
}

/// Images are valid basis combinations of the target species and commute
/// with relabeling along adjacent transpositions of canonical labels.
pub fn check_naturality(f: &Morphism, max_n: usize) -> Result<Report> {
    let items: Vec<LabelSet> = (0..=max_n).map(canonical_labels).collect();
    let object = format!("{f}");
    let source = f.source().clone();
    let target = f.target().clone();
    let out = exec::scan(&items, |ground| {
        let labels: Vec<Label> = ground.iter().cloned().collect();
        let mut count = 0usize;
        for x in source.basis(ground) {
            let image = f.apply(&x)?;
            for (t, _) in image.iter() {
                count += 1;
                if target.validate_term(ground, t).is_err() {
                    return Ok((
                        count,
                        Some(Witness {
                            ground: ground.to_string(),
                            instance: format!("x={x}"),
                            lhs: t.to_string(),
                            rhs: format!("a basis term of {target} on {ground}"),
                        }),
                    ));
                }
            }
            for w in labels.windows(2) {
                count += 1;
                let sigma = swap_two(ground, &w[0], &w[1]);
                let lhs = f.apply(&x.relabel(&sigma)?)?;
                let rhs = image.try_map_terms(|t| t.relabel(&sigma))?;
                if lhs != rhs {
                    return Ok((
                        count,
                        Some(Witness {
                            ground: ground.to_string(),
                            instance: format!("σ swaps {} and {}, x={x}", w[0], w[1]),
                            lhs: lhs.to_string(),
                            rhs: rhs.to_string(),
                        }),
                    ));
                }
            }
        }
        Ok((count, None))
    })?;
    Ok(report("naturality", object, max_n, out))
}

/// f(μ(x, y)) = μ(f(x), f(y)) over every decomposition, plus f(1) = 1.
pub fn check_monoid_morphism(
    f: &Morphism,
    src: &dyn BimonoidOps,
    tgt: &dyn BimonoidOps,
    max_n: usize,
) -> Result<Report> {
    let items = pairs(max_n, false);
    let carrier = src.carrier();
    let object = object_line(f, &src.name(), &tgt.name());
    let out = exec::scan(&items, |(s, t)| {
        let ground = s.union(t);
        let mut count = 0usize;
        if s.is_empty() && t.is_empty() {
            count += 1;
            let lhs = f.apply(&src.unit_term())?;
            let rhs = LinComb::unit(tgt.unit_term());
            if lhs != rhs {
                return Ok((
                    count,
                    Some(Witness {
                        ground: ground.to_string(),
                        instance: "f(unit)".into(),
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                    }),
                ));
            }
        }
        for x in carrier.basis(s) {
            for y in carrier.basis(t) {
                count += 1;
                let lhs = f.apply_lin(&src.mu(&x, &y)?)?;
                let rhs = f.apply(&x)?.bind(|fx| {
                    f.apply(&y)?.bind(|fy| tgt.mu(fx, fy))
                })?;
                if lhs != rhs {
                    return Ok((
                        count,
                        Some(Witness {
                            ground: ground.to_string(),
                            instance: format!("S={s}, T={t}, x={x}, y={y}"),
                            lhs: lhs.to_string(),
                            rhs: rhs.to_string(),
                        }),
                    ));
                }
            }
        }
        Ok((count, None))
    })?;
    Ok(report("monoid morphism", object, max_n, out))
}

/// (f ⊗ f) ∘ Δ_{S,T} = Δ_{S,T} ∘ f on every basis term. Proper splits only
/// when either side is a positive comonoid.
pub fn check_comonoid_morphism(
    f: &Morphism,
    src: &dyn ComonoidOps,
    tgt: &dyn ComonoidOps,
    max_n: usize,
) -> Result<Report> {
    let items = pairs(max_n, src.proper_only() || tgt.proper_only());
    let carrier = src.carrier();
    let object = object_line(f, &src.name(), &tgt.name());
    let out = exec::scan(&items, |(s, t)| {
        let ground = s.union(t);
        let mut count = 0usize;
        for x in carrier.basis(&ground) {
            count += 1;
            let lhs = f.apply(&x)?.bind(|y| tgt.delta(s, t, y))?;
            let rhs = src
                .delta(s, t, &x)?
                .bind(|(u, v)| Ok::<_, Error>(tensor2(&f.apply(u)?, &f.apply(v)?)))?;
            if lhs != rhs {
                return Ok((
                    count,
                    Some(Witness {
                        ground: ground.to_string(),
                        instance: format!("S={s}, T={t}, x={x}"),
                        lhs: pair_string(&lhs),
                        rhs: pair_string(&rhs),
                    }),
                ));
            }
        }
        Ok((count, None))
    })?;
    Ok(report("comonoid morphism", object, max_n, out))
}

/// Both intertwining laws: μ with unit, then Δ.
pub fn check_bimonoid_morphism(
    f: &Morphism,
    src: &dyn BimonoidOps,
    tgt: &dyn BimonoidOps,
    max_n: usize,
) -> Result<Report> {
    let mu = check_monoid_morphism(f, src, tgt, max_n)?;
    if !mu.passed() {
        return Ok(Report {
            law: "bimonoid morphism".into(),
            ..mu
        });
    }
    let delta = check_comonoid_morphism(f, src, tgt, max_n)?;
    Ok(Report {
        law: "bimonoid morphism".into(),
        object: delta.object,
        max_n,
        instances: mu.instances + delta.instances,
        witness: delta.witness,
    })
}

/// f is a linearization of a set map (every image a single basis term) that
/// commutes with the restriction maps read off both coproducts.
pub fn check_restriction_intertwiner(
    f: &Morphism,
    src: &dyn ComonoidOps,
    tgt: &dyn ComonoidOps,
    max_n: usize,
) -> Result<Report> {
    let mut items: Vec<(LabelSet, LabelSet)> = Vec::new();
    for n in 0..=max_n {
        let ground = canonical_labels(n);
        for u in subsets(&ground) {
            if u.is_empty() && (src.proper_only() || tgt.proper_only()) {
                continue;
            }
            items.push((ground.clone(), u));
        }
    }
    let carrier = src.carrier();
    let object = object_line(f, &src.name(), &tgt.name());
    let out = exec::scan(&items, |(ground, u)| {
        let mut count = 0usize;
        for x in carrier.basis(ground) {
            count += 1;
            let image = f.apply(&x)?;
            let Some(y) = image.as_single_unit() else {
                return Ok((
                    count,
                    Some(Witness {
                        ground: ground.to_string(),
                        instance: format!("x={x} (linearized step)"),
                        lhs: image.to_string(),
                        rhs: "a single basis term".into(),
                    }),
                ));
            };
            count += 1;
            let lhs = f.apply(&factor_left(src, u, &x)?)?;
            let rhs = LinComb::unit(factor_left(tgt, u, y)?);
            if lhs != rhs {
                return Ok((
                    count,
                    Some(Witness {
                        ground: ground.to_string(),
                        instance: format!("U={u}, x={x}"),
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                    }),
                ));
            }
        }
        Ok((count, None))
    })?;
    Ok(report("restriction intertwining", object, max_n, out))
}

/// Rank of the image of the degree-n basis under f.
pub fn image_rank(f: &Morphism, ground: &LabelSet) -> Result<usize> {
    let mut span = Span::new();
    for x in f.source().basis(ground) {
        span.insert(f.apply(&x)?);
    }
    Ok(span.rank())
}

fn rank_report(f: &Morphism, max_n: usize, law: &'static str, against_target: bool) -> Result<Report> {
    let items: Vec<LabelSet> = (0..=max_n).map(canonical_labels).collect();
    let object = format!("{f}");
    let out = exec::scan(&items, |ground| {
        let count = f.source().dim(ground) + 1;
        let rank = image_rank(f, ground)?;
        let dim = if against_target {
            f.target().dim(ground)
        } else {
            f.source().dim(ground)
        };
        if rank != dim {
            return Ok((
                count,
                Some(Witness {
                    ground: ground.to_string(),
                    instance: format!("degree {}", ground.len()),
                    lhs: format!("image rank {rank}"),
                    rhs: format!("dimension {dim}"),
                }),
            ));
        }
        Ok((count, None))
    })?;
    Ok(report(law, object, max_n, out))
}

/// Injectivity by exact rank: image rank equals the source dimension in
/// every degree ≤ max_n.
pub fn check_injective(f: &Morphism, max_n: usize) -> Result<Report> {
    rank_report(f, max_n, "injectivity", false)
}

/// Surjectivity by exact rank: image rank equals the target dimension in
/// every degree ≤ max_n.
pub fn check_surjective(f: &Morphism, max_n: usize) -> Result<Report> {
    rank_report(f, max_n, "surjectivity", true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::Fault;
    use crate::term::Graph;

    fn hopf(kind: ZooKind) -> Bimonoid {
        Bimonoid::zoo(kind)
    }

    fn positive(kind: ZooKind) -> Comonoid {
        Comonoid::positive(hopf(kind))
    }

    fn ls(s: &str) -> LabelSet {
        LabelSet::from_atoms(s.chars().map(|c| c.to_string()))
    }

    fn order(s: &str) -> Term {
        Term::Order(s.chars().map(|c| Label::atom(c.to_string())).collect())
    }

    fn block(s: &str) -> Label {
        Label::block(ls(s))
    }

    #[test]
    fn blockwise_maps_apply_tau_outside_and_theta_inside() {
        let f = f_tau_theta(
            Morphism::zoo(ZooMap::TauGE),
            Morphism::zoo(ZooMap::TauLE),
            &hopf(ZooKind::G),
            &hopf(ZooKind::E),
            &positive(ZooKind::L),
            &positive(ZooKind::E),
            3,
        )
        .unwrap();
        let outer = Term::Graph(
            Graph::new(
                LabelSet::new([block("ab"), block("c")]),
                [(block("ab"), block("c"))],
            )
            .unwrap(),
        );
        let x = Term::Composite(
            Composite::new(outer, [(ls("ab"), order("ba")), (ls("c"), order("c"))]).unwrap(),
        );
        let expected = Term::Composite(
            Composite::new(
                Term::Star(LabelSet::new([block("ab"), block("c")])),
                [
                    (ls("ab"), Term::Star(ls("ab"))),
                    (ls("c"), Term::Star(ls("c"))),
                ],
            )
            .unwrap(),
        );
        assert_eq!(f.apply(&x).unwrap(), LinComb::unit(expected));
    }

    #[test]
    fn graph_to_set_collapse_is_a_surjective_hopf_morphism() {
        let f = f_tau_theta(
            Morphism::zoo(ZooMap::TauGE),
            Morphism::zoo(ZooMap::TauLE),
            &hopf(ZooKind::G),
            &hopf(ZooKind::E),
            &positive(ZooKind::L),
            &positive(ZooKind::E),
            3,
        )
        .unwrap();
        let src = Bimonoid::tee(hopf(ZooKind::G), positive(ZooKind::L), 3).unwrap();
        let tgt = Bimonoid::tee(hopf(ZooKind::E), positive(ZooKind::E), 3).unwrap();
        assert!(check_bimonoid_morphism(&f, &src, &tgt, 3).unwrap().passed());
        assert!(check_naturality(&f, 3).unwrap().passed());
        assert!(check_surjective(&f, 3).unwrap().passed());
        let inj = check_injective(&f, 3).unwrap();
        let w = inj.witness.expect("orders of two labels already collide");
        assert_eq!(w.instance, "degree 2");
    }

    #[test]
    fn forgetting_the_block_order_maps_ordered_onto_unordered_decompositions() {
        let f = f_tau_theta(
            Morphism::zoo(ZooMap::TauLE),
            Morphism::identity(Species::G.positive()),
            &hopf(ZooKind::L),
            &hopf(ZooKind::E),
            &positive(ZooKind::G),
            &positive(ZooKind::G),
            3,
        )
        .unwrap();
        let src = Bimonoid::tee(hopf(ZooKind::L), positive(ZooKind::G), 3).unwrap();
        let tgt = Bimonoid::tee(hopf(ZooKind::E), positive(ZooKind::G), 3).unwrap();
        assert!(check_bimonoid_morphism(&f, &src, &tgt, 3).unwrap().passed());
        assert!(check_surjective(&f, 3).unwrap().passed());
        assert!(!check_injective(&f, 3).unwrap().passed());
    }

    #[test]
    fn average_of_chains_is_a_comonoid_map_but_not_a_restriction_intertwiner() {
        let lambda = Morphism::zoo(ZooMap::Lambda);
        let e = hopf(ZooKind::E);
        let pos = hopf(ZooKind::Poset);
        assert!(check_comonoid_morphism(&lambda, &e, &pos, 3)
            .unwrap()
            .passed());
        let rep = check_restriction_intertwiner(&lambda, &e, &pos, 3).unwrap();
        let w = rep.witness.expect("the two-label image is a proper average");
        assert_eq!(w.ground, "{1,2}");
        assert_eq!(w.rhs, "a single basis term");

        let alpha = Morphism::zoo(ZooMap::Alpha);
        assert!(check_restriction_intertwiner(&alpha, &e, &pos, 3)
            .unwrap()
            .passed());
        assert!(check_bimonoid_morphism(&alpha, &e, &pos, 3)
            .unwrap()
            .passed());

        // As an outer map, lambda is refused before any blockwise structure
        // is built.
        let err = f_tau_theta(
            Morphism::zoo(ZooMap::Lambda),
            Morphism::identity(Species::E.positive()),
            &e,
            &pos,
            &positive(ZooKind::E),
            &positive(ZooKind::E),
            3,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MissingHypothesis { .. }));
        assert!(err.to_string().contains("restriction-intertwining"));
    }

    #[test]
    fn antichain_decoration_embeds_set_partitions_into_poset_decorated_ones() {
        let f = f_tau_theta(
            Morphism::zoo(ZooMap::Alpha),
            Morphism::identity(Species::E.positive()),
            &hopf(ZooKind::E),
            &hopf(ZooKind::Poset),
            &positive(ZooKind::E),
            &positive(ZooKind::E),
            3,
        )
        .unwrap();
        let src = Bimonoid::tee(hopf(ZooKind::E), positive(ZooKind::E), 3).unwrap();
        let tgt = Bimonoid::tee(hopf(ZooKind::Poset), positive(ZooKind::E), 3).unwrap();
        assert!(check_bimonoid_morphism(&f, &src, &tgt, 3).unwrap().passed());
        assert!(check_injective(&f, 3).unwrap().passed());
        assert!(!check_surjective(&f, 3).unwrap().passed());
    }

    #[test]
    fn poset_collapse_lumps_blocks() {
        let collapse = poset_collapse();

        // Unrelated blocks, chains inside: the disjoint union of the chains.
        let chains = Term::Composite(
            Composite::new(
                Term::Poset(Poset::antichain(LabelSet::new([block("ab"), block("c")]))),
                [
                    (ls("ab"), Term::Poset(Poset::chain(&[Label::atom("a"), Label::atom("b")]))),
                    (ls("c"), Term::Poset(Poset::antichain(ls("c")))),
                ],
            )
            .unwrap(),
        );
        let expected = Term::Poset(
            Poset::new(ls("abc"), [(Label::atom("a"), Label::atom("b"))]).unwrap(),
        );
        assert_eq!(collapse.apply(&chains).unwrap(), LinComb::unit(expected));

        // Comparable blocks, antichains inside: everything in the lower block
        // sits below everything in the upper one.
        let stacked = Term::Composite(
            Composite::new(
                Term::Poset(Poset::chain(&[block("ab"), block("c")])),
                [
                    (ls("ab"), Term::Poset(Poset::antichain(ls("ab")))),
                    (ls("c"), Term::Poset(Poset::antichain(ls("c")))),
                ],
            )
            .unwrap(),
        );
        let expected = Term::Poset(
            Poset::new(
                ls("abc"),
                [
                    (Label::atom("a"), Label::atom("c")),
                    (Label::atom("b"), Label::atom("c")),
                ],
            )
            .unwrap(),
        );
        assert_eq!(collapse.apply(&stacked).unwrap(), LinComb::unit(expected));
    }

    #[test]
    fn poset_collapses_are_surjections_splitting_the_poset_embedding() {
        let pos = hopf(ZooKind::Poset);
        let o1 = Bimonoid::tee(pos.clone(), positive(ZooKind::E), 3).unwrap();
        let q = Bimonoid::tee(pos.clone(), positive(ZooKind::Poset), 3).unwrap();
        let f_alpha = f_tau_theta(
            Morphism::identity(Species::Poset),
            Morphism::zoo(ZooMap::Alpha),
            &pos,
            &pos,
            &positive(ZooKind::E),
            &positive(ZooKind::Poset),
            3,
        )
        .unwrap();
        let f_lambda = f_tau_theta(
            Morphism::identity(Species::Poset),
            Morphism::zoo(ZooMap::Lambda),
            &pos,
            &pos,
            &positive(ZooKind::E),
            &positive(ZooKind::Poset),
            3,
        )
        .unwrap();
        for mid in [f_alpha, f_lambda] {
            assert!(check_bimonoid_morphism(&mid, &o1, &q, 3).unwrap().passed());
            let surj = poset_collapse().after(mid);
            assert!(check_bimonoid_morphism(&surj, &o1, &pos, 3).unwrap().passed());
            assert!(check_surjective(&surj, 3).unwrap().passed());

            // Composing with the embedding of posets recovers the identity.
            let split = surj.after(embed_b(&o1).unwrap());
            for n in 0..=3 {
                let ground = canonical_labels(n);
                for x in Species::Poset.basis(&ground) {
                    assert_eq!(split.apply(&x).unwrap(), LinComb::unit(x));
                }
            }
        }
    }

    #[test]
    fn regrouping_nested_decompositions_is_a_bimonoid_isomorphism() {
        let (fwd, inv) = assoc_iso(
            &hopf(ZooKind::E),
            &positive(ZooKind::E),
            &positive(ZooKind::E),
            3,
        )
        .unwrap();
        let nested = Bimonoid::tee(
            Bimonoid::tee(hopf(ZooKind::E), positive(ZooKind::E), 3).unwrap(),
            positive(ZooKind::E),
            3,
        )
        .unwrap();
        let flat = Bimonoid::tee(
            hopf(ZooKind::E),
            Comonoid::compose(positive(ZooKind::E), positive(ZooKind::E), 3).unwrap(),
            3,
        )
        .unwrap();
        assert!(check_bimonoid_morphism(&fwd, &nested, &flat, 3)
            .unwrap()
            .passed());
        for n in 0..=3 {
            let ground = canonical_labels(n);
            assert_eq!(fwd.source().dim(&ground), fwd.target().dim(&ground));
            for x in fwd.source().basis(&ground) {
                let image = fwd.apply(&x).unwrap();
                let y = image.as_single_unit().expect("regrouping relabels a basis");
                fwd.target().validate_term(&ground, y).unwrap();
                assert_eq!(inv.apply(y).unwrap(), LinComb::unit(x));
            }
        }
        assert!(check_injective(&fwd, 3).unwrap().passed());
        assert!(check_surjective(&fwd, 3).unwrap().passed());
    }

    #[test]
    fn regrouping_over_an_ordered_outer_bimonoid() {
        let (fwd, inv) = assoc_iso(
            &hopf(ZooKind::L),
            &positive(ZooKind::E),
            &positive(ZooKind::E),
            3,
        )
        .unwrap();
        for n in 0..=3 {
            let ground = canonical_labels(n);
            assert_eq!(fwd.source().dim(&ground), fwd.target().dim(&ground));
            for x in fwd.source().basis(&ground) {
                let image = fwd.apply(&x).unwrap();
                let y = image.as_single_unit().unwrap();
                assert_eq!(inv.apply(y).unwrap(), LinComb::unit(x));
            }
        }
    }

    #[test]
    fn regrouping_refuses_a_non_cocommutative_inner_comonoid() {
        let skew = Comonoid::positive(Bimonoid::corrupted(hopf(ZooKind::L), Fault::DeltaSkew));
        let err = assoc_iso(&hopf(ZooKind::E), &skew, &positive(ZooKind::E), 3).unwrap_err();
        assert!(matches!(err, Error::MissingHypothesis { .. }));
        assert!(err.to_string().contains("cocommutative"));
    }

    #[test]
    fn outer_embedding_decorates_singleton_blocks() {
        let tee = Bimonoid::tee(hopf(ZooKind::G), positive(ZooKind::L), 3).unwrap();
        let f = embed_b(&tee).unwrap();
        let g = Term::Graph(
            Graph::new(ls("ab"), [(Label::atom("a"), Label::atom("b"))]).unwrap(),
        );
        let expected = Term::Composite(
            Composite::new(
                Term::Graph(
                    Graph::new(
                        LabelSet::new([block("a"), block("b")]),
                        [(block("a"), block("b"))],
                    )
                    .unwrap(),
                ),
                [(ls("a"), order("a")), (ls("b"), order("b"))],
            )
            .unwrap(),
        );
        assert_eq!(f.apply(&g).unwrap(), LinComb::unit(expected));
        assert!(check_bimonoid_morphism(&f, &hopf(ZooKind::G), &tee, 3)
            .unwrap()
            .passed());
        assert!(check_injective(&f, 3).unwrap().passed());
    }

    #[test]
    fn inner_embedding_uses_a_one_block_decomposition() {
        let tee = Bimonoid::tee(hopf(ZooKind::L), positive(ZooKind::G), 3).unwrap();
        let f = embed_p(&tee).unwrap();
        let g = Term::Graph(Graph::discrete(ls("ab")));
        let expected = Term::Composite(
            Composite::new(Term::Order(vec![block("ab")]), [(ls("ab"), g.clone())]).unwrap(),
        );
        assert_eq!(f.apply(&g).unwrap(), LinComb::unit(expected));
        let src = positive(ZooKind::G);
        let tgt = Comonoid::positive(tee.clone());
        assert!(check_comonoid_morphism(&f, &src, &tgt, 3).unwrap().passed());
        assert!(check_injective(&f, 3).unwrap().passed());
        assert!(f.apply(&Term::Graph(Graph::discrete(LabelSet::empty()))).is_err());
    }

    #[test]
    fn embeddings_refuse_ambiguous_or_missing_decorations() {
        // Two singleton basis terms on the outer species: no canonical
        // decoration for the one-block embedding.
        let doubled = Bimonoid::tee(
            Bimonoid::cauchy(hopf(ZooKind::E), hopf(ZooKind::E)),
            positive(ZooKind::E),
            3,
        )
        .unwrap();
        assert!(matches!(
            embed_p(&doubled).unwrap_err(),
            Error::MissingCapability(_)
        ));
        // Embeddings only make sense into substitution objects.
        assert!(matches!(
            embed_b(&hopf(ZooKind::G)).unwrap_err(),
            Error::Precondition(_)
        ));
    }

    #[test]
    fn block_products_multiply_in_the_prescribed_order() {
        let ev_g = product_eval(ZooKind::L, &hopf(ZooKind::G), 3).unwrap();
        let blocks = Term::Composite(
            Composite::new(
                Term::Order(vec![block("ab"), block("c")]),
                [
                    (
                        ls("ab"),
                        Term::Graph(
                            Graph::new(ls("ab"), [(Label::atom("a"), Label::atom("b"))]).unwrap(),
                        ),
                    ),
                    (ls("c"), Term::Graph(Graph::discrete(ls("c")))),
                ],
            )
            .unwrap(),
        );
        let expected = Term::Graph(
            Graph::new(ls("abc"), [(Label::atom("a"), Label::atom("b"))]).unwrap(),
        );
        assert_eq!(ev_g.apply(&blocks).unwrap(), LinComb::unit(expected));

        let ev_l = product_eval(ZooKind::L, &hopf(ZooKind::L), 3).unwrap();
        let ordered = Term::Composite(
            Composite::new(
                Term::Order(vec![block("ab"), block("c")]),
                [(ls("ab"), order("ab")), (ls("c"), order("c"))],
            )
            .unwrap(),
        );
        assert_eq!(ev_l.apply(&ordered).unwrap(), LinComb::unit(order("abc")));

        let ev_e = product_eval(ZooKind::E, &hopf(ZooKind::E), 3).unwrap();
        let partition = Term::Composite(
            Composite::new(
                Term::Star(LabelSet::new([block("ab"), block("c")])),
                [
                    (ls("ab"), Term::Star(ls("ab"))),
                    (ls("c"), Term::Star(ls("c"))),
                ],
            )
            .unwrap(),
        );
        assert_eq!(
            ev_e.apply(&partition).unwrap(),
            LinComb::unit(Term::Star(ls("abc")))
        );
    }

    #[test]
    fn block_product_evaluations_are_bimonoid_morphisms() {
        let cases = [
            (ZooKind::L, ZooKind::G),
            (ZooKind::L, ZooKind::L),
            (ZooKind::E, ZooKind::E),
        ];
        for (outer, inner) in cases {
            let h = hopf(inner);
            let ev = product_eval(outer, &h, 3).unwrap();
            let src = Bimonoid::tee(hopf(outer), Comonoid::positive(h.clone()), 3).unwrap();
            assert!(
                check_bimonoid_morphism(&ev, &src, &h, 3).unwrap().passed(),
                "eval over {:?}({:?})",
                outer,
                inner
            );
        }
    }

    #[test]
    fn unordered_block_products_need_a_commutative_target() {
        let err = product_eval(ZooKind::E, &hopf(ZooKind::L), 3).unwrap_err();
        assert!(matches!(err, Error::MissingHypothesis { .. }));
        assert!(err.to_string().contains("commutative"));
        assert!(matches!(
            product_eval(ZooKind::G, &hopf(ZooKind::E), 3).unwrap_err(),
            Error::Unsupported(_)
        ));
    }

    #[test]
    fn custom_maps_plug_into_the_checkers() {
        let rev = Morphism::from_fn("reverse", Species::L, Species::L, |x| {
            let Term::Order(ls) = x else {
                return Err(Error::Domain(format!("expected an order, got {x}")));
            };
            Ok(LinComb::unit(Term::Order(
                ls.iter().rev().cloned().collect(),
            )))
        });
        assert!(check_naturality(&rev, 3).unwrap().passed());
        assert!(check_injective(&rev, 3).unwrap().passed());
        let l = hopf(ZooKind::L);
        // Reversal is an anti-automorphism, not a monoid morphism.
        assert!(!check_monoid_morphism(&rev, &l, &l, 3).unwrap().passed());
    }
}
