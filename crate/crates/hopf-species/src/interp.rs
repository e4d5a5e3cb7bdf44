//! One-parameter family interpolating between two substitution bimonoids.
//!
//! For a threshold r ≥ 1, the ambient bimonoid is the Cauchy product
//! 𝒯(b,p) · 𝒯(d,q_{<r}). Its relation span migrates every block of size
//! below r from the first coordinate into the second, through an outer map
//! τ: b → d and an inner map θ: p → q. The quotient is again a bimonoid;
//! it is computed here on the sub-species of decompositions whose first
//! coordinate has only blocks of size ≥ r, via the projection [`RTee::reduce`].
//!
//! At r = 1 nothing is small and the quotient is 𝒯(b,p) itself; once r
//! exceeds the degree everything is small and the quotient is 𝒯(d,q).
//! The port maps realize the interpolation: `port` presents the quotient
//! from 𝒯(b,p), `port_upper` maps it onward to 𝒯(d,q), and their
//! composite is the size-graded map [`hat_f`].

use crate::error::{Error, Result};
use crate::exec;
use crate::label::{canonical_labels, Label, LabelSet};
use crate::linalg::{self, Span};
use crate::lincomb::{pair_string, tensor2, LinComb};
use crate::morphism::{blockwise_unchecked, certify_tau_theta, Morphism};
use crate::species::{Species, Trunc};
use crate::structures::{certify_commutative, Bimonoid, BimonoidOps, Comonoid, ComonoidOps};
use crate::term::{Composite, Term};
use crate::verify::{pairs, report, Report, Witness};
use serde::Serialize;

/// The quotient of 𝒯(b,p) · 𝒯(d,q_{<r}) by the block-migration relations.
///
/// Implements [`BimonoidOps`] with the quotient structure: products and
/// coproduct factors are computed in the ambient bimonoid and projected back
/// onto the carrier with [`RTee::reduce`]. All generic law checkers and the
/// antipode engine therefore apply to the quotient directly.
#[derive(Clone)]
pub struct RTee {
    r: usize,
    name: String,
    /// 𝒯(b,p), the first ambient coordinate and the source of `port`.
    tee_bp: Bimonoid,
    /// 𝒯(d,q) over the full q, the target of `port_upper` and the monoid
    /// in which migrated material multiplies.
    tee_dq: Bimonoid,
    /// 𝒯(b,p) · 𝒯(d,q_{<r}).
    ambient: Bimonoid,
    /// Decompositions with all first-coordinate blocks of size ≥ r.
    carrier: Species,
    /// Single-step migration map: τ on the whole outer term, θ blockwise.
    plain: Morphism,
    /// Size-graded migration map used by the ports.
    hat: Morphism,
    tau_name: String,
    theta_name: String,
}

impl RTee {
    /// Builds the quotient object, certifying every hypothesis up to
    /// `cert_bound`: the substitution gates on (b,p) and (d,q),
    /// commutativity of d, and the blockwise-map certificates for τ and θ.
    pub fn new(
        r: usize,
        b: Bimonoid,
        d: Bimonoid,
        p: Comonoid,
        q: Comonoid,
        tau: Morphism,
        theta: Morphism,
        cert_bound: usize,
    ) -> Result<RTee> {
        let name = family_name(r, &b, &d, &p, &q);
        certify_commutative(&d, d.certs(), cert_bound, &name)?;
        certify_tau_theta(&name, &tau, &theta, &b, &d, &p, &q, cert_bound)?;
        RTee::new_unchecked(r, b, d, p, q, tau, theta, cert_bound)
    }

    /// Builds the quotient object without the commutativity and τ/θ
    /// certificates, so that injected faults can be driven through
    /// [`RTee::check_ideal`] and [`RTee::check_coideal`]. The substitution
    /// gates on (b,p) and (d,q) still run.
    pub fn new_unchecked(
        r: usize,
        b: Bimonoid,
        d: Bimonoid,
        p: Comonoid,
        q: Comonoid,
        tau: Morphism,
        theta: Morphism,
        cert_bound: usize,
    ) -> Result<RTee> {
        let name = family_name(r, &b, &d, &p, &q);
        if r == 0 {
            return Err(Error::Precondition(format!(
                "{name}: the threshold must be at least 1"
            )));
        }
        let tee_bp = Bimonoid::tee(b.clone(), p.clone(), cert_bound)?;
        let tee_dq = Bimonoid::tee(d.clone(), q.clone(), cert_bound)?;
        let truncated = Bimonoid::tee(d.clone(), Comonoid::trunc_below(q.clone(), r), cert_bound)?;
        let ambient = Bimonoid::cauchy(tee_bp.clone(), truncated);
        let carrier = Species::Cauchy(
            Box::new(Species::Substitute(
                Box::new(b.carrier()),
                Box::new(Species::Truncate(Box::new(p.carrier()), Trunc::AtLeast(r))),
            )),
            Box::new(Species::Substitute(
                Box::new(d.carrier()),
                Box::new(Species::Truncate(Box::new(q.carrier()), Trunc::Below(r))),
            )),
        );
        let plain = blockwise_unchecked(
            tau.clone(),
            theta.clone(),
            tee_bp.carrier(),
            tee_dq.carrier(),
        );
        let tau_name = tau.name().to_string();
        let theta_name = theta.name().to_string();
        let hat = make_hat(tau, theta, b, d, tee_bp.carrier(), tee_dq.carrier());
        Ok(RTee {
            r,
            name,
            tee_bp,
            tee_dq,
            ambient,
            carrier,
            plain,
            hat,
            tau_name,
            theta_name,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn ambient(&self) -> &Bimonoid {
        &self.ambient
    }

    pub fn tee_bp(&self) -> &Bimonoid {
        &self.tee_bp
    }

    pub fn tee_dq(&self) -> &Bimonoid {
        &self.tee_dq
    }

    /// The size-graded migration map 𝒯(b,p) → 𝒯(d,q).
    pub fn hat(&self) -> &Morphism {
        &self.hat
    }

    /// Moves the named blocks of the first coordinate into the second:
    /// Δ splits them off, τ and θ transport them, and the result multiplies
    /// onto the existing second coordinate. Every block in `batch` must be a
    /// first-coordinate block of size below the threshold.
    pub fn migrate(&self, x: &Term, batch: &[LabelSet]) -> Result<LinComb<Term>> {
        let (u, v) = split_cauchy(x)?;
        let Term::Composite(c) = u else {
            return Err(Error::Domain(format!(
                "expected a decomposition in the first coordinate, got {u}"
            )));
        };
        if batch.is_empty() {
            return Ok(LinComb::unit(x.clone()));
        }
        let partition = c.partition();
        for block in batch {
            if !partition.blocks().contains(block) {
                return Err(Error::Domain(format!(
                    "{block} is not a block of the first coordinate of {x}"
                )));
            }
            if block.len() >= self.r {
                return Err(Error::Domain(format!(
                    "{block} has size {} and cannot migrate below threshold {}",
                    block.len(),
                    self.r
                )));
            }
        }
        let moving = batch
            .iter()
            .fold(LabelSet::empty(), |acc, b| acc.union(b));
        let staying = u.support().minus(&moving);
        let split = self.tee_bp.delta(&staying, &moving, u)?;
        let Some((kept, moved)) = split.as_single_unit() else {
            return Err(Error::MissingCapability(format!(
                "the split of {u} along its own blocks is not a single tensor"
            )));
        };
        let second = self.plain.apply(moved)?.bind(|m| self.tee_dq.mu(m, v))?;
        Ok(second.map_terms(|w| Term::Cauchy(Box::new(kept.clone()), Box::new(w.clone()))))
    }

    /// Canonical coset representative: migrates every small block of the
    /// first coordinate in one step. Fixes carrier terms.
    pub fn reduce_term(&self, x: &Term) -> Result<LinComb<Term>> {
        let (u, _) = split_cauchy(x)?;
        let Term::Composite(c) = u else {
            return Err(Error::Domain(format!(
                "expected a decomposition in the first coordinate, got {u}"
            )));
        };
        let (_, small) = c.partition().large_small_split(self.r);
        if small.is_empty() {
            return Ok(LinComb::unit(x.clone()));
        }
        self.migrate(x, small.blocks())
    }

    /// Linear extension of [`RTee::reduce_term`]; the projection of the
    /// ambient space onto the carrier along the relation span.
    pub fn reduce(&self, v: &LinComb<Term>) -> Result<LinComb<Term>> {
        v.bind(|t| self.reduce_term(t))
    }

    /// The relation span on `ground`: one generator x − reduce(x) for each
    /// ambient basis term x whose first coordinate has a small block.
    pub fn generators(&self, ground: &LabelSet) -> Result<Vec<LinComb<Term>>> {
        let mut out = Vec::new();
        for x in self.ambient.carrier().basis(ground) {
            let reduced = self.reduce_term(&x)?;
            let diff = LinComb::unit(x) - reduced;
            if !diff.is_zero() {
                out.push(diff);
            }
        }
        Ok(out)
    }

    /// Checks that the relation span absorbs ambient products on both sides,
    /// exhaustively over decompositions with at most `max_n` labels.
    pub fn check_ideal(&self, max_n: usize) -> Result<Report> {
        let spans = self.relation_spans(max_n)?;
        let items = pairs(max_n, false);
        let carrier = self.ambient.carrier();
        let out = exec::scan(&items, |(s, t)| {
            let ground = s.union(t);
            let span = &spans[ground.len()];
            let mut count = 0usize;
            for x in carrier.basis(s) {
                for (i, g) in self.generators(t)?.iter().enumerate() {
                    for (label, product) in [
                        ("x·g", g.bind(|gt| self.ambient.mu(&x, gt))?),
                        ("g·x", g.bind(|gt| self.ambient.mu(gt, &x))?),
                    ] {
                        count += 1;
                        if !span.contains(&product) {
                            return Ok((
                                count,
                                Some(Witness {
                                    ground: ground.to_string(),
                                    instance: format!(
                                        "S={s}, T={t}, x={x}, generator #{i} on T, product {label}"
                                    ),
                                    lhs: product.to_string(),
                                    rhs: "an element of the relation span".into(),
                                }),
                            ));
                        }
                    }
                }
            }
            Ok((count, None))
        })?;
        Ok(report("ideal", self.name.clone(), max_n, out))
    }

    /// Checks that every coproduct of a relation lands in
    /// ambient ⊗ relations + relations ⊗ ambient, exhaustively over
    /// decompositions with at most `max_n` labels.
    pub fn check_coideal(&self, max_n: usize) -> Result<Report> {
        let items = pairs(max_n, false);
        let carrier = self.ambient.carrier();
        let out = exec::scan(&items, |(s, t)| {
            let ground = s.union(t);
            let mut span: Span<(Term, Term)> = Span::new();
            for a in carrier.basis(s) {
                for g in self.generators(t)? {
                    span.insert(g.map_terms(|gt| (a.clone(), gt.clone())));
                }
            }
            for g in self.generators(s)? {
                for a in carrier.basis(t) {
                    span.insert(g.map_terms(|gt| (gt.clone(), a.clone())));
                }
            }
            let mut count = 0usize;
            for (i, g) in self.generators(&ground)?.iter().enumerate() {
                count += 1;
                let split = g.bind(|gt| self.ambient.delta(s, t, gt))?;
                if !span.contains(&split) {
                    return Ok((
                        count,
                        Some(Witness {
                            ground: ground.to_string(),
                            instance: format!("S={s}, T={t}, generator #{i}"),
                            lhs: pair_string(&split),
                            rhs: "an element of ambient⊗relations + relations⊗ambient".into(),
                        }),
                    ));
                }
            }
            Ok((count, None))
        })?;
        Ok(report("coideal", self.name.clone(), max_n, out))
    }

    /// Dimension table of the quotient, degree by degree: the ambient
    /// dimension, the rank of the relation span, and the carrier dimension.
    /// [`QuotientRow::holds`] states that the first equals the sum of the
    /// other two, so the carrier is a complement of the relations.
    pub fn quotient_dims(&self, max_n: usize) -> Result<Vec<QuotientRow>> {
        (0..=max_n)
            .map(|n| {
                let ground = canonical_labels(n);
                let relations = linalg::rank(&self.generators(&ground)?);
                Ok(QuotientRow {
                    degree: n,
                    ambient: self.ambient.carrier().dim(&ground),
                    relations,
                    carrier: self.carrier.dim(&ground),
                })
            })
            .collect()
    }

    /// Presentation of the quotient from the first coordinate:
    /// splits off the small blocks, migrates them, and records the result
    /// as a carrier term. At r = 1 this is x ↦ x ⊗ 1.
    pub fn port(&self) -> Morphism {
        let r = self.r;
        let tee_bp = self.tee_bp.clone();
        let hat = self.hat.clone();
        Morphism::from_fn(
            format!("port_{r}"),
            self.tee_bp.carrier(),
            self.carrier.clone(),
            move |x| {
                let Term::Composite(c) = x else {
                    return Err(Error::Domain(format!(
                        "expected a decomposition, got {x}"
                    )));
                };
                let (large, small) = c.partition().large_small_split(r);
                let split = tee_bp.delta(&large.ground(), &small.ground(), x)?;
                let Some((kept, moved)) = split.as_single_unit() else {
                    return Err(Error::MissingCapability(format!(
                        "the split of {x} along its own blocks is not a single tensor"
                    )));
                };
                Ok(hat
                    .apply(moved)?
                    .map_terms(|w| Term::Cauchy(Box::new(kept.clone()), Box::new(w.clone()))))
            },
        )
    }

    /// Onward map to 𝒯(d,q): migrates the remaining first coordinate and
    /// multiplies it onto the second.
    pub fn port_upper(&self) -> Morphism {
        let tee_dq = self.tee_dq.clone();
        let hat = self.hat.clone();
        Morphism::from_fn(
            format!("port^{}", self.r),
            self.carrier.clone(),
            self.tee_dq.carrier(),
            move |x| {
                let (u, v) = split_cauchy(x)?;
                hat.apply(u)?.bind(|m| tee_dq.mu(m, v))
            },
        )
    }

    /// Connecting map between two thresholds r < s over the same
    /// (b, d, p, q, τ, θ): first-coordinate blocks of size in [r, s)
    /// migrate. Satisfies port_s = port_to ∘ port_r.
    pub fn port_to(&self, other: &RTee) -> Result<Morphism> {
        if self.tee_bp.carrier() != other.tee_bp.carrier()
            || self.tee_dq.carrier() != other.tee_dq.carrier()
            || self.tau_name != other.tau_name
            || self.theta_name != other.theta_name
        {
            return Err(Error::Precondition(format!(
                "ports connect members of one family; {} and {} differ in their data",
                self.name, other.name
            )));
        }
        if self.r >= other.r {
            return Err(Error::Precondition(format!(
                "ports go from a lower threshold to a higher one; got r={} and s={}",
                self.r, other.r
            )));
        }
        let s = other.r;
        let tee_bp = self.tee_bp.clone();
        let tee_dq = self.tee_dq.clone();
        let hat = self.hat.clone();
        Ok(Morphism::from_fn(
            format!("port^{}_{}", self.r, s),
            self.carrier.clone(),
            other.carrier.clone(),
            move |x| {
                let (u, v) = split_cauchy(x)?;
                let Term::Composite(c) = u else {
                    return Err(Error::Domain(format!(
                        "expected a decomposition in the first coordinate, got {u}"
                    )));
                };
                let (large, mid) = c.partition().large_small_split(s);
                let split = tee_bp.delta(&large.ground(), &mid.ground(), u)?;
                let Some((kept, moved)) = split.as_single_unit() else {
                    return Err(Error::MissingCapability(format!(
                        "the split of {u} along its own blocks is not a single tensor"
                    )));
                };
                let second = hat.apply(moved)?.bind(|m| tee_dq.mu(m, v))?;
                Ok(second
                    .map_terms(|w| Term::Cauchy(Box::new(kept.clone()), Box::new(w.clone()))))
            },
        ))
    }

    /// One relation span per degree 0..=max_n on canonical labels.
    fn relation_spans(&self, max_n: usize) -> Result<Vec<Span<Term>>> {
        (0..=max_n)
            .map(|n| {
                let mut span = Span::new();
                for g in self.generators(&canonical_labels(n))? {
                    span.insert(g);
                }
                Ok(span)
            })
            .collect()
    }
}

impl std::fmt::Debug for RTee {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RTee")
            .field("r", &self.r)
            .field("name", &self.name)
            .finish()
    }
}

impl ComonoidOps for RTee {
    fn carrier(&self) -> Species {
        self.carrier.clone()
    }

    fn name(&self) -> String {
        self.name.clone()
    }

    fn proper_only(&self) -> bool {
        false
    }

    fn delta(&self, s: &LabelSet, t: &LabelSet, x: &Term) -> Result<LinComb<(Term, Term)>> {
        self.ambient.delta(s, t, x)?.bind(|(l, r)| {
            let left = self.reduce_term(l)?;
            let right = self.reduce_term(r)?;
            Ok::<_, Error>(tensor2(&left, &right))
        })
    }
}

impl BimonoidOps for RTee {
    fn mu(&self, x: &Term, y: &Term) -> Result<LinComb<Term>> {
        self.ambient.mu(x, y)?.bind(|t| self.reduce_term(t))
    }
}

/// One row of [`RTee::quotient_dims`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientRow {
    pub degree: usize,
    pub ambient: usize,
    pub relations: usize,
    pub carrier: usize,
}

impl QuotientRow {
    pub fn holds(&self) -> bool {
        self.ambient == self.relations + self.carrier
    }
}

impl std::fmt::Display for QuotientRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "degree {}: ambient {} = relations {} + carrier {}{}",
            self.degree,
            self.ambient,
            self.relations,
            self.carrier,
            if self.holds() { "" } else { " (MISMATCH)" }
        )
    }
}

/// The size-graded migration map 𝒯(b,p) → 𝒯(d,q): τ applies to the outer
/// term one block-size class at a time and the images multiply in d, θ
/// applies blockwise. Coincides with the plain blockwise map when d is the
/// exponential bimonoid. Certifies commutativity of d and the blockwise-map
/// hypotheses for τ and θ up to `cert_bound` before constructing.
pub fn hat_f(
    tau: Morphism,
    theta: Morphism,
    b: &Bimonoid,
    d: &Bimonoid,
    p: &Comonoid,
    q: &Comonoid,
    cert_bound: usize,
) -> Result<Morphism> {
    let construction = format!(
        "hat_f[{},{}]: T[{}]({}) -> T[{}]({})",
        tau.name(),
        theta.name(),
        b.name(),
        p.name(),
        d.name(),
        q.name()
    );
    certify_commutative(d, d.certs(), cert_bound, &construction)?;
    certify_tau_theta(&construction, &tau, &theta, b, d, p, q, cert_bound)?;
    let source = Species::Substitute(Box::new(b.carrier()), Box::new(p.carrier()));
    let target = Species::Substitute(Box::new(d.carrier()), Box::new(q.carrier()));
    Ok(make_hat(tau, theta, b.clone(), d.clone(), source, target))
}

fn make_hat(
    tau: Morphism,
    theta: Morphism,
    b: Bimonoid,
    d: Bimonoid,
    source: Species,
    target: Species,
) -> Morphism {
    let name = format!("hat_f[{},{}]", tau.name(), theta.name());
    Morphism::from_fn(name, source, target, move |x| {
        let Term::Composite(c) = x else {
            return Err(Error::Domain(format!(
                "expected a decomposition, got {x}"
            )));
        };
        let mut outer = LinComb::unit(d.unit_term());
        for (_, blocks) in c.partition().group_blocks_by_size() {
            let class = LabelSet::new(blocks.iter().map(|bl| Label::block(bl.clone())));
            let restricted = b.rho(&class, &c.outer)?;
            let image = tau.apply(&restricted)?;
            outer = outer.bind(|acc| image.bind(|t| d.mu(acc, t)))?;
        }
        let mut decorated: LinComb<Vec<(LabelSet, Term)>> = LinComb::unit(Vec::new());
        for (block, t) in &c.inner {
            let image = theta.apply(t)?;
            decorated = decorated.bind(|acc| {
                Ok::<_, Error>(image.map_terms(|ti| {
                    let mut v = acc.clone();
                    v.push((block.clone(), ti.clone()));
                    v
                }))
            })?;
        }
        let mut out = LinComb::zero();
        for (o, co) in outer.iter() {
            for (dec, ci) in decorated.iter() {
                let term = Term::Composite(Composite::new(o.clone(), dec.iter().cloned())?);
                out.add_term(term, co * ci);
            }
        }
        Ok(out)
    })
}

fn family_name(r: usize, b: &Bimonoid, d: &Bimonoid, p: &Comonoid, q: &Comonoid) -> String {
    format!(
        "R{{{r}}}[{},{}]({},{})",
        b.name(),
        d.name(),
        p.name(),
        q.name()
    )
}

fn split_cauchy(x: &Term) -> Result<(&Term, &Term)> {
    let Term::Cauchy(u, v) = x else {
        return Err(Error::Domain(format!(
            "expected a two-coordinate term, got {x}"
        )));
    };
    Ok((u, v))
}
