//! Exhaustive law checkers at desk scale.
//!
//! Every checker enumerates canonical ground sets up to `max_n`, all relevant
//! decompositions, and all basis terms, compares both sides of the law with
//! exact arithmetic, and returns a [`Report`]. A failure is a report with a
//! [`Witness`], not an error; errors are reserved for misuse (undefined maps,
//! unsupported scale).
//!
//! Checks run through [`crate::exec::scan`], so they parallelize over
//! decomposition-level work items when the `parallel` feature is on and
//! report identically either way.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::label::{canonical_labels, Bijection, Label, LabelSet};
use crate::lincomb::{pair_string, tensor2, LinComb};
use crate::partition::{enumerate_decompositions, two_part_decompositions};
use crate::structures::{BimonoidOps, ComonoidOps};
use crate::term::Term;

/// First counterexample found by a checker, in deterministic scan order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Ground set of the failing instance.
    pub ground: String,
    /// The equation instance: decomposition data and input terms.
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of one exhaustive law check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub law: String,
    pub object: String,
    pub max_n: usize,
    /// Number of equation instances compared. Only meaningful on a pass;
    /// a failing scan stops counting inside the witness item.
    pub instances: usize,
    pub witness: Option<Witness>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(
                f,
                "{} on {}: PASS (n <= {}, {} instances)",
                self.law, self.object, self.max_n, self.instances
            ),
            Some(w) => write!(
                f,
                "{} on {}: FAIL on {} at {}\n  lhs = {}\n  rhs = {}",
                self.law, self.object, self.max_n, w.instance, w.lhs, w.rhs
            ),
        }
    }
}

pub(crate) fn report(
    law: &str,
    object: String,
    max_n: usize,
    out: exec::ScanOutcome<Witness>,
) -> Report {
    Report {
        law: law.to_string(),
        object,
        max_n,
        instances: out.instances,
        witness: out.witness,
    }
}

/// Ordered triple decompositions R ⊔ S ⊔ T = canonical(n) for all n ≤ max_n.
fn triples(max_n: usize, proper_only: bool) -> Vec<(LabelSet, LabelSet, LabelSet)> {
    let mut items = Vec::new();
    for n in 0..=max_n {
        let ground = canonical_labels(n);
        for d in enumerate_decompositions(&ground, 3) {
            let p = d.parts();
            if proper_only && p.iter().any(LabelSet::is_empty) {
                continue;
            }
            items.push((p[0].clone(), p[1].clone(), p[2].clone()));
        }
    }
    items
}

/// Ordered pair decompositions S ⊔ T = canonical(n) for all n ≤ max_n.
pub(crate) fn pairs(max_n: usize, proper_only: bool) -> Vec<(LabelSet, LabelSet)> {
    let mut items = Vec::new();
    for n in 0..=max_n {
        let ground = canonical_labels(n);
        for (s, t) in two_part_decompositions(&ground) {
            if proper_only && (s.is_empty() || t.is_empty()) {
                continue;
            }
            items.push((s, t));
        }
    }
    items
}

/// All subsets of `ground`, smallest first in the usual subset order.
pub(crate) fn subsets(ground: &LabelSet) -> Vec<LabelSet> {
    two_part_decompositions(ground)
        .into_iter()
        .map(|(s, _)| s)
        .collect()
}

// Coassociativity comparisons key the three factors as (third, (first,
// second)); print them back in reading order.
fn triple_string(lc: &LinComb<(Term, (Term, Term))>) -> String {
    if lc.is_zero() {
        return "0".to_string();
    }
    lc.iter()
        .map(|((third, (first, second)), coeff)| {
            format!(
                "{}·({first} ⊗ {second} ⊗ {third})",
                crate::lincomb::rational_string(coeff)
            )
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// μ(μ(x,y),z) = μ(x,μ(y,z)) over every ordered triple decomposition
/// (empty parts included, which also exercises the unit laws).
pub fn check_associativity(h: &dyn BimonoidOps, max_n: usize) -> Result<Report> {
    let items = triples(max_n, false);
    let carrier = h.carrier();
    let out = exec::scan(&items, |(r, s, t)| {
        let ground = r.union(s).union(t);
        let mut count = 0usize;
        for x in carrier.basis(r) {
            for y in carrier.basis(s) {
                for z in carrier.basis(t) {
                    count += 1;
                    let lhs = h.mu(&x, &y)?.bind(|w| h.mu(w, &z))?;
                    let rhs = h.mu(&y, &z)?.bind(|w| h.mu(&x, w))?;
                    if lhs != rhs {
                        return Ok((
                            count,
                            Some(Witness {
                                ground: ground.to_string(),
                                instance: format!(
                                    "R={r}, S={s}, T={t}, x={x}, y={y}, z={z}"
                                ),
                                lhs: lhs.to_string(),
                                rhs: rhs.to_string(),
                            }),
                        ));
                    }
                }
            }
        }
        Ok((count, None))
    })?;
    Ok(report("associativity", h.name(), max_n, out))
}

/// (Δ_{R,S} ⊗ id)Δ_{R⊔S,T} = (id ⊗ Δ_{S,T})Δ_{R,S⊔T} on every basis term.
/// Positive comonoids skip triples with an empty part.
pub fn check_coassociativity(c: &dyn ComonoidOps, max_n: usize) -> Result<Report> {
    let items = triples(max_n, c.proper_only());
    let carrier = c.carrier();
    let out = exec::scan(&items, |(r, s, t)| {
        let rs = r.union(s);
        let st = s.union(t);
        let ground = rs.union(t);
        let mut count = 0usize;
        for x in carrier.basis(&ground) {
            count += 1;
            // Nest the left factor: keys (right, (left-left, left-right))
            // so both routes land in one comparable key shape.
            let lhs = c.delta(&rs, t, &x)?.bind(|(u, v)| {
                Ok::<_, Error>(c.delta(r, s, u)?.map_terms(|inner| (v.clone(), inner.clone())))
            })?;
            let rhs = c.delta(r, &st, &x)?.bind(|(u, v)| {
                Ok::<_, Error>(c.delta(s, t, v)?.map_terms(|inner| (inner.1.clone(), (u.clone(), inner.0.clone()))))
            })?;
            if lhs != rhs {
                return Ok((
                    count,
                    Some(Witness {
                        ground: ground.to_string(),
                        instance: format!("R={r}, S={s}, T={t}, x={x}"),
                        lhs: triple_string(&lhs),
                        rhs: triple_string(&rhs),
                    }),
                ));
            }
        }
        Ok((count, None))
    })?;
    Ok(report("coassociativity", c.name(), max_n, out))
}

/// The bimonoid compatibility square: Δ_{S',T'} ∘ μ_{S,T} equals the
/// composite through Δ on A=S∩S', B=S∩T', C=T∩S', D=T∩T' followed by
/// μ_{A,C} ⊗ μ_{B,D}.
pub fn check_compatibility(h: &dyn BimonoidOps, max_n: usize) -> Result<Report> {
    let mut items = Vec::new();
    for n in 0..=max_n {
        let ground = canonical_labels(n);
        for (s, t) in two_part_decompositions(&ground) {
            for (s2, t2) in two_part_decompositions(&ground) {
                items.push((s.clone(), t.clone(), s2, t2));
            }
        }
    }
    let carrier = h.carrier();
    let out = exec::scan(&items, |(s, t, s2, t2)| {
        let ground = s.union(t);
        let a = s.intersect(s2);
        let b = s.intersect(t2);
        let c = t.intersect(s2);
        let d = t.intersect(t2);
        let mut count = 0usize;
        for x in carrier.basis(s) {
            for y in carrier.basis(t) {
                count += 1;
                let lhs = h.mu(&x, &y)?.bind(|w| h.delta(s2, t2, w))?;
                let dx = h.delta(&a, &b, &x)?;
                let dy = h.delta(&c, &d, &y)?;
                let mut rhs: LinComb<(Term, Term)> = LinComb::zero();
                for ((x1, x2), cx) in dx.iter() {
                    for ((y1, y2), cy) in dy.iter() {
                        let left = h.mu(x1, y1)?;
                        let right = h.mu(x2, y2)?;
                        rhs += tensor2(&left, &right).scale(&(cx * cy));
                    }
                }
                if lhs != rhs {
                    return Ok((
                        count,
                        Some(Witness {
                            ground: ground.to_string(),
                            instance: format!(
                                "S={s}, T={t}, S'={s2}, T'={t2}, x={x}, y={y}"
                            ),
                            lhs: pair_string(&lhs),
                            rhs: pair_string(&rhs),
                        }),
                    ));
                }
            }
        }
        Ok((count, None))
    })?;
    Ok(report("compatibility", h.name(), max_n, out))
}

/// μ_{S,T}(x,y) = μ_{T,S}(y,x) over all decompositions.
pub fn check_commutativity(h: &dyn BimonoidOps, max_n: usize) -> Result<Report> {
    let items = pairs(max_n, false);
    let carrier = h.carrier();
    let out = exec::scan(&items, |(s, t)| {
        let ground = s.union(t);
        let mut count = 0usize;
        for x in carrier.basis(s) {
            for y in carrier.basis(t) {
                count += 1;
                let lhs = h.mu(&x, &y)?;
                let rhs = h.mu(&y, &x)?;
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
    Ok(report("commutativity", h.name(), max_n, out))
}

/// Δ_{S,T} = twist ∘ Δ_{T,S} over all decompositions the structure defines.
pub fn check_cocommutativity(c: &dyn ComonoidOps, max_n: usize) -> Result<Report> {
    let items = pairs(max_n, c.proper_only());
    let carrier = c.carrier();
    let out = exec::scan(&items, |(s, t)| {
        let ground = s.union(t);
        let mut count = 0usize;
        for x in carrier.basis(&ground) {
            count += 1;
            let lhs = c.delta(s, t, &x)?;
            let rhs = c
                .delta(t, s, &x)?
                .map_terms(|(u, v)| (v.clone(), u.clone()));
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
    Ok(report("cocommutativity", c.name(), max_n, out))
}

/// Every Δ_{S,T} sends a basis term to a single basis tensor with
/// coefficient 1 (or to 0, which the linearized reading also allows only
/// if the structure declares no instance at all; here zero fails).
pub fn check_linearized(c: &dyn ComonoidOps, max_n: usize) -> Result<Report> {
    let items = pairs(max_n, c.proper_only());
    let carrier = c.carrier();
    let out = exec::scan(&items, |(s, t)| {
        let ground = s.union(t);
        let mut count = 0usize;
        for x in carrier.basis(&ground) {
            count += 1;
            let split = c.delta(s, t, &x)?;
            if split.as_single_unit().is_none() {
                return Ok((
                    count,
                    Some(Witness {
                        ground: ground.to_string(),
                        instance: format!("S={s}, T={t}, x={x}"),
                        lhs: pair_string(&split),
                        rhs: "a single basis tensor with coefficient 1".to_string(),
                    }),
                ));
            }
        }
        Ok((count, None))
    })?;
    Ok(report("linearized coproduct", c.name(), max_n, out))
}

/// Left coproduct factor as a map: x on I ↦ the single term u with
/// Δ_{U, I∖U}(x) = u ⊗ v. Defined when the relevant coproduct is linearized.
pub fn factor_left(c: &dyn ComonoidOps, u: &LabelSet, x: &Term) -> Result<Term> {
    let ground = x.support();
    if *u == ground {
        return Ok(x.clone());
    }
    let rest = ground.minus(u);
    let split = c.delta(u, &rest, x)?;
    match split.as_single_unit() {
        Some((l, _)) => Ok(l.clone()),
        None => Err(Error::MissingCapability(format!(
            "coproduct of {} at ({u}, {rest}) is not a single basis tensor; no left factor map",
            c.name()
        ))),
    }
}

/// Right coproduct factor as a map: x on I ↦ the single term v with
/// Δ_{I∖V, V}(x) = u ⊗ v.
pub fn factor_right(c: &dyn ComonoidOps, v: &LabelSet, x: &Term) -> Result<Term> {
    let ground = x.support();
    if *v == ground {
        return Ok(x.clone());
    }
    let rest = ground.minus(v);
    let split = c.delta(&rest, v, x)?;
    match split.as_single_unit() {
        Some((_, r)) => Ok(r.clone()),
        None => Err(Error::MissingCapability(format!(
            "coproduct of {} at ({rest}, {v}) is not a single basis tensor; no right factor map",
            c.name()
        ))),
    }
}

/// Restriction axioms for the structure read off the coproduct's right
/// factor: ρ_I = id, transitivity ρ_U ∘ ρ_V = ρ_U for U ⊆ V ⊆ I, and
/// Δ_{S,T}(x) = ρ_S(x) ⊗ ρ_T(x) as a single basis tensor.
pub fn check_restriction_axioms(c: &dyn ComonoidOps, max_n: usize) -> Result<Report> {
    // Items: (V, U) with U ⊆ V ⊆ canonical(n); the ground is fixed per n.
    let mut items: Vec<(LabelSet, LabelSet, LabelSet)> = Vec::new();
    for n in 0..=max_n {
        let ground = canonical_labels(n);
        for v in subsets(&ground) {
            for u in subsets(&v) {
                if c.proper_only() && (u.is_empty() || v.is_empty()) {
                    continue;
                }
                items.push((ground.clone(), v.clone(), u));
            }
        }
    }
    let carrier = c.carrier();
    let out = exec::scan(&items, |(ground, v, u)| {
        let mut count = 0usize;
        for x in carrier.basis(ground) {
            count += 1;
            let via = factor_right(c, v, &x).and_then(|xv| factor_right(c, u, &xv))?;
            let direct = factor_right(c, u, &x)?;
            if via != direct {
                return Ok((
                    count,
                    Some(Witness {
                        ground: ground.to_string(),
                        instance: format!("U={u}, V={v}, x={x}"),
                        lhs: via.to_string(),
                        rhs: direct.to_string(),
                    }),
                ));
            }
            // Factorization of the coproduct through the two restrictions;
            // depends on u alone, so run it once per u at v = ground.
            let s = ground.minus(u);
            if *v == *ground && !(c.proper_only() && (s.is_empty() || u.is_empty())) {
                count += 1;
                let split = c.delta(&s, u, &x)?;
                let expected =
                    LinComb::unit((factor_right(c, &s, &x)?, factor_right(c, u, &x)?));
                if split != expected {
                    return Ok((
                        count,
                        Some(Witness {
                            ground: ground.to_string(),
                            instance: format!("S={s}, T={u}, x={x}"),
                            lhs: pair_string(&split),
                            rhs: pair_string(&expected),
                        }),
                    ));
                }
            }
        }
        Ok((count, None))
    })?;
    Ok(report("restriction axioms", c.name(), max_n, out))
}

/// Restriction/product coherence: ρ_U(μ_{S,T}(x,y)) =
/// μ_{S∩U,T∩U}(ρ_{S∩U}(x), ρ_{T∩U}(y)) for every U ⊆ S ⊔ T.
pub fn check_coherence(h: &dyn BimonoidOps, max_n: usize) -> Result<Report> {
    let mut items: Vec<(LabelSet, LabelSet, LabelSet)> = Vec::new();
    for n in 0..=max_n {
        let ground = canonical_labels(n);
        for (s, t) in two_part_decompositions(&ground) {
            for u in subsets(&ground) {
                items.push((s.clone(), t.clone(), u));
            }
        }
    }
    let carrier = h.carrier();
    let out = exec::scan(&items, |(s, t, u)| {
        let ground = s.union(t);
        let su = s.intersect(u);
        let tu = t.intersect(u);
        let mut count = 0usize;
        for x in carrier.basis(s) {
            for y in carrier.basis(t) {
                count += 1;
                let lhs = h
                    .mu(&x, &y)?
                    .try_map_terms(|w| factor_right(h, u, w))?;
                let rhs = h.mu(&factor_right(h, &su, &x)?, &factor_right(h, &tu, &y)?)?;
                if lhs != rhs {
                    return Ok((
                        count,
                        Some(Witness {
                            ground: ground.to_string(),
                            instance: format!("S={s}, T={t}, U={u}, x={x}, y={y}"),
                            lhs: lhs.to_string(),
                            rhs: rhs.to_string(),
                        }),
                    ));
                }
            }
        }
        Ok((count, None))
    })?;
    Ok(report("restriction coherence", h.name(), max_n, out))
}

/// Relabeling equivariance of the product under adjacent transpositions
/// of the canonical ground set.
pub fn check_mu_naturality(h: &dyn BimonoidOps, max_n: usize) -> Result<Report> {
    let mut items: Vec<(LabelSet, LabelSet, Bijection)> = Vec::new();
    for n in 2..=max_n {
        let ground = canonical_labels(n);
        let labels: Vec<Label> = ground.iter().cloned().collect();
        for k in 0..n - 1 {
            let sigma = swap_two(&ground, &labels[k], &labels[k + 1]);
            for (s, t) in two_part_decompositions(&ground) {
                items.push((s, t, sigma.clone()));
            }
        }
    }
    let carrier = h.carrier();
    let out = exec::scan(&items, |(s, t, sigma)| {
        let ground = s.union(t);
        let mut count = 0usize;
        for x in carrier.basis(s) {
            for y in carrier.basis(t) {
                count += 1;
                let lhs = h.mu(&x, &y)?.try_map_terms(|w| w.relabel(sigma))?;
                let xs = x.relabel(&sigma.restrict(s)?)?;
                let yt = y.relabel(&sigma.restrict(t)?)?;
                let rhs = h.mu(&xs, &yt)?;
                if lhs != rhs {
                    return Ok((
                        count,
                        Some(Witness {
                            ground: ground.to_string(),
                            instance: format!("S={s}, T={t}, sigma={sigma}, x={x}, y={y}"),
                            lhs: lhs.to_string(),
                            rhs: rhs.to_string(),
                        }),
                    ));
                }
            }
        }
        Ok((count, None))
    })?;
    Ok(report("product naturality", h.name(), max_n, out))
}

/// Relabeling equivariance of the coproduct under adjacent transpositions.
pub fn check_delta_naturality(c: &dyn ComonoidOps, max_n: usize) -> Result<Report> {
    let mut items: Vec<(LabelSet, LabelSet, Bijection)> = Vec::new();
    for n in 2..=max_n {
        let ground = canonical_labels(n);
        let labels: Vec<Label> = ground.iter().cloned().collect();
        for k in 0..n - 1 {
            let sigma = swap_two(&ground, &labels[k], &labels[k + 1]);
            for (s, t) in two_part_decompositions(&ground) {
                if c.proper_only() && (s.is_empty() || t.is_empty()) {
                    continue;
                }
                items.push((s, t, sigma.clone()));
            }
        }
    }
    let carrier = c.carrier();
    let out = exec::scan(&items, |(s, t, sigma)| {
        let ground = s.union(t);
        let mut count = 0usize;
        let s_img = sigma.map_set(s)?;
        let t_img = sigma.map_set(t)?;
        for x in carrier.basis(&ground) {
            count += 1;
            let xi = x.relabel(sigma)?;
            let lhs = c.delta(&s_img, &t_img, &xi)?;
            let rhs = c.delta(s, t, &x)?.try_map_terms(|(u, v)| {
                Ok::<_, Error>((
                    u.relabel(&sigma.restrict(s)?)?,
                    v.relabel(&sigma.restrict(t)?)?,
                ))
            })?;
            if lhs != rhs {
                return Ok((
                    count,
                    Some(Witness {
                        ground: ground.to_string(),
                        instance: format!("S={s}, T={t}, sigma={sigma}, x={x}"),
                        lhs: pair_string(&lhs),
                        rhs: pair_string(&rhs),
                    }),
                ));
            }
        }
        Ok((count, None))
    })?;
    Ok(report("coproduct naturality", c.name(), max_n, out))
}

pub(crate) fn swap_two(ground: &LabelSet, a: &Label, b: &Label) -> Bijection {
    Bijection::from_pairs(ground.iter().map(|l| {
        if l == a {
            (l.clone(), b.clone())
        } else if l == b {
            (l.clone(), a.clone())
        } else {
            (l.clone(), l.clone())
        }
    }))
    .expect("transposition of a ground set is a bijection")
}

/// Δ_{S,T} ∘ μ_{S,T} = id on h[S] ⊗ h[T], for every decomposition.
pub fn check_delta_after_mu(h: &dyn BimonoidOps, max_n: usize) -> Result<Report> {
    let items = pairs(max_n, false);
    let carrier = h.carrier();
    let out = exec::scan(&items, |(s, t)| {
        let ground = s.union(t);
        let mut count = 0usize;
        for x in carrier.basis(s) {
            for y in carrier.basis(t) {
                count += 1;
                let lhs = h.mu(&x, &y)?.bind(|w| h.delta(s, t, w))?;
                let rhs = LinComb::unit((x.clone(), y.clone()));
                if lhs != rhs {
                    return Ok((
                        count,
                        Some(Witness {
                            ground: ground.to_string(),
                            instance: format!("S={s}, T={t}, x={x}, y={y}"),
                            lhs: pair_string(&lhs),
                            rhs: pair_string(&rhs),
                        }),
                    ));
                }
            }
        }
        Ok((count, None))
    })?;
    Ok(report("coproduct-after-product identity", h.name(), max_n, out))
}

/// Exchange of the coproduct's factor maps: writing λ_U for the left factor
/// of Δ_{U, I∖U} and ρ_V for the right factor of Δ_{I∖V, V}, checks
/// ρ_C ∘ λ_A = λ_C ∘ ρ_B for every A ∪ B = I and C ⊆ A ∩ B. For structures
/// whose λ and ρ are both plain restriction this is immediate; it is the
/// exact condition under which restricted transport of outer structures is
/// independent of the route.
pub fn check_factor_exchange(c: &dyn ComonoidOps, max_n: usize) -> Result<Report> {
    let mut items: Vec<(LabelSet, LabelSet, LabelSet)> = Vec::new();
    for n in 0..=max_n {
        let ground = canonical_labels(n);
        for a in subsets(&ground) {
            let forced = ground.minus(&a);
            for extra in subsets(&a) {
                let b = forced.union(&extra);
                for cset in subsets(&a.intersect(&b)) {
                    if c.proper_only() {
                        // A factor map to the whole support is the identity
                        // and never touches Δ; every other one needs a
                        // proper split, so its target must be nonempty.
                        let improper = (a != ground && a.is_empty())
                            || (b != ground && b.is_empty())
                            || (cset != a && cset.is_empty())
                            || (cset != b && cset.is_empty());
                        if improper {
                            continue;
                        }
                    }
                    items.push((a.clone(), b.clone(), cset));
                }
            }
        }
    }
    let carrier = c.carrier();
    let out = exec::scan(&items, |(a, b, cset)| {
        let ground = a.union(b);
        let mut count = 0usize;
        for w in carrier.basis(&ground) {
            count += 1;
            let lhs = factor_right(c, cset, &factor_left(c, a, &w)?)?;
            let rhs = factor_left(c, cset, &factor_right(c, b, &w)?)?;
            if lhs != rhs {
                return Ok((
                    count,
                    Some(Witness {
                        ground: ground.to_string(),
                        instance: format!("A={a}, B={b}, C={cset}, x={w}"),
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                    }),
                ));
            }
        }
        Ok((count, None))
    })?;
    Ok(report("coproduct-factor exchange", c.name(), max_n, out))
}

/// Antipode of a connected bimonoid, computed by degree recursion from the
/// convolution identity and memoized per input term.
pub struct Antipode<'a> {
    h: &'a dyn BimonoidOps,
    cache: Mutex<BTreeMap<Term, LinComb<Term>>>,
}

impl<'a> Antipode<'a> {
    pub fn new(h: &'a dyn BimonoidOps) -> Result<Self> {
        if !h.carrier().is_connected() {
            return Err(Error::Unsupported(format!(
                "antipode needs a connected carrier; {} is not connected",
                h.name()
            )));
        }
        Ok(Antipode {
            h,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    /// s(x). Degree 0 is the identity; in positive degree
    /// s(x) = −Σ_{S ⊊ I} μ_{S,T}((s ⊗ id)(Δ_{S,T}(x))).
    pub fn apply(&self, x: &Term) -> Result<LinComb<Term>> {
        let ground = x.support();
        if ground.is_empty() {
            return Ok(LinComb::unit(x.clone()));
        }
        if let Some(hit) = self.cache.lock().unwrap().get(x) {
            return Ok(hit.clone());
        }
        let mut acc: LinComb<Term> = LinComb::zero();
        for (s, t) in two_part_decompositions(&ground) {
            if s == ground {
                continue;
            }
            for ((u, v), coeff) in self.h.delta(&s, &t, x)?.iter() {
                let su = self.apply(u)?;
                for (su_term, c2) in su.iter() {
                    acc += self.h.mu(su_term, v)?.scale(&(coeff * c2));
                }
            }
        }
        let result = acc.scale(&crate::lincomb::rat_int(-1));
        self.cache.lock().unwrap().insert(x.clone(), result.clone());
        Ok(result)
    }

    pub fn apply_lin(&self, lc: &LinComb<Term>) -> Result<LinComb<Term>> {
        lc.bind(|t| self.apply(t))
    }
}

/// Convolution product of two endomorphisms against h's structure:
/// (f ⋆ g)(x) = Σ_{S⊔T=I} μ_{S,T}((f ⊗ g)(Δ_{S,T}(x))).
pub fn convolve(
    h: &dyn BimonoidOps,
    f: &dyn Fn(&Term) -> Result<LinComb<Term>>,
    g: &dyn Fn(&Term) -> Result<LinComb<Term>>,
    x: &Term,
) -> Result<LinComb<Term>> {
    let ground = x.support();
    let mut acc: LinComb<Term> = LinComb::zero();
    for (s, t) in two_part_decompositions(&ground) {
        for ((u, v), coeff) in h.delta(&s, &t, x)?.iter() {
            let fu = f(u)?;
            let gv = g(v)?;
            for (a, ca) in fu.iter() {
                for (b, cb) in gv.iter() {
                    acc += h.mu(a, b)?.scale(&(coeff * ca * cb));
                }
            }
        }
    }
    Ok(acc)
}

/// Both convolution identities for the recursion-defined antipode:
/// s ⋆ id = id ⋆ s = unit ∘ counit on every basis term.
pub fn check_antipode(h: &dyn BimonoidOps, max_n: usize) -> Result<Report> {
    let carrier = h.carrier();
    let mut items: Vec<Term> = Vec::new();
    for n in 0..=max_n {
        items.extend(carrier.basis(&canonical_labels(n)));
    }
    let antipode = Antipode::new(h)?;
    let out = exec::scan(&items, |x| {
        let ground = x.support();
        let expected: LinComb<Term> = if ground.is_empty() {
            LinComb::unit(h.unit_term())
        } else {
            LinComb::zero()
        };
        let id = |t: &Term| -> Result<LinComb<Term>> { Ok(LinComb::unit(t.clone())) };
        let s = |t: &Term| -> Result<LinComb<Term>> { antipode.apply(t) };
        let left = convolve(h, &s, &id, x)?;
        if left != expected {
            return Ok((
                1,
                Some(Witness {
                    ground: ground.to_string(),
                    instance: format!("(s * id)(x), x={x}"),
                    lhs: left.to_string(),
                    rhs: expected.to_string(),
                }),
            ));
        }
        let right = convolve(h, &id, &s, x)?;
        if right != expected {
            return Ok((
                2,
                Some(Witness {
                    ground: ground.to_string(),
                    instance: format!("(id * s)(x), x={x}"),
                    lhs: right.to_string(),
                    rhs: expected.to_string(),
                }),
            ));
        }
        Ok((2, None))
    })?;
    Ok(report("antipode convolution identities", h.name(), max_n, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{Bimonoid, Comonoid, Fault};
    use crate::term::Term;
    use crate::zoo::ZooKind;

    fn hopf(kind: ZooKind) -> Bimonoid {
        Bimonoid::zoo(kind)
    }

    #[test]
    fn zoo_bimonoids_satisfy_all_axioms_at_small_size() {
        for kind in [ZooKind::L, ZooKind::E, ZooKind::G, ZooKind::Poset] {
            let h = hopf(kind);
            let n = 3;
            assert!(check_associativity(&h, n).unwrap().passed(), "{kind:?} assoc");
            assert!(check_coassociativity(&h, n).unwrap().passed(), "{kind:?} coassoc");
            assert!(check_compatibility(&h, n).unwrap().passed(), "{kind:?} compat");
            assert!(check_linearized(&h, n).unwrap().passed(), "{kind:?} linearized");
            assert!(check_cocommutativity(&h, n).unwrap().passed(), "{kind:?} cocomm");
            assert!(check_restriction_axioms(&h, n).unwrap().passed(), "{kind:?} restrictions");
            assert!(check_coherence(&h, n).unwrap().passed(), "{kind:?} coherence");
            assert!(check_mu_naturality(&h, n).unwrap().passed(), "{kind:?} mu naturality");
            assert!(check_delta_naturality(&h, n).unwrap().passed(), "{kind:?} delta naturality");
            assert!(check_delta_after_mu(&h, n).unwrap().passed(), "{kind:?} delta-after-mu");
            assert!(check_factor_exchange(&h, n).unwrap().passed(), "{kind:?} factor exchange");
        }
    }

    #[test]
    fn order_product_is_not_commutative_and_graph_product_is() {
        let l = hopf(ZooKind::L);
        let rep = check_commutativity(&l, 2).unwrap();
        assert!(!rep.passed());
        let w = rep.witness.unwrap();
        assert_eq!(w.ground, "{1,2}");
        let g = hopf(ZooKind::G);
        assert!(check_commutativity(&g, 3).unwrap().passed());
    }

    #[test]
    fn corrupted_product_fails_associativity_with_witness() {
        let bad = Bimonoid::corrupted(hopf(ZooKind::L), Fault::MuTwist);
        let rep = check_associativity(&bad, 3).unwrap();
        assert!(!rep.passed());
        let w = rep.witness.unwrap();
        assert!(!w.instance.is_empty());
        assert_ne!(w.lhs, w.rhs);
    }

    #[test]
    fn corrupted_coproduct_fails_compatibility_and_linearization() {
        let bad = Bimonoid::corrupted(hopf(ZooKind::E), Fault::DeltaZero);
        assert!(!check_compatibility(&bad, 2).unwrap().passed());
        assert!(!check_linearized(&bad, 2).unwrap().passed());
    }

    #[test]
    fn skewed_coproduct_fails_cocommutativity_and_factor_exchange() {
        let bad = Bimonoid::corrupted(hopf(ZooKind::L), Fault::DeltaSkew);
        assert!(!check_cocommutativity(&bad, 3).unwrap().passed());
        // It stays linearized, so the factor maps exist, but the exchange
        // identity fails once a factor of size >= 2 is reversed on one
        // route and not the other.
        assert!(check_linearized(&bad, 3).unwrap().passed());
        let rep = check_factor_exchange(&bad, 3).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn positive_comonoid_coassociativity_over_proper_triples() {
        let cyc = Comonoid::cyc();
        assert!(check_coassociativity(&cyc, 4).unwrap().passed());
        assert!(check_cocommutativity(&cyc, 4).unwrap().passed());
        let gplus = Comonoid::positive(hopf(ZooKind::G));
        assert!(check_coassociativity(&gplus, 3).unwrap().passed());
    }

    #[test]
    fn antipode_on_sets_is_signed_identity() {
        let e = hopf(ZooKind::E);
        let s = Antipode::new(&e).unwrap();
        for n in 0..=4 {
            let ground = canonical_labels(n);
            let x = Term::Star(ground.clone());
            let got = s.apply(&x).unwrap();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(got, LinComb::with_coeff(x, crate::lincomb::rat_int(sign)));
        }
    }

    #[test]
    fn antipode_on_orders_is_signed_reversal() {
        let l = hopf(ZooKind::L);
        let s = Antipode::new(&l).unwrap();
        let abc = canonical_labels(3);
        let labels: Vec<Label> = abc.iter().cloned().collect();
        let x = Term::Order(labels.clone());
        let got = s.apply(&x).unwrap();
        let rev = Term::Order(labels.into_iter().rev().collect());
        assert_eq!(got, LinComb::with_coeff(rev, crate::lincomb::rat_int(-1)));
    }

    #[test]
    fn antipode_convolution_identities_hold_for_the_zoo() {
        for kind in [ZooKind::L, ZooKind::E, ZooKind::G, ZooKind::Poset] {
            let h = hopf(kind);
            let rep = check_antipode(&h, 3).unwrap();
            assert!(rep.passed(), "{}", rep);
        }
    }

    #[test]
    fn antipode_is_an_involution_on_cocommutative_structures() {
        for kind in [ZooKind::E, ZooKind::G] {
            let h = hopf(kind);
            let s = Antipode::new(&h).unwrap();
            for n in 0..=3 {
                for x in h.carrier().basis(&canonical_labels(n)) {
                    let twice = s.apply_lin(&s.apply(&x).unwrap()).unwrap();
                    assert_eq!(twice, LinComb::unit(x));
                }
            }
        }
    }

    #[test]
    fn report_rendering_includes_outcome_and_counts() {
        let h = hopf(ZooKind::E);
        let rep = check_associativity(&h, 2).unwrap();
        let line = rep.to_string();
        assert!(line.contains("associativity on E: PASS"));
        assert!(line.contains("instances"));
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"law\":\"associativity\""));
    }

    #[test]
    fn substitution_bimonoid_passes_the_full_suite_at_size_three() {
        let tee = Bimonoid::tee(
            hopf(ZooKind::L),
            Comonoid::positive(hopf(ZooKind::G)),
            crate::structures::DEFAULT_CERT_BOUND,
        )
        .unwrap();
        assert!(check_associativity(&tee, 3).unwrap().passed());
        assert!(check_coassociativity(&tee, 3).unwrap().passed());
        assert!(check_compatibility(&tee, 3).unwrap().passed());
        assert!(check_delta_after_mu(&tee, 3).unwrap().passed());
        assert!(check_antipode(&tee, 3).unwrap().passed());
    }

    #[test]
    fn substitution_cocommutativity_tracks_the_inner_coproduct() {
        // Straddling blocks are split by the inner coproduct, so the
        // composite coproduct is cocommutative exactly when the inner one
        // is. Restriction coproducts are; a skewed one is not.
        let pi = Bimonoid::tee(
            hopf(ZooKind::E),
            Comonoid::positive(hopf(ZooKind::E)),
            crate::structures::DEFAULT_CERT_BOUND,
        )
        .unwrap();
        assert!(check_cocommutativity(&pi, 3).unwrap().passed());

        let t_g_lplus = Bimonoid::tee(
            hopf(ZooKind::G),
            Comonoid::positive(hopf(ZooKind::L)),
            crate::structures::DEFAULT_CERT_BOUND,
        )
        .unwrap();
        assert!(check_cocommutativity(&t_g_lplus, 3).unwrap().passed());

        let skewed_inner =
            Comonoid::positive(Bimonoid::corrupted(hopf(ZooKind::L), Fault::DeltaSkew));
        let t_skewed = Bimonoid::tee(
            hopf(ZooKind::G),
            skewed_inner,
            crate::structures::DEFAULT_CERT_BOUND,
        )
        .unwrap();
        let rep = check_cocommutativity(&t_skewed, 3).unwrap();
        assert!(!rep.passed());
        // The reversal first bites on an inner factor of size two, so the
        // earliest witness has one block of size three.
        assert_eq!(rep.witness.unwrap().ground, "{1,2,3}");
    }

    #[test]
    fn checker_instance_counts_are_deterministic() {
        let h = hopf(ZooKind::E);
        let a = check_associativity(&h, 3).unwrap();
        let b = check_associativity(&h, 3).unwrap();
        assert_eq!(a.instances, b.instances);
        // Sets have one basis term per subset, so the count is the number
        // of ordered triple decompositions: sum over n of 3^n.
        assert_eq!(a.instances, 1 + 3 + 9 + 27);
    }
}
