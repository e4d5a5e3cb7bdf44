//! The product and coproduct engines for composite carriers b∘p.
//!
//! Both are written against closures for the outer and inner structure maps,
//! so the same engine serves the substitution bimonoid, nested substitution,
//! and the comonoid on a composition of comonoids.

use crate::error::{Error, Result};
use crate::label::LabelSet;
use crate::lincomb::LinComb;
use crate::term::{Composite, Term};

/// Restriction of an outer term to a sub-family of block labels.
pub type OuterRho<'a> = &'a dyn Fn(&LabelSet, &Term) -> Result<Term>;
/// Product of two outer terms on disjoint block-label sets.
pub type OuterMu<'a> = &'a dyn Fn(&Term, &Term) -> Result<LinComb<Term>>;
/// Coproduct of an inner term along a proper two-part decomposition.
pub type InnerDelta<'a> = &'a dyn Fn(&LabelSet, &LabelSet, &Term) -> Result<LinComb<(Term, Term)>>;

/// μ_{S,T} on composites: merge the partitions, multiply the outer terms on
/// the merged block labels, and carry the inner terms across unchanged.
pub fn composite_mu(outer_mu: OuterMu, x: &Composite, y: &Composite) -> Result<LinComb<Term>> {
    let gx = x.ground();
    let gy = y.ground();
    if !gx.is_disjoint_from(&gy) {
        return Err(Error::Domain(format!(
            "product factors must have disjoint supports; got {gx} and {gy}"
        )));
    }
    let inner: Vec<(LabelSet, Term)> = x.inner.iter().chain(y.inner.iter()).cloned().collect();
    outer_mu(&x.outer, &y.outer)?.try_map_terms(|outer| {
        Ok(Term::Composite(Composite::new(
            outer.clone(),
            inner.iter().cloned(),
        )?))
    })
}

/// Δ_{S,T} on composites.
///
/// Each block X_i of the partition is split by S and T: blocks on one side
/// pass through whole, straddling blocks split via the inner coproduct. The
/// outer term is restricted to the surviving whole blocks X^S (resp. X^T)
/// and then relabelled block-wise onto the split blocks X_S (resp. X_T).
pub fn composite_delta(
    outer_rho: OuterRho,
    inner_delta: InnerDelta,
    s: &LabelSet,
    t: &LabelSet,
    x: &Composite,
) -> Result<LinComb<(Term, Term)>> {
    let ground = x.ground();
    if !s.is_disjoint_from(t) || s.union(t) != ground {
        return Err(Error::Domain(format!(
            "Δ needs a two-part decomposition of {ground}; got {s} and {t}"
        )));
    }
    let partition = x.partition();

    let mut left_fixed: Vec<(LabelSet, Term)> = Vec::new();
    let mut right_fixed: Vec<(LabelSet, Term)> = Vec::new();
    // straddling blocks: (S_i, T_i, expansion of the inner coproduct)
    let mut straddlers: Vec<(LabelSet, LabelSet, LinComb<(Term, Term)>)> = Vec::new();
    for (block, term) in &x.inner {
        let si = block.intersect(s);
        let ti = block.intersect(t);
        if ti.is_empty() {
            left_fixed.push((block.clone(), term.clone()));
        } else if si.is_empty() {
            right_fixed.push((block.clone(), term.clone()));
        } else {
            let split = inner_delta(&si, &ti, term)?;
            straddlers.push((si, ti, split));
        }
    }

    // outer factors: restrict to the blocks meeting each side, then relabel
    // each whole block onto its intersection
    let outer_on = |side: &LabelSet| -> Result<Term> {
        let upper = partition.support_blocks(side);
        let restricted = outer_rho(&upper, &x.outer)?;
        restricted.relabel(&partition.restriction_bijection(side))
    };
    let outer_left = outer_on(s)?;
    let outer_right = outer_on(t)?;

    // expand the straddling choices multilinearly
    let mut acc: LinComb<(Vec<(LabelSet, Term)>, Vec<(LabelSet, Term)>)> =
        LinComb::unit((left_fixed, right_fixed));
    for (si, ti, split) in &straddlers {
        let mut next = LinComb::zero();
        for ((ls, rs), c) in acc.iter() {
            for ((l, r), d) in split.iter() {
                let mut ls = ls.clone();
                let mut rs = rs.clone();
                ls.push((si.clone(), l.clone()));
                rs.push((ti.clone(), r.clone()));
                next.add_term((ls, rs), c.clone() * d.clone());
            }
        }
        acc = next;
    }

    acc.try_map_terms(|(ls, rs)| {
        let left = Composite::new(outer_left.clone(), ls.iter().cloned())?;
        let right = Composite::new(outer_right.clone(), rs.iter().cloned())?;
        Ok((Term::Composite(left), Term::Composite(right)))
    })
}
