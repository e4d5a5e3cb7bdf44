//! Exact linear algebra over formal linear combinations.
//!
//! Span membership and rank by fraction-free-enough Gaussian elimination over
//! `BigRational`; no floating point anywhere. The elimination keeps, for each
//! reduced row, its expression in the original generators, so membership
//! queries return an exact certificate of coefficients.

use crate::lincomb::{LinComb, Rational};
use num_traits::Zero;

/// An incrementally built row-echelon span of vectors keyed by `K`.
pub struct Span<K: Ord + Clone> {
    // Each row: (pivot key, reduced vector with coefficient 1 at pivot,
    // expression of that vector in the original generators).
    rows: Vec<(K, LinComb<K>, Vec<(usize, Rational)>)>,
    inserted: usize,
}

impl<K: Ord + Clone> Default for Span<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> Span<K> {
    pub fn new() -> Self {
        Span {
            rows: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the rows; returns the residue and the generator
    /// combination subtracted along the way.
    fn reduce(&self, v: &LinComb<K>) -> (LinComb<K>, Vec<(usize, Rational)>) {
        let mut residue = v.clone();
        let mut combo: Vec<(usize, Rational)> = Vec::new();
        for (pivot, row, expr) in &self.rows {
            let c = residue.coeff(pivot);
            if c.is_zero() {
                continue;
            }
            residue = residue - row.scale(&c);
            for (i, e) in expr {
                combo.push((*i, e * &c));
            }
        }
        (residue, merge_combo(combo))
    }

    /// Adds a generator; returns true if it increased the rank.
    pub fn insert(&mut self, v: LinComb<K>) -> bool {
        let index = self.inserted;
        self.inserted += 1;
        let (mut residue, combo) = self.reduce(&v);
        let Some(pivot) = residue.keys().next().cloned() else {
            return false;
        };
        let inv = residue.coeff(&pivot).recip();
        residue = residue.scale(&inv);
        // expression of the normalized residue in generators:
        // inv * (gen_index - combo)
        let mut expr = vec![(index, inv.clone())];
        for (i, c) in combo {
            expr.push((i, -(c * &inv)));
        }
        let expr = merge_combo(expr);
        // back-substitute to keep rows fully reduced
        for (_, row, rexpr) in &mut self.rows {
            let c = row.coeff(&pivot);
            if c.is_zero() {
                continue;
            }
            *row = row.clone() - residue.scale(&c);
            let mut merged = std::mem::take(rexpr);
            for (i, e) in &expr {
                merged.push((*i, -(e * &c)));
            }
            *rexpr = merge_combo(merged);
        }
        self.rows.push((pivot, residue, expr));
        true
    }

    /// Membership with certificate: coefficients over the inserted
    /// generators (by insertion index) expressing `v`, if it lies in the span.
    pub fn membership(&self, v: &LinComb<K>) -> Option<Vec<(usize, Rational)>> {
        let (residue, combo) = self.reduce(v);
        if residue.is_zero() {
            Some(combo)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &LinComb<K>) -> bool {
        self.membership(v).is_some()
    }
}

fn merge_combo(mut combo: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    combo.sort_by_key(|(i, _)| *i);
    let mut out: Vec<(usize, Rational)> = Vec::with_capacity(combo.len());
    for (i, c) in combo {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc += c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Rank of a family of vectors.
pub fn rank<K: Ord + Clone>(vectors: &[LinComb<K>]) -> usize {
    let mut span = Span::new();
    for v in vectors {
        span.insert(v.clone());
    }
    span.rank()
}

/// Span membership with certificate: `Some(coefficients)` iff `target` lies
/// in the span of `generators`; indices refer to generator positions.
pub fn span_membership<K: Ord + Clone>(
    generators: &[LinComb<K>],
    target: &LinComb<K>,
) -> Option<Vec<(usize, Rational)>> {
    let mut span = Span::new();
    for g in generators {
        span.insert(g.clone());
    }
    span.membership(target)
}
