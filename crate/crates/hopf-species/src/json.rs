//! Canonical JSON encodings for labels, terms, and linear combinations.
//!
//! Emission is structural and deterministic: label sets are kept sorted,
//! cycles are stored in canonical rotation, linear combinations iterate in
//! term order, and object keys serialize sorted, so equal values always emit
//! byte-identical JSON. Sets, orders, and cycles all emit as plain arrays;
//! decoding is therefore directed by the species the term belongs to.
//!
//! Decoding validates term structure (distinct labels, edges inside the
//! vertex set, partition consistency). Membership in the species on a given
//! ground set stays with [`Species::validate_term`].

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::label::{is_valid_atom, Label, LabelSet};
use crate::lincomb::{rational_string, LinComb, Rational};
use crate::species::Species;
use crate::term::{Composite, Graph, Poset, Side, Term};

/// Atoms encode as strings, block labels as the sorted array of their
/// member labels.
pub fn label_to_json(l: &Label) -> Value {
    match l {
        Label::Atom(s) => Value::String(s.clone()),
        Label::Block(ls) => Value::Array(ls.iter().map(label_to_json).collect()),
    }
}

pub fn label_from_json(v: &Value) -> Result<Label> {
    match v {
        Value::String(s) => {
            if !is_valid_atom(s) {
                return Err(Error::Domain(format!("invalid label token {s:?}")));
            }
            Ok(Label::atom(s.clone()))
        }
        Value::Array(_) => Ok(Label::block(label_set_from_json(v)?)),
        other => Err(Error::Domain(format!(
            "expected a label string or block array, got {other}"
        ))),
    }
}

pub fn label_set_to_json(ls: &LabelSet) -> Value {
    Value::Array(ls.iter().map(label_to_json).collect())
}

pub fn label_set_from_json(v: &Value) -> Result<LabelSet> {
    LabelSet::try_new(label_vec(v)?)
}

pub fn term_to_json(t: &Term) -> Value {
    match t {
        Term::Order(v) => Value::Array(v.iter().map(label_to_json).collect()),
        Term::Star(ls) => label_set_to_json(ls),
        Term::Cycle(v) => Value::Array(v.iter().map(label_to_json).collect()),
        Term::Graph(g) => json!({
            "v": label_set_to_json(&g.vertices),
            "e": Value::Array(g.edges.iter().map(pair_to_json).collect()),
        }),
        Term::Poset(p) => json!({
            "v": label_set_to_json(&p.elements),
            "rel": Value::Array(p.relation.iter().map(pair_to_json).collect()),
        }),
        Term::Composite(c) => json!({
            "partition": Value::Array(
                c.inner.iter().map(|(b, _)| label_set_to_json(b)).collect()
            ),
            "outer": term_to_json(&c.outer),
            "inner": Value::Array(
                c.inner
                    .iter()
                    .map(|(b, t)| json!({"block": label_set_to_json(b), "term": term_to_json(t)}))
                    .collect()
            ),
        }),
        Term::Tagged(side, t) => json!({
            "side": match side {
                Side::Left => "left",
                Side::Right => "right",
            },
            "term": term_to_json(t),
        }),
        Term::Pair(x, y) => json!({
            "left": term_to_json(x),
            "right": term_to_json(y),
        }),
        Term::Cauchy(x, y) => json!({
            "first": term_to_json(x),
            "second": term_to_json(y),
        }),
    }
}

/// Species-directed decoding: plain arrays become sets, orders, or cycles
/// according to `species`, and the factors of compound species direct their
/// own sub-terms.
pub fn term_from_json(species: &Species, v: &Value) -> Result<Term> {
    match species {
        Species::One | Species::E => Ok(Term::Star(label_set_from_json(v)?)),
        Species::L => Term::order(label_vec(v)?),
        Species::Cyc => Term::cycle(label_vec(v)?),
        Species::G => {
            let vertices = label_set_from_json(field(v, "v", "graph")?)?;
            let edges = pair_vec(field(v, "e", "graph")?)?;
            Ok(Term::Graph(Graph::new(vertices, edges)?))
        }
        Species::Poset => {
            let elements = label_set_from_json(field(v, "v", "poset")?)?;
            let relation = pair_vec(field(v, "rel", "poset")?)?;
            Ok(Term::Poset(Poset::new(elements, relation)?))
        }
        Species::Truncate(inner, _) => term_from_json(inner, v),
        Species::Sum(a, b) => {
            let side = field(v, "side", "sum term")?;
            let term = field(v, "term", "sum term")?;
            match side.as_str() {
                Some("left") => Ok(Term::Tagged(Side::Left, Box::new(term_from_json(a, term)?))),
                Some("right") => {
                    Ok(Term::Tagged(Side::Right, Box::new(term_from_json(b, term)?)))
                }
                _ => Err(Error::Domain(format!(
                    "sum term: \"side\" must be \"left\" or \"right\", got {side}"
                ))),
            }
        }
        Species::Hadamard(a, b) => Ok(Term::Pair(
            Box::new(term_from_json(a, field(v, "left", "Hadamard term")?)?),
            Box::new(term_from_json(b, field(v, "right", "Hadamard term")?)?),
        )),
        Species::Cauchy(a, b) => Ok(Term::Cauchy(
            Box::new(term_from_json(a, field(v, "first", "Cauchy term")?)?),
            Box::new(term_from_json(b, field(v, "second", "Cauchy term")?)?),
        )),
        Species::Substitute(outer, inner) => {
            let mut partition: Vec<LabelSet> = Vec::new();
            let Value::Array(blocks) = field(v, "partition", "composite")? else {
                return Err(Error::Domain("composite: \"partition\" must be an array".into()));
            };
            for b in blocks {
                partition.push(label_set_from_json(b)?);
            }
            partition.sort();
            let Value::Array(items) = field(v, "inner", "composite")? else {
                return Err(Error::Domain("composite: \"inner\" must be an array".into()));
            };
            let mut decorations: Vec<(LabelSet, Term)> = Vec::new();
            for item in items {
                let block = label_set_from_json(field(item, "block", "composite inner")?)?;
                let term = term_from_json(inner, field(item, "term", "composite inner")?)?;
                decorations.push((block, term));
            }
            let mut listed: Vec<LabelSet> = decorations.iter().map(|(b, _)| b.clone()).collect();
            listed.sort();
            if listed != partition {
                return Err(Error::Domain(
                    "composite: \"partition\" disagrees with the \"inner\" blocks".into(),
                ));
            }
            let outer_term = term_from_json(outer, field(v, "outer", "composite")?)?;
            Ok(Term::Composite(Composite::new(outer_term, decorations)?))
        }
    }
}

/// Coefficient-term array, iterated in term order.
pub fn lincomb_to_json(v: &LinComb<Term>) -> Value {
    Value::Array(
        v.iter()
            .map(|(t, c)| json!({"c": rational_string(c), "t": term_to_json(t)}))
            .collect(),
    )
}

pub fn lincomb_from_json(species: &Species, v: &Value) -> Result<LinComb<Term>> {
    let Value::Array(items) = v else {
        return Err(Error::Domain(format!(
            "expected an array of coefficient-term entries, got {v}"
        )));
    };
    let mut out = LinComb::zero();
    for item in items {
        let c = field(item, "c", "linear combination")?;
        let Some(c) = c.as_str() else {
            return Err(Error::Domain(format!(
                "linear combination: coefficient must be a string, got {c}"
            )));
        };
        let t = term_from_json(species, field(item, "t", "linear combination")?)?;
        out.add_term(t, rational_from_str(c)?);
    }
    Ok(out)
}

/// Parses "num/den" (or a bare integer) into an exact rational.
pub fn rational_from_str(s: &str) -> Result<Rational> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let parse = |part: &str| -> Result<BigInt> {
        part.trim()
            .parse()
            .map_err(|_| Error::Domain(format!("invalid rational {s:?}")))
    };
    let num = parse(num)?;
    let den = parse(den)?;
    if den.is_zero() {
        return Err(Error::Domain(format!("invalid rational {s:?}: zero denominator")));
    }
    Ok(Rational::new(num, den))
}

fn pair_to_json(pair: &(Label, Label)) -> Value {
    Value::Array(vec![label_to_json(&pair.0), label_to_json(&pair.1)])
}

fn pair_vec(v: &Value) -> Result<Vec<(Label, Label)>> {
    let Value::Array(items) = v else {
        return Err(Error::Domain(format!(
            "expected an array of label pairs, got {v}"
        )));
    };
    items
        .iter()
        .map(|item| {
            let Value::Array(pair) = item else {
                return Err(Error::Domain(format!("expected a label pair, got {item}")));
            };
            let [a, b] = pair.as_slice() else {
                return Err(Error::Domain(format!("expected a label pair, got {item}")));
            };
            Ok((label_from_json(a)?, label_from_json(b)?))
        })
        .collect()
}

fn label_vec(v: &Value) -> Result<Vec<Label>> {
    let Value::Array(items) = v else {
        return Err(Error::Domain(format!(
            "expected an array of labels, got {v}"
        )));
    };
    items.iter().map(label_from_json).collect()
}

fn field<'a>(v: &'a Value, key: &str, what: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Domain(format!("{what}: missing field {key:?} in {v}")))
}
