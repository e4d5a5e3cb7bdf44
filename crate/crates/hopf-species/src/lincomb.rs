//! Formal linear combinations over exact rationals.
//!
//! All structure maps in this crate are linear maps presented on basis terms;
//! `LinComb` is their common value type. Keys are any ordered term type, so
//! the same container covers single terms, tensor pairs, and triples. The
//! invariant is that no zero coefficient is ever stored, which makes
//! structural equality coincide with equality of vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational scalars: arbitrary-precision, always reduced, positive
/// denominator (num-rational maintains these invariants).
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// 1/n! as an exact rational.
pub fn inverse_factorial(n: usize) -> Rational {
    let mut f = BigInt::one();
    for i in 2..=n {
        f *= BigInt::from(i);
    }
    Rational::new(BigInt::one(), f)
}

/// Renders a rational as "num/den" with the sign on the numerator.
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinComb<K: Ord + Clone> {
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord + Clone> Default for LinComb<K> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// A single basis term with coefficient 1.
    pub fn unit(k: K) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(k, Rational::one());
        LinComb { terms }
    }

    pub fn with_coeff(k: K, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c);
        out
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (K, Rational)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in pairs {
            out.add_term(k, c);
        }
        out
    }

    pub fn add_term(&mut self, k: K, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &K) -> Rational {
        self.terms.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn into_pairs(self) -> impl Iterator<Item = (K, Rational)> {
        self.terms.into_iter()
    }

    /// The unique term of a combination known to be a single basis term with
    /// coefficient 1; `None` otherwise. Linearized structure maps produce
    /// exactly such values.
    pub fn as_single_unit(&self) -> Option<&K> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        if c.is_one() {
            Some(k)
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    /// Applies a term-level map linearly; colliding images add up.
    pub fn map_terms<K2: Ord + Clone>(&self, f: impl Fn(&K) -> K2) -> LinComb<K2> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }

    /// Fallible term-level map, for maps with domain checks.
    pub fn try_map_terms<K2: Ord + Clone, E>(
        &self,
        mut f: impl FnMut(&K) -> std::result::Result<K2, E>,
    ) -> std::result::Result<LinComb<K2>, E> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_term(f(k)?, c.clone());
        }
        Ok(out)
    }

    /// Linear extension of a basis-term map into combinations.
    pub fn bind<K2: Ord + Clone, E>(
        &self,
        mut f: impl FnMut(&K) -> std::result::Result<LinComb<K2>, E>,
    ) -> std::result::Result<LinComb<K2>, E> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            for (k2, c2) in f(k)?.terms {
                out.add_term(k2, c * c2);
            }
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> Add for LinComb<K> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl<K: Ord + Clone> AddAssign for LinComb<K> {
    fn add_assign(&mut self, rhs: Self) {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
    }
}

impl<K: Ord + Clone> Sub for LinComb<K> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.terms {
            self.add_term(k, -c);
        }
        self
    }
}

impl<K: Ord + Clone> Neg for LinComb<K> {
    type Output = Self;
    fn neg(self) -> Self {
        LinComb {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl<K: Ord + Clone + fmt::Display> fmt::Display for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if c.is_one() {
                    write!(f, "{k}")?;
                } else if (-c.clone()).is_one() {
                    write!(f, "-{k}")?;
                } else {
                    write!(f, "{c}·{k}")?;
                }
            } else if c.is_positive() {
                if c.is_one() {
                    write!(f, " + {k}")?;
                } else {
                    write!(f, " + {c}·{k}")?;
                }
            } else if (-c.clone()).is_one() {
                write!(f, " - {k}")?;
            } else {
                write!(f, " - {}·{k}", -c.clone())?;
            }
        }
        Ok(())
    }
}

/// Tensor of two combinations as a combination over pairs.
pub fn tensor2<A: Ord + Clone, B: Ord + Clone>(
    a: &LinComb<A>,
    b: &LinComb<B>,
) -> LinComb<(A, B)> {
    let mut out = LinComb::zero();
    for (ka, ca) in a.iter() {
        for (kb, cb) in b.iter() {
            out.add_term((ka.clone(), kb.clone()), ca * cb);
        }
    }
    out
}

/// Display helper for tensor pairs.
pub fn pair_string<A: fmt::Display, B: fmt::Display>(lc: &LinComb<(A, B)>) -> String
where
    A: Ord + Clone,
    B: Ord + Clone,
{
    if lc.is_zero() {
        return "0".into();
    }
    lc.iter()
        .map(|((a, b), c)| format!("{c}·({a} ⊗ {b})"))
        .collect::<Vec<_>>()
        .join(" + ")
}
