//! The min-plus value semiring, its natural order, and character checks.

use std::fmt;

use num_traits::Zero;

use crate::flag::PLFunction;
use crate::rat::{q_str, Q};
use crate::valuation::{MonomialIdeal, Weight};
use crate::Error;

/// A value in `(-inf, +inf]` under (min, +). The additive identity is
/// `+inf` and the multiplicative identity is `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TropicalValue {
    Finite(Q),
    Infinity,
}

impl TropicalValue {
    pub fn zero() -> Self {
        TropicalValue::Infinity
    }

    pub fn one() -> Self {
        TropicalValue::Finite(Q::zero())
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            TropicalValue::Finite(x) => Some(x),
            TropicalValue::Infinity => None,
        }
    }

    /// Semiring addition: min, with `+inf` neutral.
    pub fn trop_add(&self, other: &Self) -> Self {
        match (self, other) {
            (TropicalValue::Infinity, x) | (x, TropicalValue::Infinity) => x.clone(),
            (TropicalValue::Finite(a), TropicalValue::Finite(b)) => {
                TropicalValue::Finite(a.min(b).clone())
            }
        }
    }

    /// Semiring multiplication: rational addition, with `+inf` absorbing.
    pub fn trop_mul(&self, other: &Self) -> Self {
        match (self, other) {
            (TropicalValue::Finite(a), TropicalValue::Finite(b)) => TropicalValue::Finite(a + b),
            _ => TropicalValue::Infinity,
        }
    }
}

impl fmt::Display for TropicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropicalValue::Finite(x) => write!(f, "{}", q_str(x)),
            TropicalValue::Infinity => write!(f, "inf"),
        }
    }
}

/// Both semiring operations at once.
pub fn trop_ops(a: &TropicalValue, b: &TropicalValue) -> (TropicalValue, TropicalValue) {
    (a.trop_add(b), a.trop_mul(b))
}

/// An element of an idempotent semiring, exposing just enough structure to
/// state the natural order `a <= b iff a = a + b`.
pub trait IdempotentSemiring: Clone + PartialEq {
    fn sr_add(&self, other: &Self) -> Self;
}

impl IdempotentSemiring for TropicalValue {
    fn sr_add(&self, other: &Self) -> Self {
        self.trop_add(other)
    }
}

impl IdempotentSemiring for MonomialIdeal {
    fn sr_add(&self, other: &Self) -> Self {
        self.sum(other)
    }
}

/// Natural semiring order: `a <= b` iff `a = a + b`.
pub fn natural_leq<S: IdempotentSemiring>(a: &S, b: &S) -> bool {
    *a == a.sr_add(b)
}

/// A candidate character of the monomial-ideal semiring, presented by its
/// values on finitely many elements.
#[derive(Clone, Debug, Default)]
pub struct CharacterCandidate {
    assignment: Vec<(MonomialIdeal, TropicalValue)>,
}

impl CharacterCandidate {
    pub fn new(assignment: Vec<(MonomialIdeal, TropicalValue)>) -> Self {
        CharacterCandidate { assignment }
    }

    pub fn value(&self, ideal: &MonomialIdeal) -> Option<&TropicalValue> {
        self.assignment.iter().find(|(i, _)| i == ideal).map(|(_, v)| v)
    }

    pub fn values(&self) -> impl Iterator<Item = &TropicalValue> {
        self.assignment.iter().map(|(_, v)| v)
    }
}

/// Checks the two character laws on every sampled pair, plus normalization
/// at the unit and (when assigned) the zero ideal.
pub fn is_character(
    chi: &CharacterCandidate,
    sample_pairs: &[(MonomialIdeal, MonomialIdeal)],
) -> Result<bool, Error> {
    let lookup = |i: &MonomialIdeal| -> Result<TropicalValue, Error> {
        chi.value(i)
            .cloned()
            .ok_or_else(|| Error::MissingCharacterValue(format!("{i}")))
    };
    for (a, b) in sample_pairs {
        let (xa, xb) = (lookup(a)?, lookup(b)?);
        if lookup(&a.product(b))? != xa.trop_mul(&xb) {
            return Ok(false);
        }
        if lookup(&a.sum(b))? != xa.trop_add(&xb) {
            return Ok(false);
        }
    }
    let n = chi
        .assignment
        .first()
        .map(|(i, _)| i.vars())
        .unwrap_or(1);
    if let Some(v) = chi.value(&MonomialIdeal::unit(n)) {
        if *v != TropicalValue::one() {
            return Ok(false);
        }
    }
    if let Some(v) = chi.value(&MonomialIdeal::zero(n)) {
        if *v != TropicalValue::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluation functional of a point: `delta_v(f) = f(v)`. It commutes with
/// max and is linear over rational combinations of the generators.
pub fn gelfand_eval(point: &Weight, f: &PLFunction) -> Result<Q, Error> {
    f.eval_weight(point)
}
