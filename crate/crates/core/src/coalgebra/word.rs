use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Linear, Rational};

/// A homogeneous value tagged with its degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graded<E> {
    pub degree: i64,
    pub value: E,
}

impl<E> Graded<E> {
    pub fn new(value: E, degree: i64) -> Self {
        Graded { degree, value }
    }
}

/// An ordered representative of an element of `SⁿV`.
///
/// Permuted words stand for the same element up to a Koszul sign; signs are
/// applied explicitly, words are never normalized.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymWord<E> {
    entries: Vec<Graded<E>>,
}

impl<E> SymWord<E> {
    pub fn new(entries: Vec<Graded<E>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(SymWord { entries })
    }

    pub fn arity(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Graded<E>] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Graded<E>> {
        self.entries
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.entries.iter().map(|e| e.degree).collect()
    }

    pub fn total_degree(&self) -> i64 {
        self.entries.iter().map(|e| e.degree).sum()
    }
}

impl<E: Clone> SymWord<E> {
    /// The sub-word on the given (ascending) positions.
    pub fn select(&self, positions: &[usize]) -> Vec<Graded<E>> {
        positions.iter().map(|&i| self.entries[i].clone()).collect()
    }
}

impl<E: fmt::Debug> fmt::Debug for SymWord<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.entries.iter().map(|g| (&g.value, g.degree)))
            .finish()
    }
}

/// A finite linear combination of words; the empty sum is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSum<E> {
    pub terms: Vec<(Rational, SymWord<E>)>,
}

impl<E> Default for FormalSum<E> {
    fn default() -> Self {
        FormalSum { terms: Vec::new() }
    }
}

impl<E: Linear> FormalSum<E> {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, coeff: Rational, word: SymWord<E>) {
        if !num_traits::Zero::is_zero(&coeff) && word.entries.iter().all(|e| !e.value.is_zero()) {
            self.terms.push((coeff, word));
        }
    }

    /// Applies a multilinear map to every term and sums.
    pub fn map_sum<T: Linear>(&self, f: impl Fn(&SymWord<E>) -> T) -> T {
        let mut total = T::zero();
        for (c, w) in &self.terms {
            let v = f(w);
            if !v.is_zero() {
                total.add_assign_ref(&v.scaled(c));
            }
        }
        total
    }
}
