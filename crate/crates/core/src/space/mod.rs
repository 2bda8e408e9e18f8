//! Commutative homotopy probability spaces: a chain complex `(V, d)`, a
//! graded-commutative associative product `a`, and an expectation `E` that is
//! a chain map to the scalars.

mod handle;
mod spec;
mod table;

pub use handle::{SpaceElement, SpaceHandle};
pub use spec::{
    validate_space, BasisEntry, Coefficient, DifferentialEntry, Identity, ProductEntry, SpaceSpec, Term,
    ValidationReport, Violation,
};
pub use table::{fixture_space, fixture_spec, TableElement, TableSpace};

use crate::coalgebra::{Graded, SpaceTag, SymWord};
use crate::error::{Error, Result};
use crate::exact::{Linear, Rational};

/// The evaluators a space backend provides. Elements may be of mixed degree;
/// [`homogeneous_parts`](Self::homogeneous_parts) splits them.
pub trait ProbabilitySpace: Clone + Send + Sync + 'static {
    type Elem: Linear;

    /// Identifies the complex with its product. Changing only the expectation
    /// keeps the tag, so collections built for one expectation can be reused
    /// with a homotopic one.
    fn tag(&self) -> SpaceTag;

    fn contains(&self, z: &Self::Elem) -> bool;

    /// Degree +1.
    fn differential(&self, z: &Self::Elem) -> Self::Elem;

    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn expectation(&self, z: &Self::Elem) -> Rational;

    fn unit(&self) -> Option<Self::Elem>;

    /// Nonzero homogeneous parts with their degrees; empty for zero.
    fn homogeneous_parts(&self, z: &Self::Elem) -> Vec<(i64, Self::Elem)>;

    /// Human-readable rendering, re-parseable by the expression grammar.
    fn describe(&self, z: &Self::Elem) -> String;

    /// Degree of a homogeneous element; zero has degree 0, mixed elements none.
    fn degree(&self, z: &Self::Elem) -> Option<i64> {
        match self.homogeneous_parts(z).as_slice() {
            [] => Some(0),
            [(d, _)] => Some(*d),
            _ => None,
        }
    }

    fn check_member(&self, z: &Self::Elem) -> Result<()> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                expected: self.tag().to_string(),
                found: format!("{z:?}"),
            })
        }
    }

    fn graded(&self, z: &Self::Elem) -> Result<Graded<Self::Elem>> {
        self.check_member(z)?;
        let degree = self.degree(z).ok_or_else(|| Error::NotHomogeneous(self.describe(z)))?;
        Ok(Graded::new(z.clone(), degree))
    }

    /// A symmetric word of homogeneous elements.
    fn word(&self, entries: &[Self::Elem]) -> Result<SymWord<Self::Elem>> {
        SymWord::new(entries.iter().map(|z| self.graded(z)).collect::<Result<_>>()?)
    }

    /// `z₁·z₂⋯z_n`, multiplied left to right.
    fn multiply_all<'a>(&self, factors: impl IntoIterator<Item = &'a Self::Elem>) -> Option<Self::Elem> {
        let mut it = factors.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, z| self.product(&acc, z)))
    }
}

/// Every way of choosing one homogeneous part per entry, with the product of
/// the choices; zero entries produce no words.
pub fn homogeneous_expansion<S: ProbabilitySpace>(space: &S, entries: &[S::Elem]) -> Result<Vec<SymWord<S::Elem>>> {
    let mut words: Vec<Vec<Graded<S::Elem>>> = vec![Vec::new()];
    for z in entries {
        space.check_member(z)?;
        let parts = space.homogeneous_parts(z);
        words = words
            .into_iter()
            .flat_map(|prefix| {
                parts.iter().map(move |(d, part)| {
                    let mut w = prefix.clone();
                    w.push(Graded::new(part.clone(), *d));
                    w
                })
            })
            .collect();
    }
    if entries.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(words.into_iter().map(|w| SymWord::new(w).expect("nonempty")).collect())
}
