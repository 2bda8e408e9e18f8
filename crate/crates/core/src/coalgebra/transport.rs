//! Transport of the differential along the multiplication map `a`:
//! `D^a = a⁻¹ ∘ D ∘ a`.

use std::fmt;
use std::str::FromStr;

use super::coderivation_extend;
use super::koszul::{decalage_sign, permutation_sign};
use super::morphism::{inverse_entries, invert_coalgebra, push_forward, Memo, MorphismComponents};
use super::word::{Graded, SymWord};
use crate::error::{Error, Result};
use crate::exact::Linear;
use crate::space::{homogeneous_expansion, ProbabilitySpace};

pub const DEFAULT_TRANSPORT_CAP: usize = 8;

/// Sign normalization for reporting components.
///
/// `Symmetric` components are graded symmetric in the Koszul sense and are
/// what the coderivation and the L∞ relations use. `Bracket` components are
/// the same maps after the décalage sign `(-1)^(Σᵢ (n-1-i)|wᵢ|)`, which is
/// the normalization of the Gaussian closed form
/// [`d2_closed_form`](crate::gaussian::d2_closed_form).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    Symmetric,
    #[default]
    Bracket,
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(Convention::Symmetric),
            "bracket" => Ok(Convention::Bracket),
            other => Err(Error::Parse {
                offset: 0,
                message: format!("unknown convention {other:?}, expected symmetric or bracket"),
            }),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Symmetric => "symmetric",
            Convention::Bracket => "bracket",
        })
    }
}

/// `a`: arity-1 component the identity, arity-n component the n-fold product.
pub fn multiplication<S: ProbabilitySpace>(space: &S) -> MorphismComponents<S::Elem, S::Elem> {
    let s = space.clone();
    MorphismComponents::new(space.tag(), space.tag(), 0, move |w: &[Graded<S::Elem>]| {
        s.multiply_all(w.iter().map(|g| &g.value)).expect("words are nonempty")
    })
    .assume_unital()
}

/// The components `d^a_n` of the transported coderivation.
#[derive(Clone)]
pub struct TransportedStructure<S: ProbabilitySpace> {
    space: S,
    a: MorphismComponents<S::Elem, S::Elem>,
    cap: usize,
}

impl<S: ProbabilitySpace> TransportedStructure<S> {
    pub fn new(space: S) -> Self {
        Self::with_cap(space, DEFAULT_TRANSPORT_CAP)
    }

    pub fn with_cap(space: S, cap: usize) -> Self {
        let a = multiplication(&space);
        TransportedStructure { space, a, cap }
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn multiplication(&self) -> &MorphismComponents<S::Elem, S::Elem> {
        &self.a
    }

    /// `a⁻¹`, by the general inversion recursion.
    pub fn inverse_multiplication(&self) -> MorphismComponents<S::Elem, S::Elem> {
        invert_coalgebra(&self.a).expect("a is unital")
    }

    pub(crate) fn check_arity(&self, n: usize) -> Result<()> {
        if n > self.cap {
            return Err(Error::SizeLimit {
                what: "transport arity",
                requested: n,
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// `d^a_n(w)` in the symmetric convention, without the cap check.
    ///
    /// Pushes `w` through `a`, applies the coderivation extension of `d` to
    /// each resulting word, and projects with `a⁻¹`.
    pub(crate) fn evaluate(&self, entries: &[Graded<S::Elem>], memo: &mut Memo<S::Elem>) -> S::Elem {
        if entries.iter().any(|e| e.value.is_zero()) {
            return S::Elem::zero();
        }
        let word = SymWord::new(entries.to_vec()).expect("nonempty");
        let a_eval = self.a.evaluator();
        let mut total = S::Elem::zero();
        for (c, pushed) in &push_forward(&self.a, &word).terms {
            let extended = coderivation_extend(|z| self.space.differential(z), pushed);
            for (c2, w2) in &extended.terms {
                let value = inverse_entries(a_eval, w2.entries(), memo);
                if !value.is_zero() {
                    total.add_assign_ref(&value.scaled(&(c * c2)));
                }
            }
        }
        total
    }

    /// `d^a_n(w)` in the symmetric convention.
    pub fn component(&self, w: &SymWord<S::Elem>) -> Result<S::Elem> {
        self.check_arity(w.arity())?;
        for g in w.entries() {
            self.space.check_member(&g.value)?;
        }
        Ok(self.evaluate(w.entries(), &mut Memo::new()))
    }

    pub fn component_in(&self, w: &SymWord<S::Elem>, convention: Convention) -> Result<S::Elem> {
        let value = self.component(w)?;
        Ok(match convention {
            Convention::Symmetric => value,
            Convention::Bracket => decalage_sign(&w.degrees()).apply(value),
        })
    }

    /// `d^a_n(w)` in the bracket convention.
    pub fn bracket_component(&self, w: &SymWord<S::Elem>) -> Result<S::Elem> {
        self.component_in(w, Convention::Bracket)
    }

    /// Multilinear extension to entries of mixed degree.
    pub fn component_of(&self, entries: &[S::Elem], convention: Convention) -> Result<S::Elem> {
        self.check_arity(entries.len())?;
        let mut total = S::Elem::zero();
        for w in homogeneous_expansion(&self.space, entries)? {
            total.add_assign_ref(&self.component_in(&w, convention)?);
        }
        Ok(total)
    }

    /// The coderivation `D^a` as component data of degree 1, symmetric
    /// convention. Arities above the cap are not rejected here; callers
    /// bound the arity.
    pub fn coderivation(&self) -> MorphismComponents<S::Elem, S::Elem> {
        let this = self.clone();
        MorphismComponents::new(self.space.tag(), self.space.tag(), 1, move |w: &[Graded<S::Elem>]| {
            this.evaluate(w, &mut Memo::new())
        })
    }

    /// Arity-n component of `D^a ∘ D^a` at `w`:
    /// `Σ_{∅≠B⊆[n]} ε(B | rest) · d_{n-|B|+1}(d_|B|(w_B), w_rest)`.
    /// Zero for every `w` exactly when the L∞ relations hold at arity `n`.
    pub fn square_component(&self, w: &SymWord<S::Elem>) -> Result<S::Elem> {
        let n = w.arity();
        self.check_arity(n)?;
        let entries = w.entries();
        let degrees = w.degrees();
        let mut memo = Memo::new();
        let mut total = S::Elem::zero();
        for mask in 1u32..(1 << n) {
            let (inner, rest): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| mask & (1 << i) != 0);
            let block: Vec<Graded<S::Elem>> = inner.iter().map(|&i| entries[i].clone()).collect();
            let image = self.evaluate(&block, &mut memo);
            if image.is_zero() {
                continue;
            }
            let degree = block.iter().map(|g| g.degree).sum::<i64>() + 1;
            let mut outer = vec![Graded::new(image, degree)];
            outer.extend(rest.iter().map(|&i| entries[i].clone()));
            let value = self.evaluate(&outer, &mut memo);
            if value.is_zero() {
                continue;
            }
            let order: Vec<usize> = inner.iter().chain(&rest).copied().collect();
            total.add_assign_ref(&permutation_sign(&order, &degrees).apply(value));
        }
        Ok(total)
    }
}

/// `d^a_n(w)` in the bracket convention; the arity-2 component on the
/// Gaussian space is [`d2_closed_form`](crate::gaussian::d2_closed_form).
pub fn transport_structure<S: ProbabilitySpace>(space: &S, w: &SymWord<S::Elem>) -> Result<S::Elem> {
    TransportedStructure::new(space.clone()).bracket_component(w)
}
