//! Moments and cumulants as L∞ morphism components, homotopy random
//! variables, and the homotopy-invariance harness.

mod homotopy;
mod hrv;

pub use homotopy::{
    closed_degree_zero, find_collections, invariance_check, perturb_expectation, ChainHomotopy, ExpectationShift,
    InvarianceReport, SearchBounds,
};
pub use hrv::{
    is_morphism, joint_cumulant, joint_moment, multisets, transport_chain_map, CollectionFile, ComponentEntry,
    HRVCollection, MorphismFailure, MorphismReport,
};

use std::fmt;

use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::coalgebra::{
    compose, compose_coalgebra, invert_coalgebra, multiplication, scalar_multiplication, set_partitions, Graded,
    MorphismComponents, SpaceTag, SymWord, TransportedStructure,
};
use crate::error::Result;
use crate::exact::{Linear, Rational};
use crate::random::{seeded, Sampler};
use crate::space::ProbabilitySpace;

/// `Ê`: the expectation as a strict coalgebra map `SV → Sℚ`.
pub fn strict_expectation<S: ProbabilitySpace>(space: &S) -> MorphismComponents<S::Elem, Rational> {
    let s = space.clone();
    MorphismComponents::strict(space.tag(), SpaceTag::Scalars, 0, move |g: &Graded<S::Elem>| {
        s.expectation(&g.value)
    })
}

/// `M = Ê ∘ a`, the total moment.
pub fn moment_morphism<S: ProbabilitySpace>(space: &S) -> MorphismComponents<S::Elem, Rational> {
    compose(&strict_expectation(space), &multiplication(space)).expect("same space")
}

/// `K = (a')⁻¹ ∘ Ê ∘ a`, the total cumulant.
pub fn cumulant_morphism<S: ProbabilitySpace>(space: &S) -> MorphismComponents<S::Elem, Rational> {
    let inverse = invert_coalgebra(&scalar_multiplication()).expect("a' is unital");
    compose(&inverse, &moment_morphism(space)).expect("lands in scalars")
}

fn check_word<S: ProbabilitySpace>(space: &S, w: &SymWord<S::Elem>) -> Result<()> {
    w.entries().iter().try_for_each(|g| space.check_member(&g.value))
}

/// `m_n(w) = E(w₁⋯w_n)`.
pub fn total_moment<S: ProbabilitySpace>(space: &S, w: &SymWord<S::Elem>) -> Result<Rational> {
    check_word(space, w)?;
    compose_coalgebra(&strict_expectation(space), &multiplication(space), w)
}

/// Arity-n component of `(a')⁻¹ ∘ Ê ∘ a` at `w`.
pub fn total_cumulant<S: ProbabilitySpace>(space: &S, w: &SymWord<S::Elem>) -> Result<Rational> {
    check_word(space, w)?;
    let inverse = invert_coalgebra(&scalar_multiplication())?;
    compose_coalgebra(&inverse, &moment_morphism(space), w)
}

/// Sign of sorting `degrees` into the order `order` by adjacent
/// transpositions, each odd-odd swap contributing a factor -1.
fn bubble_sign(order: &[usize], degrees: &[i64]) -> bool {
    let mut current: Vec<usize> = (0..order.len()).collect();
    let target_pos: Vec<usize> = {
        let mut pos = vec![0; order.len()];
        for (k, &i) in order.iter().enumerate() {
            pos[i] = k;
        }
        pos
    };
    let mut negative = false;
    let mut swapped = true;
    while swapped {
        swapped = false;
        for k in 1..current.len() {
            if target_pos[current[k - 1]] > target_pos[current[k]] {
                if degrees[current[k - 1]] % 2 != 0 && degrees[current[k]] % 2 != 0 {
                    negative = !negative;
                }
                current.swap(k - 1, k);
                swapped = true;
            }
        }
    }
    negative
}

/// Classical Möbius inversion on the partition lattice:
/// `Σ_π ±(-1)^(|π|-1) (|π|-1)! Π_B E(Π_{i∈B} wᵢ)`, with the Koszul sign of
/// rearranging `w` into its blocks. Independent of the coalgebra machinery.
pub fn cumulant_partition_oracle<S: ProbabilitySpace>(space: &S, w: &SymWord<S::Elem>) -> Result<Rational> {
    check_word(space, w)?;
    let degrees = w.degrees();
    let mut total = Rational::zero();
    for partition in set_partitions(w.arity())? {
        let mut term = Rational::one();
        for block in partition.blocks() {
            let product = space
                .multiply_all(block.iter().map(|&i| &w.entries()[i].value))
                .expect("blocks are nonempty");
            term *= space.expectation(&product);
            if term.is_zero() {
                break;
            }
        }
        if term.is_zero() {
            continue;
        }
        let k = partition.len() as i64;
        let factorial: i64 = (1..k).product();
        term *= Rational::from_integer((if k % 2 == 1 { factorial } else { -factorial }).into());
        let order: Vec<usize> = partition.blocks().iter().flatten().copied().collect();
        if bubble_sign(&order, &degrees) {
            term = -term;
        }
        total += term;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub arity: usize,
    pub word: Vec<String>,
    pub value: String,
}

/// Outcome of [`linfty_relations_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationsReport {
    pub words_checked: usize,
    pub failures: Vec<RelationFailure>,
}

impl RelationsReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for RelationsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "D^a∘D^a = 0 on {} words", self.words_checked);
        }
        writeln!(
            f,
            "D^a∘D^a ≠ 0 on {} of {} words",
            self.failures.len(),
            self.words_checked
        )?;
        for x in &self.failures {
            writeln!(f, "  arity {} ({}) -> {}", x.arity, x.word.join(", "), x.value)?;
        }
        Ok(())
    }
}

/// Evaluates `(D^a ∘ D^a)_n` on `samples` random words of each arity
/// `1..=max_arity`; every value should be zero.
pub fn linfty_relations_check<S: Sampler>(
    space: &S,
    max_arity: usize,
    samples: usize,
    seed: u64,
) -> Result<RelationsReport> {
    let transported = TransportedStructure::new(space.clone());
    transported.check_arity(max_arity)?;
    let mut rng = seeded(seed);
    let mut report = RelationsReport::default();
    for n in 1..=max_arity {
        for _ in 0..samples {
            let entries: Vec<S::Elem> = (0..n).map(|_| space.sample(&mut rng)).collect();
            let w = space.word(&entries)?;
            let value = transported.square_component(&w)?;
            report.words_checked += 1;
            if !value.is_zero() {
                report.failures.push(RelationFailure {
                    arity: n,
                    word: entries.iter().map(|z| space.describe(z)).collect(),
                    value: space.describe(&value),
                });
            }
        }
    }
    Ok(report)
}

/// A random homogeneous word of the given arity.
pub fn random_word<S: Sampler, R: Rng>(space: &S, rng: &mut R, arity: usize) -> Result<SymWord<S::Elem>> {
    let entries: Vec<S::Elem> = (0..arity).map(|_| space.sample(rng)).collect();
    space.word(&entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, GaussianElement};
    use crate::gaussian::GaussianSpace;
    use crate::space::fixture_space;

    fn xs(n: usize) -> SymWord<GaussianElement> {
        GaussianSpace.word(&vec![GaussianElement::x(); n]).unwrap()
    }

    #[test]
    fn gaussian_moments_and_cumulants() {
        let g = GaussianSpace;
        assert_eq!(total_moment(&g, &xs(4)).unwrap(), rat(3));
        assert_eq!(total_moment(&g, &xs(3)).unwrap(), rat(0));
        assert_eq!(
            total_moment(&g, &g.word(&[GaussianElement::one()]).unwrap()).unwrap(),
            rat(1)
        );
        assert_eq!(total_cumulant(&g, &xs(2)).unwrap(), rat(1));
        assert_eq!(total_cumulant(&g, &xs(4)).unwrap(), rat(0));
        assert_eq!(total_cumulant(&g, &xs(1)).unwrap(), rat(0));
        assert_eq!(cumulant_partition_oracle(&g, &xs(2)).unwrap(), rat(1));
        assert_eq!(cumulant_partition_oracle(&g, &xs(4)).unwrap(), rat(0));
        let w = g.word(&[GaussianElement::x().product(&GaussianElement::x())]).unwrap();
        assert_eq!(cumulant_partition_oracle(&g, &w).unwrap(), rat(1));
    }

    #[test]
    fn bubble_sign_matches_koszul_sign() {
        use crate::coalgebra::koszul_sign;
        let degrees = [-1, 0, -1, -1, 2];
        for order in [[0, 1, 2, 3, 4], [2, 0, 1, 4, 3], [4, 3, 2, 1, 0], [3, 0, 2, 1, 4]] {
            assert_eq!(
                bubble_sign(&order, &degrees),
                koszul_sign(&order, &degrees).unwrap().is_negative(),
                "{order:?}"
            );
        }
    }

    #[test]
    fn relations_hold() {
        assert!(linfty_relations_check(&GaussianSpace, 3, 3, 1).unwrap().passed());
        assert!(linfty_relations_check(&fixture_space(), 3, 5, 2).unwrap().passed());
        assert!(linfty_relations_check(&GaussianSpace, 1, 5, 3).unwrap().words_checked == 5);
        assert!(linfty_relations_check(&GaussianSpace, 9, 1, 3).is_err());
    }
}
