//! Coalgebra maps `SV → SV'` given by their components `SⁿV → V'`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use super::koszul::{permutation_sign, unshuffle_sign, Sign};
use super::partition::partitions_of;
use super::word::{FormalSum, Graded, SymWord};
use crate::error::{Error, Result};
use crate::exact::{Linear, Rational};

/// Identifies the graded space a component map reads from or writes to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceTag {
    /// The ground field in degree 0.
    Scalars,
    /// `ℚⁿ` spanned by standard basis vectors, the source of a collection of
    /// random variables.
    Free(usize),
    /// A probability space (or its underlying complex with product).
    Space(String),
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceTag::Scalars => f.write_str("scalars"),
            SpaceTag::Free(n) => write!(f, "free({n})"),
            SpaceTag::Space(s) => f.write_str(s),
        }
    }
}

pub type Evaluator<A, B> = Arc<dyn Fn(&[Graded<A>]) -> B + Send + Sync>;

/// Arity-indexed components of a coalgebra map or coderivation.
///
/// The evaluator takes the entries of one word and must be multilinear and
/// graded symmetric. Output degree is the sum of entry degrees plus
/// [`degree`](Self::degree).
pub struct MorphismComponents<A, B> {
    source: SpaceTag,
    target: SpaceTag,
    degree: i64,
    unital: bool,
    strict: bool,
    eval: Evaluator<A, B>,
}

impl<A, B> Clone for MorphismComponents<A, B> {
    fn clone(&self) -> Self {
        MorphismComponents {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            unital: self.unital,
            strict: self.strict,
            eval: self.eval.clone(),
        }
    }
}

impl<A: Clone + Send + Sync + 'static, B: Linear> MorphismComponents<A, B> {
    pub fn new(
        source: SpaceTag,
        target: SpaceTag,
        degree: i64,
        eval: impl Fn(&[Graded<A>]) -> B + Send + Sync + 'static,
    ) -> Self {
        MorphismComponents {
            source,
            target,
            degree,
            unital: false,
            strict: false,
            eval: Arc::new(eval),
        }
    }

    /// Only the arity-1 component is nonzero.
    pub fn strict(
        source: SpaceTag,
        target: SpaceTag,
        degree: i64,
        linear: impl Fn(&Graded<A>) -> B + Send + Sync + 'static,
    ) -> Self {
        let mut map = Self::new(source, target, degree, move |w: &[Graded<A>]| {
            if w.len() == 1 {
                linear(&w[0])
            } else {
                B::zero()
            }
        });
        map.strict = true;
        map
    }

    /// Declares the arity-1 component to be the identity, which is what
    /// [`invert_coalgebra`] requires.
    pub fn assume_unital(mut self) -> Self {
        self.unital = true;
        self
    }

    pub fn source(&self) -> &SpaceTag {
        &self.source
    }

    pub fn target(&self) -> &SpaceTag {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    /// Built by [`strict`](Self::strict); compositions skip the partitions
    /// that such a map sends to zero.
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn evaluator(&self) -> &Evaluator<A, B> {
        &self.eval
    }

    pub fn evaluate(&self, word: &SymWord<A>) -> B {
        (self.eval)(word.entries())
    }

    pub fn evaluate_entries(&self, entries: &[Graded<A>]) -> B {
        (self.eval)(entries)
    }
}

impl<E: Linear> MorphismComponents<E, E> {
    pub fn identity(space: SpaceTag) -> Self {
        Self::strict(space.clone(), space, 0, |g: &Graded<E>| g.value.clone()).assume_unital()
    }
}

/// Images `f(w_B)` of the blocks `B ⊆ word`, computed once per block.
struct BlockImages<'a, A, B> {
    f: &'a Evaluator<A, B>,
    f_degree: i64,
    entries: &'a [Graded<A>],
    cache: Vec<Option<Option<Graded<B>>>>,
}

impl<'a, A: Clone, B: Linear> BlockImages<'a, A, B> {
    fn new(f: &'a Evaluator<A, B>, f_degree: i64, entries: &'a [Graded<A>]) -> Self {
        BlockImages {
            f,
            f_degree,
            entries,
            cache: vec![None; 1 << entries.len()],
        }
    }

    /// `None` when the image vanishes.
    fn image(&mut self, block: &[usize], mask: u32) -> Option<Graded<B>> {
        if let Some(cached) = &self.cache[mask as usize] {
            return cached.clone();
        }
        let sub: Vec<Graded<A>> = block.iter().map(|&i| self.entries[i].clone()).collect();
        let degree = sub.iter().map(|g| g.degree).sum::<i64>() + self.f_degree;
        let value = (self.f)(&sub);
        let image = (!value.is_zero()).then(|| Graded::new(value, degree));
        self.cache[mask as usize] = Some(image.clone());
        image
    }

    /// Images of every block of a partition, or `None` if one vanishes.
    fn word(&mut self, blocks: &[Vec<usize>], masks: &[u32]) -> Option<Vec<Graded<B>>> {
        blocks.iter().zip(masks).map(|(b, &m)| self.image(b, m)).collect()
    }
}

fn composed_entries<A: Clone, B: Linear, C: Linear>(
    g: &Evaluator<B, C>,
    f: &Evaluator<A, B>,
    strict: (bool, bool),
    entries: &[Graded<A>],
) -> C {
    match strict {
        // only the one-block partition survives
        (true, _) => {
            let value = f(entries);
            if value.is_zero() {
                return C::zero();
            }
            let degree = entries.iter().map(|e| e.degree).sum();
            return g(&[Graded::new(value, degree)]);
        }
        // only the discrete partition survives
        (false, true) => {
            let mut word = Vec::with_capacity(entries.len());
            for e in entries {
                let value = f(std::slice::from_ref(e));
                if value.is_zero() {
                    return C::zero();
                }
                word.push(Graded::new(value, e.degree));
            }
            return g(&word);
        }
        (false, false) => {}
    }
    let degrees: Vec<i64> = entries.iter().map(|e| e.degree).collect();
    let mut images = BlockImages::new(f, 0, entries);
    let mut total = C::zero();
    for partition in partitions_of(entries.len()).iter() {
        let Some(word) = images.word(partition.blocks(), partition.masks()) else {
            continue;
        };
        let value = g(&word);
        if !value.is_zero() {
            total.add_assign_ref(&unshuffle_sign(partition, &degrees).apply(value));
        }
    }
    total
}

fn check_composable<A, B, C>(g: &MorphismComponents<B, C>, f: &MorphismComponents<A, B>) -> Result<()> {
    if f.target != g.source {
        return Err(Error::Composition(format!(
            "inner map lands in {} but outer map reads {}",
            f.target, g.source
        )));
    }
    if f.degree != 0 {
        return Err(Error::Composition(format!(
            "inner map must be a degree-0 coalgebra map, has degree {}",
            f.degree
        )));
    }
    Ok(())
}

/// Arity-n component of `G ∘ F` at `w`:
/// `Σ_π ε(π, w) · g_|π|(f_|B₁|(w_B₁), …, f_|B_k|(w_B_k))`.
///
/// `G` may also be the component data of a coderivation (degree 1); its
/// projection to `V` composes with `F` by the same formula.
pub fn compose_coalgebra<A, B, C>(
    g: &MorphismComponents<B, C>,
    f: &MorphismComponents<A, B>,
    w: &SymWord<A>,
) -> Result<C>
where
    A: Clone + Send + Sync + 'static,
    B: Linear,
    C: Linear,
{
    check_composable(g, f)?;
    Ok(composed_entries(&g.eval, &f.eval, (g.strict, f.strict), w.entries()))
}

/// The composite `G ∘ F` as a new component family, evaluated lazily.
pub fn compose<A, B, C>(g: &MorphismComponents<B, C>, f: &MorphismComponents<A, B>) -> Result<MorphismComponents<A, C>>
where
    A: Clone + Send + Sync + 'static,
    B: Linear,
    C: Linear,
{
    check_composable(g, f)?;
    let (ge, fe) = (g.eval.clone(), f.eval.clone());
    let strict = (g.strict, f.strict);
    let mut composed = MorphismComponents::new(
        f.source.clone(),
        g.target.clone(),
        g.degree,
        move |w: &[Graded<A>]| composed_entries(&ge, &fe, strict, w),
    );
    composed.unital = g.unital && f.unital;
    composed.strict = g.strict && f.strict;
    Ok(composed)
}

/// `F(w) ∈ SV'`: the word pushed through a coalgebra map, as a sum of words
/// `ε(π, w) · f(w_B₁) ⊙ … ⊙ f(w_B_k)` over partitions.
pub fn push_forward<A, B>(f: &MorphismComponents<A, B>, w: &SymWord<A>) -> FormalSum<B>
where
    A: Clone + Send + Sync + 'static,
    B: Linear,
{
    let entries = w.entries();
    let degrees = w.degrees();
    let mut images = BlockImages::new(&f.eval, f.degree, entries);
    let mut sum = FormalSum::default();
    for partition in partitions_of(entries.len()).iter() {
        if let Some(word) = images.word(partition.blocks(), partition.masks()) {
            let coeff = Rational::from_integer(unshuffle_sign(partition, &degrees).as_i64().into());
            sum.push(coeff, SymWord::new(word).expect("partitions have blocks"));
        }
    }
    sum
}

pub(crate) type Memo<E> = HashMap<Vec<Graded<E>>, E>;

/// Sorts entries into canonical order, returning the Koszul sign relating the
/// value on `entries` to the value on the sorted word.
fn canonical<E: Linear>(entries: &[Graded<E>]) -> (Sign, Vec<Graded<E>>) {
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&i, &j| entries[i].cmp(&entries[j]));
    let degrees: Vec<i64> = entries.iter().map(|e| e.degree).collect();
    let sign = permutation_sign(&order, &degrees);
    (sign, order.into_iter().map(|i| entries[i].clone()).collect())
}

pub(crate) fn inverse_entries<E: Linear>(f: &Evaluator<E, E>, entries: &[Graded<E>], memo: &mut Memo<E>) -> E {
    if entries.len() == 1 {
        return entries[0].value.clone();
    }
    if entries.iter().any(|e| e.value.is_zero()) {
        return E::zero();
    }
    let (sign, key) = canonical(entries);
    if let Some(hit) = memo.get(&key) {
        return sign.apply(hit.clone());
    }
    let degrees: Vec<i64> = key.iter().map(|e| e.degree).collect();
    let mut images = BlockImages::new(f, 0, &key);
    let mut total = E::zero();
    for partition in partitions_of(key.len()).iter() {
        if partition.is_discrete() {
            continue;
        }
        let Some(word) = images.word(partition.blocks(), partition.masks()) else {
            continue;
        };
        let value = inverse_entries(f, &word, memo);
        if !value.is_zero() {
            total.add_assign_ref(&unshuffle_sign(partition, &degrees).apply(value));
        }
    }
    let value = total.negated();
    memo.insert(key, value.clone());
    sign.apply(value)
}

/// Inverse of a coalgebra map whose arity-1 component is the identity.
///
/// `(F⁻¹)₁ = id` and for `n > 1`
/// `(F⁻¹)_n(w) = -Σ_{π ≠ singletons} ε(π, w) · (F⁻¹)_|π|(f(w_B₁), …, f(w_B_k))`.
/// Each evaluation memoizes intermediate words locally, keyed on their
/// canonical order, so nothing is shared between calls.
pub fn invert_coalgebra<E: Linear>(f: &MorphismComponents<E, E>) -> Result<MorphismComponents<E, E>> {
    if !f.unital || f.degree != 0 || f.source != f.target {
        return Err(Error::NotUnital);
    }
    let fe = f.eval.clone();
    Ok(
        MorphismComponents::new(f.target.clone(), f.source.clone(), 0, move |w: &[Graded<E>]| {
            inverse_entries(&fe, w, &mut Memo::new())
        })
        .assume_unital(),
    )
}

/// `a'`: repeated multiplication of scalars, `(c₁, …, c_n) ↦ c₁⋯c_n`.
pub fn scalar_multiplication() -> MorphismComponents<Rational, Rational> {
    MorphismComponents::new(SpaceTag::Scalars, SpaceTag::Scalars, 0, |w: &[Graded<Rational>]| {
        w.iter().fold(Rational::one(), |acc, g| acc * &g.value)
    })
    .assume_unital()
}
