use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coalgebra::{
    compose_coalgebra, invert_coalgebra, Graded, MorphismComponents, SpaceTag, SymWord, TransportedStructure,
};
use crate::error::{Error, Result};
use crate::exact::expr::{parse_expression, ExprAlgebra};
use crate::exact::{Linear, Rational};
use crate::space::ProbabilitySpace;

use super::{cumulant_morphism, moment_morphism};

/// Components of an L∞ morphism `(ℚⁿ, 0) → (V, D^a)`, keyed by multisets of
/// source basis vectors.
///
/// Indices are 0-based and each key is sorted. Components not stored are
/// zero. With `defined_through = Some(k)` only arities up to `k` are known;
/// `None` means every arity is determined by the stored data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRVCollection<E> {
    n_vars: usize,
    var_degrees: Vec<i64>,
    components: BTreeMap<Vec<usize>, E>,
    defined_through: Option<usize>,
}

impl<E: Linear> HRVCollection<E> {
    pub fn new(var_degrees: Vec<i64>, defined_through: Option<usize>) -> Self {
        HRVCollection {
            n_vars: var_degrees.len(),
            var_degrees,
            components: BTreeMap::new(),
            defined_through,
        }
    }

    /// `eᵢ ↦ valuesᵢ` with every higher component zero. The values must be
    /// homogeneous; their degrees become the source degrees.
    pub fn strict<S: ProbabilitySpace<Elem = E>>(space: &S, values: &[E]) -> Result<Self> {
        let mut c = Self::new(degrees_of(space, values)?, None);
        for (i, v) in values.iter().enumerate() {
            c.set(&[i], v.clone())?;
        }
        Ok(c)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn var_degrees(&self) -> &[i64] {
        &self.var_degrees
    }

    pub fn defined_through(&self) -> Option<usize> {
        self.defined_through
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, E> {
        &self.components
    }

    fn check_index(&self, index: &[usize]) -> Result<()> {
        if index.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(&bad) = index.iter().find(|&&i| i >= self.n_vars) {
            return Err(Error::Arity(format!(
                "variable {} out of range, collection has {}",
                bad + 1,
                self.n_vars
            )));
        }
        if let Some(k) = self.defined_through {
            if index.len() > k {
                return Err(Error::Arity(format!(
                    "collection is defined through arity {k}, requested {}",
                    index.len()
                )));
            }
        }
        Ok(())
    }

    /// Stores the component at a multiset given in any order; the value is
    /// for that order and is re-signed to the sorted key.
    pub fn set(&mut self, index: &[usize], value: E) -> Result<()> {
        self.check_index(index)?;
        let (sign, key) = self.sort_index(index);
        if value.is_zero() {
            self.components.remove(&key);
        } else {
            self.components.insert(key, sign.apply(value));
        }
        Ok(())
    }

    fn sort_index(&self, index: &[usize]) -> (crate::coalgebra::Sign, Vec<usize>) {
        let mut order: Vec<usize> = (0..index.len()).collect();
        order.sort_by_key(|&k| index[k]);
        let degrees: Vec<i64> = index.iter().map(|&i| self.var_degrees[i]).collect();
        let sign = crate::coalgebra::permutation_sign(&order, &degrees);
        (sign, order.into_iter().map(|k| index[k]).collect())
    }

    /// `X(e_{i₁} ⊙ … ⊙ e_{i_k})`.
    pub fn component(&self, index: &[usize]) -> Result<E> {
        self.check_index(index)?;
        Ok(self.lookup(index))
    }

    fn lookup(&self, index: &[usize]) -> E {
        let (sign, key) = self.sort_index(index);
        if has_repeated_odd(&key, &self.var_degrees) {
            return E::zero();
        }
        self.components
            .get(&key)
            .map(|v| sign.apply(v.clone()))
            .unwrap_or_else(E::zero)
    }

    /// The collection as a coalgebra map out of `Sℚⁿ`; entries are variable
    /// indices.
    pub fn morphism(&self, target: SpaceTag) -> MorphismComponents<usize, E> {
        let this = self.clone();
        MorphismComponents::new(SpaceTag::Free(self.n_vars), target, 0, move |w: &[Graded<usize>]| {
            let index: Vec<usize> = w.iter().map(|g| g.value).collect();
            this.lookup(&index)
        })
    }

    /// The symmetric word `e_{i₁} ⊙ … ⊙ e_{i_k}` in the source.
    pub fn source_word(&self, index: &[usize]) -> Result<SymWord<usize>> {
        self.check_index(index)?;
        SymWord::new(index.iter().map(|&i| Graded::new(i, self.var_degrees[i])).collect())
    }
}

fn has_repeated_odd(sorted: &[usize], degrees: &[i64]) -> bool {
    sorted.windows(2).any(|p| p[0] == p[1] && degrees[p[0]] % 2 != 0)
}

fn degrees_of<S: ProbabilitySpace>(space: &S, values: &[S::Elem]) -> Result<Vec<i64>> {
    values.iter().map(|v| space.graded(v).map(|g| g.degree)).collect()
}

/// Sorted multisets of size `1..=max_arity` over `n_vars` variables.
pub fn multisets(n_vars: usize, max_arity: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_arity {
        layer = layer
            .into_iter()
            .flat_map(|m| {
                let start = m.last().copied().unwrap_or(0);
                (start..n_vars).map(move |i| {
                    let mut next = m.clone();
                    next.push(i);
                    next
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismFailure {
    pub arity: usize,
    /// 1-based variable indices.
    pub index: Vec<usize>,
    pub witness: String,
}

/// Outcome of [`is_morphism`]: the arities verified and the first failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub checked_through: usize,
    pub failure: Option<MorphismFailure>,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for MorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "L-infinity morphism through arity {}", self.checked_through),
            Some(x) => write!(f, "fails at arity {}: {}", x.arity, x.witness),
        }
    }
}

/// Checks `(D^a X)_n = 0` on every multiset of size `n ≤ max_arity`, stopping
/// at the first failing arity.
pub fn is_morphism<S: ProbabilitySpace>(
    x: &HRVCollection<S::Elem>,
    space: &S,
    max_arity: usize,
) -> Result<MorphismReport> {
    let transported = TransportedStructure::new(space.clone());
    transported.check_arity(max_arity)?;
    if let Some(k) = x.defined_through {
        if max_arity > k {
            return Err(Error::Arity(format!(
                "collection is defined through arity {k}, requested {max_arity}"
            )));
        }
    }
    for v in x.components.values() {
        space.check_member(v)?;
    }
    let coder = transported.coderivation();
    let xm = x.morphism(space.tag());
    for n in 1..=max_arity {
        for index in multisets(x.n_vars, n).into_iter().filter(|m| m.len() == n) {
            if has_repeated_odd(&index, &x.var_degrees) {
                continue;
            }
            let w = x.source_word(&index)?;
            let value = compose_coalgebra(&coder, &xm, &w)?;
            if !value.is_zero() {
                let witness = if n == 1 {
                    format!("d({}) = {}", space.describe(&x.lookup(&index)), space.describe(&value))
                } else {
                    let names: Vec<String> = index.iter().map(|i| format!("e{}", i + 1)).collect();
                    format!("(D^a X)({}) = {}", names.join(", "), space.describe(&value))
                };
                return Ok(MorphismReport {
                    checked_through: n - 1,
                    failure: Some(MorphismFailure {
                        arity: n,
                        index: index.iter().map(|i| i + 1).collect(),
                        witness,
                    }),
                });
            }
        }
    }
    Ok(MorphismReport {
        checked_through: max_arity,
        failure: None,
    })
}

/// The homotopy random variable `a⁻¹ ∘ F` of closed values, where `F` is the
/// strict map `eᵢ ↦ valuesᵢ`: its arity-k component at `(i₁, …, i_k)` is
/// `(a⁻¹)_k(x_{i₁}, …, x_{i_k})`. Components are computed through
/// `max_arity`.
pub fn transport_chain_map<S: ProbabilitySpace>(
    values: &[S::Elem],
    space: &S,
    max_arity: usize,
) -> Result<HRVCollection<S::Elem>> {
    for (i, v) in values.iter().enumerate() {
        space.check_member(v)?;
        let dv = space.differential(v);
        if !dv.is_zero() {
            return Err(Error::NotClosed {
                index: i + 1,
                image: space.describe(&dv),
            });
        }
    }
    let transported = TransportedStructure::new(space.clone());
    transported.check_arity(max_arity)?;
    let inverse = invert_coalgebra(transported.multiplication())?;
    let graded: Vec<Graded<S::Elem>> = values.iter().map(|v| space.graded(v)).collect::<Result<_>>()?;
    let mut x = HRVCollection::new(graded.iter().map(|g| g.degree).collect(), Some(max_arity));
    for index in multisets(values.len(), max_arity) {
        if has_repeated_odd(&index, &x.var_degrees) {
            continue;
        }
        let entries: Vec<Graded<S::Elem>> = index.iter().map(|&i| graded[i].clone()).collect();
        x.set(&index, inverse.evaluate_entries(&entries))?;
    }
    Ok(x)
}

fn require_morphism<S: ProbabilitySpace>(x: &HRVCollection<S::Elem>, space: &S, arity: usize) -> Result<()> {
    let report = is_morphism(x, space, arity)?;
    match report.failure {
        None => Ok(()),
        Some(_) => Err(Error::NotMorphism(report.to_string())),
    }
}

/// Arity-|idx| component of `M ∘ X`. Refuses collections that are not L∞
/// morphisms through `|idx|`, whose moments are not homotopy invariants.
pub fn joint_moment<S: ProbabilitySpace>(x: &HRVCollection<S::Elem>, space: &S, idx: &[usize]) -> Result<Rational> {
    let w = x.source_word(idx)?;
    require_morphism(x, space, idx.len())?;
    compose_coalgebra(&moment_morphism(space), &x.morphism(space.tag()), &w)
}

/// Arity-|idx| component of `K ∘ X`, with the same refusal as
/// [`joint_moment`].
pub fn joint_cumulant<S: ProbabilitySpace>(x: &HRVCollection<S::Elem>, space: &S, idx: &[usize]) -> Result<Rational> {
    let w = x.source_word(idx)?;
    require_morphism(x, space, idx.len())?;
    compose_coalgebra(&cumulant_morphism(space), &x.morphism(space.tag()), &w)
}

/// JSON shape of a collection. Indices are 1-based; values are expressions
/// in the space's grammar.
///
/// ```json
/// {"var_degrees": [0], "defined_through": 2,
///  "components": [{"index": [1], "value": "x"}, {"index": [1, 1], "value": "-x^2"}]}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollectionFile {
    pub var_degrees: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defined_through: Option<usize>,
    pub components: Vec<ComponentEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentEntry {
    pub index: Vec<usize>,
    pub value: String,
}

impl CollectionFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn resolve<S>(&self, space: &S) -> Result<HRVCollection<<S as ProbabilitySpace>::Elem>>
    where
        S: ProbabilitySpace + ExprAlgebra<Elem = <S as ProbabilitySpace>::Elem>,
    {
        let mut x = HRVCollection::new(self.var_degrees.clone(), self.defined_through);
        for entry in &self.components {
            if entry.index.contains(&0) {
                return Err(Error::Arity("variable indices start at 1".into()));
            }
            let index: Vec<usize> = entry.index.iter().map(|i| i - 1).collect();
            let value = parse_expression(space, &entry.value)?;
            let expected = index
                .iter()
                .map(|&i| x.var_degrees.get(i).copied().unwrap_or(0))
                .sum::<i64>();
            if let Some(d) = space.degree(&value) {
                if !value.is_zero() && d != expected {
                    return Err(Error::NotHomogeneous(format!(
                        "component {:?} has degree {d}, expected {expected}",
                        entry.index
                    )));
                }
            } else {
                return Err(Error::NotHomogeneous(space.describe(&value)));
            }
            x.set(&index, value)?;
        }
        Ok(x)
    }

    pub fn from_collection<S: ProbabilitySpace>(x: &HRVCollection<S::Elem>, space: &S) -> Self {
        CollectionFile {
            var_degrees: x.var_degrees.clone(),
            defined_through: x.defined_through,
            components: x
                .components
                .iter()
                .map(|(k, v)| ComponentEntry {
                    index: k.iter().map(|i| i + 1).collect(),
                    value: space.describe(v),
                })
                .collect(),
        }
    }
}
