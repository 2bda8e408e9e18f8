use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rational, Linear, Rational};
use crate::space::{ProbabilitySpace, TableElement, TableSpace};

use super::hrv::{is_morphism, joint_cumulant, joint_moment, multisets, transport_chain_map, HRVCollection};

/// A linear functional `h` on the degree-1 part, zero elsewhere. The
/// perturbed expectation `E + h∘d` is chain homotopic to `E`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainHomotopy {
    values: BTreeMap<usize, Rational>,
}

impl ChainHomotopy {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `h(b_i) = c` for each pair; every `b_i` must have degree 1.
    pub fn new(space: &TableSpace, values: impl IntoIterator<Item = (usize, Rational)>) -> Result<Self> {
        let mut h = ChainHomotopy::default();
        for (i, c) in values {
            if i >= space.dimension() {
                return Err(Error::Shape(format!("basis index {i} out of range")));
            }
            if space.basis_degree(i) != 1 {
                return Err(Error::Shape(format!(
                    "h is supported on degree 1, but {} has degree {}",
                    space.names()[i],
                    space.basis_degree(i)
                )));
            }
            if !c.is_zero() {
                h.values.insert(i, c);
            }
        }
        Ok(h)
    }

    /// By basis name.
    pub fn from_names<'a>(space: &TableSpace, values: impl IntoIterator<Item = (&'a str, Rational)>) -> Result<Self> {
        let resolved = values
            .into_iter()
            .map(|(name, c)| {
                space
                    .index_of(name)
                    .map(|i| (i, c))
                    .ok_or_else(|| Error::Shape(format!("unknown basis name {name:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, resolved)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn apply(&self, z: &TableElement) -> Rational {
        z.terms()
            .filter_map(|(i, c)| self.values.get(&i).map(|h| h * c))
            .fold(Rational::zero(), |acc, v| acc + v)
    }
}

/// The same space with expectation `E' = E + h∘d`.
pub fn perturb_expectation(space: &TableSpace, h: &ChainHomotopy) -> Result<TableSpace> {
    if let Some((&i, _)) = h
        .values
        .iter()
        .find(|(&i, _)| i >= space.dimension() || space.basis_degree(i) != 1)
    {
        return Err(Error::Shape(format!(
            "h is not supported on degree 1 at basis index {i}"
        )));
    }
    let expectation = (0..space.dimension())
        .map(|i| &space.expectation_vector()[i] + h.apply(space.basis_differential(i)))
        .collect();
    Ok(space.with_expectation(expectation))
}

/// How far [`invariance_check`] searches for collections.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Arity through which collections must be morphisms and statistics are
    /// compared.
    pub max_arity: usize,
    /// Try `X₁` plus every candidate arity-2 correction.
    pub with_second_component: bool,
    /// Try two-variable collections of passing strict candidates.
    pub pairs: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_arity: 5,
            with_second_component: true,
            pairs: 6,
        }
    }
}

/// Element whose plain expectation moves under the homotopy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectationShift {
    pub element: String,
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub candidates_tried: usize,
    pub collections: usize,
    pub homotopies: usize,
    pub comparisons: usize,
    pub mismatches: Vec<String>,
    pub shift: Option<ExpectationShift>,
}

impl InvarianceReport {
    /// Statistics agree, and the comparison was not vacuous.
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.collections > 0 && self.homotopies > 0 && self.shift.is_some()
    }
}

impl fmt::Display for InvarianceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} collections (of {} candidates) x {} homotopies: {} comparisons, {} mismatches",
            self.collections,
            self.candidates_tried,
            self.homotopies,
            self.comparisons,
            self.mismatches.len()
        )?;
        for m in &self.mismatches {
            writeln!(f, "  {m}")?;
        }
        match &self.shift {
            Some(s) => write!(f, "non-closed {}: E = {}, E' = {}", s.element, s.before, s.after),
            None => write!(f, "no non-closed element changes expectation"),
        }
    }
}

/// Degree-0 combinations with coefficients in {-1, 0, 1}, zero excluded.
fn small_combinations(space: &TableSpace) -> Vec<TableElement> {
    let basis = space.basis_in_degree(0);
    let mut out = vec![TableElement::default()];
    for &i in &basis {
        out = out
            .into_iter()
            .flat_map(|e| {
                [-1i64, 0, 1].into_iter().map(move |c| {
                    let mut next = e.clone();
                    next.add_term(i, &Rational::from_integer(c.into()));
                    next
                })
            })
            .collect();
    }
    out.retain(|e| !e.is_zero());
    for e in closed_degree_zero(space) {
        if !out.contains(&e) {
            out.push(e);
        }
    }
    out
}

/// A basis of the closed degree-0 elements, by row reduction of `d`.
pub fn closed_degree_zero(space: &TableSpace) -> Vec<TableElement> {
    let cols = space.basis_in_degree(0);
    let rows = space.basis_in_degree(1);
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| space.basis_differential(c).coeff(r)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols.len() {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let lead = m[rank][col].clone();
        for v in m[rank].iter_mut() {
            *v = &*v / &lead;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[rank].clone();
                for (v, p) in m[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    (0..cols.len())
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut e = TableElement::basis(cols[free]);
            for (r, &pc) in pivots.iter().enumerate() {
                e.add_term(cols[pc], &-m[r][free].clone());
            }
            e
        })
        .collect()
}

/// Collections found by bounded search that are L∞ morphisms through
/// `bounds.max_arity`, with the number of candidates tried.
pub fn find_collections(space: &TableSpace, bounds: SearchBounds) -> Result<(Vec<HRVCollection<TableElement>>, usize)> {
    let combos = small_combinations(space);
    let mut found = Vec::new();
    let mut tried = 0;
    let passes = |x: &HRVCollection<TableElement>, tried: &mut usize| -> Result<bool> {
        *tried += 1;
        Ok(is_morphism(x, space, bounds.max_arity)?.passed())
    };

    let mut strict_passing = Vec::new();
    for x1 in &combos {
        let strict = HRVCollection::strict(space, std::slice::from_ref(x1))?;
        if passes(&strict, &mut tried)? {
            strict_passing.push(x1.clone());
            found.push(strict);
        }
        if bounds.with_second_component {
            for x2 in &combos {
                let mut x = HRVCollection::strict(space, std::slice::from_ref(x1))?;
                x.set(&[0, 0], x2.clone())?;
                if passes(&x, &mut tried)? {
                    found.push(x);
                }
            }
        }
    }

    let closed: Vec<TableElement> = combos
        .iter()
        .filter(|e| space.differential(e).is_zero())
        .cloned()
        .collect();
    for f in &closed {
        tried += 1;
        found.push(transport_chain_map(std::slice::from_ref(f), space, bounds.max_arity)?);
    }

    let mut pairs = 0;
    'outer: for (i, a) in strict_passing.iter().enumerate() {
        for b in &strict_passing[i + 1..] {
            if pairs == bounds.pairs {
                break 'outer;
            }
            pairs += 1;
            let x = HRVCollection::strict(space, &[a.clone(), b.clone()])?;
            if passes(&x, &mut tried)? {
                found.push(x);
            }
        }
    }
    Ok((found, tried))
}

/// Compares joint moments and cumulants under `E` and `E + h∘d` for every
/// collection found by [`find_collections`] and every homotopy, on every
/// index multiset through `bounds.max_arity`. Also looks for a non-closed
/// basis element whose expectation the homotopy moves.
pub fn invariance_check(
    space: &TableSpace,
    homotopies: &[ChainHomotopy],
    bounds: SearchBounds,
) -> Result<InvarianceReport> {
    let (collections, tried) = find_collections(space, bounds)?;
    let mut report = InvarianceReport {
        candidates_tried: tried,
        collections: collections.len(),
        ..Default::default()
    };
    for h in homotopies.iter().filter(|h| !h.is_zero()) {
        report.homotopies += 1;
        let perturbed = perturb_expectation(space, h)?;
        for x in &collections {
            for idx in multisets(x.n_vars(), bounds.max_arity) {
                let pairs = [
                    (
                        "moment",
                        joint_moment(x, space, &idx)?,
                        joint_moment(x, &perturbed, &idx)?,
                    ),
                    (
                        "cumulant",
                        joint_cumulant(x, space, &idx)?,
                        joint_cumulant(x, &perturbed, &idx)?,
                    ),
                ];
                for (what, before, after) in pairs {
                    report.comparisons += 1;
                    if before != after {
                        report.mismatches.push(format!(
                            "{what} at {idx:?}: {} vs {}",
                            format_rational(&before),
                            format_rational(&after)
                        ));
                    }
                }
            }
        }
        if report.shift.is_none() {
            report.shift = (0..space.dimension()).find_map(|i| {
                let b = TableElement::basis(i);
                let (before, after) = (space.expectation(&b), perturbed.expectation(&b));
                (!space.differential(&b).is_zero() && before != after).then(|| ExpectationShift {
                    element: space.names()[i].clone(),
                    before: format_rational(&before),
                    after: format_rational(&after),
                })
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use crate::space::fixture_space;

    #[test]
    fn perturbation_examples() {
        let s = fixture_space();
        let v = s.basis_element("v").unwrap();
        let t = ratio(3, 2);
        let h = ChainHomotopy::from_names(&s, [("w", t.clone())]).unwrap();
        let p = perturb_expectation(&s, &h).unwrap();
        assert_eq!(p.expectation(&v), s.expectation(&v) + t);
        assert!(p.validate().is_valid());
        assert_eq!(
            perturb_expectation(&s, &ChainHomotopy::zero())
                .unwrap()
                .expectation_vector(),
            s.expectation_vector()
        );
        assert!(matches!(
            ChainHomotopy::from_names(&s, [("v", rat(1))]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn closed_basis_is_closed() {
        let mut rng = crate::random::seeded(11);
        for template in crate::random::TableTemplate::ALL {
            let space = crate::random::table_space(&mut rng, template);
            for e in closed_degree_zero(&space) {
                assert!(space.differential(&e).is_zero());
            }
        }
        assert!(!closed_degree_zero(&fixture_space()).is_empty());
    }

    #[test]
    fn fixture_invariance() {
        let s = fixture_space();
        let hs: Vec<ChainHomotopy> = [rat(1), rat(-2)]
            .into_iter()
            .map(|t| ChainHomotopy::from_names(&s, [("w", t)]).unwrap())
            .collect();
        let bounds = SearchBounds {
            max_arity: 3,
            ..Default::default()
        };
        let report = invariance_check(&s, &hs, bounds).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.shift.as_ref().unwrap().element, "v");
    }

    #[test]
    fn non_morphisms_are_not_invariant() {
        let s = fixture_space();
        let v = s.basis_element("v").unwrap();
        let x = HRVCollection::strict(&s, std::slice::from_ref(&v)).unwrap();
        assert!(joint_moment(&x, &s, &[0]).is_err());
        let p = perturb_expectation(&s, &ChainHomotopy::from_names(&s, [("w", rat(1))]).unwrap()).unwrap();
        assert_ne!(s.expectation(&v), p.expectation(&v));
    }
}
