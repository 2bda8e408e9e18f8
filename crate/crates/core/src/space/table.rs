use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::{One, Signed};

use super::spec::SpaceSpec;
use super::ProbabilitySpace;
use crate::coalgebra::SpaceTag;
use crate::exact::expr::ExprAlgebra;
use crate::exact::{format_rational, Linear, Rational};

/// Sparse coefficient vector over the basis of a [`TableSpace`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableElement {
    coeffs: BTreeMap<usize, Rational>,
}

impl TableElement {
    pub fn basis(i: usize) -> Self {
        Self::from_pairs([(i, Rational::one())])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut e = TableElement::default();
        for (i, c) in pairs {
            e.add_term(i, &c);
        }
        e
    }

    pub fn add_term(&mut self, i: usize, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(i).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl Linear for TableElement {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_assign_ref(&mut self, other: &Self) {
        for (i, c) in other.terms() {
            self.add_term(i, c);
        }
    }

    fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::default();
        }
        TableElement {
            coeffs: self.coeffs.iter().map(|(&i, a)| (i, a * c)).collect(),
        }
    }
}

pub(crate) struct TableData {
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
    pub unit: Option<usize>,
    /// `product[i][j] = b_i · b_j`
    pub product: Vec<Vec<TableElement>>,
    pub differential: Vec<TableElement>,
    pub expectation: Vec<Rational>,
    pub tag: String,
}

/// A finite-dimensional space given by structure constants.
#[derive(Clone)]
pub struct TableSpace {
    pub(crate) data: Arc<TableData>,
}

impl std::fmt::Debug for TableSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TableSpace")
            .field("tag", &self.data.tag)
            .field("basis", &self.data.names)
            .finish()
    }
}

impl TableSpace {
    /// Assembles a space from raw tables. Shapes are trusted; use
    /// [`SpaceSpec`] and [`validate_space`](super::validate_space) for input
    /// from outside.
    pub(crate) fn from_tables(
        names: Vec<String>,
        degrees: Vec<i64>,
        unit: Option<usize>,
        product: Vec<Vec<TableElement>>,
        differential: Vec<TableElement>,
        expectation: Vec<Rational>,
    ) -> Self {
        let mut h = DefaultHasher::new();
        (&names, &degrees, &product, &differential).hash(&mut h);
        let tag = format!("table:{:016x}", h.finish());
        TableSpace {
            data: Arc::new(TableData {
                names,
                degrees,
                unit,
                product,
                differential,
                expectation,
                tag,
            }),
        }
    }

    pub fn dimension(&self) -> usize {
        self.data.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.data.names
    }

    pub fn basis_degree(&self, i: usize) -> i64 {
        self.data.degrees[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.data.names.iter().position(|n| n == name)
    }

    pub fn basis_element(&self, name: &str) -> Option<TableElement> {
        self.index_of(name).map(TableElement::basis)
    }

    pub fn unit_index(&self) -> Option<usize> {
        self.data.unit
    }

    pub fn expectation_vector(&self) -> &[Rational] {
        &self.data.expectation
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &TableElement {
        &self.data.product[i][j]
    }

    pub fn basis_differential(&self, i: usize) -> &TableElement {
        &self.data.differential[i]
    }

    /// Indices of basis elements in the given degree.
    pub fn basis_in_degree(&self, degree: i64) -> Vec<usize> {
        (0..self.dimension())
            .filter(|&i| self.data.degrees[i] == degree)
            .collect()
    }

    /// Same complex and product, new expectation values.
    pub fn with_expectation(&self, expectation: Vec<Rational>) -> Self {
        assert_eq!(expectation.len(), self.dimension());
        let d = &self.data;
        TableSpace {
            data: Arc::new(TableData {
                names: d.names.clone(),
                degrees: d.degrees.clone(),
                unit: d.unit,
                product: d.product.clone(),
                differential: d.differential.clone(),
                expectation,
                tag: d.tag.clone(),
            }),
        }
    }

    pub fn to_spec(&self) -> SpaceSpec {
        SpaceSpec::from_space(self)
    }
}

impl ProbabilitySpace for TableSpace {
    type Elem = TableElement;

    fn tag(&self) -> SpaceTag {
        SpaceTag::Space(self.data.tag.clone())
    }

    fn contains(&self, z: &TableElement) -> bool {
        z.coeffs.keys().all(|&i| i < self.dimension())
    }

    fn differential(&self, z: &TableElement) -> TableElement {
        let mut out = TableElement::default();
        for (i, c) in z.terms() {
            out.add_assign_ref(&self.data.differential[i].scaled(c));
        }
        out
    }

    fn product(&self, a: &TableElement, b: &TableElement) -> TableElement {
        let mut out = TableElement::default();
        for (i, ca) in a.terms() {
            for (j, cb) in b.terms() {
                out.add_assign_ref(&self.data.product[i][j].scaled(&(ca * cb)));
            }
        }
        out
    }

    fn expectation(&self, z: &TableElement) -> Rational {
        z.terms()
            .map(|(i, c)| c * &self.data.expectation[i])
            .fold(Rational::zero(), |acc, v| acc + v)
    }

    fn unit(&self) -> Option<TableElement> {
        self.data.unit.map(TableElement::basis)
    }

    fn homogeneous_parts(&self, z: &TableElement) -> Vec<(i64, TableElement)> {
        let mut parts: BTreeMap<i64, TableElement> = BTreeMap::new();
        for (i, c) in z.terms() {
            parts.entry(self.data.degrees[i]).or_default().add_term(i, c);
        }
        parts.into_iter().collect()
    }

    fn describe(&self, z: &TableElement) -> String {
        if z.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (i, c)) in z.terms().enumerate() {
            let name = &self.data.names[i];
            if k == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let magnitude = c.abs();
            if magnitude.is_one() {
                s.push_str(name);
            } else {
                s.push_str(&format!("{}*{name}", format_rational(&magnitude)));
            }
        }
        s
    }
}

impl ExprAlgebra for TableSpace {
    type Elem = TableElement;

    fn constant(&self, c: Rational) -> Option<TableElement> {
        if c.is_zero() {
            return Some(TableElement::default());
        }
        self.unit().map(|u| u.scaled(&c))
    }

    fn variable(&self, name: &str) -> Option<TableElement> {
        self.basis_element(name)
    }

    fn multiply(&self, a: &TableElement, b: &TableElement) -> TableElement {
        self.product(a, b)
    }

    fn as_scalar(&self, e: &TableElement) -> Option<Rational> {
        if e.is_zero() {
            return Some(Rational::zero());
        }
        let u = self.data.unit?;
        (e.coeffs.len() == 1).then(|| e.coeff(u)).filter(|c| !c.is_zero())
    }
}

/// The three-element test space used throughout the docs:
/// `u` (unit, degree 0), `v` (degree 0), `w` (degree 1) with
/// `d v = w`, `v·v = u`, `v·w = w`, `E(u) = 1`, `E(v) = E(w) = 0`.
pub fn fixture_spec() -> SpaceSpec {
    serde_json::from_str(FIXTURE_JSON).expect("fixture parses")
}

pub fn fixture_space() -> TableSpace {
    fixture_spec().build().expect("fixture is well formed")
}

pub(crate) const FIXTURE_JSON: &str = r#"{
  "basis": [{"name": "u", "degree": 0}, {"name": "v", "degree": 0}, {"name": "w", "degree": 1}],
  "unit": "u",
  "product": [
    {"left": "v", "right": "v", "out": [{"b": "u", "c": "1"}]},
    {"left": "v", "right": "w", "out": [{"b": "w", "c": "1"}]}
  ],
  "differential": [{"in": "v", "out": [{"b": "w", "c": "1"}]}],
  "expectation": [{"b": "u", "c": "1"}]
}"#;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::expr::parse_expression;
    use crate::exact::rat;

    #[test]
    fn fixture_operations() {
        let s = fixture_space();
        let u = s.basis_element("u").unwrap();
        let v = s.basis_element("v").unwrap();
        let w = s.basis_element("w").unwrap();
        assert_eq!(s.differential(&v), w);
        assert_eq!(s.product(&u, &w), w);
        assert_eq!(s.product(&w, &v), w);
        assert_eq!(s.product(&v, &v), u);
        assert_eq!(s.expectation(&u), rat(1));
        assert_eq!(s.degree(&w), Some(1));
        assert_eq!(s.degree(&(u.clone().scaled(&rat(2)))), Some(0));
        let mut mixed = v.clone();
        mixed.add_assign_ref(&w);
        assert_eq!(s.degree(&mixed), None);
        assert_eq!(s.homogeneous_parts(&mixed).len(), 2);
    }

    #[test]
    fn expressions_over_basis_names() {
        let s = fixture_space();
        let e = parse_expression(&s, "2*v - 1/2*w + 3").unwrap();
        assert_eq!(s.describe(&e), "3*u + 2*v - 1/2*w");
        assert_eq!(parse_expression(&s, &s.describe(&e)).unwrap(), e);
        assert_eq!(parse_expression(&s, "v^2").unwrap(), s.unit().unwrap());
        assert!(parse_expression(&s, "q").is_err());
    }

    #[test]
    fn tag_ignores_expectation() {
        let s = fixture_space();
        let t = s.with_expectation(vec![rat(1), rat(5), rat(0)]);
        assert_eq!(s.tag(), t.tag());
        assert_ne!(
            s.expectation(&TableElement::basis(1)),
            t.expectation(&TableElement::basis(1))
        );
    }
}
