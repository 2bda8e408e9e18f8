//! JSON space files and axiom validation for finite-table spaces.
//!
//! ```json
//! {"basis": [{"name": "u", "degree": 0}, ...],
//!  "unit": "u",
//!  "product": [{"left": "v", "right": "v", "out": [{"b": "u", "c": "1"}]}],
//!  "differential": [{"in": "v", "out": [{"b": "w", "c": "1"}]}],
//!  "expectation": [{"b": "u", "c": "1"}]}
//! ```
//!
//! Omitted entries are zero, with two conveniences: a product given for one
//! order only is mirrored with the Koszul sign, and products with the unit
//! default to the unit law. Coefficients are integers or `"a/b"` strings.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::table::{TableElement, TableSpace};
use super::ProbabilitySpace;
use crate::coalgebra::Sign;
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Linear, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub basis: Vec<BasisEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    #[serde(default)]
    pub product: Vec<ProductEntry>,
    #[serde(default)]
    pub differential: Vec<DifferentialEntry>,
    #[serde(default)]
    pub expectation: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub out: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferentialEntry {
    #[serde(rename = "in")]
    pub input: String,
    pub out: Vec<Term>,
}

/// `c · b` for a basis name `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub b: String,
    pub c: Coefficient,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Integer(i64),
    Text(String),
}

impl Coefficient {
    pub fn value(&self) -> Result<Rational> {
        match self {
            Coefficient::Integer(n) => Ok(Rational::from_integer((*n).into())),
            Coefficient::Text(s) => parse_rational(s),
        }
    }
}

impl From<&Rational> for Coefficient {
    fn from(r: &Rational) -> Self {
        Coefficient::Text(format_rational(r))
    }
}

impl SpaceSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Resolves names and fills the tables. Fails only on malformed input;
    /// axioms are checked separately by [`validate_space`].
    pub fn build(&self) -> Result<TableSpace> {
        let names: Vec<String> = self.basis.iter().map(|b| b.name.clone()).collect();
        let degrees: Vec<i64> = self.basis.iter().map(|b| b.degree).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || !n.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::MalformedSpace(format!("invalid basis name {n:?}")));
            }
            if n.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                return Err(Error::MalformedSpace(format!("basis name {n:?} starts with a digit")));
            }
            if index.insert(n.as_str(), i).is_some() {
                return Err(Error::MalformedSpace(format!("duplicate basis name {n:?}")));
            }
        }
        let lookup = |n: &str| {
            index
                .get(n)
                .copied()
                .ok_or_else(|| Error::MalformedSpace(format!("unknown basis name {n:?}")))
        };
        let element = |terms: &[Term]| -> Result<TableElement> {
            let mut e = TableElement::default();
            for t in terms {
                e.add_term(lookup(&t.b)?, &t.c.value()?);
            }
            Ok(e)
        };

        let dim = names.len();
        let unit = self.unit.as_deref().map(lookup).transpose()?;

        let mut product: Vec<Vec<Option<TableElement>>> = vec![vec![None; dim]; dim];
        for entry in &self.product {
            let (i, j) = (lookup(&entry.left)?, lookup(&entry.right)?);
            if product[i][j].is_some() {
                return Err(Error::MalformedSpace(format!(
                    "product {}·{} given twice",
                    entry.left, entry.right
                )));
            }
            product[i][j] = Some(element(&entry.out)?);
        }
        for i in 0..dim {
            for j in 0..dim {
                if product[j][i].is_none() {
                    if let Some(ij) = product[i][j].clone() {
                        let sign = Sign::power(degrees[i] * degrees[j]);
                        product[j][i] = Some(sign.apply(ij));
                    }
                }
            }
        }
        if let Some(u) = unit {
            for (i, entry) in product[u].iter_mut().enumerate() {
                entry.get_or_insert_with(|| TableElement::basis(i));
            }
            for (i, row) in product.iter_mut().enumerate() {
                row[u].get_or_insert_with(|| TableElement::basis(i));
            }
        }
        let product = product
            .into_iter()
            .map(|row| row.into_iter().map(Option::unwrap_or_default).collect())
            .collect();

        let mut differential = vec![None; dim];
        for entry in &self.differential {
            let i = lookup(&entry.input)?;
            if differential[i].is_some() {
                return Err(Error::MalformedSpace(format!("d({}) given twice", entry.input)));
            }
            differential[i] = Some(element(&entry.out)?);
        }
        let differential = differential.into_iter().map(Option::unwrap_or_default).collect();

        let mut expectation = vec![Rational::zero(); dim];
        let mut seen = HashSet::new();
        for t in &self.expectation {
            let i = lookup(&t.b)?;
            if !seen.insert(i) {
                return Err(Error::MalformedSpace(format!("E({}) given twice", t.b)));
            }
            expectation[i] = t.c.value()?;
        }

        Ok(TableSpace::from_tables(
            names,
            degrees,
            unit,
            product,
            differential,
            expectation,
        ))
    }

    /// Full tables of a built space, every nonzero entry explicit.
    pub fn from_space(space: &TableSpace) -> Self {
        let names = space.names();
        let terms = |e: &TableElement| -> Vec<Term> {
            e.terms()
                .map(|(i, c)| Term {
                    b: names[i].clone(),
                    c: c.into(),
                })
                .collect()
        };
        let dim = space.dimension();
        let mut product = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let e = space.basis_product(i, j);
                if !e.is_zero() {
                    product.push(ProductEntry {
                        left: names[i].clone(),
                        right: names[j].clone(),
                        out: terms(e),
                    });
                }
            }
        }
        SpaceSpec {
            basis: (0..dim)
                .map(|i| BasisEntry {
                    name: names[i].clone(),
                    degree: space.basis_degree(i),
                })
                .collect(),
            unit: space.unit_index().map(|u| names[u].clone()),
            product,
            differential: (0..dim)
                .filter(|&i| !space.basis_differential(i).is_zero())
                .map(|i| DifferentialEntry {
                    input: names[i].clone(),
                    out: terms(space.basis_differential(i)),
                })
                .collect(),
            expectation: space
                .expectation_vector()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| Term {
                    b: names[i].clone(),
                    c: c.into(),
                })
                .collect(),
        }
    }
}

/// The identity a violation breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    ProductDegree,
    DifferentialDegree,
    ExpectationDegree,
    SquareZero,
    ChainMap,
    GradedCommutativity,
    Associativity,
    UnitLaw,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::ProductDegree => "product respects degrees",
            Identity::DifferentialDegree => "d raises degree by 1",
            Identity::ExpectationDegree => "E vanishes off degree 0",
            Identity::SquareZero => "d∘d = 0",
            Identity::ChainMap => "E∘d = 0",
            Identity::GradedCommutativity => "graded commutativity",
            Identity::Associativity => "associativity",
            Identity::UnitLaw => "unit law",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: Identity,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn check(&mut self, ok: bool, identity: Identity, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(Violation {
                identity,
                witness: witness(),
            });
        }
    }

    pub fn violates(&self, identity: Identity) -> bool {
        self.violations.iter().any(|v| v.identity == identity)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid ({} checks)", self.checks);
        }
        writeln!(f, "invalid: {} of {} checks failed", self.violations.len(), self.checks)?;
        for v in &self.violations {
            writeln!(f, "  {}: {}", v.identity, v.witness)?;
        }
        Ok(())
    }
}

/// Builds the space and checks every axiom on basis elements, pairs and
/// triples. Malformed input is an `Err`; axiom failures are report content.
pub fn validate_space(spec: &SpaceSpec) -> Result<ValidationReport> {
    Ok(spec.build()?.validate())
}

impl TableSpace {
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.dimension();
        let name = |i: usize| self.names()[i].clone();
        let b = TableElement::basis;
        let deg = |i: usize| self.basis_degree(i);

        for i in 0..n {
            let di = self.basis_differential(i);
            for (k, _) in di.terms() {
                report.check(deg(k) == deg(i) + 1, Identity::DifferentialDegree, || {
                    format!("d({}) has a {} term", name(i), name(k))
                });
            }
            let e = &self.expectation_vector()[i];
            report.check(deg(i) == 0 || e.is_zero(), Identity::ExpectationDegree, || {
                format!("E({}) = {} in degree {}", name(i), format_rational(e), deg(i))
            });
            let dd = self.differential(di);
            report.check(dd.is_zero(), Identity::SquareZero, || {
                format!("d(d({})) = {}", name(i), self.describe(&dd))
            });
            let ed = self.expectation(di);
            report.check(ed.is_zero(), Identity::ChainMap, || {
                format!("E(d({})) = {}", name(i), format_rational(&ed))
            });
        }

        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for (k, _) in ij.terms() {
                    report.check(deg(k) == deg(i) + deg(j), Identity::ProductDegree, || {
                        format!("{}·{} has a {} term", name(i), name(j), name(k))
                    });
                }
                if i < j {
                    let ji = Sign::power(deg(i) * deg(j)).apply(self.basis_product(j, i).clone());
                    report.check(*ij == ji, Identity::GradedCommutativity, || {
                        format!(
                            "{a}·{b} = {} but ±{b}·{a} = {}",
                            self.describe(ij),
                            self.describe(&ji),
                            a = name(i),
                            b = name(j)
                        )
                    });
                }
                for k in 0..n {
                    let left = self.product(ij, &b(k));
                    let right = self.product(&b(i), self.basis_product(j, k));
                    report.check(left == right, Identity::Associativity, || {
                        format!(
                            "({a}·{b})·{c} = {} but {a}·({b}·{c}) = {}",
                            self.describe(&left),
                            self.describe(&right),
                            a = name(i),
                            b = name(j),
                            c = name(k)
                        )
                    });
                }
            }
        }

        if let Some(u) = self.unit_index() {
            for i in 0..n {
                let ok = *self.basis_product(u, i) == b(i) && *self.basis_product(i, u) == b(i);
                report.check(ok, Identity::UnitLaw, || {
                    format!(
                        "{u}·{x} = {}",
                        self.describe(self.basis_product(u, i)),
                        u = name(u),
                        x = name(i)
                    )
                });
            }
        }
        report
    }
}
