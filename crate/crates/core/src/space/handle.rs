use std::path::Path;

use super::table::{TableElement, TableSpace};
use super::{validate_space, ProbabilitySpace, SpaceSpec, ValidationReport};
use crate::error::{Error, Result};
use crate::exact::expr::{parse_expression, parse_gaussian};
use crate::exact::{GaussianElement, Linear, Rational};
use crate::gaussian::GaussianSpace;

/// Either backend, chosen at runtime.
#[derive(Clone, Debug)]
pub enum SpaceHandle {
    Gaussian(GaussianSpace),
    Table(TableSpace),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceElement {
    Gaussian(GaussianElement),
    Table(TableElement),
}

impl SpaceHandle {
    /// `"gaussian"` or a path to a JSON space file.
    pub fn load(source: &str) -> Result<Self> {
        if source == "gaussian" {
            return Ok(SpaceHandle::Gaussian(GaussianSpace));
        }
        let text = std::fs::read_to_string(Path::new(source))?;
        Ok(SpaceHandle::Table(SpaceSpec::from_json(&text)?.build()?))
    }

    pub fn backend(&self) -> &'static str {
        match self {
            SpaceHandle::Gaussian(_) => "gaussian",
            SpaceHandle::Table(_) => "table",
        }
    }

    pub fn validate(&self, seed: u64) -> Result<ValidationReport> {
        match self {
            SpaceHandle::Gaussian(g) => Ok(g.validate(seed, 200)),
            SpaceHandle::Table(t) => validate_space(&t.to_spec()),
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<SpaceElement> {
        Ok(match self {
            SpaceHandle::Gaussian(_) => SpaceElement::Gaussian(parse_gaussian(s)?),
            SpaceHandle::Table(t) => SpaceElement::Table(parse_expression(t, s)?),
        })
    }

    fn mismatch(&self, z: &SpaceElement) -> Error {
        Error::SpaceMismatch {
            expected: self.backend().into(),
            found: z.backend().into(),
        }
    }

    fn gaussian<'a>(&self, z: &'a SpaceElement) -> Result<&'a GaussianElement> {
        match z {
            SpaceElement::Gaussian(g) => Ok(g),
            _ => Err(self.mismatch(z)),
        }
    }

    fn table<'a>(&self, t: &TableSpace, z: &'a SpaceElement) -> Result<&'a TableElement> {
        match z {
            SpaceElement::Table(e) => {
                t.check_member(e)?;
                Ok(e)
            }
            _ => Err(self.mismatch(z)),
        }
    }

    pub fn add(&self, a: &SpaceElement, b: &SpaceElement) -> Result<SpaceElement> {
        Ok(match self {
            SpaceHandle::Gaussian(_) => {
                let mut s = self.gaussian(a)?.clone();
                s.add_assign_ref(self.gaussian(b)?);
                SpaceElement::Gaussian(s)
            }
            SpaceHandle::Table(t) => {
                let mut s = self.table(t, a)?.clone();
                s.add_assign_ref(self.table(t, b)?);
                SpaceElement::Table(s)
            }
        })
    }

    pub fn scale(&self, c: &Rational, z: &SpaceElement) -> Result<SpaceElement> {
        Ok(match self {
            SpaceHandle::Gaussian(_) => SpaceElement::Gaussian(self.gaussian(z)?.scaled(c)),
            SpaceHandle::Table(t) => SpaceElement::Table(self.table(t, z)?.scaled(c)),
        })
    }

    pub fn apply_d(&self, z: &SpaceElement) -> Result<SpaceElement> {
        Ok(match self {
            SpaceHandle::Gaussian(g) => SpaceElement::Gaussian(g.differential(self.gaussian(z)?)),
            SpaceHandle::Table(t) => SpaceElement::Table(t.differential(self.table(t, z)?)),
        })
    }

    pub fn apply_a(&self, a: &SpaceElement, b: &SpaceElement) -> Result<SpaceElement> {
        Ok(match self {
            SpaceHandle::Gaussian(g) => SpaceElement::Gaussian(g.product(self.gaussian(a)?, self.gaussian(b)?)),
            SpaceHandle::Table(t) => SpaceElement::Table(t.product(self.table(t, a)?, self.table(t, b)?)),
        })
    }

    pub fn apply_e(&self, z: &SpaceElement) -> Result<Rational> {
        Ok(match self {
            SpaceHandle::Gaussian(g) => g.expectation(self.gaussian(z)?),
            SpaceHandle::Table(t) => t.expectation(self.table(t, z)?),
        })
    }

    /// `None` for mixed-degree elements.
    pub fn degree(&self, z: &SpaceElement) -> Result<Option<i64>> {
        Ok(match self {
            SpaceHandle::Gaussian(g) => g.degree(self.gaussian(z)?),
            SpaceHandle::Table(t) => t.degree(self.table(t, z)?),
        })
    }

    pub fn unit(&self) -> Option<SpaceElement> {
        match self {
            SpaceHandle::Gaussian(g) => g.unit().map(SpaceElement::Gaussian),
            SpaceHandle::Table(t) => t.unit().map(SpaceElement::Table),
        }
    }

    pub fn describe(&self, z: &SpaceElement) -> String {
        match (self, z) {
            (SpaceHandle::Gaussian(g), SpaceElement::Gaussian(e)) => g.describe(e),
            (SpaceHandle::Table(t), SpaceElement::Table(e)) => t.describe(e),
            _ => format!("{z:?}"),
        }
    }
}

impl SpaceElement {
    pub fn backend(&self) -> &'static str {
        match self {
            SpaceElement::Gaussian(_) => "gaussian",
            SpaceElement::Table(_) => "table",
        }
    }
}
