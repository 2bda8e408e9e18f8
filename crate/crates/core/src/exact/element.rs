use std::fmt;

use num_traits::{One, Signed};

use super::{format_rational, Linear, Polynomial, Rational};

/// `p + q·η`, an element of the free graded-commutative algebra on `x`
/// (degree 0) and `η` (degree -1).
///
/// `η² = 0` holds structurally: there is no slot for it.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianElement {
    /// Degree 0 part.
    pub p: Polynomial,
    /// Coefficient of `η`, the degree -1 part.
    pub q: Polynomial,
}

impl GaussianElement {
    pub const ETA_DEGREE: i64 = -1;

    pub fn new(p: Polynomial, q: Polynomial) -> Self {
        GaussianElement { p, q }
    }

    pub fn even(p: Polynomial) -> Self {
        GaussianElement {
            p,
            q: Polynomial::default(),
        }
    }

    pub fn odd(q: Polynomial) -> Self {
        GaussianElement {
            p: Polynomial::default(),
            q,
        }
    }

    pub fn x() -> Self {
        Self::even(Polynomial::x())
    }

    pub fn eta() -> Self {
        Self::odd(Polynomial::one())
    }

    pub fn one() -> Self {
        Self::even(Polynomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.p.is_zero() || self.q.is_zero()
    }

    /// Homological degree of a homogeneous element; zero counts as degree 0.
    pub fn degree(&self) -> Option<i64> {
        match (self.p.is_zero(), self.q.is_zero()) {
            (_, true) => Some(0),
            (true, false) => Some(Self::ETA_DEGREE),
            (false, false) => None,
        }
    }

    /// Nonzero homogeneous parts, `(degree, part)`.
    pub fn homogeneous_parts(&self) -> Vec<(i64, GaussianElement)> {
        let mut parts = Vec::with_capacity(2);
        if !self.p.is_zero() {
            parts.push((0, Self::even(self.p.clone())));
        }
        if !self.q.is_zero() {
            parts.push((Self::ETA_DEGREE, Self::odd(self.q.clone())));
        }
        parts
    }

    /// `(p + qη)(r + sη) = pr + (ps + qr)η`
    pub fn product(&self, other: &Self) -> Self {
        GaussianElement {
            p: &self.p * &other.p,
            q: &(&self.p * &other.q) + &(&self.q * &other.p),
        }
    }
}

impl Linear for GaussianElement {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        GaussianElement::is_zero(self)
    }

    fn add_assign_ref(&mut self, other: &Self) {
        self.p = &self.p + &other.p;
        self.q = &self.q + &other.q;
    }

    fn scaled(&self, c: &Rational) -> Self {
        GaussianElement {
            p: self.p.scale(c),
            q: self.q.scale(c),
        }
    }
}

/// Renders in the expression grammar, e.g. `x^2 + 2*x*eta`, `(x - 1)*eta`.
impl fmt::Display for GaussianElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        let single_term = self.q.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        let (negative, eta_part) = if single_term {
            let k = self.q.degree().unwrap_or(0);
            let c = self.q.coeff(k);
            let magnitude = c.abs();
            let mut s = String::new();
            if !magnitude.is_one() {
                s.push_str(&format_rational(&magnitude));
                s.push('*');
            }
            match k {
                0 => {}
                1 => s.push_str("x*"),
                _ => s.push_str(&format!("x^{k}*")),
            }
            s.push_str("eta");
            (c.is_negative(), s)
        } else {
            (false, format!("({})*eta", self.q))
        };
        match (self.p.is_zero(), negative) {
            (true, false) => f.write_str(&eta_part),
            (true, true) => write!(f, "-{eta_part}"),
            (false, false) => write!(f, "{} + {eta_part}", self.p),
            (false, true) => write!(f, "{} - {eta_part}", self.p),
        }
    }
}

impl fmt::Debug for GaussianElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaussianElement({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn products() {
        let x_plus_eta = GaussianElement::new(Polynomial::x(), Polynomial::one());
        assert_eq!(
            x_plus_eta.product(&x_plus_eta),
            GaussianElement::new(Polynomial::from_ints(&[0, 0, 1]), Polynomial::from_ints(&[0, 2]))
        );
        let u = GaussianElement::new(Polynomial::from_ints(&[1, 2]), Polynomial::from_ints(&[0, 0, 5]));
        assert_eq!(u.product(&GaussianElement::one()), u);
        assert!(GaussianElement::eta().product(&GaussianElement::eta()).is_zero());
    }

    #[test]
    fn degrees() {
        assert_eq!(GaussianElement::x().degree(), Some(0));
        assert_eq!(GaussianElement::eta().degree(), Some(-1));
        assert_eq!(GaussianElement::default().degree(), Some(0));
        let mixed = GaussianElement::new(Polynomial::x(), Polynomial::one());
        assert_eq!(mixed.degree(), None);
        assert_eq!(mixed.homogeneous_parts().len(), 2);
    }

    #[test]
    fn display() {
        let show =
            |p: &[i64], q: &[i64]| GaussianElement::new(Polynomial::from_ints(p), Polynomial::from_ints(q)).to_string();
        assert_eq!(show(&[0, -1], &[]), "-x");
        assert_eq!(show(&[], &[-1, 1]), "(x - 1)*eta");
        assert_eq!(show(&[0, 0, 1], &[0, 2]), "x^2 + 2*x*eta");
        assert_eq!(show(&[], &[-1]), "-eta");
        assert_eq!(show(&[1], &[0, 0, -3]), "1 - 3*x^2*eta");
        assert_eq!(show(&[], &[]), "0");
        assert_eq!(GaussianElement::eta().scaled(&rat(7)).to_string(), "7*eta");
    }
}
