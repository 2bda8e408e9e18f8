//! Exact scalars, univariate polynomials and the graded elements `p + q·η`.
//!
//! Every coefficient in the crate is a [`Rational`]; equality is structural
//! because all containers keep a canonical form (no stored zeros).

mod element;
pub mod expr;
mod poly;

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use element::GaussianElement;
pub use poly::Polynomial;

use crate::error::Error;

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"`, `"-a"` or `"a/b"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse {
        offset: 0,
        message: format!("not a rational number: {s:?}"),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse {
                    offset: 0,
                    message: format!("zero denominator in {s:?}"),
                });
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `a/b`, with `/b` omitted when the denominator is one. Never decimal.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A vector space over the rationals with a canonical zero.
///
/// `Eq`, `Hash` and `Ord` are structural; they let symmetric evaluators key
/// caches on canonically sorted words.
pub trait Linear: Clone + Eq + Hash + Ord + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn scaled(&self, c: &Rational) -> Self;

    fn negated(&self) -> Self {
        self.scaled(&-Rational::one())
    }
}

impl Linear for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn scaled(&self, c: &Rational) -> Self {
        self * c
    }

    fn negated(&self) -> Self {
        -self
    }
}

/// `(2j-1)!! = 1·3·5···(2j-1)`, with `(-1)!! = 1`.
pub fn double_factorial_odd(j: u32) -> BigInt {
    (1..=j).fold(BigInt::one(), |acc, i| acc * BigInt::from(2 * i - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for s in ["0", "7", "-3", "1/2", "-5/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn canonical_rational() {
        let r = ratio(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(ratio(0, 5), rat(0));
        assert!(rat(0).denom().is_one());
    }

    #[test]
    fn double_factorials() {
        let got: Vec<_> = (0..7).map(double_factorial_odd).collect();
        let want: Vec<BigInt> = [1, 1, 3, 15, 105, 945, 10395].into_iter().map(BigInt::from).collect();
        assert_eq!(got, want);
    }
}
