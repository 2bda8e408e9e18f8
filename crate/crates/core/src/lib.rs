//! Exact computations in commutative homotopy probability spaces.
//!
//! A space is a chain complex `(V, d)` with a graded-commutative associative
//! product `a` and an expectation `E: V → ℚ` that is a chain map. Conjugating
//! `d` by the coalgebra map `a` (repeated multiplication) gives an L∞
//! structure `D^a`; moments and cumulants are components of L∞ morphisms out
//! of it, and homotopy random variables are L∞ morphisms into it.
//!
//! ```
//! use homotopy_probability::gaussian::GaussianSpace;
//! use homotopy_probability::linfty::total_moment;
//! use homotopy_probability::exact::{rat, GaussianElement};
//! use homotopy_probability::space::ProbabilitySpace;
//!
//! let x = GaussianElement::x();
//! let w = GaussianSpace.word(&[x.clone(), x.clone(), x.clone(), x]).unwrap();
//! assert_eq!(total_moment(&GaussianSpace, &w).unwrap(), rat(3));
//! ```

pub mod cli;
pub mod coalgebra;
pub mod error;
pub mod exact;
pub mod gaussian;
pub mod linfty;
pub mod random;
pub mod space;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/coalgebra.md")]
    mod coalgebra {}
    #[doc = include_str!("../../../book/src/transport.md")]
    mod transport {}
    #[doc = include_str!("../../../book/src/statistics.md")]
    mod statistics {}
    #[doc = include_str!("../../../book/src/random-variables.md")]
    mod random_variables {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
