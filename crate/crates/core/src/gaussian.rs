//! The Gaussian toy model: polynomials in `x` with an odd generator `η`,
//! `d(p + qη) = q' - xq`, and the expectation that sends a polynomial to its
//! homology class in multiples of `[1]`.

use crate::coalgebra::SpaceTag;
use crate::error::{Error, Result};
use crate::exact::expr::{ExprAlgebra, GaussianExpr};
use crate::exact::{double_factorial_odd, GaussianElement, Linear, Polynomial, Rational};
use crate::random;
use crate::space::{Identity, ProbabilitySpace, ValidationReport};

/// Largest `N` accepted by [`moment_sequence_equal`].
pub const MOMENT_SEQUENCE_CAP: usize = 64;

/// The Gaussian space. Carries no data; every instance is the same space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GaussianSpace;

/// `d(p + qη) = q' - xq`
pub fn gauss_d(z: &GaussianElement) -> GaussianElement {
    GaussianElement::even(&z.q.derivative() - &z.q.shift())
}

/// The scalar `c` with `[p] = c·[1]`, from `[xⁿ] = (n-1)[xⁿ⁻²]`, `[x] = 0`,
/// `[1] = 1`: odd powers vanish and `[x²ʲ] = (2j-1)!!`.
pub fn homology_reduce(p: &Polynomial) -> Rational {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(n, c)| n % 2 == 0 && !c.is_zero())
        .map(|(n, c)| c * Rational::from_integer(double_factorial_odd((n / 2) as u32)))
        .fold(Rational::zero(), |acc, v| acc + v)
}

/// `E(p + qη) = [p]`; the η-part has degree -1 and contributes nothing.
pub fn gauss_expectation(z: &GaussianElement) -> Rational {
    homology_reduce(&z.p)
}

/// `d₂(p + qη, r + sη) = p's - r'q + ((q' - xq)s - (s' - xs)q)η`.
///
/// This is the bracket normalization of the transported arity-2 component;
/// see [`transport_structure`](crate::coalgebra::transport_structure).
pub fn d2_closed_form(u: &GaussianElement, v: &GaussianElement) -> GaussianElement {
    let (p, q) = (&u.p, &u.q);
    let (r, s) = (&v.p, &v.q);
    let dq = &q.derivative() - &q.shift();
    let ds = &s.derivative() - &s.shift();
    GaussianElement::new(&(&p.derivative() * s) - &(&r.derivative() * q), &(&dq * s) - &(&ds * q))
}

/// Whether `E(fⁿ) = E(gⁿ)` for `1 ≤ n ≤ max`.
///
/// A bounded check of the homotopy criterion for the maps `1 ↦ f` and
/// `1 ↦ g`, which quantifies over all `n`. A `false` is definitive; a `true`
/// only covers the tested range.
pub fn moment_sequence_equal(f: &Polynomial, g: &Polynomial, max: usize) -> Result<bool> {
    if max > MOMENT_SEQUENCE_CAP {
        return Err(Error::SizeLimit {
            what: "moment sequence length",
            requested: max,
            cap: MOMENT_SEQUENCE_CAP,
        });
    }
    let (mut fp, mut gp) = (Polynomial::one(), Polynomial::one());
    for _ in 0..max {
        fp = &fp * f;
        gp = &gp * g;
        if homology_reduce(&fp) != homology_reduce(&gp) {
            return Ok(false);
        }
    }
    Ok(true)
}

impl ProbabilitySpace for GaussianSpace {
    type Elem = GaussianElement;

    fn tag(&self) -> SpaceTag {
        SpaceTag::Space("gaussian".into())
    }

    fn contains(&self, _: &GaussianElement) -> bool {
        true
    }

    fn differential(&self, z: &GaussianElement) -> GaussianElement {
        gauss_d(z)
    }

    fn product(&self, a: &GaussianElement, b: &GaussianElement) -> GaussianElement {
        a.product(b)
    }

    fn expectation(&self, z: &GaussianElement) -> Rational {
        gauss_expectation(z)
    }

    fn unit(&self) -> Option<GaussianElement> {
        Some(GaussianElement::one())
    }

    fn homogeneous_parts(&self, z: &GaussianElement) -> Vec<(i64, GaussianElement)> {
        z.homogeneous_parts()
    }

    fn describe(&self, z: &GaussianElement) -> String {
        z.to_string()
    }
}

impl ExprAlgebra for GaussianSpace {
    type Elem = GaussianElement;

    fn constant(&self, c: Rational) -> Option<GaussianElement> {
        GaussianExpr.constant(c)
    }

    fn variable(&self, name: &str) -> Option<GaussianElement> {
        GaussianExpr.variable(name)
    }

    fn multiply(&self, a: &GaussianElement, b: &GaussianElement) -> GaussianElement {
        a.product(b)
    }

    fn as_scalar(&self, e: &GaussianElement) -> Option<Rational> {
        GaussianExpr.as_scalar(e)
    }
}

impl GaussianSpace {
    /// Axiom check by sampling: `samples` random homogeneous elements up to
    /// polynomial degree 10 per identity, plus the chain-map identity
    /// `E(d(xⁿ⁻¹η)) = E((n-1)xⁿ⁻² - xⁿ) = 0` for `n ≤ 24`.
    pub fn validate(&self, seed: u64, samples: usize) -> ValidationReport {
        const MAX_DEGREE: usize = 10;
        let mut rng = random::seeded(seed);
        let mut report = ValidationReport::default();
        let one = GaussianElement::one();

        for n in 1..=24usize {
            let z = GaussianElement::odd(Polynomial::monomial(Rational::from_integer(1.into()), n - 1));
            let dz = gauss_d(&z);
            let expected = &Polynomial::monomial(Rational::from_integer(((n - 1) as i64).into()), n.saturating_sub(2))
                - &Polynomial::monomial(Rational::from_integer(1.into()), n);
            report.check(dz.p == expected && dz.q.is_zero(), Identity::DifferentialDegree, || {
                format!("d(x^{}*eta) = {dz}", n - 1)
            });
            let e = gauss_expectation(&dz);
            report.check(e.is_zero(), Identity::ChainMap, || {
                format!("E(d(x^{}*eta)) = {e}", n - 1)
            });
        }

        for _ in 0..samples {
            let a = random::gaussian_homogeneous(&mut rng, MAX_DEGREE);
            let b = random::gaussian_homogeneous(&mut rng, MAX_DEGREE);
            let c = random::gaussian_homogeneous(&mut rng, MAX_DEGREE);
            let z = random::gaussian_element(&mut rng, MAX_DEGREE);

            let dz = gauss_d(&z);
            let e = gauss_expectation(&dz);
            report.check(e.is_zero(), Identity::ChainMap, || format!("E(d({z})) = {e}"));
            let ddz = gauss_d(&dz);
            report.check(ddz.is_zero(), Identity::SquareZero, || format!("d(d({z})) = {ddz}"));

            let (da, db) = (self.degree(&a).unwrap_or(0), self.degree(&b).unwrap_or(0));
            let ab = a.product(&b);
            let ba = crate::coalgebra::Sign::power(da * db).apply(b.product(&a));
            report.check(ab == ba, Identity::GradedCommutativity, || {
                format!("({a})*({b}) = {ab} but the signed reverse is {ba}")
            });
            let left = ab.product(&c);
            let right = a.product(&b.product(&c));
            report.check(left == right, Identity::Associativity, || {
                format!("associativity fails on ({a}), ({b}), ({c})")
            });
            report.check(one.product(&z) == z && z.product(&one) == z, Identity::UnitLaw, || {
                format!("1*({z}) != {z}")
            });
            let off = self.expectation(&GaussianElement::odd(z.q.clone()));
            report.check(off.is_zero(), Identity::ExpectationDegree, || {
                format!("E({z}) on eta-part = {off}")
            });
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::expr::parse_gaussian;
    use crate::exact::{rat, Linear};

    fn g(s: &str) -> GaussianElement {
        parse_gaussian(s).unwrap()
    }

    #[test]
    fn differential_examples() {
        assert_eq!(gauss_d(&g("-eta")), g("x"));
        assert_eq!(gauss_d(&g("x*eta")), g("1 - x^2"));
        assert!(gauss_d(&g("x^5 - 3*x + 2")).is_zero());
    }

    #[test]
    fn homology_examples() {
        assert_eq!(homology_reduce(&g("x^6").p), rat(15));
        assert_eq!(homology_reduce(&g("x^3").p), rat(0));
        assert_eq!(homology_reduce(&Polynomial::one()), rat(1));
        assert_eq!(gauss_expectation(&g("x^2")), rat(1));
        assert_eq!(gauss_expectation(&g("x^4 + 5*eta")), rat(3));
        assert_eq!(gauss_expectation(&g("7")), rat(7));
        assert_eq!(gauss_expectation(&g("x^2 + 7*eta")), rat(1));
    }

    #[test]
    fn homology_matches_recursion() {
        // [x^n] = (n-1)[x^(n-2)], computed independently of the closed form
        let mut table = vec![rat(1), rat(0)];
        for n in 2..=13 {
            let prev = table[n - 2].clone();
            table.push(prev * rat(n as i64 - 1));
        }
        for (n, expected) in table.iter().enumerate() {
            let xn = Polynomial::monomial(rat(1), n);
            assert_eq!(&homology_reduce(&xn), expected, "x^{n}");
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(d2_closed_form(&g("eta"), &g("x")), g("-1"));
        assert_eq!(d2_closed_form(&g("x^2"), &g("eta")), g("2*x"));
        assert!(d2_closed_form(&g("x^3 + 1"), &g("x - 4")).is_zero());
    }

    #[test]
    fn moment_sequences() {
        let x = Polynomial::x();
        assert!(moment_sequence_equal(&x, &x.scale(&rat(-1)), 6).unwrap());
        assert!(!moment_sequence_equal(&x, &(&x + &Polynomial::one()), 1).unwrap());
        let f = g("x^3 - 2*x").p;
        assert!(moment_sequence_equal(&f, &f, 9).unwrap());
        assert!(matches!(
            moment_sequence_equal(&x, &x, MOMENT_SEQUENCE_CAP + 1),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn backend_is_valid() {
        let report = GaussianSpace.validate(7, 50);
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn exact_terms_do_not_change_the_class() {
        let mut rng = random::seeded(11);
        for _ in 0..50 {
            let p = random::polynomial(&mut rng, 10);
            let q = random::polynomial(&mut rng, 9);
            let shifted = &p + &gauss_d(&GaussianElement::odd(q)).p;
            assert_eq!(homology_reduce(&shifted), homology_reduce(&p));
        }
        let p = g("x^4 - x").p;
        assert_eq!(homology_reduce(&p.scale(&rat(3))), homology_reduce(&p) * rat(3));
        assert_eq!(GaussianElement::one().negated(), g("-1"));
    }
}
