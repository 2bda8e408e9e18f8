use homotopy_probability::coalgebra::{compose, compose_coalgebra, Convention, SymWord, TransportedStructure};
use homotopy_probability::exact::{rat, GaussianElement, Linear, Polynomial};
use homotopy_probability::gaussian::GaussianSpace;
use homotopy_probability::linfty::{strict_expectation, total_cumulant, total_moment};
use homotopy_probability::random::{self, TableTemplate};
use homotopy_probability::space::{ProbabilitySpace, TableSpace};
use proptest::prelude::*;
use rand::Rng;

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-5i64..=5, 0..6).prop_map(|c| Polynomial::from_ints(&c))
}

fn homogeneous() -> impl Strategy<Value = GaussianElement> {
    (poly(), any::<bool>()).prop_map(|(p, odd)| {
        if odd {
            GaussianElement::odd(p)
        } else {
            GaussianElement::even(p)
        }
    })
}

fn sign(u: &GaussianElement, v: &GaussianElement) -> i64 {
    let (a, b) = (u.degree().unwrap_or(0), v.degree().unwrap_or(0));
    if (a * b) % 2 == 0 {
        1
    } else {
        -1
    }
}

fn word(entries: &[GaussianElement]) -> SymWord<GaussianElement> {
    GaussianSpace.word(entries).unwrap()
}

fn table(seed: u64) -> TableSpace {
    let mut rng = random::seeded(seed);
    let template = TableTemplate::ALL[(seed % TableTemplate::ALL.len() as u64) as usize];
    random::table_space(&mut rng, template)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert_eq!(&(&p - &p), &Polynomial::from_ints(&[]));
        prop_assert_eq!((&p * &q).derivative(), &(&p.derivative() * &q) + &(&p * &q.derivative()));
    }

    #[test]
    fn gaussian_product_is_graded_commutative(u in homogeneous(), v in homogeneous()) {
        let g = GaussianSpace;
        prop_assert_eq!(g.product(&u, &v), g.product(&v, &u).scaled(&rat(sign(&u, &v))));
    }

    #[test]
    fn gaussian_product_is_associative(u in homogeneous(), v in homogeneous(), w in homogeneous()) {
        let g = GaussianSpace;
        prop_assert_eq!(g.product(&g.product(&u, &v), &w), g.product(&u, &g.product(&v, &w)));
    }

    #[test]
    fn expectation_kills_boundaries(u in homogeneous()) {
        let g = GaussianSpace;
        prop_assert!(g.expectation(&g.differential(&u)).is_zero());
        prop_assert!(g.differential(&g.differential(&u)).is_zero());
    }

    #[test]
    fn random_tables_are_valid(seed in any::<u64>()) {
        let space = table(seed);
        let report = space.validate();
        prop_assert!(report.is_valid(), "{}", report);
        let mut rng = random::seeded(seed ^ 1);
        for _ in 0..4 {
            let degree = space.basis_degree(rng.gen_range(0..space.dimension()));
            let e = random::table_homogeneous(&mut rng, &space, degree).unwrap();
            prop_assert!(space.expectation(&space.differential(&e)).is_zero());
        }
    }

    #[test]
    fn transported_structure_is_graded_symmetric(u in homogeneous(), v in homogeneous()) {
        let t = TransportedStructure::new(GaussianSpace);
        let uv = t.component_of(&[u.clone(), v.clone()], Convention::Symmetric).unwrap();
        let vu = t.component_of(&[v.clone(), u.clone()], Convention::Symmetric).unwrap();
        prop_assert_eq!(uv, vu.scaled(&rat(sign(&u, &v))));
    }

    #[test]
    fn moments_and_cumulants_agree_in_low_arity(p in poly(), q in poly(), r in poly()) {
        let g = GaussianSpace;
        let (u, v, w) = (GaussianElement::even(p), GaussianElement::even(q), GaussianElement::even(r));
        let e = |z: &GaussianElement| g.expectation(z);
        let m = |entries: &[GaussianElement]| total_moment(&g, &word(entries)).unwrap();
        let k = |entries: &[GaussianElement]| total_cumulant(&g, &word(entries)).unwrap();
        prop_assert_eq!(m(std::slice::from_ref(&u)), k(std::slice::from_ref(&u)));
        prop_assert_eq!(m(&[u.clone(), v.clone()]), k(&[u.clone(), v.clone()]) + e(&u) * e(&v));
        let three = k(&[u.clone(), v.clone(), w.clone()])
            + k(&[u.clone(), v.clone()]) * e(&w)
            + k(&[u.clone(), w.clone()]) * e(&v)
            + k(&[v.clone(), w.clone()]) * e(&u)
            + e(&u) * e(&v) * e(&w);
        prop_assert_eq!(m(&[u, v, w]), three);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn composition_is_associative(seed in any::<u64>(), arity in 1usize..=5) {
        let t = TransportedStructure::new(GaussianSpace);
        let (a, a_inv, e) = (t.multiplication().clone(), t.inverse_multiplication(), strict_expectation(&GaussianSpace));
        let mut rng = random::seeded(seed);
        let w = word(&random::gaussian_word(&mut rng, arity, 2));
        let left = compose_coalgebra(&compose(&e, &a_inv).unwrap(), &a, &w).unwrap();
        let right = compose_coalgebra(&e, &compose(&a_inv, &a).unwrap(), &w).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_is_two_sided(seed in any::<u64>(), arity in 1usize..=6) {
        let t = TransportedStructure::new(GaussianSpace);
        let (a, a_inv) = (t.multiplication().clone(), t.inverse_multiplication());
        let mut rng = random::seeded(seed);
        let w = word(&random::gaussian_word(&mut rng, arity, 2));
        let expected = if arity == 1 { w.entries()[0].value.clone() } else { GaussianElement::zero() };
        prop_assert_eq!(compose_coalgebra(&a_inv, &a, &w).unwrap(), expected.clone());
        prop_assert_eq!(compose_coalgebra(&a, &a_inv, &w).unwrap(), expected);
    }
}
