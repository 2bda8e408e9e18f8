//! The symmetric coalgebra `SV`: words, set partitions, Koszul signs, and
//! maps given by their components `SⁿV → V'`.

mod koszul;
mod morphism;
mod partition;
mod transport;
mod word;

pub(crate) use koszul::permutation_sign;
pub use koszul::{decalage_sign, koszul_sign, unshuffle_sign, Sign};
pub use morphism::{
    compose, compose_coalgebra, invert_coalgebra, push_forward, scalar_multiplication, Evaluator, MorphismComponents,
    SpaceTag,
};
pub use partition::{
    bell, set_partitions, set_partitions_with_cap, SetPartition, SetPartitions, DEFAULT_PARTITION_CAP,
};
pub use transport::{multiplication, transport_structure, Convention, TransportedStructure, DEFAULT_TRANSPORT_CAP};
pub use word::{FormalSum, Graded, SymWord};

use crate::exact::{Linear, Rational};

/// Extends a degree-1 map `d` on `V` to `SⁿV` as a coderivation:
/// `Σᵢ (-1)^(|w₁|+…+|wᵢ₋₁|) w₁ ⊙ … ⊙ d(wᵢ) ⊙ … ⊙ wₙ`, zero summands dropped.
pub fn coderivation_extend<E: Linear>(d: impl Fn(&E) -> E, w: &SymWord<E>) -> FormalSum<E> {
    let mut sum = FormalSum::default();
    let mut preceding = 0i64;
    for (i, entry) in w.entries().iter().enumerate() {
        let image = d(&entry.value);
        if !image.is_zero() {
            let mut entries = w.entries().to_vec();
            entries[i] = Graded::new(image, entry.degree + 1);
            let sign = Sign::power(preceding);
            sum.push(
                Rational::from_integer(sign.as_i64().into()),
                SymWord::new(entries).expect("nonempty"),
            );
        }
        preceding += entry.degree;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::expr::parse_gaussian;
    use crate::exact::{rat, GaussianElement};
    use crate::gaussian::gauss_d;

    fn word(items: &[&str]) -> SymWord<GaussianElement> {
        SymWord::new(
            items
                .iter()
                .map(|s| {
                    let z = parse_gaussian(s).unwrap();
                    let d = z.degree().unwrap();
                    Graded::new(z, d)
                })
                .collect(),
        )
        .unwrap()
    }

    fn values(sum: &FormalSum<GaussianElement>) -> Vec<(Rational, Vec<String>)> {
        sum.terms
            .iter()
            .map(|(c, w)| (c.clone(), w.entries().iter().map(|g| g.value.to_string()).collect()))
            .collect()
    }

    #[test]
    fn extension_examples() {
        let ext = coderivation_extend(gauss_d, &word(&["eta", "x"]));
        assert_eq!(values(&ext), vec![(rat(1), vec!["-x".to_string(), "x".to_string()])]);
        assert_eq!(ext.terms[0].1.degrees(), vec![0, 0]);

        assert!(coderivation_extend(gauss_d, &word(&["x"])).is_empty());

        let ext = coderivation_extend(gauss_d, &word(&["eta", "eta"]));
        assert_eq!(
            values(&ext),
            vec![
                (rat(1), vec!["-x".to_string(), "eta".to_string()]),
                (rat(-1), vec!["eta".to_string(), "-x".to_string()]),
            ]
        );
    }
}
