//! Koszul signs for permuting graded entries.

use std::ops::Mul;

use super::partition::SetPartition;
use crate::error::{Error, Result};
use crate::exact::Linear;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// `(-1)^exponent`
    pub fn power(exponent: i64) -> Self {
        Self::from_parity(exponent.rem_euclid(2) == 1)
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn apply<L: Linear>(self, value: L) -> L {
        match self {
            Sign::Plus => value,
            Sign::Minus => value.negated(),
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self.is_negative() != rhs.is_negative())
    }
}

fn odd(d: i64) -> bool {
    d.rem_euclid(2) == 1
}

/// Koszul sign of reordering a word.
///
/// `permutation[k]` is the original position of the entry that ends up at
/// position `k`; `degrees` are the degrees of the entries in original order.
/// Every inversion contributes `(-1)^(deg_i · deg_j)`.
pub fn koszul_sign(permutation: &[usize], degrees: &[i64]) -> Result<Sign> {
    let n = degrees.len();
    if permutation.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} but {n} degrees",
            permutation.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in permutation {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(format!(
                "{permutation:?} is not a bijection on 0..{n}"
            )));
        }
    }
    Ok(permutation_sign(permutation, degrees))
}

pub(crate) fn permutation_sign(permutation: &[usize], degrees: &[i64]) -> Sign {
    let mut negative = false;
    for (k, &i) in permutation.iter().enumerate() {
        if !odd(degrees[i]) {
            continue;
        }
        for &j in &permutation[k + 1..] {
            if j < i && odd(degrees[j]) {
                negative = !negative;
            }
        }
    }
    Sign::from_parity(negative)
}

/// Sign of unshuffling a word into the blocks of `partition`.
pub fn unshuffle_sign(partition: &SetPartition, degrees: &[i64]) -> Sign {
    permutation_sign(&partition.concatenation(), degrees)
}

/// `(-1)^(Σ_i (n-1-i)·deg_i)`: converts an arity-n component between the
/// graded-symmetric normalization and the bracket normalization.
pub fn decalage_sign(degrees: &[i64]) -> Sign {
    let n = degrees.len() as i64;
    Sign::power(degrees.iter().enumerate().map(|(i, d)| (n - 1 - i as i64) * d).sum())
}
