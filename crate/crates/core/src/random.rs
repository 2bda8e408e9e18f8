//! Seeded generators for test inputs: polynomials, Gaussian elements, and
//! small finite-table spaces that satisfy every axiom by construction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{GaussianElement, Linear, Polynomial, Rational};
use crate::gaussian::GaussianSpace;
use crate::space::{ProbabilitySpace, TableElement, TableSpace};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small rational `a/b` with `|a| ≤ 4`, `b ∈ {1, 2, 3}`; integers are
/// twice as likely as fractions.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let a: i64 = rng.gen_range(-4..=4);
    let b: i64 = *[1, 1, 1, 1, 2, 3].choose(rng).expect("nonempty");
    Rational::new(a.into(), b.into())
}

pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let r = small_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Degree drawn uniformly from `0..=max_degree`, nonzero leading coefficient.
pub fn polynomial<R: Rng>(rng: &mut R, max_degree: usize) -> Polynomial {
    let degree = rng.gen_range(0..=max_degree);
    let mut coeffs: Vec<Rational> = (0..degree).map(|_| small_rational(rng)).collect();
    coeffs.push(nonzero_rational(rng));
    Polynomial::from_coeffs(coeffs)
}

/// Nonzero, in degree 0 or -1 with equal probability.
pub fn gaussian_homogeneous<R: Rng>(rng: &mut R, max_degree: usize) -> GaussianElement {
    let p = polynomial(rng, max_degree);
    if rng.gen_bool(0.5) {
        GaussianElement::even(p)
    } else {
        GaussianElement::odd(p)
    }
}

/// Typically of mixed degree.
pub fn gaussian_element<R: Rng>(rng: &mut R, max_degree: usize) -> GaussianElement {
    GaussianElement::new(polynomial(rng, max_degree), polynomial(rng, max_degree))
}

/// Shapes of the random table spaces. Each is graded commutative,
/// associative and unital with `d² = 0` and `E∘d = 0` for any parameters the
/// generator draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableTemplate {
    /// `u, v` in degree 0, `w, z` in degree 1; `v² = αu + βv`, `vw = z`,
    /// `vz = αw + βz`; `d` maps degree 0 onto a line, so `ker d` contains a
    /// degree-0 element besides zero.
    EvenModule,
    /// `u, v` in degree 0, `w` in degree 1; `v² = αu + βv`, `vw = λw` with
    /// `λ² = α + βλ`.
    EvenLine,
    /// `u, v` in degree 0, `y` in degree -1; `vy = λy`, `d(y)` in degree 0
    /// with `E(d(y)) = 0`.
    OddLine,
    /// `u` in degree 0, `y₁, y₂` in degree -1, `t = y₁y₂` in degree -2.
    Exterior,
}

impl TableTemplate {
    pub const ALL: [TableTemplate; 4] = [
        TableTemplate::EvenModule,
        TableTemplate::EvenLine,
        TableTemplate::OddLine,
        TableTemplate::Exterior,
    ];

    /// Templates with a nonzero degree-1 part.
    pub const WITH_DEGREE_ONE: [TableTemplate; 2] = [TableTemplate::EvenModule, TableTemplate::EvenLine];
}

struct Builder {
    names: Vec<String>,
    degrees: Vec<i64>,
    product: Vec<Vec<TableElement>>,
    differential: Vec<TableElement>,
    expectation: Vec<Rational>,
}

impl Builder {
    fn new(basis: &[(&str, i64)]) -> Self {
        let n = basis.len();
        let mut product = vec![vec![TableElement::default(); n]; n];
        for (i, row) in product.iter_mut().enumerate() {
            // basis element 0 is the unit
            row[0] = TableElement::basis(i);
        }
        for (j, entry) in product[0].iter_mut().enumerate() {
            *entry = TableElement::basis(j);
        }
        Builder {
            names: basis.iter().map(|(s, _)| s.to_string()).collect(),
            degrees: basis.iter().map(|(_, d)| *d).collect(),
            product,
            differential: vec![TableElement::default(); n],
            expectation: vec![Rational::zero(); n],
        }
    }

    /// Sets `b_i·b_j` and the Koszul-signed `b_j·b_i`.
    fn mul(&mut self, i: usize, j: usize, out: TableElement) {
        let sign = crate::coalgebra::Sign::power(self.degrees[i] * self.degrees[j]);
        self.product[j][i] = sign.apply(out.clone());
        self.product[i][j] = out;
    }

    fn build(self) -> TableSpace {
        TableSpace::from_tables(
            self.names,
            self.degrees,
            Some(0),
            self.product,
            self.differential,
            self.expectation,
        )
    }
}

fn combo(pairs: &[(usize, &Rational)]) -> TableElement {
    TableElement::from_pairs(pairs.iter().map(|(i, c)| (*i, (*c).clone())))
}

/// A random space of the given shape.
pub fn table_space<R: Rng>(rng: &mut R, template: TableTemplate) -> TableSpace {
    match template {
        TableTemplate::EvenModule => {
            let mut b = Builder::new(&[("u", 0), ("v", 0), ("w", 1), ("z", 1)]);
            let (alpha, beta) = (small_rational(rng), small_rational(rng));
            b.mul(1, 1, combo(&[(0, &alpha), (1, &beta)]));
            b.mul(1, 2, TableElement::basis(3));
            b.mul(1, 3, combo(&[(2, &alpha), (3, &beta)]));
            let t = combo(&[(2, &small_rational(rng)), (3, &nonzero_rational(rng))]);
            let (k0, k1) = (nonzero_rational(rng), small_rational(rng));
            b.differential[0] = t.scaled(&k1);
            b.differential[1] = t.scaled(&-k0);
            b.expectation[0] = nonzero_rational(rng);
            b.expectation[1] = small_rational(rng);
            b.build()
        }
        TableTemplate::EvenLine => {
            let mut b = Builder::new(&[("u", 0), ("v", 0), ("w", 1)]);
            let (lambda, beta) = (small_rational(rng), small_rational(rng));
            let alpha = &lambda * &lambda - &beta * &lambda;
            b.mul(1, 1, combo(&[(0, &alpha), (1, &beta)]));
            b.mul(1, 2, TableElement::basis(2).scaled(&lambda));
            let (k0, k1) = (nonzero_rational(rng), small_rational(rng));
            b.differential[0] = TableElement::basis(2).scaled(&k1);
            b.differential[1] = TableElement::basis(2).scaled(&-k0);
            b.expectation[0] = nonzero_rational(rng);
            b.expectation[1] = small_rational(rng);
            b.build()
        }
        TableTemplate::OddLine => {
            let mut b = Builder::new(&[("u", 0), ("v", 0), ("y", -1)]);
            let (lambda, beta) = (small_rational(rng), small_rational(rng));
            let alpha = &lambda * &lambda - &beta * &lambda;
            b.mul(1, 1, combo(&[(0, &alpha), (1, &beta)]));
            b.mul(1, 2, TableElement::basis(2).scaled(&lambda));
            let (eu, ev) = (nonzero_rational(rng), small_rational(rng));
            // d(y) = c·(ev·u - eu·v) lies in the kernel of E
            let c = small_rational(rng);
            b.differential[2] = combo(&[(0, &(&ev * &c)), (1, &(-&eu * &c))]);
            b.expectation[0] = eu;
            b.expectation[1] = ev;
            b.build()
        }
        TableTemplate::Exterior => {
            let mut b = Builder::new(&[("u", 0), ("y1", -1), ("y2", -1), ("t", -2)]);
            b.mul(1, 2, TableElement::basis(3));
            let (a1, a2) = (small_rational(rng), small_rational(rng));
            b.differential[3] = combo(&[(1, &a1), (2, &a2)]);
            // a1·c1 + a2·c2 = 0, and E(u)·c = 0
            if rng.gen_bool(0.5) {
                let s = small_rational(rng);
                b.differential[1] = TableElement::basis(0).scaled(&(&a2 * &s));
                b.differential[2] = TableElement::basis(0).scaled(&(-&a1 * &s));
            } else {
                b.expectation[0] = nonzero_rational(rng);
            }
            b.build()
        }
    }
}

/// A nonzero element of the given degree, if the space has one.
pub fn table_homogeneous<R: Rng>(rng: &mut R, space: &TableSpace, degree: i64) -> Option<TableElement> {
    let basis = space.basis_in_degree(degree);
    if basis.is_empty() {
        return None;
    }
    loop {
        let e = TableElement::from_pairs(basis.iter().map(|&i| (i, small_rational(rng))));
        if !e.is_zero() {
            return Some(e);
        }
    }
}

/// `arity` nonzero homogeneous elements in degrees drawn from those present.
pub fn table_word<R: Rng>(rng: &mut R, space: &TableSpace, arity: usize) -> Vec<TableElement> {
    let mut degrees: Vec<i64> = (0..space.dimension()).map(|i| space.basis_degree(i)).collect();
    degrees.sort_unstable();
    degrees.dedup();
    (0..arity)
        .map(|_| {
            let d = *degrees.choose(rng).expect("space has a basis");
            table_homogeneous(rng, space, d).expect("degree is present")
        })
        .collect()
}

/// Random homogeneous Gaussian entries.
pub fn gaussian_word<R: Rng>(rng: &mut R, arity: usize, max_degree: usize) -> Vec<GaussianElement> {
    (0..arity).map(|_| gaussian_homogeneous(rng, max_degree)).collect()
}

/// Spaces that can draw random nonzero homogeneous elements.
pub trait Sampler: ProbabilitySpace {
    fn sample<R: Rng>(&self, rng: &mut R) -> Self::Elem;
}

impl Sampler for GaussianSpace {
    fn sample<R: Rng>(&self, rng: &mut R) -> GaussianElement {
        gaussian_homogeneous(rng, 4)
    }
}

impl Sampler for TableSpace {
    fn sample<R: Rng>(&self, rng: &mut R) -> TableElement {
        table_word(rng, self, 1).pop().expect("one entry")
    }
}
