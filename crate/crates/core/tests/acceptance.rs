//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. All comparisons are exact.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use homotopy_probability::coalgebra::{
    compose_coalgebra, invert_coalgebra, scalar_multiplication, transport_structure, Graded, MorphismComponents,
    SpaceTag, SymWord, TransportedStructure,
};
use homotopy_probability::exact::expr::parse_gaussian;
use homotopy_probability::exact::{rat, GaussianElement, Linear, Polynomial, Rational};
use homotopy_probability::gaussian::{d2_closed_form, gauss_expectation, GaussianSpace};
use homotopy_probability::linfty::{
    cumulant_partition_oracle, invariance_check, is_morphism, joint_moment, linfty_relations_check, total_cumulant,
    total_moment, ChainHomotopy, HRVCollection, SearchBounds,
};
use homotopy_probability::random::{self, TableTemplate};
use homotopy_probability::space::{fixture_space, ProbabilitySpace, TableSpace};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn gword(entries: &[GaussianElement]) -> SymWord<GaussianElement> {
    GaussianSpace.word(entries).expect("homogeneous")
}

fn xs(n: usize) -> SymWord<GaussianElement> {
    gword(&vec![GaussianElement::x(); n])
}

/// The closed form for the arity-2 component, written out independently.
fn d2_oracle(u: &GaussianElement, v: &GaussianElement) -> GaussianElement {
    let x = Polynomial::x();
    let (p, q, r, s) = (&u.p, &u.q, &v.p, &v.q);
    let even = &(&p.derivative() * s) - &(&r.derivative() * q);
    let dq = &q.derivative() - &(&x * q);
    let ds = &s.derivative() - &(&x * s);
    let odd = &(&dq * s) - &(&ds * q);
    GaussianElement::new(even, odd)
}

fn moments() -> Outcome {
    let expected = [0, 1, 0, 3, 0, 15, 0, 105, 0, 945, 0, 10395].map(rat);
    let start = Instant::now();
    let got: Vec<Rational> = (1..=12)
        .map(|k| total_moment(&GaussianSpace, &xs(k)).unwrap())
        .collect();
    let elapsed = start.elapsed();
    ensure(got == expected, || format!("got {got:?}"))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("m_1..m_12 of x match (2j-1)!! in {elapsed:?}"))
}

fn closed_form() -> Outcome {
    let mut rng = random::seeded(2);
    let start = Instant::now();
    for i in 0..100 {
        let u = random::gaussian_homogeneous(&mut rng, 8);
        let v = random::gaussian_homogeneous(&mut rng, 8);
        let got = transport_structure(&GaussianSpace, &gword(&[u.clone(), v.clone()])).unwrap();
        let oracle = d2_oracle(&u, &v);
        ensure(got == oracle && d2_closed_form(&u, &v) == oracle, || {
            format!("pair {i}: ({u}, {v}) gave {got}, closed form {oracle}")
        })?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("100 random pairs, degree <= 8, in {elapsed:?}"))
}

fn higher_vanishing() -> Outcome {
    let mut rng = random::seeded(3);
    let start = Instant::now();
    for n in 3..=5 {
        for i in 0..50 {
            let w = gword(&random::gaussian_word(&mut rng, n, 6));
            let value = transport_structure(&GaussianSpace, &w).unwrap();
            ensure(value.is_zero(), || format!("arity {n}, word {i} ({w:?}) gave {value}"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("d_3, d_4, d_5 vanish on 50 words each in {elapsed:?}"))
}

fn random_table_spaces(seed: u64, count: usize, templates: &[TableTemplate]) -> Vec<TableSpace> {
    let mut rng = random::seeded(seed);
    (0..count)
        .map(|i| {
            let space = random::table_space(&mut rng, templates[i % templates.len()]);
            assert!(space.validate().is_valid(), "generated space {i} is invalid");
            space
        })
        .collect()
}

fn relations() -> Outcome {
    let start = Instant::now();
    let report = linfty_relations_check(&GaussianSpace, 4, 8, 4).unwrap();
    ensure(report.passed(), || format!("gaussian: {report}"))?;
    let mut words = report.words_checked;
    for (i, space) in random_table_spaces(4, 10, &TableTemplate::ALL).iter().enumerate() {
        ensure(space.dimension() <= 4, || format!("space {i} too large"))?;
        let report = linfty_relations_check(space, 4, 8, 40 + i as u64).unwrap();
        ensure(report.passed(), || format!("table space {i}: {report}"))?;
        words += report.words_checked;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!("D^a∘D^a = 0 on {words} words through arity 4 in {elapsed:?}"))
}

/// Single-variable recursion `k_n = m_n - Σ_{j<n} C(n-1, j-1) k_j m_{n-j}`.
fn recursive_cumulants(m: &[Rational]) -> Vec<Rational> {
    let mut k: Vec<Rational> = Vec::new();
    for n in 1..=m.len() {
        let mut value = m[n - 1].clone();
        let mut binom = Rational::from_integer(1.into());
        for j in 1..n {
            value -= &binom * &k[j - 1] * &m[n - j - 1];
            binom = binom * rat((n - 1 - (j - 1)) as i64) / rat(j as i64);
        }
        k.push(value);
    }
    k
}

fn cumulants() -> Outcome {
    let start = Instant::now();
    let g = GaussianSpace;
    let moments: Vec<Rational> = (1..=8).map(|n| total_moment(&g, &xs(n)).unwrap()).collect();
    let classical = recursive_cumulants(&moments);
    for n in 1..=8 {
        let k = total_cumulant(&g, &xs(n)).unwrap();
        let expected = rat(if n == 2 { 1 } else { 0 });
        ensure(k == expected && classical[n - 1] == expected, || format!("k_{n} = {k}"))?;
        if n <= 6 {
            let oracle = cumulant_partition_oracle(&g, &xs(n)).unwrap();
            ensure(k == oracle, || format!("k_{n} = {k} but oracle gives {oracle}"))?;
        }
    }
    let mut rng = random::seeded(5);
    let mut compared = 0;
    for space in random_table_spaces(5, 8, &TableTemplate::ALL) {
        for n in 1..=6 {
            for _ in 0..3 {
                let w = space.word(&random::table_word(&mut rng, &space, n)).unwrap();
                let k = total_cumulant(&space, &w).unwrap();
                let oracle = cumulant_partition_oracle(&space, &w).unwrap();
                ensure(k == oracle, || format!("table word {w:?}: {k} vs {oracle}"))?;
                compared += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "gaussian k_1..k_8 and {compared} random table words agree in {elapsed:?}"
    ))
}

fn inversion() -> Outcome {
    let inverse = invert_coalgebra(&scalar_multiplication()).unwrap();
    for n in 1..=7usize {
        let ones = SymWord::new(vec![Graded::new(rat(1), 0); n]).unwrap();
        let factorial: i64 = (1..n as i64).product();
        let expected = rat(if n % 2 == 1 { factorial } else { -factorial });
        let got = inverse.evaluate(&ones);
        ensure(got == expected, || format!("(a')^-1_{n}(1, …, 1) = {got}"))?;
    }
    let t = TransportedStructure::new(GaussianSpace);
    let a = t.multiplication().clone();
    let a_inv = t.inverse_multiplication();
    let mut rng = random::seeded(6);
    for n in 1..=6 {
        for _ in 0..4 {
            let w = gword(&random::gaussian_word(&mut rng, n, 3));
            let expected = if n == 1 {
                w.entries()[0].value.clone()
            } else {
                GaussianElement::zero()
            };
            let left = compose_coalgebra(&a_inv, &a, &w).unwrap();
            let right = compose_coalgebra(&a, &a_inv, &w).unwrap();
            ensure(left == expected && right == expected, || {
                format!("arity {n}: {left}, {right}")
            })?;
        }
    }
    Ok("(a')^-1_n = (-1)^(n-1)(n-1)! for n <= 7; a^-1 is two-sided through arity 6".into())
}

fn invariance() -> Outcome {
    let start = Instant::now();
    let bounds = SearchBounds {
        max_arity: 5,
        ..Default::default()
    };
    let mut rng = random::seeded(7);
    let fixture = fixture_space();
    let mut spaces = vec![fixture.clone()];
    spaces.extend(random_table_spaces(7, 10, &TableTemplate::WITH_DEGREE_ONE));
    let (mut collections, mut comparisons) = (0, 0);
    for (i, space) in spaces.iter().enumerate() {
        let degree_one = space.basis_in_degree(1);
        ensure(!degree_one.is_empty(), || format!("space {i} has no degree-1 part"))?;
        let mut homotopies: Vec<ChainHomotopy> = degree_one
            .iter()
            .map(|&b| ChainHomotopy::new(space, [(b, rat(1))]).unwrap())
            .collect();
        for _ in 0..2 {
            let h = ChainHomotopy::new(
                space,
                degree_one.iter().map(|&b| (b, random::nonzero_rational(&mut rng))),
            );
            homotopies.push(h.unwrap());
        }
        let report = invariance_check(space, &homotopies, bounds).unwrap();
        ensure(report.passed(), || format!("space {i}: {report}"))?;
        collections += report.collections;
        comparisons += report.comparisons;
    }
    let elapsed = start.elapsed();
    Ok(format!(
        "{} spaces, {collections} collections, {comparisons} exact comparisons, each with a moving non-closed expectation, in {elapsed:?}",
        spaces.len()
    ))
}

fn morphism_gate() -> Outcome {
    let g = GaussianSpace;
    let strict = |s: &str| HRVCollection::strict(&g, &[parse_gaussian(s).unwrap()]).unwrap();
    ensure(is_morphism(&strict("x"), &g, 5).unwrap().passed(), || {
        "1 ↦ x rejected".into()
    })?;
    ensure(is_morphism(&strict("x^2"), &g, 4).unwrap().passed(), || {
        "1 ↦ x^2 rejected".into()
    })?;
    let eta = is_morphism(&strict("eta"), &g, 5).unwrap().to_string();
    ensure(eta == "fails at arity 1: d(eta) = -x", || format!("1 ↦ eta: {eta}"))?;
    let x_eta = is_morphism(&strict("x*eta"), &g, 5).unwrap();
    let expected = format!("d(x*eta) = {}", parse_gaussian("1 - x^2").unwrap());
    let failure = x_eta.failure.clone().ok_or("1 ↦ x*eta accepted")?;
    ensure(failure.arity == 1 && failure.witness == expected, || {
        format!("1 ↦ x*eta: {x_eta}")
    })?;
    Ok(format!("accepts x, x^2; rejects eta ({eta}) and x*eta ({x_eta})"))
}

fn strict_transport() -> Outcome {
    let g = GaussianSpace;
    let mut rng = random::seeded(9);
    for i in 0..10 {
        let f = GaussianElement::even(random::polynomial(&mut rng, 4));
        let x = homotopy_probability::linfty::transport_chain_map(std::slice::from_ref(&f), &g, 5).unwrap();
        for n in 1..=5 {
            let m = joint_moment(&x, &g, &vec![0; n]).unwrap();
            let expected = if n == 1 { gauss_expectation(&f) } else { rat(0) };
            ensure(m == expected, || format!("f #{i} = {f}: arity {n} moment {m}"))?;
        }
    }
    // the same collapse, as maps: M ∘ X against Ê ∘ F on one word
    let f = parse_gaussian("x^2 - 3*x").unwrap();
    let fe = MorphismComponents::strict(SpaceTag::Free(1), SpaceTag::Scalars, 0, move |_: &Graded<usize>| {
        gauss_expectation(&f)
    });
    let w = SymWord::new(vec![Graded::new(0usize, 0)]).unwrap();
    ensure(fe.evaluate(&w) == rat(1), || "Ê∘F(e1) != 1".into())?;
    Ok("joint moments of transported x ↦ f are E(f), 0, 0, 0, 0 for 10 random f".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 gaussian moments", moments),
        ("2 arity-2 closed form", closed_form),
        ("3 higher components vanish", higher_vanishing),
        ("4 L-infinity relations", relations),
        ("5 cumulant oracle", cumulants),
        ("6 coalgebra inversion", inversion),
        ("7 homotopy invariance", invariance),
        ("8 morphism gate", morphism_gate),
        ("9 strict transport", strict_transport),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(message)
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
