//! The `hprob` command line.
//!
//! [`run`] takes the argument vector and returns the exit code with the text
//! for stdout and stderr, so the binary is a thin wrapper and tests need no
//! subprocess.

use std::fs;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::coalgebra::{Convention, TransportedStructure, DEFAULT_TRANSPORT_CAP};
use crate::error::{Error, Result};
use crate::exact::expr::{parse_expression, parse_list, ExprAlgebra};
use crate::exact::{format_rational, Rational};
use crate::gaussian::homology_reduce;
use crate::linfty::{
    invariance_check, is_morphism, joint_cumulant, joint_moment, total_cumulant, total_moment, ChainHomotopy,
    CollectionFile, HRVCollection, SearchBounds,
};
use crate::random::{seeded, small_rational, Sampler};
use crate::space::{fixture_space, ProbabilitySpace, SpaceHandle, TableSpace};

#[derive(Parser, Debug)]
#[command(
    name = "hprob",
    version,
    about = "Exact moments, cumulants and transported L-infinity structures"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,

    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the space axioms.
    Validate(SpaceArg),
    /// Joint moments of a random variable, a collection, or one word.
    Moments(StatisticArgs),
    /// Joint cumulants, with the same inputs as `moments`.
    Cumulants(StatisticArgs),
    /// Evaluate the transported structure on a word.
    Transport(TransportArgs),
    /// Homology class of a Gaussian polynomial as a multiple of [1].
    Reduce(ReduceArgs),
    /// Check that a random variable or collection is an L-infinity morphism.
    CheckRv(CheckArgs),
    /// Perturb the expectation by chain homotopies and compare statistics.
    InvarianceDemo(DemoArgs),
}

#[derive(Args, Debug)]
pub struct SpaceArg {
    /// `gaussian` or a path to a JSON space file.
    #[arg(long, default_value = "gaussian")]
    pub space: String,
}

#[derive(Args, Debug)]
pub struct StatisticArgs {
    #[command(flatten)]
    pub space: SpaceArg,
    /// A single random variable `1 ↦ rv`; prints arities 1 through `--max`.
    #[arg(long, conflicts_with_all = ["word", "hrv"])]
    pub rv: Option<String>,
    /// Highest arity printed for `--rv`.
    #[arg(long, default_value_t = 6)]
    pub max: usize,
    /// Comma-separated word; prints its single total moment or cumulant.
    #[arg(long, conflicts_with = "hrv")]
    pub word: Option<String>,
    /// JSON collection file; requires `--index`.
    #[arg(long, requires = "index")]
    pub hrv: Option<String>,
    /// Comma-separated 1-based variable indices.
    #[arg(long)]
    pub index: Option<String>,
    /// Arity through which `--rv` must be an L-infinity morphism.
    #[arg(long)]
    pub max_arity: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TransportArgs {
    #[command(flatten)]
    pub space: SpaceArg,
    /// Comma-separated word.
    #[arg(long)]
    pub word: String,
    #[arg(long, default_value = "bracket")]
    pub convention: String,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub space: SpaceArg,
    /// A polynomial in `x`.
    pub expression: String,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub space: SpaceArg,
    #[arg(long, conflicts_with = "hrv")]
    pub rv: Option<String>,
    #[arg(long)]
    pub hrv: Option<String>,
    #[arg(long, default_value_t = 5)]
    pub max_arity: usize,
}

#[derive(Args, Debug)]
pub struct DemoArgs {
    /// `fixture`, `gaussian`, or a path to a JSON space file.
    #[arg(long, default_value = "fixture")]
    pub space: String,
    #[arg(long, default_value_t = 5)]
    pub max_arity: usize,
    /// Random homotopies drawn in addition to the unit ones.
    #[arg(long, default_value_t = 2)]
    pub homotopies: usize,
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl RunOutput {
    fn ok(stdout: String) -> Self {
        RunOutput {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn failed(stdout: String) -> Self {
        RunOutput {
            code: 1,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
///
/// Exit codes: 0 on success, 1 when a check fails or a computation is
/// refused, 2 for unparseable input.
pub fn run<I, T>(argv: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                RunOutput::ok(text)
            } else {
                RunOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(e) => {
            let code = match e {
                Error::NotMorphism(_) | Error::NotClosed { .. } | Error::NotUnital => 1,
                _ => 2,
            };
            RunOutput {
                code,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

fn list(values: &[Rational]) -> String {
    values.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

fn emit(format: Format, plain: String, value: serde_json::Value) -> String {
    match format {
        Format::Plain => plain + "\n",
        Format::Json => value.to_string() + "\n",
    }
}

fn parse_indices(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (offset, item) in crate::exact::expr::split_list(s) {
        let trimmed = item.trim();
        match trimmed.parse::<usize>() {
            Ok(i) if i >= 1 => out.push(i - 1),
            _ => {
                return Err(Error::Parse {
                    offset,
                    message: format!("expected a positive variable index, found {trimmed:?}"),
                })
            }
        }
    }
    Ok(out)
}

fn execute(cli: &Cli) -> Result<RunOutput> {
    let format = cli.format;
    match &cli.command {
        Command::Validate(args) => {
            let handle = SpaceHandle::load(&args.space)?;
            let report = handle.validate(cli.seed)?;
            let text = emit(
                format,
                report.to_string().trim_end().to_string(),
                serde_json::to_value(&report)?,
            );
            Ok(if report.is_valid() {
                RunOutput::ok(text)
            } else {
                RunOutput::failed(text)
            })
        }
        Command::Moments(args) => statistic(args, format, Statistic::Moment),
        Command::Cumulants(args) => statistic(args, format, Statistic::Cumulant),
        Command::Transport(args) => {
            let convention: Convention = args.convention.parse()?;
            match SpaceHandle::load(&args.space.space)? {
                SpaceHandle::Gaussian(g) => transport(&g, &args.word, convention, format),
                SpaceHandle::Table(t) => transport(&t, &args.word, convention, format),
            }
        }
        Command::Reduce(args) => {
            let SpaceHandle::Gaussian(_) = SpaceHandle::load(&args.space.space)? else {
                return Err(Error::MalformedSpace("reduce needs the gaussian space".into()));
            };
            let z = parse_expression(&crate::exact::expr::GaussianExpr, &args.expression)?;
            if !z.q.is_zero() {
                return Err(Error::Parse {
                    offset: 0,
                    message: "reduce takes a polynomial in x, without eta".into(),
                });
            }
            let c = homology_reduce(&z.p);
            Ok(RunOutput::ok(emit(
                format,
                format_rational(&c),
                json!({ "value": format_rational(&c) }),
            )))
        }
        Command::CheckRv(args) => match SpaceHandle::load(&args.space.space)? {
            SpaceHandle::Gaussian(g) => check_rv(&g, args, format),
            SpaceHandle::Table(t) => check_rv(&t, args, format),
        },
        Command::InvarianceDemo(args) => demo(args, cli.seed, format),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Statistic {
    Moment,
    Cumulant,
}

trait CliSpace: ProbabilitySpace + ExprAlgebra<Elem = <Self as ProbabilitySpace>::Elem> + Sampler {}
impl<S: ProbabilitySpace + ExprAlgebra<Elem = <S as ProbabilitySpace>::Elem> + Sampler> CliSpace for S {}

fn statistic(args: &StatisticArgs, format: Format, which: Statistic) -> Result<RunOutput> {
    match SpaceHandle::load(&args.space.space)? {
        SpaceHandle::Gaussian(g) => statistic_in(&g, args, format, which),
        SpaceHandle::Table(t) => statistic_in(&t, args, format, which),
    }
}

fn statistic_in<S: CliSpace>(space: &S, args: &StatisticArgs, format: Format, which: Statistic) -> Result<RunOutput> {
    let name = if which == Statistic::Moment {
        "moments"
    } else {
        "cumulants"
    };
    if let Some(rv) = &args.rv {
        let f = parse_expression(space, rv)?;
        let x = HRVCollection::strict(space, std::slice::from_ref(&f))?;
        let gate = args.max_arity.unwrap_or(args.max.min(DEFAULT_TRANSPORT_CAP));
        let report = is_morphism(&x, space, gate)?;
        if !report.passed() {
            return Err(Error::NotMorphism(report.to_string()));
        }
        // a strict collection composes to the total statistic of (f, …, f)
        let mut values = Vec::with_capacity(args.max);
        for n in 1..=args.max {
            let w = space.word(&vec![f.clone(); n])?;
            values.push(match which {
                Statistic::Moment => total_moment(space, &w)?,
                Statistic::Cumulant => total_cumulant(space, &w)?,
            });
        }
        let strings: Vec<String> = values.iter().map(format_rational).collect();
        return Ok(RunOutput::ok(emit(
            format,
            list(&values),
            json!({ "statistic": name, "rv": space.describe(&f), "values": strings }),
        )));
    }
    if let Some(word) = &args.word {
        let entries = parse_list(space, word)?;
        let w = space.word(&entries)?;
        let value = match which {
            Statistic::Moment => total_moment(space, &w)?,
            Statistic::Cumulant => total_cumulant(space, &w)?,
        };
        return Ok(RunOutput::ok(emit(
            format,
            format_rational(&value),
            json!({ "statistic": name, "value": format_rational(&value) }),
        )));
    }
    if let Some(path) = &args.hrv {
        let x = CollectionFile::from_json(&fs::read_to_string(path)?)?.resolve(space)?;
        let idx = parse_indices(args.index.as_deref().unwrap_or_default())?;
        let value = match which {
            Statistic::Moment => joint_moment(&x, space, &idx)?,
            Statistic::Cumulant => joint_cumulant(&x, space, &idx)?,
        };
        return Ok(RunOutput::ok(emit(
            format,
            format_rational(&value),
            json!({ "statistic": name, "value": format_rational(&value) }),
        )));
    }
    Err(Error::Parse {
        offset: 0,
        message: "one of --rv, --word or --hrv is required".into(),
    })
}

fn transport<S: CliSpace>(space: &S, word: &str, convention: Convention, format: Format) -> Result<RunOutput> {
    let entries = parse_list(space, word)?;
    let value = TransportedStructure::new(space.clone()).component_of(&entries, convention)?;
    let text = space.describe(&value);
    Ok(RunOutput::ok(emit(
        format,
        text.clone(),
        json!({ "arity": entries.len(), "convention": convention.to_string(), "value": text }),
    )))
}

fn check_rv<S: CliSpace>(space: &S, args: &CheckArgs, format: Format) -> Result<RunOutput> {
    let x = match (&args.rv, &args.hrv) {
        (Some(rv), _) => HRVCollection::strict(space, &[parse_expression(space, rv)?])?,
        (None, Some(path)) => CollectionFile::from_json(&fs::read_to_string(path)?)?.resolve(space)?,
        (None, None) => {
            return Err(Error::Parse {
                offset: 0,
                message: "one of --rv or --hrv is required".into(),
            })
        }
    };
    let report = is_morphism(&x, space, args.max_arity)?;
    let text = emit(format, report.to_string(), serde_json::to_value(&report)?);
    Ok(if report.passed() {
        RunOutput::ok(text)
    } else {
        RunOutput::failed(text)
    })
}

fn demo(args: &DemoArgs, seed: u64, format: Format) -> Result<RunOutput> {
    let space: TableSpace = match args.space.as_str() {
        "fixture" => fixture_space(),
        "gaussian" => {
            let text = "the gaussian space has no degree-1 part: only h = 0 is admissible and E' = E";
            return Ok(RunOutput::ok(emit(
                format,
                text.into(),
                json!({ "homotopies": 0, "note": text }),
            )));
        }
        path => match SpaceHandle::load(path)? {
            SpaceHandle::Table(t) => t,
            SpaceHandle::Gaussian(_) => unreachable!("handled above"),
        },
    };
    let degree_one = space.basis_in_degree(1);
    if degree_one.is_empty() {
        return Err(Error::Shape(
            "space has no degree-1 part, so every homotopy is zero".into(),
        ));
    }
    let mut rng = seeded(seed);
    let mut homotopies = Vec::new();
    for &i in &degree_one {
        homotopies.push(ChainHomotopy::new(&space, [(i, Rational::from_integer(1.into()))])?);
    }
    for _ in 0..args.homotopies {
        homotopies.push(ChainHomotopy::new(
            &space,
            degree_one.iter().map(|&i| (i, small_rational(&mut rng))),
        )?);
    }
    let bounds = SearchBounds {
        max_arity: args.max_arity,
        ..Default::default()
    };
    let report = invariance_check(&space, &homotopies, bounds)?;
    let text = emit(format, report.to_string(), serde_json::to_value(&report)?);
    Ok(if report.passed() {
        RunOutput::ok(text)
    } else {
        RunOutput::failed(text)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hprob(args: &[&str]) -> RunOutput {
        run(std::iter::once("hprob").chain(args.iter().copied()))
    }

    #[test]
    fn documented_examples() {
        let out = hprob(&["moments", "--space", "gaussian", "--rv", "x", "--max", "6"]);
        assert_eq!((out.code, out.stdout.as_str()), (0, "0, 1, 0, 3, 0, 15\n"));
        let out = hprob(&["reduce", "--space", "gaussian", "x^4"]);
        assert_eq!((out.code, out.stdout.as_str()), (0, "3\n"));
        let out = hprob(&["check-rv", "--space", "gaussian", "--rv", "eta"]);
        assert_eq!(out.code, 1);
        assert!(out.stdout.contains("fails at arity 1: d(eta) = -x"), "{}", out.stdout);
    }

    #[test]
    fn parse_errors_exit_2() {
        let out = hprob(&["reduce", "x^^2"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("byte"), "{}", out.stderr);
        assert_eq!(hprob(&["frobnicate"]).code, 2);
        assert_eq!(hprob(&["transport", "--word", "x", "--convention", "sideways"]).code, 2);
    }

    #[test]
    fn json_values_reparse() {
        let out = hprob(&["--format", "json", "cumulants", "--rv", "x^2", "--max", "4"]);
        assert_eq!(out.code, 0);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        let values: Vec<Rational> = v["values"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| crate::exact::parse_rational(s.as_str().unwrap()).unwrap())
            .collect();
        let plain = hprob(&["cumulants", "--rv", "x^2", "--max", "4"]);
        assert_eq!(list(&values) + "\n", plain.stdout);
    }
}
