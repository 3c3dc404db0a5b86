//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal failure, 2 parse or validation error,
//! 3 point outside the cone, 4 no convergence, 5 `|p| <= 1`, 6 property
//! suite failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use symcone::instance::{metric_json, solve_json, InstanceFile, ReportFile};
use symcone::sampling::{random_cone_element, random_word, seeded_rng};
use symcone::solver::{solve_bushell_with, DEFAULT_MAX_ITER, DEFAULT_TOL};
use symcone::suites::{run_suite, Suite};
use symcone::transforms::Generator;
use symcone::{distance, solve, solve_corollary, Algebra, Error, SolveConfig};

#[derive(Parser)]
#[command(
    name = "symcone",
    version,
    about = "Hilbert metric and fixed-point solver on symmetric cones"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert distance between two named elements.
    Metric {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Solve g(a) = a^p (or h(a^p) = a with --corollary) for a named map.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Named starting element; the identity when omitted.
        #[arg(long)]
        initial: Option<String>,
        #[arg(long)]
        corollary: bool,
    },
    /// Solve t^T a t = a^(2^k) where `map` is a single congruence generator.
    Bushell {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Run a randomized property suite.
    Check {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        algebra: Algebra,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance holding a word to check instead of random ones (isometry suite).
        #[arg(long, requires = "map")]
        instance: Option<PathBuf>,
        #[arg(long, requires = "instance")]
        map: Option<String>,
    },
    /// Generate a random element or map as an instance file.
    Gen {
        #[arg(long)]
        algebra: Algebra,
        #[arg(long, value_enum)]
        what: GenWhat,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Axioms,
    Contraction,
    Isometry,
    Bounds,
    Oracle,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Axioms => Suite::Axioms,
            SuiteArg::Contraction => Suite::Contraction,
            SuiteArg::Isometry => Suite::Isometry,
            SuiteArg::Bounds => Suite::Bounds,
            SuiteArg::Oracle => Suite::Oracle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenWhat {
    Element,
    Map,
}

enum Output {
    Report(ReportFile),
    /// `gen` prints a plain instance file so it can be fed back in.
    Instance(InstanceFile),
}

/// A failed command: exit code, message, and an optional report for stdout.
struct Failure {
    code: u8,
    message: String,
    report: Option<Box<ReportFile>>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_)
            | Error::InvalidCoordinates { .. }
            | Error::InvalidGenerator(_)
            | Error::AlgebraMismatch { .. }
            | Error::SingularMatrix { .. }
            | Error::InvalidConfig(_) => 2,
            Error::NotInCone { .. } | Error::NotNormalized { .. } | Error::MapLeftCone { .. } => 3,
            Error::NonConvergence { .. } => 4,
            Error::EigensolverFailure { .. } => 1,
        };
        Failure {
            code,
            message: e.to_string(),
            report: None,
        }
    }
}

fn arguments() -> Vec<String> {
    std::env::args().skip(1).collect()
}

/// Hashed input: the arguments joined by a unit separator.
fn command_line() -> Vec<u8> {
    arguments().join("\u{1f}").into_bytes()
}

fn echo(report: ReportFile) -> ReportFile {
    report.with_args(arguments())
}

fn require_theorem_exponent(p: f64) -> Result<(), Failure> {
    if p.is_finite() && p.abs() > 1.0 {
        return Ok(());
    }
    Err(Failure {
        code: 5,
        message: format!("p = {p}: existence and uniqueness of a with g(a) = a^p require |p| > 1"),
        report: None,
    })
}

fn solve_outcome(
    name: &str,
    result: symcone::Result<symcone::SolveReport>,
    inputs: &[&[u8]],
) -> Result<ReportFile, Failure> {
    match result {
        Ok(r) => Ok(ReportFile::new(name, inputs, None, solve_json(&r))),
        Err(Error::NonConvergence { report }) => Err(Failure {
            code: 4,
            message: format!("no convergence after {} iterations", report.iterations),
            report: Some(Box::new(ReportFile::new(
                name,
                inputs,
                None,
                solve_json(&report),
            ))),
        }),
        Err(e) => Err(e.into()),
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let args = command_line();
    match cli.command {
        Command::Metric { instance, x, y } => {
            let (file, bytes) = InstanceFile::load(&instance)?;
            let (xe, ye) = (file.element(&x)?, file.element(&y)?);
            let report = distance(&xe, &ye).map_err(|e| match e {
                Error::NotInCone {
                    min_eigenvalue,
                    name,
                } => Error::NotInCone {
                    name: if name == "x" { x.clone() } else { y.clone() },
                    min_eigenvalue,
                },
                other => other,
            })?;
            Ok(Output::Report(ReportFile::new(
                "metric",
                &[&args, &bytes],
                None,
                metric_json(&report),
            )))
        }
        Command::Solve {
            instance,
            map,
            p,
            tol,
            max_iter,
            initial,
            corollary,
        } => {
            require_theorem_exponent(p)?;
            let (file, bytes) = InstanceFile::load(&instance)?;
            let word = file.map(&map)?;
            let mut cfg = SolveConfig::new(p)?.with_tol(tol).with_max_iter(max_iter);
            if let Some(name) = initial {
                cfg = cfg.with_initial(file.element(&name)?);
            }
            cfg.validate()?;
            let result = if corollary {
                solve_corollary(&word, &cfg)
            } else {
                solve(&word, &cfg)
            };
            solve_outcome("solve", result, &[&args, &bytes]).map(Output::Report)
        }
        Command::Bushell {
            instance,
            map,
            k,
            tol,
            max_iter,
        } => {
            let (file, bytes) = InstanceFile::load(&instance)?;
            let word = file.map(&map)?;
            let (side, t) = match word.factors() {
                [Generator::Congruence { side, t }] => (*side, t.clone()),
                _ => {
                    return Err(Error::Parse(format!(
                        "map `{map}` must be a single congruence generator"
                    ))
                    .into())
                }
            };
            let result = solve_bushell_with(&t, side, k, tol, max_iter, None);
            solve_outcome("bushell", result, &[&args, &bytes]).map(Output::Report)
        }
        Command::Check {
            suite,
            algebra,
            samples,
            seed,
            instance,
            map,
        } => {
            let mut inputs = vec![args.clone()];
            let word = match (instance, map) {
                (Some(path), Some(name)) => {
                    let (file, bytes) = InstanceFile::load(&path)?;
                    inputs.push(bytes);
                    Some(file.map(&name)?)
                }
                _ => None,
            };
            let report = run_suite(suite.into(), algebra, samples, seed, word.as_ref())?;
            let passed = report.passed;
            let refs: Vec<&[u8]> = inputs.iter().map(Vec::as_slice).collect();
            let file = ReportFile::new(
                "check",
                &refs,
                Some(seed),
                serde_json::to_value(&report).expect("suite reports serialize"),
            );
            if passed {
                Ok(Output::Report(file))
            } else {
                Err(Failure {
                    code: 6,
                    message: format!("suite {} failed", report.suite),
                    report: Some(Box::new(file)),
                })
            }
        }
        Command::Gen {
            algebra,
            what,
            seed,
            name,
        } => {
            let mut rng = seeded_rng(seed);
            let mut file = InstanceFile::new(algebra);
            match what {
                GenWhat::Element => {
                    let x = random_cone_element(algebra, &mut rng);
                    file.insert_element(name.as_deref().unwrap_or("x"), &x);
                }
                GenWhat::Map => {
                    let w = random_word(algebra, &mut rng);
                    file.insert_map(name.as_deref().unwrap_or("g"), &w);
                }
            }
            Ok(Output::Instance(file))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            match output {
                Output::Report(r) => println!("{}", echo(r).to_json()),
                Output::Instance(f) => println!("{}", f.to_json()),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(report) = f.report {
                println!("{}", echo(*report).to_json());
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
