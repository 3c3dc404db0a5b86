//! Randomized property suites driven by the `check` command.
//!
//! Every inequality is tracked by its worst slack (allowed minus observed;
//! negative means violated). The first violation is kept with its inputs so it
//! can be replayed.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{Algebra, AlgebraKind, Element};
use crate::error::{Error, Result};
use crate::instance::{word_spec, Coords};
use crate::metric::{
    distance, lambda_extremes, norm_metric_slack, rayleigh_oracle, upper_bound_oracle,
};
use crate::sampling::{random_cone_element, random_element, random_word, seeded_rng, SeededRng};
use crate::spectral::{det, normalize, power, spectral_decompose, spectral_norm};
use crate::transforms::{inversion, measure_contraction, power_map, AutomorphismWord};

/// Exponents for which the power map is checked against the factor `|p|`.
pub const CONTRACTION_EXPONENTS: [f64; 7] = [-1.0, -0.7, -0.5, 0.3, 0.5, 0.7, 1.0];

/// Exponents used for the power round-trip property.
pub const ROUND_TRIP_EXPONENTS: [f64; 6] = [-3.0, -2.0, -0.5, 0.5, 2.0, 3.0];

/// Random words drawn by the isometry suite when no word is supplied.
pub const ISOMETRY_WORDS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Axioms,
    Contraction,
    Isometry,
    Bounds,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Axioms,
        Suite::Contraction,
        Suite::Isometry,
        Suite::Bounds,
        Suite::Oracle,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Axioms => "axioms",
            Suite::Contraction => "contraction",
            Suite::Isometry => "isometry",
            Suite::Bounds => "bounds",
            Suite::Oracle => "oracle",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub evaluations: usize,
    /// Smallest `allowed - observed` seen; negative means violated.
    pub worst_slack: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub algebra: Algebra,
    pub samples: usize,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Default)]
struct Tracker {
    checks: Vec<CheckOutcome>,
    counterexample: Option<Value>,
}

impl Tracker {
    /// Records `observed <= allowed`.
    fn record(&mut self, name: &str, observed: f64, allowed: f64, inputs: impl FnOnce() -> Value) {
        let slack = allowed - observed;
        let slack = if slack.is_nan() {
            f64::NEG_INFINITY
        } else {
            slack
        };
        let idx = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(CheckOutcome {
                    name: name.to_owned(),
                    evaluations: 0,
                    worst_slack: f64::INFINITY,
                    passed: true,
                });
                self.checks.len() - 1
            }
        };
        let check = &mut self.checks[idx];
        check.evaluations += 1;
        check.worst_slack = check.worst_slack.min(slack);
        if slack < 0.0 {
            check.passed = false;
            if self.counterexample.is_none() {
                self.counterexample = Some(json!({
                    "check": name,
                    "observed": observed,
                    "allowed": allowed,
                    "inputs": inputs(),
                }));
            }
        }
    }

    fn finish(self, suite: Suite, algebra: Algebra, samples: usize, seed: u64) -> SuiteReport {
        SuiteReport {
            suite,
            algebra,
            samples,
            seed,
            passed: self.checks.iter().all(|c| c.passed),
            checks: self.checks,
            counterexample: self.counterexample,
        }
    }
}

fn c(x: &Element) -> Value {
    serde_json::to_value(Coords::of(x)).expect("coordinates serialize")
}

fn norm(x: &Element) -> Result<f64> {
    spectral_norm(x)
}

/// Runs one suite. `word` replaces the random words of the isometry suite.
pub fn run_suite(
    suite: Suite,
    algebra: Algebra,
    samples: usize,
    seed: u64,
    word: Option<&AutomorphismWord>,
) -> Result<SuiteReport> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be positive".into()));
    }
    if let Some(w) = word {
        algebra.check_same(&w.algebra())?;
    }
    let mut rng = seeded_rng(seed);
    let mut t = Tracker::default();
    match suite {
        Suite::Axioms => axioms(&mut t, algebra, samples, &mut rng)?,
        Suite::Contraction => contraction(&mut t, algebra, samples, seed, &mut rng)?,
        Suite::Isometry => isometry(&mut t, algebra, samples, seed, &mut rng, word)?,
        Suite::Bounds => bounds(&mut t, algebra, samples, &mut rng)?,
        Suite::Oracle => oracle(&mut t, algebra, samples, seed, &mut rng)?,
    }
    Ok(t.finish(suite, algebra, samples, seed))
}

fn axioms(t: &mut Tracker, alg: Algebra, samples: usize, rng: &mut SeededRng) -> Result<()> {
    for _ in 0..samples {
        let (x, y, z) = (
            random_element(alg, rng),
            random_element(alg, rng),
            random_element(alg, rng),
        );
        let scale = (1.0 + norm(&x)?) * (1.0 + norm(&y)?) * (1.0 + norm(&z)?);
        let inputs = || json!({ "x": c(&x), "y": c(&y), "z": c(&z) });

        let comm = norm(&x.product(&y)?.sub(&y.product(&x)?)?)?;
        t.record("commutativity", comm, 1e-12, inputs);

        let x2 = x.product(&x)?;
        let jordan = norm(
            &x.product(&x2.product(&y)?)?
                .sub(&x2.product(&x.product(&y)?)?)?,
        )?;
        t.record("jordan identity", jordan, 1e-10 * scale, inputs);

        let assoc = (x.product(&y)?.inner(&z)? - y.inner(&x.product(&z)?)?).abs();
        t.record("associative trace form", assoc, 1e-10 * scale, inputs);

        let by_definition = x
            .product(&x.product(&y)?)?
            .lin_comb(2.0, &x2.product(&y)?, -1.0)?;
        let quad_gap = norm(&x.quad(&y)?.sub(&by_definition)?)?;
        let quad_tol = if alg.kind == AlgebraKind::SymMatrix {
            1e-12
        } else {
            1e-10 * scale
        };
        t.record("quadratic representation", quad_gap, quad_tol, inputs);

        let d = spectral_decompose(&x)?;
        let rec = norm(&d.reconstruct().sub(&x)?)?;
        t.record(
            "spectral reconstruction",
            rec,
            1e-10 * (1.0 + norm(&x)?),
            inputs,
        );

        let a = random_cone_element(alg, rng);
        let w = random_cone_element(alg, rng);
        let cone_inputs = || json!({ "a": c(&a), "x": c(&w) });
        for p in ROUND_TRIP_EXPONENTS {
            let back = power(&power(&w, p)?, 1.0 / p)?;
            t.record("power round trip", norm(&back.sub(&w)?)?, 1e-8, cone_inputs);
        }
        let lhs = det(&a.quad(&w)?)?;
        let rhs = det(&a)?.powi(2) * det(&w)?;
        t.record(
            "det of quadratic representation",
            (lhs - rhs).abs() / rhs.abs(),
            1e-8,
            cone_inputs,
        );
    }
    Ok(())
}

fn contraction(
    t: &mut Tracker,
    alg: Algebra,
    samples: usize,
    seed: u64,
    rng: &mut SeededRng,
) -> Result<()> {
    for p in CONTRACTION_EXPONENTS {
        let r = measure_contraction(
            alg,
            &format!("power {p}"),
            |x| power_map(x, p),
            samples,
            seed,
        )?;
        t.record(
            &format!("contraction p={p}"),
            r.max_ratio,
            p.abs() + 1e-9,
            || json!({ "p": p, "seed": seed, "samples": samples }),
        );
    }
    for _ in 0..samples {
        let (x, y) = (random_cone_element(alg, rng), random_cone_element(alg, rng));
        let (m, _) = lambda_extremes(&x, &y)?;
        for p in [0.3, 0.5, 0.7, 1.0] {
            let (mp, _) = lambda_extremes(&power(&x, p)?, &power(&y, p)?)?;
            t.record(
                "order preservation of x^p",
                mp,
                m.powf(p) * (1.0 + 1e-9),
                || json!({ "p": p, "x": c(&x), "y": c(&y) }),
            );
        }
    }
    Ok(())
}

fn isometry(
    t: &mut Tracker,
    alg: Algebra,
    samples: usize,
    seed: u64,
    rng: &mut SeededRng,
    word: Option<&AutomorphismWord>,
) -> Result<()> {
    let words: Vec<AutomorphismWord> = match word {
        Some(w) => vec![w.clone()],
        None => (0..ISOMETRY_WORDS).map(|_| random_word(alg, rng)).collect(),
    };
    for (i, w) in words.iter().enumerate() {
        let spec = || json!({ "word": word_spec(w) });
        let per_word = samples.div_ceil(words.len()).max(1);
        let r = measure_contraction(
            alg,
            "word",
            |x| w.apply(x),
            per_word,
            seed.wrapping_add(i as u64),
        )?;
        let dev = (r.max_ratio - 1.0).abs().max((r.min_ratio - 1.0).abs());
        t.record("word isometry", dev, 1e-8, spec);

        let (x, y) = (random_cone_element(alg, rng), random_cone_element(alg, rng));
        let ratio0 = det(&w.apply(&x)?)? / det(&x)?;
        let ratio1 = det(&w.apply(&y)?)? / det(&y)?;
        t.record(
            "det scaling is constant",
            (ratio0 / ratio1 - 1.0).abs(),
            1e-8,
            spec,
        );

        let (alpha, beta) = (0.7, -1.3);
        let (a, b) = (random_element(alg, rng), random_element(alg, rng));
        let lhs = w.apply(&a.lin_comb(alpha, &b, beta)?)?;
        let rhs = w.apply(&a)?.lin_comb(alpha, &w.apply(&b)?, beta)?;
        let scale =
            (1.0 + norm(&w.apply(&alg.identity())?)?) * (1.0 + norm(&a)?) * (1.0 + norm(&b)?);
        t.record("linearity", norm(&lhs.sub(&rhs)?)?, 1e-12 * scale, spec);
    }
    if word.is_none() {
        let r = measure_contraction(alg, "inversion", inversion, samples, seed)?;
        let dev = (r.max_ratio - 1.0).abs().max((r.min_ratio - 1.0).abs());
        t.record("inversion isometry", dev, 1e-9, || json!({ "seed": seed }));
    }
    Ok(())
}

fn bounds(t: &mut Tracker, alg: Algebra, samples: usize, rng: &mut SeededRng) -> Result<()> {
    for _ in 0..samples {
        let (x, y, z) = (
            random_cone_element(alg, rng),
            random_cone_element(alg, rng),
            random_cone_element(alg, rng),
        );
        let inputs = || json!({ "x": c(&x), "y": c(&y), "z": c(&z) });
        let dxy = distance(&x, &y)?.distance;
        let dyx = distance(&y, &x)?.distance;
        let dyz = distance(&y, &z)?.distance;
        let dxz = distance(&x, &z)?.distance;
        t.record("symmetry", (dxy - dyx).abs(), 1e-10 * (1.0 + dxy), inputs);
        t.record("triangle inequality", dxz - dxy - dyz, 1e-9, inputs);
        for alpha in [0.1, 1.0, 10.0] {
            for beta in [0.1, 1.0, 10.0] {
                let d = distance(&x.scale(alpha), &y.scale(beta))?.distance;
                t.record("projectivity", (d - dxy).abs(), 1e-10, inputs);
            }
        }

        let (mxy, lxy) = lambda_extremes(&x, &y)?;
        let (myx, lyx) = lambda_extremes(&y, &x)?;
        let (myz, lyz) = lambda_extremes(&y, &z)?;
        let (mxz, lxz) = lambda_extremes(&x, &z)?;
        t.record(
            "cross form of the distance",
            ((mxy * myx).ln() - dxy).abs(),
            1e-10,
            inputs,
        );
        t.record("reciprocity", (mxy * lyx - 1.0).abs(), 1e-10, inputs);
        t.record("reciprocity", (myx * lxy - 1.0).abs(), 1e-10, inputs);
        let (alpha, beta) = (2.5, 0.75);
        let (m2, l2) = lambda_extremes(&x.lin_comb(alpha, &y, beta)?, &y)?;
        t.record(
            "affine shift of lambda_M",
            (m2 / (alpha * mxy + beta) - 1.0).abs(),
            1e-9,
            inputs,
        );
        t.record(
            "affine shift of lambda_m",
            (l2 / (alpha * lxy + beta) - 1.0).abs(),
            1e-9,
            inputs,
        );
        t.record(
            "submultiplicative lambda_M",
            mxz,
            mxy * myz * (1.0 + 1e-9),
            inputs,
        );
        t.record(
            "supermultiplicative lambda_m",
            lxy * lyz * (1.0 - 1e-9),
            lxz,
            inputs,
        );

        let (u, v) = (normalize(&x)?, normalize(&y)?);
        let s = norm_metric_slack(&u, &v)?;
        let pair = || json!({ "x": c(&u), "y": c(&v) });
        t.record("norm upper bound", -s.upper, 1e-9, pair);
        if let Some(lower) = s.lower {
            t.record("norm lower bound", -lower, 1e-9, pair);
        }
    }
    Ok(())
}

fn oracle(
    t: &mut Tracker,
    alg: Algebra,
    samples: usize,
    seed: u64,
    rng: &mut SeededRng,
) -> Result<()> {
    for i in 0..samples {
        let (x, y) = (random_cone_element(alg, rng), random_cone_element(alg, rng));
        let inputs = || json!({ "x": c(&x), "y": c(&y) });
        let (m, l) = lambda_extremes(&x, &y)?;
        let bisected = upper_bound_oracle(&x, &y, 1e-10)?;
        t.record("bisection agreement", (bisected - m).abs(), 1e-7, inputs);
        let (hi, lo) = rayleigh_oracle(&x, &y, 200, seed.wrapping_add(i as u64))?;
        t.record("rayleigh max below lambda_M", hi - m, 1e-10 * m, inputs);
        t.record("rayleigh min above lambda_m", l - lo, 1e-10 * l, inputs);
        if alg.kind == AlgebraKind::Orthant {
            let ratios: Vec<f64> = x
                .coords()
                .iter()
                .zip(y.coords())
                .map(|(a, b)| a / b)
                .collect();
            let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            t.record("exact ratio lambda_M", (m - max).abs(), 1e-12 * max, inputs);
            t.record("exact ratio lambda_m", (l - min).abs(), 1e-12 * min, inputs);
        }
    }
    Ok(())
}
