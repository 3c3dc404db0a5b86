//! Fixed-point solver for `g(a) = a^p` on the open cone, `|p| > 1`.
//!
//! The normalized map `F(x) = g(x)^{1/p} / |g(x)^{1/p}|` is a contraction of
//! the Hilbert metric on the unit sphere of the cone with factor `1/|p|`: `g`
//! preserves the metric and the power map `x -> x^{1/p}` contracts it by
//! `1/|p|` (for negative exponents through the inversion, itself an
//! isometry). Its fixed direction `u` is then scaled onto the solution `a`.

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::metric::distance;
use crate::spectral::{in_cone, min_eigenvalue, normalize, power, require_in_cone, spectral_norm};
use crate::transforms::{matrix_det, AutomorphismWord, Generator, MIN_CONGRUENCE_DET};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 500;

/// A converged run must reach a residual of at most this multiple of `tol`.
pub const RESIDUAL_FACTOR: f64 = 1e2;

/// Extra un-normalized iterations run after rescaling.
pub const POLISH_STEPS: usize = 10;

/// Trace entries below this are rounding noise and stay out of the rate fit.
pub const TRACE_FIT_FLOOR: f64 = 1e-11;

const SCALE_BRACKET: (f64, f64) = (1e-8, 1e8);

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub p: f64,
    /// Stop once the Banach a-posteriori bound puts the iterate within `tol`
    /// of the fixed point (Hilbert metric).
    pub tol: f64,
    pub max_iter: usize,
    /// Starting point in the cone; the identity when absent.
    pub initial: Option<Element>,
}

impl SolveConfig {
    pub fn new(p: f64) -> Result<Self> {
        let cfg = SolveConfig {
            p,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            initial: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_initial(mut self, initial: Element) -> Self {
        self.initial = Some(initial);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p.abs() > 1.0) {
            return Err(Error::InvalidConfig(format!(
                "the equation g(x) = x^p has a unique solution only for |p| > 1, got p = {}",
                self.p
            )));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be positive".into()));
        }
        Ok(())
    }

    /// `1/|p|`.
    pub fn contraction_factor(&self) -> f64 {
        1.0 / self.p.abs()
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: Element,
    pub iterations: usize,
    /// `d(x_k, x_{k+1})` for every normalized step.
    pub distance_trace: Vec<f64>,
    /// Relative residual of the solved equation in the spectral norm.
    pub residual: f64,
    /// Geometric rate fitted to the trace.
    pub contraction_estimate: f64,
    pub converged: bool,
}

/// `ceil(log(d01 / (tol (1 - q))) / log|p|) + 2`, the step count the Banach
/// estimate allows before the stopping rule must fire.
pub fn a_priori_iteration_bound(first_step: f64, p: f64, tol: f64) -> usize {
    let q = 1.0 / p.abs();
    let ratio = first_step / (tol * (1.0 - q));
    let steps = if ratio > 1.0 {
        (ratio.ln() / p.abs().ln()).ceil() as usize
    } else {
        0
    };
    steps + 2
}

/// Least-squares geometric rate of the trace entries above [`TRACE_FIT_FLOOR`].
pub fn fit_contraction(trace: &[f64]) -> f64 {
    let points: Vec<(f64, f64)> = trace
        .iter()
        .enumerate()
        .filter(|(_, d)| **d > TRACE_FIT_FLOOR)
        .map(|(k, d)| (k as f64, d.ln()))
        .collect();
    if points.len() < 2 {
        return match trace {
            [a, b, ..] if *a > 0.0 => b / a,
            _ => 0.0,
        };
    }
    let n = points.len() as f64;
    let mean_k = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_l = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), (k, l)| {
        (
            num + (k - mean_k) * (l - mean_l),
            den + (k - mean_k).powi(2),
        )
    });
    (num / den).exp()
}

/// `|lhs - rhs| / (1 + |rhs|)` in the spectral norm.
fn relative_gap(lhs: &Element, rhs: &Element) -> Result<f64> {
    Ok(spectral_norm(&lhs.sub(rhs)?)? / (1.0 + spectral_norm(rhs)?))
}

struct Problem<'a> {
    map: &'a dyn Fn(&Element) -> Result<Element>,
    p: f64,
}

impl Problem<'_> {
    fn image(&self, x: &Element) -> Result<Element> {
        let gx = (self.map)(x)?;
        let least = min_eigenvalue(&gx)?;
        if !(least > 0.0) {
            return Err(Error::not_in_cone("iterate", least));
        }
        Ok(gx)
    }

    /// `g(x)^{1/p}`.
    fn root(&self, x: &Element) -> Result<Element> {
        power(&self.image(x)?, 1.0 / self.p)
    }

    fn residual(&self, a: &Element) -> Result<f64> {
        relative_gap(&self.image(a)?, &power(a, self.p)?)
    }

    /// Moves the unit fixed direction `u` onto the ray's solution `beta u`.
    ///
    /// With `g(u)^{1/p} = s u` the ray equation `beta g(u) = beta^p u^p`
    /// gives `beta = s^{p/(p-1)}`.
    fn rescale(&self, u: &Element, tol: f64) -> Result<(Element, f64)> {
        let s = spectral_norm(&self.root(u)?)?;
        let beta = (self.p / (self.p - 1.0) * s.ln()).exp();
        let a = u.scale(beta);
        let residual = self.residual(&a)?;
        if residual <= RESIDUAL_FACTOR * tol {
            return Ok((a, residual));
        }
        let (b, r) = self.scale_search(u)?;
        Ok(if r < residual { (b, r) } else { (a, residual) })
    }

    /// Minimizes the residual along the ray `beta u`, `beta` in
    /// [`SCALE_BRACKET`], by golden-section search on `log beta`.
    fn scale_search(&self, u: &Element) -> Result<(Element, f64)> {
        let gu = self.image(u)?;
        let up = power(u, self.p)?;
        let p = self.p;
        let eval = |t: f64| -> Result<f64> {
            let beta = t.exp();
            relative_gap(&gu.scale(beta), &up.scale(beta.powf(p)))
        };
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut lo, mut hi) = (SCALE_BRACKET.0.ln(), SCALE_BRACKET.1.ln());
        let mut c = hi - inv_phi * (hi - lo);
        let mut d = lo + inv_phi * (hi - lo);
        let (mut fc, mut fd) = (eval(c)?, eval(d)?);
        for _ in 0..200 {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - inv_phi * (hi - lo);
                fc = eval(c)?;
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + inv_phi * (hi - lo);
                fd = eval(d)?;
            }
        }
        let a = u.scale((0.5 * (lo + hi)).exp());
        let r = self.residual(&a)?;
        Ok((a, r))
    }

    /// Un-normalized steps `a <- g(a)^{1/p}`, kept while the residual drops.
    fn polish(&self, mut a: Element, mut residual: f64) -> Result<(Element, f64)> {
        for _ in 0..POLISH_STEPS {
            let x = self.root(&a)?;
            let r = self.residual(&x)?;
            if !(r < residual) {
                break;
            }
            a = x;
            residual = r;
        }
        Ok((a, residual))
    }
}

fn run(
    algebra: Algebra,
    map: &dyn Fn(&Element) -> Result<Element>,
    cfg: &SolveConfig,
    reported_residual: &dyn Fn(&Element) -> Result<f64>,
) -> Result<SolveReport> {
    cfg.validate()?;
    let problem = Problem { map, p: cfg.p };
    let start = match &cfg.initial {
        Some(x0) => {
            algebra.check_same(&x0.algebra())?;
            require_in_cone(x0, "initial")?;
            x0.clone()
        }
        None => algebra.identity(),
    };

    let stop = cfg.tol * (1.0 - cfg.contraction_factor());
    let mut x = normalize(&start)?;
    let mut trace = Vec::new();
    let mut settled = false;
    for _ in 0..cfg.max_iter {
        let next = normalize(&problem.root(&x)?)?;
        let step = distance(&x, &next)
            .map_err(|e| e.renamed("iterate"))?
            .distance;
        trace.push(step);
        x = next;
        if step <= stop {
            settled = true;
            break;
        }
    }

    let (a, residual) = problem.rescale(&x, cfg.tol)?;
    let (a, _) = problem.polish(a, residual)?;
    if !in_cone(&a, 0.0)? {
        return Err(Error::not_in_cone("solution", min_eigenvalue(&a)?));
    }
    let residual = reported_residual(&a)?;
    let report = SolveReport {
        solution: a,
        iterations: trace.len(),
        contraction_estimate: fit_contraction(&trace),
        distance_trace: trace,
        residual,
        converged: settled && residual <= RESIDUAL_FACTOR * cfg.tol,
    };
    if report.converged {
        Ok(report)
    } else {
        Err(Error::NonConvergence {
            report: Box::new(report),
        })
    }
}

/// Finds the unique `a` in the cone with `g(a) = a^p`.
pub fn solve(g: &AutomorphismWord, cfg: &SolveConfig) -> Result<SolveReport> {
    let map = |x: &Element| g.apply(x);
    let p = cfg.p;
    run(g.algebra(), &map, cfg, &|a| {
        relative_gap(&g.apply(a)?, &power(a, p)?)
    })
}

/// Finds the unique `a` in the cone with `h(a^p) = a`, by solving
/// `h^{-1}(a) = a^p`. The residual refers to `h(a^p) = a`.
pub fn solve_corollary(h: &AutomorphismWord, cfg: &SolveConfig) -> Result<SolveReport> {
    let g = h.inverse()?;
    let map = |x: &Element| g.apply(x);
    let p = cfg.p;
    run(h.algebra(), &map, cfg, &|a| {
        relative_gap(&h.apply(&power(a, p)?)?, a)
    })
}

/// Solves `t^T a t = a^{2^k}` for symmetric positive definite `a`, with `t`
/// row-major `side x side`.
pub fn solve_bushell(t: &[f64], side: usize, k: u32) -> Result<SolveReport> {
    solve_bushell_with(t, side, k, DEFAULT_TOL, DEFAULT_MAX_ITER, None)
}

pub fn solve_bushell_with(
    t: &[f64],
    side: usize,
    k: u32,
    tol: f64,
    max_iter: usize,
    initial: Option<Element>,
) -> Result<SolveReport> {
    if t.len() != side * side || side == 0 {
        return Err(Error::InvalidGenerator(format!(
            "expected a {side}x{side} matrix, got {} entries",
            t.len()
        )));
    }
    if !(1..=30).contains(&k) {
        return Err(Error::InvalidConfig(format!(
            "k must be in 1..=30, got {k}"
        )));
    }
    if t.iter().all(|v| v.is_finite()) {
        let det = matrix_det(t, side);
        if !(det.abs() > MIN_CONGRUENCE_DET) {
            return Err(Error::SingularMatrix { det });
        }
    }
    let word = AutomorphismWord::new(
        Algebra::sym(side),
        vec![Generator::Congruence {
            side,
            t: t.to_vec(),
        }],
    )?;
    let mut cfg = SolveConfig::new(2f64.powi(k as i32))?
        .with_tol(tol)
        .with_max_iter(max_iter);
    cfg.initial = initial;
    solve(&word, &cfg)
}
