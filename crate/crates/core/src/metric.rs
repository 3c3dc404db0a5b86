//! Hilbert's projective metric on the open cone.
//!
//! For `x, y` in the cone, `lambda_M(x, y)` and `lambda_m(x, y)` are the
//! largest and least eigenvalues of `P(y^{-1/2}) x`, and
//! `d(x, y) = log(lambda_M / lambda_m)`.

use serde::Serialize;

use crate::algebra::{symmetrized, AlgebraKind, Element};
use crate::error::{Error, Result};
use crate::sampling::{random_unit, seeded_rng};
use crate::spectral::{eigen_extremes, min_eigenvalue, power, require_in_cone, spectral_norm};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricReport {
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub distance: f64,
}

/// Tolerance on the spectral norm for points of the unit sphere.
pub const SPHERE_TOLERANCE: f64 = 1e-10;

/// Extreme eigenvalues of `P(y^{-1/2}) x`.
///
/// `x` is first rescaled to `kx` with `tr(kx) = tr(y)`, which puts 1 between
/// the two extremes, and the spectrum is taken of `P(y^{-1/2})(kx - y)`. The
/// difference is formed before any rounding-prone product, so nearby points
/// keep full relative accuracy in `log(lambda_M / lambda_m)`.
fn shifted_extremes(x: &Element, y: &Element) -> Result<(f64, f64, f64)> {
    x.algebra().check_same(&y.algebra())?;
    require_in_cone(x, "x")?;
    require_in_cone(y, "y")?;
    let k = y.trace() / x.trace();
    let diff = x.lin_comb(k, y, -1.0)?;
    let y_isqrt = power(y, -0.5)?;
    let mut z = y_isqrt.quad(&diff)?;
    if x.algebra().kind == AlgebraKind::SymMatrix {
        z = Element::from_raw(z.algebra(), symmetrized(z.coords(), x.algebra().param));
    }
    let (mu_max, mu_min) = eigen_extremes(&z)?;
    let mu_min = mu_min.max(-1.0);
    if !(1.0 + mu_min > 0.0) {
        return Err(Error::not_in_cone("x", 1.0 + mu_min));
    }
    Ok((k, mu_max, mu_min))
}

/// `(lambda_M(x, y), lambda_m(x, y))`.
pub fn lambda_extremes(x: &Element, y: &Element) -> Result<(f64, f64)> {
    let (k, mu_max, mu_min) = shifted_extremes(x, y)?;
    Ok(((1.0 + mu_max) / k, (1.0 + mu_min) / k))
}

pub fn distance(x: &Element, y: &Element) -> Result<MetricReport> {
    let (k, mu_max, mu_min) = shifted_extremes(x, y)?;
    let distance = (mu_max.ln_1p() - mu_min.ln_1p()).max(0.0);
    Ok(MetricReport {
        lambda_max: (1.0 + mu_max) / k,
        lambda_min: (1.0 + mu_min) / k,
        distance,
    })
}

/// `M(x, y) = inf { lambda : lambda y - x in the closed cone }` by bisection.
///
/// Independent of [`lambda_extremes`]: it only queries least eigenvalues of
/// `lambda y - x`.
pub fn upper_bound_oracle(x: &Element, y: &Element, tol: f64) -> Result<f64> {
    x.algebra().check_same(&y.algebra())?;
    require_in_cone(x, "x")?;
    require_in_cone(y, "y")?;
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "bisection tolerance must be positive, got {tol}"
        )));
    }
    let e = x.algebra().identity();
    let mut lo = 0.0;
    let mut hi = x.inner(&e)? / min_eigenvalue(y)? + 1.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if min_eigenvalue(&y.lin_comb(mid, x, -1.0)?)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One-sided Monte-Carlo bounds `(max, min)` of `(x|c) / (y|c)` over random
/// primitive idempotents `c`; the max never exceeds `lambda_M` and the min
/// never falls below `lambda_m`. The orthant is enumerated exhaustively.
pub fn rayleigh_oracle(x: &Element, y: &Element, samples: usize, seed: u64) -> Result<(f64, f64)> {
    x.algebra().check_same(&y.algebra())?;
    require_in_cone(x, "x")?;
    require_in_cone(y, "y")?;
    if samples == 0 {
        return Err(Error::InvalidConfig(
            "rayleigh oracle needs at least one sample".into(),
        ));
    }
    let algebra = x.algebra();
    let (xc, yc) = (x.coords(), y.coords());
    let ratios: Box<dyn Iterator<Item = f64>> = match algebra.kind {
        AlgebraKind::Orthant => Box::new(xc.iter().zip(yc).map(|(a, b)| a / b)),
        AlgebraKind::SymMatrix => {
            let r = algebra.param;
            let mut rng = seeded_rng(seed);
            let form = move |m: &[f64], v: &[f64]| -> f64 {
                (0..r)
                    .map(|i| v[i] * (0..r).map(|j| m[i * r + j] * v[j]).sum::<f64>())
                    .sum()
            };
            Box::new((0..samples).map(move |_| {
                let v = random_unit(&mut rng, r);
                form(xc, &v) / form(yc, &v)
            }))
        }
        AlgebraKind::SpinFactor => {
            let mut rng = seeded_rng(seed);
            let dim = algebra.param - 1;
            Box::new((0..samples).map(move |_| {
                let u = random_unit(&mut rng, dim);
                // (x|c) = x0 + <x', u> for c = (1, u) / 2
                let pair =
                    |c: &[f64]| c[0] + c[1..].iter().zip(&u).map(|(a, b)| a * b).sum::<f64>();
                pair(xc) / pair(yc)
            }))
        }
    };
    Ok(
        ratios.fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), r| {
            (hi.max(r), lo.min(r))
        }),
    )
}

/// Checks the norm bounds on the unit sphere of the cone:
/// `|x - y| <= e^d - 1`, and `|x - y| >= lambda_m(y) tanh(d / 2)` whenever
/// `|x - y| < lambda_m(y)`.
pub fn norm_metric_bounds_check(x: &Element, y: &Element) -> Result<bool> {
    let slack = norm_metric_slack(x, y)?;
    Ok(slack.upper >= -1e-9 && slack.lower.is_none_or(|s| s >= -1e-9))
}

/// Margins of the two norm bounds; negative means violated.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormMetricSlack {
    pub upper: f64,
    /// `None` when the premise `|x - y| < lambda_m(y)` does not hold.
    pub lower: Option<f64>,
}

pub fn norm_metric_slack(x: &Element, y: &Element) -> Result<NormMetricSlack> {
    for (v, name) in [(x, "x"), (y, "y")] {
        let n = spectral_norm(v)?;
        if (n - 1.0).abs() > SPHERE_TOLERANCE {
            return Err(Error::NotNormalized {
                name: name.to_owned(),
                norm: n,
            });
        }
    }
    let d = distance(x, y)?.distance;
    let gap = spectral_norm(&x.sub(y)?)?;
    let least_y = min_eigenvalue(y)?;
    Ok(NormMetricSlack {
        upper: d.exp_m1() - gap,
        lower: (gap < least_y).then(|| gap - least_y * (0.5 * d).tanh()),
    })
}
