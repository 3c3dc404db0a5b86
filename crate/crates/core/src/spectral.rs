//! Spectral decomposition `x = sum_j lambda_j c_j` over a Jordan frame, and the
//! functional calculus built on it.

use crate::algebra::{Algebra, AlgebraKind, Element};
use crate::error::{Error, Result};
use crate::jacobi::symmetric_eigen;

/// Tolerance (spectral norm) on the frame and reconstruction invariants.
pub const SPECTRAL_TOLERANCE: f64 = 1e-10;

/// Eigenvalues sorted descending and a Jordan frame realizing them.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub frame: Vec<Element>,
}

impl SpectralDecomposition {
    /// `sum_j f(lambda_j) c_j`.
    pub fn recombine(&self, f: impl Fn(f64) -> f64) -> Element {
        let algebra = self.frame[0].algebra();
        let mut coords = vec![0.0; algebra.coord_len()];
        for (lambda, c) in self.eigenvalues.iter().zip(&self.frame) {
            let w = f(*lambda);
            for (acc, v) in coords.iter_mut().zip(c.coords()) {
                *acc += w * v;
            }
        }
        Element::from_raw(algebra, coords)
    }

    pub fn reconstruct(&self) -> Element {
        self.recombine(|l| l)
    }
}

/// Spin-factor eigen-data: `lambda = x0 +- |x'|`, `c = (1, +-u) / 2`.
fn spin_parts(x: &Element) -> (f64, f64, Vec<f64>) {
    let c = x.coords();
    let norm = c[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
    let u = if norm == 0.0 {
        let mut u = vec![0.0; c.len() - 1];
        u[0] = 1.0;
        u
    } else {
        c[1..].iter().map(|v| v / norm).collect()
    };
    (c[0] + norm, c[0] - norm, u)
}

fn spin_idempotent(algebra: Algebra, u: &[f64], sign: f64) -> Element {
    let mut coords = Vec::with_capacity(u.len() + 1);
    coords.push(0.5);
    coords.extend(u.iter().map(|v| 0.5 * sign * v));
    Element::from_raw(algebra, coords)
}

pub fn spectral_decompose(x: &Element) -> Result<SpectralDecomposition> {
    let algebra = x.algebra();
    match algebra.kind {
        AlgebraKind::Orthant => {
            let c = x.coords();
            let mut order: Vec<usize> = (0..c.len()).collect();
            order.sort_by(|&i, &j| c[j].total_cmp(&c[i]));
            let frame = order
                .iter()
                .map(|&i| {
                    let mut e = vec![0.0; c.len()];
                    e[i] = 1.0;
                    Element::from_raw(algebra, e)
                })
                .collect();
            Ok(SpectralDecomposition {
                eigenvalues: order.iter().map(|&i| c[i]).collect(),
                frame,
            })
        }
        AlgebraKind::SymMatrix => {
            let r = algebra.param;
            let eig = symmetric_eigen(x.coords(), r)?;
            let frame = (0..r)
                .map(|j| {
                    let v = eig.vector(j);
                    let mut p = vec![0.0; r * r];
                    for a in 0..r {
                        for b in 0..r {
                            p[a * r + b] = v[a] * v[b];
                        }
                    }
                    Element::from_raw(algebra, p)
                })
                .collect();
            Ok(SpectralDecomposition {
                eigenvalues: eig.values,
                frame,
            })
        }
        AlgebraKind::SpinFactor => {
            let (hi, lo, u) = spin_parts(x);
            Ok(SpectralDecomposition {
                eigenvalues: vec![hi, lo],
                frame: vec![
                    spin_idempotent(algebra, &u, 1.0),
                    spin_idempotent(algebra, &u, -1.0),
                ],
            })
        }
    }
}

/// Eigenvalues only, sorted descending.
pub fn eigenvalues(x: &Element) -> Result<Vec<f64>> {
    match x.algebra().kind {
        AlgebraKind::Orthant => {
            let mut v = x.coords().to_vec();
            v.sort_by(|a, b| b.total_cmp(a));
            Ok(v)
        }
        AlgebraKind::SymMatrix => Ok(symmetric_eigen(x.coords(), x.algebra().param)?.values),
        AlgebraKind::SpinFactor => {
            let (hi, lo, _) = spin_parts(x);
            Ok(vec![hi, lo])
        }
    }
}

/// `(largest, least)` eigenvalue.
pub fn eigen_extremes(x: &Element) -> Result<(f64, f64)> {
    let v = eigenvalues(x)?;
    Ok((v[0], v[v.len() - 1]))
}

pub fn min_eigenvalue(x: &Element) -> Result<f64> {
    Ok(eigen_extremes(x)?.1)
}

/// Applies a scalar function through the spectral decomposition.
pub fn spectral_map(x: &Element, f: impl Fn(f64) -> f64) -> Result<Element> {
    if x.algebra().kind == AlgebraKind::Orthant {
        return Ok(x.map_coords(f));
    }
    Ok(spectral_decompose(x)?.recombine(f))
}

/// `x^p = sum_j lambda_j^p c_j`.
///
/// Non-negative integer exponents accept any element; every other exponent
/// requires `x` in the open cone.
pub fn power(x: &Element, p: f64) -> Result<Element> {
    if p == 1.0 {
        return Ok(x.clone());
    }
    if p == 0.0 {
        return Ok(x.algebra().identity());
    }
    if p > 0.0 && p.fract() == 0.0 && p <= i32::MAX as f64 {
        let k = p as i32;
        return spectral_map(x, |l| l.powi(k));
    }
    let d = spectral_decompose(x)?;
    let least = *d.eigenvalues.last().expect("rank is positive");
    if !(least > 0.0) {
        return Err(Error::not_in_cone("x", least));
    }
    if p == -1.0 {
        return Ok(d.recombine(f64::recip));
    }
    if p == 0.5 {
        return Ok(d.recombine(f64::sqrt));
    }
    if p == -0.5 {
        return Ok(d.recombine(|l| l.sqrt().recip()));
    }
    Ok(d.recombine(|l| l.powf(p)))
}

pub fn inverse(x: &Element) -> Result<Element> {
    power(x, -1.0)
}

pub fn det(x: &Element) -> Result<f64> {
    Ok(eigenvalues(x)?.iter().product())
}

pub fn tr(x: &Element) -> f64 {
    x.trace()
}

/// `|x| = max_j |lambda_j|`.
pub fn spectral_norm(x: &Element) -> Result<f64> {
    let (hi, lo) = eigen_extremes(x)?;
    Ok(hi.abs().max(lo.abs()))
}

/// True iff the least eigenvalue exceeds `margin`.
pub fn in_cone(x: &Element, margin: f64) -> Result<bool> {
    Ok(min_eigenvalue(x)? > margin)
}

/// Fails with `NotInCone` naming `name` unless `x` is in the open cone.
pub fn require_in_cone(x: &Element, name: &str) -> Result<()> {
    let least = min_eigenvalue(x)?;
    if least > 0.0 {
        Ok(())
    } else {
        Err(Error::not_in_cone(name, least))
    }
}

/// `x / |x|`.
pub fn normalize(x: &Element) -> Result<Element> {
    let n = spectral_norm(x)?;
    Ok(x.scale(1.0 / n))
}
