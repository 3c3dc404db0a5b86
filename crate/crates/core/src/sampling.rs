//! Seeded random instances.
//!
//! All randomness comes from a SplitMix64 stream whose state is the user seed.
//! Uniform doubles take the top 53 bits of each output; normals come from
//! `rand_distr::StandardNormal`.

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::SplitMix64;

use crate::algebra::{matmul, symmetrized, transpose, Algebra, AlgebraKind, Element};
use crate::transforms::{AutomorphismWord, Generator};

/// Cone samples have eigenvalues `exp(u)` with `u` uniform in `[-2, 2]`.
pub const ELEMENT_LOG_SPREAD: f64 = 2.0;

/// Generator parameters in random words stay within `exp([-1/2, 1/2])`.
pub const WORD_LOG_SPREAD: f64 = 0.5;

pub const MAX_WORD_LEN: usize = 3;

pub type SeededRng = SplitMix64;

pub fn seeded_rng(seed: u64) -> SeededRng {
    SplitMix64::from_seed(seed.to_le_bytes())
}

fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn log_uniform(rng: &mut SeededRng, spread: f64) -> f64 {
    uniform(rng, -spread, spread).exp()
}

fn normal(rng: &mut SeededRng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_unit(rng: &mut SeededRng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| normal(rng)).collect();
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}

/// Random orthogonal matrix (row-major) by Gram-Schmidt on Gaussian columns.
pub fn random_rotation(rng: &mut SeededRng, r: usize) -> Vec<f64> {
    'retry: loop {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(r);
        for _ in 0..r {
            let mut v: Vec<f64> = (0..r).map(|_| normal(rng)).collect();
            // two passes keep the columns orthogonal to working precision
            for _ in 0..2 {
                for q in &cols {
                    let proj: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= proj * qi;
                    }
                }
            }
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if n < 1e-8 {
                continue 'retry;
            }
            cols.push(v.into_iter().map(|a| a / n).collect());
        }
        let mut q = vec![0.0; r * r];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..r {
                q[i * r + j] = col[i];
            }
        }
        return q;
    }
}

/// Element with prescribed eigenvalues on a random Jordan frame.
pub fn element_with_spectrum(algebra: Algebra, rng: &mut SeededRng, spectrum: &[f64]) -> Element {
    assert_eq!(spectrum.len(), algebra.rank());
    match algebra.kind {
        AlgebraKind::Orthant => Element::from_raw(algebra, spectrum.to_vec()),
        AlgebraKind::SymMatrix => {
            let r = algebra.param;
            let q = random_rotation(rng, r);
            let mut qd = q.clone();
            for i in 0..r {
                for j in 0..r {
                    qd[i * r + j] *= spectrum[j];
                }
            }
            let m = matmul(&qd, &transpose(&q, r), r);
            Element::from_raw(algebra, symmetrized(&m, r))
        }
        AlgebraKind::SpinFactor => {
            let u = random_unit(rng, algebra.param - 1);
            let (hi, lo) = (spectrum[0], spectrum[1]);
            let mut coords = vec![0.5 * (hi + lo)];
            coords.extend(u.iter().map(|v| 0.5 * (hi - lo) * v));
            Element::from_raw(algebra, coords)
        }
    }
}

/// Interior point with eigenvalues log-uniform in `[e^-spread, e^spread]`.
pub fn random_cone_element_with_spread(
    algebra: Algebra,
    rng: &mut SeededRng,
    spread: f64,
) -> Element {
    let spectrum: Vec<f64> = (0..algebra.rank())
        .map(|_| log_uniform(rng, spread))
        .collect();
    element_with_spectrum(algebra, rng, &spectrum)
}

pub fn random_cone_element(algebra: Algebra, rng: &mut SeededRng) -> Element {
    random_cone_element_with_spread(algebra, rng, ELEMENT_LOG_SPREAD)
}

/// Arbitrary element of V with standard normal coordinates.
pub fn random_element(algebra: Algebra, rng: &mut SeededRng) -> Element {
    let coords: Vec<f64> = (0..algebra.coord_len()).map(|_| normal(rng)).collect();
    match algebra.kind {
        AlgebraKind::SymMatrix => Element::from_raw(algebra, symmetrized(&coords, algebra.param)),
        _ => Element::from_raw(algebra, coords),
    }
}

/// Well-conditioned invertible matrix `U diag(s) V^T`.
pub fn random_invertible(rng: &mut SeededRng, r: usize, spread: f64) -> Vec<f64> {
    let u = random_rotation(rng, r);
    let v = random_rotation(rng, r);
    let mut us = u;
    for j in 0..r {
        let s = log_uniform(rng, spread);
        for i in 0..r {
            us[i * r + j] *= s;
        }
    }
    matmul(&us, &transpose(&v, r), r)
}

pub fn random_generator(algebra: Algebra, rng: &mut SeededRng) -> Generator {
    let choices = match algebra.kind {
        AlgebraKind::SpinFactor => 2,
        _ => 3,
    };
    match rng.random_range(0..choices) {
        0 => Generator::Scalar(log_uniform(rng, 2.0 * WORD_LOG_SPREAD)),
        1 => Generator::Quad(random_cone_element_with_spread(
            algebra,
            rng,
            WORD_LOG_SPREAD,
        )),
        _ => match algebra.kind {
            AlgebraKind::SymMatrix => Generator::Congruence {
                side: algebra.param,
                t: random_invertible(rng, algebra.param, WORD_LOG_SPREAD),
            },
            _ => {
                let mut sigma: Vec<usize> = (0..algebra.param).collect();
                for i in (1..sigma.len()).rev() {
                    sigma.swap(i, rng.random_range(0..=i));
                }
                Generator::Permutation(sigma)
            }
        },
    }
}

/// Word of length `1..=MAX_WORD_LEN` with well-conditioned generators.
pub fn random_word(algebra: Algebra, rng: &mut SeededRng) -> AutomorphismWord {
    let len = rng.random_range(1..=MAX_WORD_LEN);
    let factors = (0..len).map(|_| random_generator(algebra, rng)).collect();
    AutomorphismWord::new(algebra, factors).expect("random generators are valid by construction")
}
