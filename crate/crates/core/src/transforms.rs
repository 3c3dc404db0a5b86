//! Cone maps: automorphism words, power maps, inversion, and empirical
//! contraction measurement in the Hilbert metric.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::algebra::{matmul, symmetrized, transpose, Algebra, AlgebraKind, Element};
use crate::error::{Error, Result};
use crate::metric::distance;
use crate::sampling::{random_cone_element, seeded_rng};
use crate::spectral::{in_cone, inverse, power, require_in_cone};

/// Smallest accepted `|det(t)|` for a congruence generator.
pub const MIN_CONGRUENCE_DET: f64 = 1e-12;

/// Pairs closer than this are skipped when measuring ratios.
pub const MIN_PAIR_DISTANCE: f64 = 1e-8;

/// One validated generator of the automorphism group of the cone.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// `x -> mu x`, `mu > 0`.
    Scalar(f64),
    /// `x -> P(a) x`, `a` in the cone.
    Quad(Element),
    /// `x -> t^T x t` on symmetric matrices; `t` is row-major `side x side`.
    Congruence { side: usize, t: Vec<f64> },
    /// `x -> (x[sigma(0)], ..., x[sigma(n-1)])` on the orthant.
    Permutation(Vec<usize>),
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidGenerator(msg.into())
}

fn to_dmatrix(t: &[f64], n: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, n, t)
}

fn from_dmatrix(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Determinant of a row-major square matrix.
pub fn matrix_det(t: &[f64], n: usize) -> f64 {
    to_dmatrix(t, n).determinant()
}

impl Generator {
    pub fn validate(&self, algebra: Algebra) -> Result<()> {
        match self {
            Generator::Scalar(mu) => {
                if !(mu.is_finite() && *mu > 0.0) {
                    return Err(invalid(format!(
                        "scalar must be positive and finite, got {mu}"
                    )));
                }
            }
            Generator::Quad(a) => {
                algebra.check_same(&a.algebra())?;
                if !in_cone(a, 0.0)? {
                    return Err(invalid(
                        "quadratic representation needs an element of the open cone",
                    ));
                }
            }
            Generator::Congruence { side, t } => {
                if algebra.kind != AlgebraKind::SymMatrix {
                    return Err(invalid(format!(
                        "congruence is only defined on sym, not {algebra}"
                    )));
                }
                if *side != algebra.param || t.len() != side * side {
                    return Err(invalid(format!(
                        "congruence matrix must be {0}x{0}",
                        algebra.param
                    )));
                }
                if t.iter().any(|v| !v.is_finite()) {
                    return Err(invalid("congruence matrix has non-finite entries"));
                }
                let det = matrix_det(t, *side);
                if !(det.abs() > MIN_CONGRUENCE_DET) {
                    return Err(invalid(format!(
                        "congruence matrix is singular (det {det:e})"
                    )));
                }
            }
            Generator::Permutation(sigma) => {
                if algebra.kind != AlgebraKind::Orthant {
                    return Err(invalid(format!(
                        "permutation is only defined on orthant, not {algebra}"
                    )));
                }
                let mut seen = vec![false; algebra.param];
                if sigma.len() != algebra.param
                    || sigma
                        .iter()
                        .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
                {
                    return Err(invalid(format!(
                        "not a permutation of 0..{}",
                        algebra.param
                    )));
                }
            }
        }
        Ok(())
    }

    fn apply(&self, x: &Element) -> Result<Element> {
        match self {
            Generator::Scalar(mu) => Ok(x.scale(*mu)),
            Generator::Quad(a) => a.quad(x),
            Generator::Congruence { side, t } => {
                let n = *side;
                let txt = matmul(&matmul(&transpose(t, n), x.coords(), n), t, n);
                Ok(Element::from_raw(x.algebra(), symmetrized(&txt, n)))
            }
            Generator::Permutation(sigma) => Ok(Element::from_raw(
                x.algebra(),
                sigma.iter().map(|&i| x.coords()[i]).collect(),
            )),
        }
    }

    fn inverse(&self) -> Result<Generator> {
        Ok(match self {
            Generator::Scalar(mu) => Generator::Scalar(mu.recip()),
            Generator::Quad(a) => Generator::Quad(inverse(a)?),
            Generator::Congruence { side, t } => {
                let inv = to_dmatrix(t, *side)
                    .try_inverse()
                    .ok_or(Error::SingularMatrix {
                        det: matrix_det(t, *side),
                    })?;
                Generator::Congruence {
                    side: *side,
                    t: from_dmatrix(&inv),
                }
            }
            Generator::Permutation(sigma) => {
                let mut inv = vec![0; sigma.len()];
                for (i, &s) in sigma.iter().enumerate() {
                    inv[s] = i;
                }
                Generator::Permutation(inv)
            }
        })
    }
}

/// An element of the automorphism group, kept as a list of generators.
///
/// Factors act in list order: `apply` runs `factors[0]` first.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomorphismWord {
    algebra: Algebra,
    factors: Vec<Generator>,
}

impl AutomorphismWord {
    pub fn identity(algebra: Algebra) -> Self {
        AutomorphismWord {
            algebra,
            factors: Vec::new(),
        }
    }

    pub fn new(algebra: Algebra, factors: Vec<Generator>) -> Result<Self> {
        for g in &factors {
            g.validate(algebra)?;
        }
        Ok(AutomorphismWord { algebra, factors })
    }

    pub fn push(&mut self, g: Generator) -> Result<()> {
        g.validate(self.algebra)?;
        self.factors.push(g);
        Ok(())
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn factors(&self) -> &[Generator] {
        &self.factors
    }

    /// `other` after `self`.
    pub fn then(&self, other: &AutomorphismWord) -> Result<AutomorphismWord> {
        self.algebra.check_same(&other.algebra)?;
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(AutomorphismWord {
            algebra: self.algebra,
            factors,
        })
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.algebra.check_same(&x.algebra())?;
        let mut y = x.clone();
        for g in &self.factors {
            y = g.apply(&y)?;
        }
        Ok(y)
    }

    /// Reversed list of inverted generators.
    pub fn inverse(&self) -> Result<AutomorphismWord> {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(Generator::inverse)
            .collect::<Result<Vec<_>>>()?;
        Ok(AutomorphismWord {
            algebra: self.algebra,
            factors,
        })
    }
}

/// The power map `x -> x^p` on the open cone.
pub fn power_map(x: &Element, p: f64) -> Result<Element> {
    require_in_cone(x, "x")?;
    power(x, p)
}

/// The inversion `x -> x^-1`.
pub fn inversion(x: &Element) -> Result<Element> {
    inverse(x)
}

/// Empirical Lipschitz ratios of a map in the Hilbert metric.
#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub label: String,
    pub samples: usize,
    /// Pairs that were far enough apart to contribute a ratio.
    pub pairs_used: usize,
    pub max_ratio: f64,
    pub min_ratio: f64,
}

impl ContractionReport {
    pub fn is_isometry(&self, tol: f64) -> bool {
        self.pairs_used > 0
            && (self.max_ratio - 1.0).abs() <= tol
            && (self.min_ratio - 1.0).abs() <= tol
    }
}

/// Samples `samples` seeded pairs from the cone of `algebra` and records the
/// extreme values of `d(f x, f y) / d(x, y)`.
pub fn measure_contraction<F>(
    algebra: Algebra,
    label: &str,
    map: F,
    samples: usize,
    seed: u64,
) -> Result<ContractionReport>
where
    F: Fn(&Element) -> Result<Element>,
{
    let mut rng = seeded_rng(seed);
    let mut report = ContractionReport {
        label: label.to_owned(),
        samples,
        pairs_used: 0,
        max_ratio: 0.0,
        min_ratio: f64::INFINITY,
    };
    for sample in 0..samples {
        let x = random_cone_element(algebra, &mut rng);
        let y = random_cone_element(algebra, &mut rng);
        let left = |_| Error::MapLeftCone {
            label: label.to_owned(),
            sample,
        };
        let fx = map(&x)?;
        let fy = map(&y)?;
        if !in_cone(&fx, 0.0)? || !in_cone(&fy, 0.0)? {
            return Err(left(()));
        }
        let d = distance(&x, &y)?.distance;
        if d < MIN_PAIR_DISTANCE {
            continue;
        }
        let ratio = distance(&fx, &fy)
            .map_err(|e| match e {
                Error::NotInCone { .. } => left(()),
                other => other,
            })?
            .distance
            / d;
        report.pairs_used += 1;
        report.max_ratio = report.max_ratio.max(ratio);
        report.min_ratio = report.min_ratio.min(ratio);
    }
    if report.pairs_used == 0 {
        report.min_ratio = 0.0;
    }
    Ok(report)
}

/// Measures how far `word` is from preserving the Hilbert metric.
pub fn isometry_check(
    word: &AutomorphismWord,
    samples: usize,
    seed: u64,
) -> Result<ContractionReport> {
    measure_contraction(
        word.algebra(),
        &format!("word of length {}", word.factors().len()),
        |x| word.apply(x),
        samples,
        seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::det;

    fn orth(c: &[f64]) -> Element {
        Element::new(Algebra::orthant(c.len()), c.to_vec()).unwrap()
    }

    #[test]
    fn generator_examples() {
        let w = AutomorphismWord::new(Algebra::orthant(2), vec![Generator::Scalar(2.0)]).unwrap();
        assert_eq!(w.apply(&orth(&[1.0, 3.0])).unwrap().coords(), &[2.0, 6.0]);

        let s = Algebra::sym(2);
        let w = AutomorphismWord::new(
            s,
            vec![Generator::Congruence {
                side: 2,
                t: vec![1.0, 1.0, 0.0, 1.0],
            }],
        )
        .unwrap();
        assert_eq!(
            w.apply(&s.identity()).unwrap().coords(),
            &[1.0, 1.0, 1.0, 2.0]
        );

        for alg in [Algebra::orthant(3), Algebra::sym(2), Algebra::spin(3)] {
            let a = match alg.kind {
                AlgebraKind::Orthant => orth(&[1.0, 2.0, 3.0]),
                AlgebraKind::SymMatrix => {
                    Element::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap()
                }
                AlgebraKind::SpinFactor => Element::new(alg, vec![2.0, 1.0, 0.5]).unwrap(),
            };
            let w = AutomorphismWord::new(alg, vec![Generator::Quad(a.clone())]).unwrap();
            let a2 = a.product(&a).unwrap();
            assert!(w.apply(&alg.identity()).unwrap().max_abs_diff(&a2) < 1e-14);
        }
    }

    #[test]
    fn rejects_invalid_generators() {
        let o = Algebra::orthant(2);
        assert!(AutomorphismWord::new(o, vec![Generator::Scalar(-1.0)]).is_err());
        assert!(AutomorphismWord::new(o, vec![Generator::Scalar(0.0)]).is_err());
        assert!(AutomorphismWord::new(o, vec![Generator::Quad(orth(&[1.0, 0.0]))]).is_err());
        assert!(AutomorphismWord::new(o, vec![Generator::Permutation(vec![0, 0])]).is_err());
        assert!(AutomorphismWord::new(o, vec![Generator::Permutation(vec![1, 2])]).is_err());
        assert!(AutomorphismWord::new(
            o,
            vec![Generator::Congruence {
                side: 2,
                t: vec![1.0, 0.0, 0.0, 1.0]
            }]
        )
        .is_err());
        let s = Algebra::sym(2);
        assert!(AutomorphismWord::new(
            s,
            vec![Generator::Congruence {
                side: 2,
                t: vec![1.0, 2.0, 2.0, 4.0]
            }]
        )
        .is_err());
        assert!(AutomorphismWord::new(s, vec![Generator::Permutation(vec![1, 0])]).is_err());
        let mut w = AutomorphismWord::identity(o);
        assert!(matches!(
            w.push(Generator::Scalar(f64::NAN)),
            Err(Error::InvalidGenerator(_))
        ));
        assert!(w.factors().is_empty());
    }

    #[test]
    fn word_inverse_round_trips() {
        let o = Algebra::orthant(3);
        let w = AutomorphismWord::new(
            o,
            vec![
                Generator::Scalar(3.0),
                Generator::Permutation(vec![2, 0, 1]),
                Generator::Quad(orth(&[1.0, 2.0, 0.5])),
            ],
        )
        .unwrap();
        let x = orth(&[0.3, 1.7, 4.0]);
        let back = w.inverse().unwrap().apply(&w.apply(&x).unwrap()).unwrap();
        assert!(back.max_abs_diff(&x) < 1e-14);

        let s = Algebra::sym(2);
        let t = AutomorphismWord::new(
            s,
            vec![Generator::Congruence {
                side: 2,
                t: vec![2.0, 1.0, -1.0, 3.0],
            }],
        )
        .unwrap();
        let y = Element::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let back = t.inverse().unwrap().apply(&t.apply(&y).unwrap()).unwrap();
        assert!(back.max_abs_diff(&y) < 1e-13);
    }

    #[test]
    fn concatenation_composes() {
        let o = Algebra::orthant(2);
        let a = AutomorphismWord::new(o, vec![Generator::Scalar(2.0)]).unwrap();
        let b = AutomorphismWord::new(o, vec![Generator::Permutation(vec![1, 0])]).unwrap();
        let ab = a.then(&b).unwrap();
        assert_eq!(ab.factors().len(), 2);
        let x = orth(&[1.0, 5.0]);
        assert_eq!(
            ab.apply(&x).unwrap(),
            b.apply(&a.apply(&x).unwrap()).unwrap()
        );
        assert!(a
            .then(&AutomorphismWord::identity(Algebra::orthant(3)))
            .is_err());
    }

    #[test]
    fn det_scales_by_a_constant() {
        let s = Algebra::sym(2);
        let t = vec![1.0, 2.0, 0.0, 3.0];
        let w = AutomorphismWord::new(
            s,
            vec![Generator::Congruence {
                side: 2,
                t: t.clone(),
            }],
        )
        .unwrap();
        let want = matrix_det(&t, 2).powi(2);
        for x in [
            s.identity(),
            Element::from_rows(&[vec![3.0, 1.0], vec![1.0, 1.0]]).unwrap(),
        ] {
            let ratio = det(&w.apply(&x).unwrap()).unwrap() / det(&x).unwrap();
            assert!((ratio - want).abs() < 1e-10 * want);
        }
    }

    #[test]
    fn power_map_examples() {
        assert_eq!(
            power_map(&orth(&[1.0, 16.0]), 0.5).unwrap().coords(),
            &[1.0, 4.0]
        );
        let x = orth(&[2.0, 5.0]);
        assert_eq!(power_map(&x, 1.0).unwrap(), x);
        assert_eq!(power_map(&x, -1.0).unwrap(), inversion(&x).unwrap());
        assert!(power_map(&orth(&[-1.0, 2.0]), 2.0).is_err());
    }

    #[test]
    fn identity_map_has_unit_ratio() {
        let r = measure_contraction(Algebra::sym(3), "identity", |x| Ok(x.clone()), 50, 3).unwrap();
        assert_eq!(r.pairs_used, 50);
        assert!((r.max_ratio - 1.0).abs() <= 1e-12);
        assert!((r.min_ratio - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn map_leaving_cone_is_reported() {
        let err = measure_contraction(Algebra::orthant(2), "negate", |x| Ok(x.scale(-1.0)), 5, 1)
            .unwrap_err();
        assert!(matches!(err, Error::MapLeftCone { sample: 0, .. }));
    }

    #[test]
    fn shared_frame_pair_halves() {
        let x = orth(&[1.0, 16.0]);
        let y = orth(&[1.0, 1.0]);
        let d0 = distance(&x, &y).unwrap().distance;
        let d1 = distance(&power_map(&x, 0.5).unwrap(), &power_map(&y, 0.5).unwrap())
            .unwrap()
            .distance;
        assert!((d1 / d0 - 0.5).abs() <= 1e-12);
    }
}
