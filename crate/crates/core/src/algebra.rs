//! The three simple Euclidean Jordan algebra families and their elements.
//!
//! | kind        | space                 | product                        | rank |
//! |-------------|-----------------------|--------------------------------|------|
//! | `Orthant`   | `R^n`                 | componentwise                  | `n`  |
//! | `SymMatrix` | symmetric `r x r`     | `(xy + yx) / 2`                | `r`  |
//! | `SpinFactor`| `R x R^(n-1)`         | `(<x,y>, x0 y' + y0 x')`       | `2`  |
//!
//! The inner product everywhere is the trace form `(x|y) = tr(x o y)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for accepting a nearly symmetric matrix.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Orthant,
    #[serde(rename = "sym")]
    SymMatrix,
    #[serde(rename = "spin")]
    SpinFactor,
}

/// Which algebra, and its size parameter.
///
/// `param` is the dimension for `Orthant`, the matrix side for `SymMatrix`
/// and the ambient dimension (at least 2) for `SpinFactor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Algebra {
    pub kind: AlgebraKind,
    pub param: usize,
}

impl Algebra {
    pub fn new(kind: AlgebraKind, param: usize) -> Result<Self> {
        let min = match kind {
            AlgebraKind::SpinFactor => 2,
            _ => 1,
        };
        if param < min {
            return Err(Error::InvalidCoordinates {
                algebra: Algebra { kind, param },
                reason: format!("size parameter must be at least {min}"),
            });
        }
        Ok(Algebra { kind, param })
    }

    pub fn orthant(n: usize) -> Self {
        Self::new(AlgebraKind::Orthant, n).expect("orthant dimension must be positive")
    }

    pub fn sym(r: usize) -> Self {
        Self::new(AlgebraKind::SymMatrix, r).expect("matrix side must be positive")
    }

    pub fn spin(n: usize) -> Self {
        Self::new(AlgebraKind::SpinFactor, n).expect("spin factor needs n >= 2")
    }

    /// Dimension of V as a real vector space.
    pub fn dim(&self) -> usize {
        match self.kind {
            AlgebraKind::SymMatrix => self.param * (self.param + 1) / 2,
            _ => self.param,
        }
    }

    /// Number of stored coordinates (full dense matrix for `SymMatrix`).
    pub fn coord_len(&self) -> usize {
        match self.kind {
            AlgebraKind::SymMatrix => self.param * self.param,
            _ => self.param,
        }
    }

    pub fn rank(&self) -> usize {
        match self.kind {
            AlgebraKind::SpinFactor => 2,
            _ => self.param,
        }
    }

    pub fn identity(&self) -> Element {
        let mut coords = vec![0.0; self.coord_len()];
        match self.kind {
            AlgebraKind::Orthant => coords.fill(1.0),
            AlgebraKind::SymMatrix => {
                for i in 0..self.param {
                    coords[i * self.param + i] = 1.0;
                }
            }
            AlgebraKind::SpinFactor => coords[0] = 1.0,
        }
        Element {
            algebra: *self,
            coords,
        }
    }

    pub fn zero(&self) -> Element {
        Element {
            algebra: *self,
            coords: vec![0.0; self.coord_len()],
        }
    }

    pub(crate) fn check_same(&self, other: &Algebra) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                left: *self,
                right: *other,
            })
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            AlgebraKind::Orthant => "orthant",
            AlgebraKind::SymMatrix => "sym",
            AlgebraKind::SpinFactor => "spin",
        };
        write!(f, "{kind}:{}", self.param)
    }
}

impl std::str::FromStr for Algebra {
    type Err = Error;

    /// Parses `kind:param`, e.g. `sym:3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse(format!("cannot parse algebra `{s}`: {reason}"));
        let (kind, param) = s
            .split_once(':')
            .ok_or_else(|| bad("expected kind:param"))?;
        let kind = match kind {
            "orthant" => AlgebraKind::Orthant,
            "sym" => AlgebraKind::SymMatrix,
            "spin" => AlgebraKind::SpinFactor,
            _ => return Err(bad("kind must be orthant, sym or spin")),
        };
        let param = param
            .parse::<usize>()
            .map_err(|_| bad("param must be a positive integer"))?;
        Algebra::new(kind, param).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// A point of V in canonical coordinates. Not necessarily in the cone.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    algebra: Algebra,
    coords: Vec<f64>,
}

impl Element {
    /// Validates and stores coordinates. `SymMatrix` input is row-major and is
    /// stored as `(A + A^T) / 2` once it passes the symmetry check.
    pub fn new(algebra: Algebra, coords: Vec<f64>) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidCoordinates { algebra, reason };
        if coords.len() != algebra.coord_len() {
            return Err(invalid(format!(
                "expected {} coordinates, got {}",
                algebra.coord_len(),
                coords.len()
            )));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(invalid(format!("coordinate {i} is not finite")));
        }
        let mut coords = coords;
        if algebra.kind == AlgebraKind::SymMatrix {
            let r = algebra.param;
            for i in 0..r {
                for j in (i + 1)..r {
                    let (a, b) = (coords[i * r + j], coords[j * r + i]);
                    if (a - b).abs() > SYMMETRY_TOLERANCE * (1.0 + a.abs()) {
                        return Err(invalid(format!(
                            "matrix is not symmetric at ({i}, {j}): {a} vs {b}"
                        )));
                    }
                    let mid = 0.5 * (a + b);
                    coords[i * r + j] = mid;
                    coords[j * r + i] = mid;
                }
            }
        }
        Ok(Element { algebra, coords })
    }

    /// Builds a `SymMatrix` element from nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let algebra = Algebra::new(AlgebraKind::SymMatrix, r)?;
        if let Some(bad) = rows.iter().position(|row| row.len() != r) {
            return Err(Error::InvalidCoordinates {
                algebra,
                reason: format!("row {bad} has length {}, expected {r}", rows[bad].len()),
            });
        }
        Element::new(algebra, rows.concat())
    }

    /// Diagonal element in `algebra` (orthant coordinates, or a diagonal matrix).
    pub fn diagonal(algebra: Algebra, diag: &[f64]) -> Result<Self> {
        match algebra.kind {
            AlgebraKind::Orthant => Element::new(algebra, diag.to_vec()),
            AlgebraKind::SymMatrix => {
                let r = algebra.param;
                if diag.len() != r {
                    return Err(Error::InvalidCoordinates {
                        algebra,
                        reason: format!("expected {r} diagonal entries, got {}", diag.len()),
                    });
                }
                let mut coords = vec![0.0; r * r];
                for (i, d) in diag.iter().enumerate() {
                    coords[i * r + i] = *d;
                }
                Element::new(algebra, coords)
            }
            AlgebraKind::SpinFactor => Err(Error::InvalidCoordinates {
                algebra,
                reason: "spin factor elements have no diagonal form".into(),
            }),
        }
    }

    pub(crate) fn from_raw(algebra: Algebra, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len(), algebra.coord_len());
        Element { algebra, coords }
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Row-major rows; only meaningful for `SymMatrix`.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        let r = match self.algebra.kind {
            AlgebraKind::SymMatrix => self.algebra.param,
            _ => self.coords.len(),
        };
        self.coords.chunks(r).map(<[f64]>::to_vec).collect()
    }

    pub fn scale(&self, alpha: f64) -> Element {
        self.map_coords(|c| alpha * c)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.lin_comb(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.lin_comb(1.0, other, -1.0)
    }

    /// `alpha * self + beta * other`.
    pub fn lin_comb(&self, alpha: f64, other: &Element, beta: f64) -> Result<Element> {
        self.algebra.check_same(&other.algebra)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(Element::from_raw(self.algebra, coords))
    }

    pub(crate) fn map_coords(&self, f: impl Fn(f64) -> f64) -> Element {
        Element::from_raw(self.algebra, self.coords.iter().map(|&c| f(c)).collect())
    }

    /// Jordan product `x o y`.
    pub fn product(&self, other: &Element) -> Result<Element> {
        self.algebra.check_same(&other.algebra)?;
        let (x, y) = (&self.coords, &other.coords);
        let coords = match self.algebra.kind {
            AlgebraKind::Orthant => x.iter().zip(y).map(|(a, b)| a * b).collect(),
            AlgebraKind::SymMatrix => {
                let r = self.algebra.param;
                let xy = matmul(x, y, r);
                let mut out = vec![0.0; r * r];
                for i in 0..r {
                    for j in i..r {
                        let v = 0.5 * (xy[i * r + j] + xy[j * r + i]);
                        out[i * r + j] = v;
                        out[j * r + i] = v;
                    }
                }
                out
            }
            AlgebraKind::SpinFactor => {
                let mut out = Vec::with_capacity(x.len());
                out.push(dot(x, y));
                out.extend(x[1..].iter().zip(&y[1..]).map(|(a, b)| x[0] * b + y[0] * a));
                out
            }
        };
        Ok(Element::from_raw(self.algebra, coords))
    }

    /// Quadratic representation `P(self) y = 2 x o (x o y) - (x o x) o y`.
    ///
    /// For symmetric matrices this is evaluated as `x y x`.
    pub fn quad(&self, y: &Element) -> Result<Element> {
        self.algebra.check_same(&y.algebra)?;
        match self.algebra.kind {
            AlgebraKind::Orthant => Ok(Element::from_raw(
                self.algebra,
                self.coords
                    .iter()
                    .zip(&y.coords)
                    .map(|(a, b)| a * a * b)
                    .collect(),
            )),
            AlgebraKind::SymMatrix => {
                let r = self.algebra.param;
                let xyx = matmul(&matmul(&self.coords, &y.coords, r), &self.coords, r);
                Ok(Element::from_raw(self.algebra, symmetrized(&xyx, r)))
            }
            AlgebraKind::SpinFactor => {
                let xy = self.product(y)?;
                let x2 = self.product(self)?;
                self.product(&xy)?.lin_comb(2.0, &x2.product(y)?, -1.0)
            }
        }
    }

    /// Trace form `(x|y) = tr(x o y)`.
    pub fn inner(&self, other: &Element) -> Result<f64> {
        self.algebra.check_same(&other.algebra)?;
        let d = dot(&self.coords, &other.coords);
        Ok(match self.algebra.kind {
            AlgebraKind::SpinFactor => 2.0 * d,
            _ => d,
        })
    }

    /// Sum of the eigenvalues, read directly off the coordinates.
    pub fn trace(&self) -> f64 {
        match self.algebra.kind {
            AlgebraKind::Orthant => self.coords.iter().sum(),
            AlgebraKind::SymMatrix => {
                let r = self.algebra.param;
                (0..r).map(|i| self.coords[i * r + i]).sum()
            }
            AlgebraKind::SpinFactor => 2.0 * self.coords[0],
        }
    }

    /// Largest absolute coordinate difference; a cheap closeness measure for tests.
    pub fn max_abs_diff(&self, other: &Element) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row-major `n x n` product.
pub(crate) fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

pub(crate) fn transpose(a: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = a[i * n + j];
        }
    }
    out
}

pub(crate) fn symmetrized(a: &[f64], n: usize) -> Vec<f64> {
    let mut out = a.to_vec();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (a[i * n + j] + a[j * n + i]);
            out[i * n + j] = v;
            out[j * n + i] = v;
        }
    }
    out
}
