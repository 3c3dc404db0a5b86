//! Hilbert's projective metric on symmetric cones, and a contraction-based
//! solver for `g(x) = x^p` with `g` a cone automorphism and `|p| > 1`.
//!
//! Three Euclidean Jordan algebras are supported: the orthant `R^n` with the
//! componentwise product, real symmetric matrices, and the spin factors
//! (second-order cones). All cone geometry is expressed through the spectral
//! decomposition `x = sum_j lambda_j c_j` of each element.

// `!(a > b)` is used on purpose so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod instance;
pub mod jacobi;
pub mod metric;
pub mod sampling;
pub mod solver;
pub mod spectral;
pub mod suites;
pub mod transforms;

pub use algebra::{Algebra, AlgebraKind, Element};
pub use error::{Error, Result};
pub use metric::{distance, lambda_extremes, MetricReport};
pub use solver::{solve, solve_bushell, solve_corollary, SolveConfig, SolveReport};
pub use spectral::{
    det, in_cone, inverse, power, spectral_decompose, spectral_norm, tr, SpectralDecomposition,
};
pub use transforms::{AutomorphismWord, ContractionReport, Generator};
