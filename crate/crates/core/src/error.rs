use crate::algebra::Algebra;
use crate::solver::SolveReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("algebra mismatch: {left} vs {right}")]
    AlgebraMismatch { left: Algebra, right: Algebra },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid coordinates for {algebra}: {reason}")]
    InvalidCoordinates { algebra: Algebra, reason: String },

    #[error("`{name}` is not in the open cone (least eigenvalue {min_eigenvalue:e})")]
    NotInCone { name: String, min_eigenvalue: f64 },

    #[error("`{name}` is not on the unit sphere (spectral norm {norm})")]
    NotNormalized { name: String, norm: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    EigensolverFailure { sweeps: usize },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("map `{label}` sent sample {sample} outside the cone")]
    MapLeftCone { label: String, sample: usize },

    #[error("matrix is singular (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "fixed-point iteration did not converge after {} iterations (residual {:e})",
        .report.iterations,
        .report.residual
    )]
    NonConvergence { report: Box<SolveReport> },
}

impl Error {
    pub(crate) fn not_in_cone(name: &str, min_eigenvalue: f64) -> Self {
        Error::NotInCone {
            name: name.to_owned(),
            min_eigenvalue,
        }
    }

    /// Re-labels a `NotInCone` error so that it names the caller's argument.
    pub(crate) fn renamed(self, name: &str) -> Self {
        match self {
            Error::NotInCone { min_eigenvalue, .. } => Error::not_in_cone(name, min_eigenvalue),
            other => other,
        }
    }
}
