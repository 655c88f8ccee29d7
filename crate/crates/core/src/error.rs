use thiserror::Error;

use crate::curveexpr::ParseError;
use crate::jets::JetError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("evaluation domain error: {0}")]
    Eval(#[from] JetError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// The tangent hyperplane is isotropic (or numerically indistinguishable
    /// from it) at `point`.
    #[error("degenerate metric at {point:?} (det g = {det_g:e})")]
    DegenerateMetric { point: Vec<f64>, det_g: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("point {point:?} lies outside the parameter domain")]
    OutsideDomain { point: Vec<f64> },
    #[error("motion matrix is not orthogonal (|A^T A - I| = {0:e})")]
    NonOrthogonal(f64),
    #[error("range is only defined for points on a common isotropic line (distance {0:e})")]
    NotIsotropicPair(f64),
    #[error("direction vector is zero or null for the metric")]
    ZeroDirection,
    #[error("curvature is only defined for hypersurfaces ({params} parameters in ambient dimension {ambient})")]
    NotHypersurface { params: usize, ambient: usize },
    #[error("regularity violated: {0}")]
    Regularity(String),
    #[error("branch {branch}: {message}")]
    Constraint { branch: String, message: String },
    #[error("unknown theorem branch {0:?}")]
    UnknownBranch(String),
    #[error("unknown residual {0:?}")]
    UnknownResidual(String),
    #[error("residual {residual} does not apply to {family}")]
    KindMismatch { residual: String, family: String },
    #[error("ODE right-hand side failed at t = {t}: {message}")]
    Ode { t: f64, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
