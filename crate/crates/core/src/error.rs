use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("degenerate metric at the evaluation point")]
    DegenerateMetric,
    #[error("degenerate plane: |g(X,X)g(Y,Y) - g(X,Y)^2| = {0:e}")]
    DegeneratePlane(f64),
    #[error("point outside the chart domain")]
    OutsideDomain,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not self-adjoint: residual {0:e}")]
    NotSelfAdjoint(f64),
    #[error("weight matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("indeterminate fit: smallest singular value {0:e}")]
    IndeterminateFit(f64),
    #[error("invalid fit: k = {0} exceeds 1")]
    InvalidFit(f64),
    #[error("sasakian structure: {0}")]
    Sasakian(&'static str),
    #[error("not on the fiber constraint: |g(u,u) - level| = {0:e}")]
    NotOnHyperquadric(f64),
    #[error("vector is not orthogonal to u: g(X,u) = {0:e}")]
    NotOrthogonal(f64),
    #[error("vector not in the selected eigendistribution: projection residual {0:e}")]
    NotInDistribution(f64),
    #[error("classification mismatch: {0}")]
    ClassificationMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
