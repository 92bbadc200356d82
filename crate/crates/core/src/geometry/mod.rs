//! Chart-based pseudo-Riemannian tensor calculus.

pub mod curvature;
pub mod derivative;
pub mod field;
pub mod metric;

pub use curvature::{
    christoffel, christoffel_fd, covariant_derivative, exterior_d, exterior_d_matrix, lie_bracket,
    riemann, sectional, Christoffel, Riemann,
};
pub use derivative::DerivativeEngine;
pub use field::{ConstantField, OneForm, ScalarField, VectorField};
pub use metric::{ConstantMetric, Domain, MetricField, Signature};
