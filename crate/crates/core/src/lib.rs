//! Numerical construction and verification of the standard contact metric
//! structure on tangent sphere bundles of Riemannian space forms and tangent
//! hyperquadric bundles of Lorentzian space forms.

#![allow(clippy::needless_range_loop)]

pub mod bundle;
pub mod contact;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod sampling;
pub mod scalar;
pub mod space_forms;

pub use error::{GeometryError, Result};
