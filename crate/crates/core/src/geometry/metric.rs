//! Metric fields on a single coordinate chart.

use nalgebra::SymmetricEigen;
use rand::Rng;
use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::linalg::Mat;
use crate::sampling::Sampler;
use crate::scalar::Scalar;

/// Axis-aligned box of validity of a chart.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Domain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Domain {
    pub fn cube(dim: usize, half_width: f64) -> Self {
        Domain {
            lower: vec![-half_width; dim],
            upper: vec![half_width; dim],
        }
    }

    pub fn product(&self, other: &Domain) -> Domain {
        Domain {
            lower: self.lower.iter().chain(&other.lower).copied().collect(),
            upper: self.upper.iter().chain(&other.upper).copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }
}

/// Declared signature: one entry `±1` per coordinate direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Signature(pub Vec<i8>);

impl Signature {
    pub fn riemannian(dim: usize) -> Self {
        Signature(vec![1; dim])
    }

    /// `(−, +, …, +)`.
    pub fn lorentzian(dim: usize) -> Self {
        let mut s = vec![1; dim];
        s[0] = -1;
        Signature(s)
    }

    pub fn negatives(&self) -> usize {
        self.0.iter().filter(|&&s| s < 0).count()
    }

    pub fn positives(&self) -> usize {
        self.0.iter().filter(|&&s| s > 0).count()
    }
}

/// A smooth symmetric metric on a coordinate chart.
///
/// Components are evaluated generically so that derivatives of any order can
/// be taken with dual numbers.
pub trait MetricField {
    fn dim(&self) -> usize;
    fn signature(&self) -> Signature;
    fn domain(&self) -> &Domain;
    fn components<S: Scalar>(&self, x: &[S]) -> Result<Mat<S>>;
}

impl<M: MetricField> MetricField for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn signature(&self) -> Signature {
        (**self).signature()
    }
    fn domain(&self) -> &Domain {
        (**self).domain()
    }
    fn components<S: Scalar>(&self, x: &[S]) -> Result<Mat<S>> {
        (**self).components(x)
    }
}

pub(crate) fn check_point<M: MetricField, S: Scalar>(g: &M, x: &[S]) -> Result<()> {
    if x.len() != g.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: g.dim(),
            found: x.len(),
        });
    }
    let re: Vec<f64> = x.iter().map(Scalar::re).collect();
    if !g.domain().contains(&re) {
        return Err(GeometryError::OutsideDomain);
    }
    Ok(())
}

/// A constant (flat) metric, `diag(signature)` unless given explicitly.
#[derive(Clone, Debug)]
pub struct ConstantMetric {
    matrix: Mat<f64>,
    signature: Signature,
    domain: Domain,
}

impl ConstantMetric {
    pub fn flat(signature: Signature) -> Self {
        let n = signature.0.len();
        let matrix = Mat::from_fn(n, n, |i, j| {
            if i == j {
                f64::from(signature.0[i])
            } else {
                0.0
            }
        });
        ConstantMetric {
            matrix,
            domain: Domain::cube(n, 1e3),
            signature,
        }
    }

    pub fn minkowski(dim: usize) -> Self {
        Self::flat(Signature::lorentzian(dim))
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::flat(Signature::riemannian(dim))
    }

    pub fn from_matrix(matrix: Mat<f64>, signature: Signature) -> Self {
        let n = matrix.rows();
        ConstantMetric {
            matrix,
            signature,
            domain: Domain::cube(n, 1e3),
        }
    }
}

impl MetricField for ConstantMetric {
    fn dim(&self) -> usize {
        self.matrix.rows()
    }
    fn signature(&self) -> Signature {
        self.signature.clone()
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn components<S: Scalar>(&self, _x: &[S]) -> Result<Mat<S>> {
        Ok(self.matrix.map(S::cst))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricValidation {
    pub max_asymmetry: f64,
    pub max_condition_number: f64,
    pub signature_matches: bool,
}

impl MetricValidation {
    pub fn passes(&self) -> bool {
        self.max_asymmetry <= 1e-14 && self.max_condition_number < 1e8 && self.signature_matches
    }
}

/// Samples the metric over its domain (restricted to `[-half_width, half_width]`)
/// and reports the symmetry, conditioning and signature invariants.
pub fn validate_metric<M: MetricField>(
    g: &M,
    samples: usize,
    half_width: f64,
    sampler: &mut Sampler,
) -> Result<MetricValidation> {
    let n = g.dim();
    let declared = g.signature();
    let mut out = MetricValidation {
        max_asymmetry: 0.0,
        max_condition_number: 0.0,
        signature_matches: true,
    };
    for _ in 0..samples {
        let x: Vec<f64> = (0..n)
            .map(|i| {
                let lo = g.domain().lower[i].max(-half_width);
                let hi = g.domain().upper[i].min(half_width);
                sampler.rng().random_range(lo..=hi)
            })
            .collect();
        let m = g.components::<f64>(&x)?;
        out.max_asymmetry = out.max_asymmetry.max(m.sub(&m.transpose()).max_abs());
        let eig = SymmetricEigen::new(m.to_nalgebra());
        let abs: Vec<f64> = eig.eigenvalues.iter().map(|v| v.abs()).collect();
        let min = abs.iter().copied().fold(f64::INFINITY, f64::min);
        let max = abs.iter().copied().fold(0.0, f64::max);
        let cond = if min > 0.0 { max / min } else { f64::INFINITY };
        out.max_condition_number = out.max_condition_number.max(cond);
        let negatives = eig.eigenvalues.iter().filter(|v| **v < 0.0).count();
        if negatives != declared.negatives() || n - negatives != declared.positives() {
            out.signature_matches = false;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minkowski_validates() {
        let g = ConstantMetric::minkowski(3);
        let mut sampler = Sampler::new(1);
        let report = validate_metric(&g, 10, 0.2, &mut sampler).unwrap();
        assert!(report.passes());
        assert_eq!(g.signature().negatives(), 1);
    }

    #[test]
    fn wrong_signature_is_flagged() {
        let g = ConstantMetric::from_matrix(Mat::identity(3), Signature::lorentzian(3));
        let mut sampler = Sampler::new(1);
        let report = validate_metric(&g, 3, 0.2, &mut sampler).unwrap();
        assert!(!report.signature_matches);
    }

    #[test]
    fn domain_membership() {
        let d = Domain::cube(2, 0.5);
        assert!(d.contains(&[0.1, -0.5]));
        assert!(!d.contains(&[0.6, 0.0]));
        assert!(!d.contains(&[0.0]));
    }
}
