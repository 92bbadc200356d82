//! Constant-curvature model metrics in a single conformally flat chart, plus
//! a curvature-breaking perturbation used for negative tests.

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::geometry::curvature::sectional;
use crate::geometry::metric::{Domain, MetricField, Signature};
use crate::linalg::Mat;
use crate::sampling::Sampler;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignatureKind {
    Riemannian,
    Lorentzian,
}

impl SignatureKind {
    pub fn name(self) -> &'static str {
        match self {
            SignatureKind::Riemannian => "riemannian",
            SignatureKind::Lorentzian => "lorentzian",
        }
    }
}

impl std::str::FromStr for SignatureKind {
    type Err = GeometryError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "riemannian" => Ok(SignatureKind::Riemannian),
            "lorentzian" => Ok(SignatureKind::Lorentzian),
            other => Err(GeometryError::InvalidParameter(format!(
                "unknown signature kind `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpaceFormSpec {
    pub kind: SignatureKind,
    pub curvature: f64,
    pub base_dim: usize,
}

impl SpaceFormSpec {
    pub fn new(kind: SignatureKind, curvature: f64, base_dim: usize) -> Result<Self> {
        if base_dim < 2 {
            return Err(GeometryError::InvalidParameter(format!(
                "base dimension must be at least 2, got {base_dim}"
            )));
        }
        if !curvature.is_finite() {
            return Err(GeometryError::InvalidParameter(
                "curvature must be finite".into(),
            ));
        }
        Ok(SpaceFormSpec {
            kind,
            curvature,
            base_dim,
        })
    }

    pub fn signature(&self) -> Signature {
        match self.kind {
            SignatureKind::Riemannian => Signature::riemannian(self.base_dim),
            SignatureKind::Lorentzian => Signature::lorentzian(self.base_dim),
        }
    }

    /// Half-width of the largest cube (capped at 1) on which
    /// `1 + (c/4)⟨x,x⟩ > ½`.
    fn domain_half_width(&self) -> f64 {
        let c = self.curvature;
        let m = self.base_dim as f64;
        // range of ⟨x,x⟩ on [-r, r]^m is [lo·r², hi·r²]
        let (lo, hi) = match self.kind {
            SignatureKind::Riemannian => (0.0, m),
            SignatureKind::Lorentzian => (-1.0, m - 1.0),
        };
        let worst = if c > 0.0 { lo } else { hi };
        let bound = if c * worst < 0.0 {
            (2.0 / (c * worst).abs()).sqrt() * 0.99
        } else {
            f64::INFINITY
        };
        bound.min(1.0)
    }
}

/// Flat inner product of the given signature.
fn flat_product<S: Scalar>(sig: &Signature, x: &[S]) -> S {
    let mut acc = S::zero();
    for (s, &v) in sig.0.iter().zip(x) {
        if *s < 0 {
            acc -= v * v;
        } else {
            acc += v * v;
        }
    }
    acc
}

/// `g = ⟨·,·⟩_ε / (1 + (c/4)⟨x,x⟩_ε)²`.
#[derive(Clone, Debug)]
pub struct ModelMetric {
    spec: SpaceFormSpec,
    signature: Signature,
    domain: Domain,
}

impl ModelMetric {
    pub fn spec(&self) -> &SpaceFormSpec {
        &self.spec
    }

    fn factor<S: Scalar>(&self, x: &[S]) -> S {
        let denom = S::one() + flat_product(&self.signature, x).scale(self.spec.curvature / 4.0);
        S::one() / (denom * denom)
    }
}

impl MetricField for ModelMetric {
    fn dim(&self) -> usize {
        self.spec.base_dim
    }
    fn signature(&self) -> Signature {
        self.signature.clone()
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn components<S: Scalar>(&self, x: &[S]) -> Result<Mat<S>> {
        let f = self.factor(x);
        let n = self.spec.base_dim;
        Ok(Mat::from_fn(n, n, |i, j| {
            if i != j {
                S::zero()
            } else if self.signature.0[i] < 0 {
                -f
            } else {
                f
            }
        }))
    }
}

pub fn model_metric(spec: SpaceFormSpec) -> ModelMetric {
    ModelMetric {
        signature: spec.signature(),
        domain: Domain::cube(spec.base_dim, spec.domain_half_width()),
        spec,
    }
}

/// Model metric times `(1 + amplitude·(x¹)²·x²)²`.
#[derive(Clone, Debug)]
pub struct PerturbedMetric {
    model: ModelMetric,
    amplitude: f64,
}

impl PerturbedMetric {
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
    pub fn spec(&self) -> &SpaceFormSpec {
        &self.model.spec
    }
}

impl MetricField for PerturbedMetric {
    fn dim(&self) -> usize {
        self.model.dim()
    }
    fn signature(&self) -> Signature {
        self.model.signature()
    }
    fn domain(&self) -> &Domain {
        self.model.domain()
    }
    fn components<S: Scalar>(&self, x: &[S]) -> Result<Mat<S>> {
        let bump = S::one() + (x[0] * x[0] * x[1]).scale(self.amplitude);
        let w = bump * bump;
        Ok(self.model.components(x)?.map(|v| v * w))
    }
}

pub fn perturbed_metric(spec: SpaceFormSpec, amplitude: f64) -> Result<PerturbedMetric> {
    if !(amplitude > 0.0 && amplitude <= 0.1) {
        return Err(GeometryError::InvalidParameter(format!(
            "perturbation amplitude must lie in (0, 0.1], got {amplitude}"
        )));
    }
    Ok(PerturbedMetric {
        model: model_metric(spec),
        amplitude,
    })
}

/// Maximum of `|K(σ) − c|` over seeded random points and planes; degenerate
/// planes are resampled.
pub fn curvature_check<M: MetricField>(g: &M, c: f64, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(GeometryError::InvalidParameter(
            "at least one sample is required".into(),
        ));
    }
    let n = g.dim();
    let mut sampler = Sampler::new(seed);
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    let mut attempts = 0;
    while taken < samples {
        attempts += 1;
        if attempts > 1000 * samples {
            return Err(GeometryError::DegeneratePlane(0.0));
        }
        let x = sampler.base_point(n);
        let u = sampler.vector(n);
        let v = sampler.vector(n);
        match sectional(g, &x, &u, &v) {
            Ok(k) => {
                worst = worst.max((k - c).abs());
                taken += 1;
            }
            Err(GeometryError::DegeneratePlane(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(worst)
}
