//! D-homothetic deformations and the invariance of the Boeckx invariant.

use serde::Serialize;

use crate::bundle::frame::FrameResiduals;
use crate::bundle::ContactStructure;
use crate::contact::fit::{boeckx_invariant, kmu_fit, Boeckx, KmuFit, KmuSample};
use crate::error::{GeometryError, Result};
use crate::geometry::metric::MetricField;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeformationSpec {
    pub a: f64,
}

impl DeformationSpec {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(GeometryError::InvalidParameter(format!(
                "D-homothety parameter must be positive, got {a}"
            )));
        }
        Ok(DeformationSpec { a })
    }
}

/// `(k′, μ′) = ((k + a² − 1)/a², (μ + 2a − 2)/a)`.
pub fn deformed_kmu(k: f64, mu: f64, a: f64) -> (f64, f64) {
    ((k + a * a - 1.0) / (a * a), (mu + 2.0 * a - 2.0) / a)
}

#[derive(Clone, Debug, Serialize)]
pub struct DeformationCheck {
    pub a: f64,
    /// Worst contact-metric residuals of the deformed structure over the samples.
    pub frame_residuals: FrameResiduals,
    pub fit: KmuFit,
    pub expected_k: f64,
    pub expected_mu: f64,
    pub invariant: Boeckx,
    pub original_invariant: Boeckx,
    /// `|I′ − I|`
    pub invariant_shift: f64,
}

/// Deforms `s` by `spec.a`, checks the axioms and refits (k,μ) at the same
/// samples.
pub fn d_homothety<M: MetricField + Clone>(
    s: &ContactStructure<M>,
    fit: &KmuFit,
    spec: DeformationSpec,
    samples: &[KmuSample],
) -> Result<DeformationCheck> {
    let mu = match fit.mu {
        Some(mu) if !fit.sasakian => mu,
        _ => {
            return Err(GeometryError::Sasakian(
                "D-homothety check needs a non-Sasakian fit",
            ))
        }
    };
    let deformed = s.deformed(spec.a)?;
    let mut frame_residuals = FrameResiduals::identity();
    for sample in samples {
        let r = deformed.contact_frame(&sample.point)?.residuals();
        frame_residuals = frame_residuals.worst_of(&r);
    }
    let refit = kmu_fit(&deformed, samples)?;
    let (expected_k, expected_mu) = deformed_kmu(fit.k, mu, spec.a);
    let original_invariant = boeckx_invariant(fit)?;
    let invariant = boeckx_invariant(&refit)?;
    let invariant_shift = match (invariant, original_invariant) {
        (Boeckx::Value(a), Boeckx::Value(b)) => (a - b).abs(),
        _ => f64::INFINITY,
    };
    Ok(DeformationCheck {
        a: spec.a,
        frame_residuals,
        fit: refit,
        expected_k,
        expected_mu,
        invariant,
        original_invariant,
        invariant_shift,
    })
}
