//! Least-squares (k,μ) fit and the Boeckx invariant.

use serde::{Serialize, Serializer};

use crate::bundle::{BundlePoint, ContactStructure};
use crate::contact::operator::{h_norm, SASAKIAN_TOL};
use crate::contact::PointAnalysis;
use crate::error::{GeometryError, Result};
use crate::geometry::metric::MetricField;
use crate::linalg::{dot, lstsq_fit, norm, Mat};
use crate::space_forms::SignatureKind;

/// Below this column norm the μ term carries no information.
pub const MU_COLUMN_TOL: f64 = 1e-6;
/// Slack on `k ≤ 1` and on the Sasakian value `k = 1`.
pub const K_BOUND_TOL: f64 = 1e-6;
pub const MIN_SAMPLES: usize = 8;

#[derive(Clone, Debug)]
pub struct KmuSample {
    pub point: BundlePoint,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KmuFit {
    pub k: f64,
    /// `None` when the structure is Sasakian.
    pub mu: Option<f64>,
    /// `√(1 − k)`.
    pub lambda: f64,
    /// Largest per-sample residual over `max(1, mean ‖R(X,Y)ξ‖)`.
    pub residual: f64,
    pub sasakian: bool,
    pub samples: usize,
}

pub fn kmu_fit<M: MetricField>(s: &ContactStructure<M>, samples: &[KmuSample]) -> Result<KmuFit> {
    let rows = samples
        .iter()
        .map(|sample| {
            let analysis = PointAnalysis::new(s, &sample.point)?;
            Ok((analysis, sample.x.clone(), sample.y.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    kmu_fit_analyses(&rows)
}

/// Fit from precomputed point data, one `(X, Y)` pair per entry.
pub fn kmu_fit_analyses(rows: &[(PointAnalysis, Vec<f64>, Vec<f64>)]) -> Result<KmuFit> {
    if rows.len() < MIN_SAMPLES {
        return Err(GeometryError::InvalidParameter(format!(
            "(k,μ) fit needs at least {MIN_SAMPLES} samples, got {}",
            rows.len()
        )));
    }
    let mut target = Vec::new();
    let mut k_col = Vec::new();
    let mut mu_col = Vec::new();
    let mut curvature_norms = Vec::new();
    let mut h_max: f64 = 0.0;
    for (a, x, y) in rows {
        let rxy = a.curvature_on_reeb(x, y);
        let ex = dot(&a.frame.eta, x);
        let ey = dot(&a.frame.eta, y);
        let hx = a.h.apply(x);
        let hy = a.h.apply(y);
        for i in 0..rxy.len() {
            target.push(rxy[i]);
            k_col.push(ey * x[i] - ex * y[i]);
            mu_col.push(ey * hx[i] - ex * hy[i]);
        }
        curvature_norms.push(norm(&rxy));
        h_max = h_max.max(h_norm(&a.h));
    }

    let sasakian = h_max <= SASAKIAN_TOL || norm(&mu_col) < MU_COLUMN_TOL;
    let design = if sasakian {
        Mat::from_columns(&[k_col])
    } else {
        Mat::from_columns(&[k_col, mu_col])
    };
    let solution = lstsq_fit(&design, &target)?;
    let k = solution.coefficients[0];
    let mu = if sasakian {
        None
    } else {
        Some(solution.coefficients[1])
    };

    let fitted = design.apply(&solution.coefficients);
    let dim = target.len() / rows.len();
    let worst = (0..rows.len())
        .map(|r| {
            let span = r * dim..(r + 1) * dim;
            let d: Vec<f64> = span.map(|i| fitted[i] - target[i]).collect();
            norm(&d)
        })
        .fold(0.0, f64::max);
    let mean = curvature_norms.iter().sum::<f64>() / curvature_norms.len() as f64;

    if k > 1.0 + K_BOUND_TOL {
        return Err(GeometryError::InvalidFit(k));
    }
    Ok(KmuFit {
        k,
        mu,
        lambda: (1.0 - k).max(0.0).sqrt(),
        residual: worst / mean.max(1.0),
        sasakian,
        samples: rows.len(),
    })
}

/// Boeckx invariant `(1 − μ/2)/√(1 − k)`, or the Sasakian marker.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boeckx {
    Value(f64),
    Sasakian,
}

impl Boeckx {
    pub fn value(self) -> Option<f64> {
        match self {
            Boeckx::Value(v) => Some(v),
            Boeckx::Sasakian => None,
        }
    }
}

impl Serialize for Boeckx {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Boeckx::Value(v) => serializer.serialize_f64(*v),
            Boeckx::Sasakian => serializer.serialize_str("sasakian"),
        }
    }
}

pub fn boeckx_from_kmu(k: f64, mu: f64) -> Result<Boeckx> {
    if k > 1.0 + K_BOUND_TOL {
        return Err(GeometryError::InvalidFit(k));
    }
    if k >= 1.0 - K_BOUND_TOL {
        return Ok(Boeckx::Sasakian);
    }
    Ok(Boeckx::Value((1.0 - mu / 2.0) / (1.0 - k).sqrt()))
}

pub fn boeckx_invariant(fit: &KmuFit) -> Result<Boeckx> {
    match fit.mu {
        Some(mu) if !fit.sasakian => boeckx_from_kmu(fit.k, mu),
        _ if fit.k > 1.0 + K_BOUND_TOL => Err(GeometryError::InvalidFit(fit.k)),
        _ => Ok(Boeckx::Sasakian),
    }
}

/// Closed-form invariant of the unit tangent sphere bundle (Riemannian) or
/// the tangent hyperquadric bundle (Lorentzian) of a space form.
pub fn boeckx_from_curvature(kind: SignatureKind, c: f64) -> Boeckx {
    match kind {
        SignatureKind::Riemannian if c != 1.0 => Boeckx::Value((1.0 + c) / (1.0 - c).abs()),
        SignatureKind::Lorentzian if c != -1.0 => Boeckx::Value((c - 1.0) / (c + 1.0).abs()),
        _ => Boeckx::Sasakian,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::sample_pairs;
    use crate::sampling::Sampler;
    use crate::space_forms::{model_metric, SpaceFormSpec};

    fn fit(kind: SignatureKind, c: f64, seed: u64) -> KmuFit {
        let g = model_metric(SpaceFormSpec::new(kind, c, 3).unwrap());
        let s = ContactStructure::new(g, kind.into());
        let mut sampler = Sampler::new(seed);
        let samples = sample_pairs(&s, 8, &mut sampler).unwrap();
        kmu_fit(&s, &samples).unwrap()
    }

    #[test]
    fn lorentzian_flat_base() {
        let f = fit(SignatureKind::Lorentzian, 0.0, 1);
        assert!(!f.sasakian);
        assert!(f.k.abs() <= 1e-3, "{f:?}");
        assert!((f.mu.unwrap() - 4.0).abs() <= 1e-2, "{f:?}");
        assert!(f.residual <= 5e-3);
    }

    #[test]
    fn lorentzian_minus_three() {
        let f = fit(SignatureKind::Lorentzian, -3.0, 2);
        assert!((f.k + 3.0).abs() <= 1e-2, "{f:?}");
        assert!((f.mu.unwrap() - 10.0).abs() <= 5e-2, "{f:?}");
    }

    #[test]
    fn sasakian_detection() {
        let f = fit(SignatureKind::Lorentzian, -1.0, 3);
        assert!(f.sasakian);
        assert!(f.mu.is_none());
        assert!((f.k - 1.0).abs() <= 1e-3);
        assert_eq!(boeckx_invariant(&f).unwrap(), Boeckx::Sasakian);
    }

    #[test]
    fn too_few_samples() {
        let g = model_metric(SpaceFormSpec::new(SignatureKind::Lorentzian, 0.0, 3).unwrap());
        let s = ContactStructure::new(g, SignatureKind::Lorentzian.into());
        let mut sampler = Sampler::new(0);
        let samples = sample_pairs(&s, 3, &mut sampler).unwrap();
        assert!(matches!(
            kmu_fit(&s, &samples),
            Err(GeometryError::InvalidParameter(_))
        ));
    }

    #[test]
    fn invariant_values() {
        assert_eq!(boeckx_from_kmu(0.0, 4.0).unwrap(), Boeckx::Value(-1.0));
        assert_eq!(boeckx_from_kmu(-3.0, 10.0).unwrap(), Boeckx::Value(-2.0));
        assert_eq!(boeckx_from_kmu(1.0, 3.0).unwrap(), Boeckx::Sasakian);
        assert!(matches!(
            boeckx_from_kmu(1.5, 0.0),
            Err(GeometryError::InvalidFit(_))
        ));
        assert_eq!(
            boeckx_from_curvature(SignatureKind::Riemannian, 2.0),
            Boeckx::Value(3.0)
        );
        assert_eq!(
            boeckx_from_curvature(SignatureKind::Lorentzian, -3.0),
            Boeckx::Value(-2.0)
        );
        assert_eq!(
            boeckx_from_curvature(SignatureKind::Lorentzian, -1.0),
            Boeckx::Sasakian
        );
        assert_eq!(
            boeckx_from_curvature(SignatureKind::Riemannian, 1.0),
            Boeckx::Sasakian
        );
    }
}
