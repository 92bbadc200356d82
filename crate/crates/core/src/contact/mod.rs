//! (k,μ) analysis of a contact metric structure: the operator `h`, the
//! Webster curvature, the (k,μ) fit, Boeckx and Pang invariants, CR checks and
//! D-homothetic deformations.

pub mod cr;
pub mod fit;
pub mod homothety;
pub mod operator;
pub mod pang;

use crate::bundle::{BundlePoint, ContactFrame, ContactStructure};
use crate::error::Result;
use crate::geometry::curvature::Riemann;
use crate::geometry::metric::MetricField;
use crate::linalg::Mat;
use crate::sampling::Sampler;

pub use cr::{check_cr_symmetry, cr_integrability_residual, SymmetryCheck};
pub use fit::{
    boeckx_from_curvature, boeckx_from_kmu, boeckx_invariant, kmu_fit, Boeckx, KmuFit, KmuSample,
};
pub use homothety::{d_homothety, deformed_kmu, DeformationCheck, DeformationSpec};
pub use operator::{
    h_norm, h_operator, h_spectrum, reeb_derivative_residual, webster_curvature, webster_riemann,
    HSpectrum,
};
pub use pang::{
    class_from_invariant, class_from_pattern, classify_pang, pang_expected_factor, pang_invariant,
    Definiteness, Distribution, PangClass, PangReport,
};

/// Everything the analysis needs at one bundle point.
#[derive(Clone, Debug)]
pub struct PointAnalysis {
    pub frame: ContactFrame,
    pub h: Mat<f64>,
    pub curvature: Riemann<f64>,
}

impl PointAnalysis {
    pub fn new<M: MetricField>(s: &ContactStructure<M>, t: &BundlePoint) -> Result<Self> {
        let frame = s.contact_frame(t)?;
        let h = operator::h_matrix(s, t, &frame)?;
        let curvature = webster_riemann(s, t)?;
        Ok(PointAnalysis {
            frame,
            h,
            curvature,
        })
    }

    /// `R(X,Y)ξ`.
    pub fn curvature_on_reeb(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.curvature.apply(x, y, &self.frame.xi)
    }
}

/// Draws `count` points with one random tangent pair `(X, Y)` each.
pub fn sample_pairs<M: MetricField>(
    s: &ContactStructure<M>,
    count: usize,
    sampler: &mut Sampler,
) -> Result<Vec<KmuSample>> {
    (0..count)
        .map(|_| {
            let point = s.chart().sample_point(sampler)?;
            let x = sampler.vector(s.dim());
            let y = sampler.vector(s.dim());
            Ok(KmuSample { point, x, y })
        })
        .collect()
}
