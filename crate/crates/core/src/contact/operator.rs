//! The operator `h = ½𝓛_ξφ` and curvature of the Webster metric.

use serde::Serialize;

use crate::bundle::frame::PhiField;
use crate::bundle::{unit, BundlePoint, ContactFrame, ContactStructure};
use crate::error::Result;
use crate::geometry::curvature::{covariant_derivative, lie_bracket, riemann, Riemann};
use crate::geometry::field::ConstantField;
use crate::geometry::metric::MetricField;
use crate::linalg::{sym_eigen, EigenGroup, Mat, SymEigen, CLUSTER_TOL};

/// `‖h‖` at or below which the structure is declared Sasakian.
pub const SASAKIAN_TOL: f64 = 1e-5;

/// Matrix of `h` in the intrinsic basis at `t`.
pub fn h_operator<M: MetricField>(s: &ContactStructure<M>, t: &BundlePoint) -> Result<Mat<f64>> {
    let frame = s.contact_frame(t)?;
    h_matrix(s, t, &frame)
}

/// `2hW = [ξ, φW] − φ[ξ, W]` with `W` extended by constant base components.
pub(crate) fn h_matrix<M: MetricField>(
    s: &ContactStructure<M>,
    t: &BundlePoint,
    frame: &ContactFrame,
) -> Result<Mat<f64>> {
    let n = s.dim();
    let y = &frame.coordinates;
    let xi = s.reeb_field();
    let columns = (0..n)
        .map(|b| {
            let w = s.extension(t, &unit(n, b))?;
            let lie_phi_w = lie_bracket(&xi, &PhiField::new(s, &w), y)?;
            let lie_w = frame.phi.apply(&lie_bracket(&xi, &w, y)?);
            Ok(lie_phi_w
                .iter()
                .zip(&lie_w)
                .map(|(a, b)| 0.5 * (a - b))
                .collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(Mat::from_columns(&columns))
}

/// `√tr(h²)`, which for a self-adjoint `h` is the root sum of squared eigenvalues.
pub fn h_norm(h: &Mat<f64>) -> f64 {
    let sq = h.matmul(h);
    let trace: f64 = (0..sq.rows()).map(|i| sq[(i, i)]).sum();
    trace.max(0.0).sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct HSpectrum {
    pub groups: Vec<EigenGroup>,
    pub norm: f64,
    pub trace: f64,
    #[serde(skip)]
    pub eigen: SymEigen,
}

impl HSpectrum {
    pub fn from_matrix(h: &Mat<f64>, metric: &Mat<f64>) -> Result<Self> {
        let eigen = sym_eigen(h, metric, CLUSTER_TOL)?;
        Ok(HSpectrum {
            groups: eigen.groups.clone(),
            norm: h_norm(h),
            trace: (0..h.rows()).map(|i| h[(i, i)]).sum(),
            eigen,
        })
    }

    pub fn is_sasakian(&self) -> bool {
        self.norm <= SASAKIAN_TOL
    }

    /// `(value, multiplicity)` pairs in descending order.
    pub fn multiplicities(&self) -> Vec<(f64, usize)> {
        self.groups
            .iter()
            .map(|g| (g.value, g.multiplicity))
            .collect()
    }
}

pub fn h_spectrum<M: MetricField>(s: &ContactStructure<M>, t: &BundlePoint) -> Result<HSpectrum> {
    let frame = s.contact_frame(t)?;
    let h = h_matrix(s, t, &frame)?;
    HSpectrum::from_matrix(&h, &frame.metric)
}

/// Curvature tensor of the Webster metric pulled back to the chart.
pub fn webster_riemann<M: MetricField>(
    s: &ContactStructure<M>,
    t: &BundlePoint,
) -> Result<Riemann<f64>> {
    riemann(&s.webster_metric(), &s.coordinates(t))
}

/// `R(X,Y)ξ` for the Webster metric.
pub fn webster_curvature<M: MetricField>(
    s: &ContactStructure<M>,
    t: &BundlePoint,
    x: &[f64],
    y: &[f64],
) -> Result<Vec<f64>> {
    let xi = s.contact_frame(t)?.xi;
    Ok(webster_riemann(s, t)?.apply(x, y, &xi))
}

/// `‖∇_Xξ + φX + φhX‖` for the Levi-Civita connection of the Webster metric.
pub fn reeb_derivative_residual<M: MetricField>(
    s: &ContactStructure<M>,
    t: &BundlePoint,
    h: &Mat<f64>,
    x: &[f64],
) -> Result<f64> {
    let frame = s.contact_frame(t)?;
    let nabla = covariant_derivative(
        &s.webster_metric(),
        &ConstantField(x.to_vec()),
        &s.reeb_field(),
        &frame.coordinates,
    )?;
    let phi_x = frame.phi.apply(x);
    let phi_hx = frame.phi.apply(&h.apply(x));
    let defect: Vec<f64> = (0..x.len())
        .map(|i| nabla[i] + phi_x[i] + phi_hx[i])
        .collect();
    Ok(frame.metric.form(&defect, &defect).max(0.0).sqrt())
}
