//! Standard contact metric structure `(φ, ξ, η, g_η)` on `T_ε′M`, optionally
//! D-homothetically deformed by a factor `a`.
//!
//! With `η₀ = ½β`, `ξ₀ = 2ε′ζ` and `φ` acting on the contact distribution as
//! `X^H ↦ X^V`, `X^V ↦ −X^H` (for `X ⊥ u`), the Webster metric is
//! `g₀ = ¼G̃ + (1 − ε′)η₀⊗η₀` on tangent vectors. The deformed structure is
//! `η = aη₀`, `ξ = ξ₀/a`, `φ` unchanged and `g = a g₀ + a(a − 1)η₀⊗η₀`.

use serde::Serialize;

use crate::bundle::chart::BundleChart;
use crate::bundle::{unit, BaseJet, BundlePoint, FiberLevel};
use crate::error::{GeometryError, Result};
use crate::geometry::curvature::exterior_d_matrix;
use crate::geometry::field::{OneForm, VectorField};
use crate::geometry::metric::{Domain, MetricField, Signature};
use crate::linalg::{dot, Mat};
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug)]
pub struct ContactStructure<M> {
    chart: BundleChart<M>,
    homothety: f64,
}

impl<M: MetricField> ContactStructure<M> {
    pub fn new(base: M, level: FiberLevel) -> Self {
        ContactStructure {
            chart: BundleChart::new(base, level),
            homothety: 1.0,
        }
    }

    pub fn chart(&self) -> &BundleChart<M> {
        &self.chart
    }

    pub fn base(&self) -> &M {
        self.chart.base()
    }

    pub fn homothety(&self) -> f64 {
        self.homothety
    }

    pub fn epsilon(&self) -> f64 {
        self.chart.epsilon()
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// The D-homothetic deformation by `a > 0` of this structure.
    pub fn deformed(&self, a: f64) -> Result<ContactStructure<M>>
    where
        M: Clone,
    {
        if !(a > 0.0 && a.is_finite()) {
            return Err(GeometryError::InvalidParameter(format!(
                "D-homothety parameter must be positive, got {a}"
            )));
        }
        Ok(ContactStructure {
            chart: self.chart.clone(),
            homothety: self.homothety * a,
        })
    }

    pub fn local<S: Scalar>(&self, y: &[S]) -> Result<Local<'_, M, S>> {
        Ok(Local {
            jet: self.chart.embed(y)?,
            structure: self,
        })
    }

    pub fn coordinates(&self, t: &BundlePoint) -> Vec<f64> {
        self.chart.coordinates(t)
    }

    pub fn contact_frame(&self, t: &BundlePoint) -> Result<ContactFrame> {
        let gm = self.base().components::<f64>(&t.p)?;
        let defect = (gm.form(&t.u, &t.u) - self.epsilon()).abs();
        if defect > crate::bundle::CONSTRAINT_TOL || t.level != self.chart.level() {
            return Err(GeometryError::NotOnHyperquadric(defect));
        }
        let y = self.coordinates(t);
        let local = self.local::<f64>(&y)?;
        Ok(ContactFrame {
            point: t.clone(),
            coordinates: y.clone(),
            eta: local.eta(),
            xi: local.reeb(),
            phi: local.phi(),
            metric: local.webster(),
            d_eta: exterior_d_matrix(&EtaForm(self), &y)?,
        })
    }

    /// Vector field on the chart extending the tangent vector `c` at `t` as
    /// `aξ + X^O + Y^T` with constant base components.
    pub fn extension(&self, t: &BundlePoint, c: &[f64]) -> Result<ExtensionField<'_, M>> {
        let y = self.coordinates(t);
        let local = self.local::<f64>(&y)?;
        let ambient = self.chart.to_ambient(&local.jet, c);
        let reeb = local.eta_ambient(&ambient);
        let (xh, yv) = local.jet.decompose(&ambient);
        let flow = local.reeb_ambient();
        let horizontal: Vec<f64> = xh.iter().zip(&flow).map(|(x, f)| x - reeb * f).collect();
        Ok(ExtensionField {
            structure: self,
            reeb,
            horizontal,
            vertical: yv,
        })
    }

    /// `X^O = X^H − ε′G̃(X^V, N)ζ` as an ambient vector at `t`.
    pub fn o_lift(&self, x: &[f64], t: &BundlePoint) -> Result<Vec<f64>> {
        let jet = self.checked_jet(x, t)?;
        let k = jet.inner(x, &t.u);
        let flow = jet.geodesic_flow();
        Ok(jet
            .lift_h(x)
            .iter()
            .zip(&flow)
            .map(|(h, z)| h - self.epsilon() * k * z)
            .collect())
    }

    /// `X^T = X^V − ε′G̃(X^V, N)N` as an ambient vector at `t`.
    pub fn t_lift(&self, x: &[f64], t: &BundlePoint) -> Result<Vec<f64>> {
        let jet = self.checked_jet(x, t)?;
        let k = jet.inner(x, &t.u);
        let normal = jet.canonical_vertical();
        Ok(jet
            .lift_v(x)
            .iter()
            .zip(&normal)
            .map(|(h, z)| h - self.epsilon() * k * z)
            .collect())
    }

    fn checked_jet(&self, x: &[f64], t: &BundlePoint) -> Result<BaseJet<f64>> {
        let jet = self.chart.bundle().jet(t)?;
        let k = jet.inner(x, &t.u);
        if k.abs() > 1e-10 {
            return Err(GeometryError::NotOrthogonal(k));
        }
        Ok(jet)
    }

    pub fn reeb_field(&self) -> ReebField<'_, M> {
        ReebField(self)
    }

    pub fn webster_metric(&self) -> WebsterMetric<'_, M> {
        WebsterMetric {
            structure: self,
            domain: self.chart.domain().clone(),
        }
    }

    pub fn eta_form(&self) -> EtaForm<'_, M> {
        EtaForm(self)
    }
}

/// Structure tensors at one chart point, in ambient or intrinsic form.
pub struct Local<'a, M, S> {
    pub jet: BaseJet<S>,
    structure: &'a ContactStructure<M>,
}

impl<M: MetricField, S: Scalar> Local<'_, M, S> {
    fn eps(&self) -> f64 {
        self.structure.epsilon()
    }

    fn a(&self) -> f64 {
        self.structure.homothety
    }

    /// `η₀(A) = ½β(A)` of the undeformed structure.
    pub fn eta_standard(&self, ambient: &[S]) -> S {
        self.jet.beta(ambient).scale(0.5)
    }

    pub fn eta_ambient(&self, ambient: &[S]) -> S {
        self.eta_standard(ambient).scale(self.a())
    }

    pub fn reeb_ambient(&self) -> Vec<S> {
        let factor = 2.0 * self.eps() / self.a();
        self.jet
            .geodesic_flow()
            .iter()
            .map(|v| v.scale(factor))
            .collect()
    }

    /// `Z − ε′g(Z,u)u`.
    pub fn project_base(&self, z: &[S]) -> Vec<S> {
        let k = self.jet.inner(z, &self.jet.v).scale(self.eps());
        z.iter()
            .zip(&self.jet.v)
            .map(|(&zi, &ui)| zi - k * ui)
            .collect()
    }

    pub fn phi_ambient(&self, ambient: &[S]) -> Vec<S> {
        let (xh, yv) = self.jet.decompose(ambient);
        let x = self.project_base(&xh);
        let neg_y: Vec<S> = yv.iter().map(|&c| -c).collect();
        self.jet.lift(&neg_y, &x)
    }

    pub fn webster_ambient(&self, a: &[S], b: &[S]) -> S {
        let ea = self.eta_standard(a);
        let eb = self.eta_standard(b);
        let scale = self.a();
        let g0 = self.jet.sasaki(a, b).scale(0.25) + (ea * eb).scale(1.0 - self.eps());
        g0.scale(scale) + (ea * eb).scale(scale * (scale - 1.0))
    }

    pub fn to_ambient(&self, c: &[S]) -> Vec<S> {
        self.structure.chart.to_ambient(&self.jet, c)
    }

    pub fn to_intrinsic(&self, a: &[S]) -> Vec<S> {
        self.structure.chart.to_intrinsic(a)
    }

    fn basis(&self) -> Vec<Vec<S>> {
        let n = self.structure.dim();
        (0..n)
            .map(|b| self.to_ambient(&scalar::from_f64(&unit(n, b))))
            .collect()
    }

    pub fn eta(&self) -> Vec<S> {
        self.basis().iter().map(|e| self.eta_ambient(e)).collect()
    }

    pub fn reeb(&self) -> Vec<S> {
        self.to_intrinsic(&self.reeb_ambient())
    }

    pub fn phi_apply(&self, c: &[S]) -> Vec<S> {
        self.to_intrinsic(&self.phi_ambient(&self.to_ambient(c)))
    }

    pub fn phi(&self) -> Mat<S> {
        let columns: Vec<Vec<S>> = self
            .basis()
            .iter()
            .map(|e| self.to_intrinsic(&self.phi_ambient(e)))
            .collect();
        Mat::from_columns(&columns)
    }

    pub fn webster(&self) -> Mat<S> {
        let basis = self.basis();
        let n = basis.len();
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.webster_ambient(&basis[i], &basis[j]);
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        out
    }
}

/// The Reeb field `ξ` on the chart.
pub struct ReebField<'a, M>(&'a ContactStructure<M>);

impl<M: MetricField> VectorField for ReebField<'_, M> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval<S: Scalar>(&self, y: &[S]) -> Result<Vec<S>> {
        Ok(self.0.local(y)?.reeb())
    }
}

/// `reeb·ξ + X^O + Y^T` with constant base components `X`, `Y`.
pub struct ExtensionField<'a, M> {
    structure: &'a ContactStructure<M>,
    pub reeb: f64,
    pub horizontal: Vec<f64>,
    pub vertical: Vec<f64>,
}

impl<'a, M: MetricField> ExtensionField<'a, M> {
    pub fn new(
        structure: &'a ContactStructure<M>,
        reeb: f64,
        horizontal: Vec<f64>,
        vertical: Vec<f64>,
    ) -> Self {
        ExtensionField {
            structure,
            reeb,
            horizontal,
            vertical,
        }
    }

    /// The extension of `φ` applied to this field: `φ(X^O + Y^T) = −Y^O + X^T`.
    pub fn phi(&self) -> ExtensionField<'a, M> {
        ExtensionField {
            structure: self.structure,
            reeb: 0.0,
            horizontal: self.vertical.iter().map(|v| -v).collect(),
            vertical: self.horizontal.clone(),
        }
    }
}

impl<M: MetricField> VectorField for ExtensionField<'_, M> {
    fn dim(&self) -> usize {
        self.structure.dim()
    }
    fn eval<S: Scalar>(&self, y: &[S]) -> Result<Vec<S>> {
        let local = self.structure.local(y)?;
        let x = local.project_base(&scalar::from_f64(&self.horizontal));
        let v = local.project_base(&scalar::from_f64(&self.vertical));
        let lifted = local.jet.lift(&x, &v);
        let flow = local.reeb_ambient();
        let r = S::cst(self.reeb);
        let ambient: Vec<S> = lifted.iter().zip(&flow).map(|(&l, &f)| l + r * f).collect();
        Ok(local.to_intrinsic(&ambient))
    }
}

/// `φ` applied pointwise to an arbitrary chart field.
pub struct PhiField<'a, M, F> {
    structure: &'a ContactStructure<M>,
    field: F,
}

impl<'a, M, F> PhiField<'a, M, F> {
    pub fn new(structure: &'a ContactStructure<M>, field: F) -> Self {
        PhiField { structure, field }
    }
}

impl<M: MetricField, F: VectorField> VectorField for PhiField<'_, M, F> {
    fn dim(&self) -> usize {
        self.structure.dim()
    }
    fn eval<S: Scalar>(&self, y: &[S]) -> Result<Vec<S>> {
        let c = self.field.eval(y)?;
        Ok(self.structure.local(y)?.phi_apply(&c))
    }
}

/// The contact form `η` on the chart.
pub struct EtaForm<'a, M>(&'a ContactStructure<M>);

impl<M: MetricField> OneForm for EtaForm<'_, M> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval<S: Scalar>(&self, y: &[S]) -> Result<Vec<S>> {
        // only the q-directions see β
        let local = self.0.local(y)?;
        let m = local.jet.dim();
        let gu = local.jet.g.apply(&local.jet.v);
        let scale = 0.5 * self.0.homothety;
        Ok((0..self.0.dim())
            .map(|b| if b < m { gu[b].scale(scale) } else { S::zero() })
            .collect())
    }
}

/// The Webster metric pulled back to the intrinsic chart.
pub struct WebsterMetric<'a, M> {
    structure: &'a ContactStructure<M>,
    domain: Domain,
}

impl<M: MetricField> MetricField for WebsterMetric<'_, M> {
    fn dim(&self) -> usize {
        self.structure.dim()
    }
    fn signature(&self) -> Signature {
        Signature::riemannian(self.structure.dim())
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn components<S: Scalar>(&self, y: &[S]) -> Result<Mat<S>> {
        Ok(self.structure.local(y)?.webster())
    }
}

/// Values of `η`, `ξ`, `φ`, `g_η` and `dη` at a point, in the intrinsic basis.
#[derive(Clone, Debug)]
pub struct ContactFrame {
    pub point: BundlePoint,
    pub coordinates: Vec<f64>,
    pub eta: Vec<f64>,
    pub xi: Vec<f64>,
    pub phi: Mat<f64>,
    pub metric: Mat<f64>,
    pub d_eta: Mat<f64>,
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct FrameResiduals {
    /// `|η(ξ) − 1|`
    pub eta_xi: f64,
    /// `‖φξ‖`
    pub phi_xi: f64,
    /// `‖φ² + Id − η⊗ξ‖`
    pub phi_squared: f64,
    /// `|g(ξ,ξ) − 1|`
    pub metric_xi: f64,
    /// `‖g(φ·,φ·) − g + η⊗η‖`
    pub metric_compatibility: f64,
    /// Smallest eigenvalue of `g`; must be positive.
    pub metric_min_eigenvalue: f64,
    /// `‖dη − g(·, φ·)‖`
    pub d_eta_compatibility: f64,
    /// `‖dη(ξ, ·)‖`
    pub reeb_condition: f64,
    /// Smallest singular value of `dη + η⊗η`; nonzero iff `η ∧ (dη)ⁿ ≠ 0`.
    pub contact_min_singular: f64,
    /// `‖L_η − g‖` on the contact distribution.
    pub levi_form: f64,
    /// Smallest eigenvalue of `L_η + η⊗η`.
    pub levi_min_eigenvalue: f64,
}

impl FrameResiduals {
    /// Largest algebraic residual (excludes the positivity measures).
    pub fn max_algebraic(&self) -> f64 {
        [
            self.eta_xi,
            self.phi_xi,
            self.phi_squared,
            self.metric_xi,
            self.metric_compatibility,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Largest residual involving a derivative of `η`.
    pub fn max_differential(&self) -> f64 {
        self.d_eta_compatibility
            .max(self.reeb_condition)
            .max(self.levi_form)
    }

    pub fn worst_of(&self, other: &FrameResiduals) -> FrameResiduals {
        FrameResiduals {
            eta_xi: self.eta_xi.max(other.eta_xi),
            phi_xi: self.phi_xi.max(other.phi_xi),
            phi_squared: self.phi_squared.max(other.phi_squared),
            metric_xi: self.metric_xi.max(other.metric_xi),
            metric_compatibility: self.metric_compatibility.max(other.metric_compatibility),
            metric_min_eigenvalue: self.metric_min_eigenvalue.min(other.metric_min_eigenvalue),
            d_eta_compatibility: self.d_eta_compatibility.max(other.d_eta_compatibility),
            reeb_condition: self.reeb_condition.max(other.reeb_condition),
            contact_min_singular: self.contact_min_singular.min(other.contact_min_singular),
            levi_form: self.levi_form.max(other.levi_form),
            levi_min_eigenvalue: self.levi_min_eigenvalue.min(other.levi_min_eigenvalue),
        }
    }

    pub fn identity() -> FrameResiduals {
        FrameResiduals {
            metric_min_eigenvalue: f64::INFINITY,
            contact_min_singular: f64::INFINITY,
            levi_min_eigenvalue: f64::INFINITY,
            ..Default::default()
        }
    }
}

impl ContactFrame {
    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    /// `η ⊗ ξ` as an endomorphism: `X ↦ η(X)ξ`.
    fn eta_xi_endo(&self) -> Mat<f64> {
        let n = self.dim();
        Mat::from_fn(n, n, |i, j| self.xi[i] * self.eta[j])
    }

    fn eta_eta(&self) -> Mat<f64> {
        let n = self.dim();
        Mat::from_fn(n, n, |i, j| self.eta[i] * self.eta[j])
    }

    /// Projection onto the contact distribution along `ξ`.
    pub fn horizontal_projector(&self) -> Mat<f64> {
        Mat::identity(self.dim()).sub(&self.eta_xi_endo())
    }

    /// Pointwise D-homothetic deformation: `η′ = aη`, `ξ′ = ξ/a`, `φ′ = φ`,
    /// `g′ = ag + a(a − 1)η⊗η`.
    pub fn deformed(&self, a: f64) -> ContactFrame {
        ContactFrame {
            point: self.point.clone(),
            coordinates: self.coordinates.clone(),
            eta: self.eta.iter().map(|e| a * e).collect(),
            xi: self.xi.iter().map(|e| e / a).collect(),
            phi: self.phi.clone(),
            metric: self
                .metric
                .scaled(a)
                .add(&self.eta_eta().scaled(a * (a - 1.0))),
            d_eta: self.d_eta.scaled(a),
        }
    }

    pub fn residuals(&self) -> FrameResiduals {
        let n = self.dim();
        let id = Mat::<f64>::identity(n);
        let g = &self.metric;
        let phi = &self.phi;
        let eta_eta = self.eta_eta();

        let phi_sq = phi.matmul(phi).add(&id).sub(&self.eta_xi_endo());
        let compat = phi.transpose().matmul(g).matmul(phi).sub(g).add(&eta_eta);
        let g_phi = g.matmul(phi);
        let reeb_condition = crate::linalg::norm(&self.d_eta.transpose().apply(&self.xi));
        let contact = self.d_eta.add(&eta_eta).to_nalgebra().svd(false, false);
        let contact_min = contact
            .singular_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);

        // L_η(X,Y) = −dη(X, φY)
        let levi = self.d_eta.matmul(phi).scaled(-1.0);
        let p = self.horizontal_projector();
        let levi_h = p.transpose().matmul(&levi.sub(g)).matmul(&p);
        let levi_full = levi.add(&eta_eta);
        let sym = |m: &Mat<f64>| m.add(&m.transpose()).scaled(0.5);
        let min_eig = |m: &Mat<f64>| {
            nalgebra::SymmetricEigen::new(sym(m).to_nalgebra())
                .eigenvalues
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min)
        };

        FrameResiduals {
            eta_xi: (dot(&self.eta, &self.xi) - 1.0).abs(),
            phi_xi: crate::linalg::norm(&phi.apply(&self.xi)),
            phi_squared: phi_sq.max_abs(),
            metric_xi: (g.form(&self.xi, &self.xi) - 1.0).abs(),
            metric_compatibility: compat.max_abs(),
            metric_min_eigenvalue: min_eig(g),
            d_eta_compatibility: self.d_eta.sub(&g_phi).max_abs(),
            reeb_condition,
            contact_min_singular: contact_min,
            levi_form: levi_h.max_abs(),
            levi_min_eigenvalue: min_eig(&levi_full),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::index_of;
    use crate::sampling::Sampler;
    use crate::space_forms::{model_metric, SignatureKind, SpaceFormSpec};

    fn structure(kind: SignatureKind, c: f64) -> ContactStructure<crate::space_forms::ModelMetric> {
        ContactStructure::new(
            model_metric(SpaceFormSpec::new(kind, c, 3).unwrap()),
            kind.into(),
        )
    }

    #[test]
    fn frame_axioms_hold() {
        for &(kind, c) in &[
            (SignatureKind::Lorentzian, -3.0),
            (SignatureKind::Lorentzian, 0.5),
            (SignatureKind::Riemannian, 0.0),
            (SignatureKind::Riemannian, 2.0),
        ] {
            let s = structure(kind, c);
            let mut sampler = Sampler::new(3);
            for _ in 0..20 {
                let t = s.chart().sample_point(&mut sampler).unwrap();
                let r = s.contact_frame(&t).unwrap().residuals();
                assert!(r.max_algebraic() <= 1e-8, "{kind:?} {c}: {r:?}");
                assert!(r.max_differential() <= 1e-6, "{kind:?} {c}: {r:?}");
                assert!(r.metric_min_eigenvalue > 0.0);
                assert!(r.contact_min_singular > 1e-6);
                assert!(r.levi_min_eigenvalue > 0.0);
            }
        }
    }

    #[test]
    fn webster_is_quarter_sasaki_on_contact_distribution() {
        let s = structure(SignatureKind::Lorentzian, -3.0);
        let mut sampler = Sampler::new(8);
        let t = s.chart().sample_point(&mut sampler).unwrap();
        let y = s.coordinates(&t);
        let local = s.local::<f64>(&y).unwrap();
        let frame = s.contact_frame(&t).unwrap();
        let p = frame.horizontal_projector();
        for i in 0..5 {
            for j in 0..5 {
                let a = local.to_ambient(&p.column(i));
                let b = local.to_ambient(&p.column(j));
                let quarter = 0.25 * local.jet.sasaki(&a, &b);
                assert!((local.webster_ambient(&a, &b) - quarter).abs() < 1e-12);
            }
        }
        // g_η(ξ, H) = 0 and g_η(ξ, ξ) = 1 are part of the frame residuals
        let r = frame.residuals();
        assert!(r.metric_xi < 1e-12);
        assert!(index_of(&frame.metric) == 0);
    }

    #[test]
    fn o_and_t_lifts() {
        let s = structure(SignatureKind::Lorentzian, 0.5);
        let mut sampler = Sampler::new(12);
        let t = s.chart().sample_point(&mut sampler).unwrap();
        let jet = s.chart().bundle().jet(&t).unwrap();
        let z = sampler.vector(3);
        let x: Vec<f64> = {
            // project z orthogonally to u (g(u,u) = −1)
            let k = jet.inner(&z, &t.u);
            z.iter().zip(&t.u).map(|(a, b)| a + k * b).collect()
        };
        let xo = s.o_lift(&x, &t).unwrap();
        let xt = s.t_lift(&x, &t).unwrap();
        for (a, b) in xo.iter().zip(jet.lift_h(&x)) {
            assert!((a - b).abs() < 1e-12);
        }
        let n = jet.canonical_vertical();
        assert!(jet.sasaki(&xo, &n).abs() <= 1e-10);
        assert!(jet.sasaki(&xt, &n).abs() <= 1e-10);
        let local = s.local::<f64>(&s.coordinates(&t)).unwrap();
        let phi_xo = local.phi_ambient(&xo);
        for (a, b) in phi_xo.iter().zip(&xt) {
            assert!((a - b).abs() < 1e-12);
        }
        let gtt = local.webster_ambient(&xt, &xt);
        assert!((gtt - 0.25 * jet.inner(&x, &x)).abs() < 1e-12);
        assert!(matches!(
            s.o_lift(&t.u, &t),
            Err(GeometryError::NotOrthogonal(_))
        ));
    }

    #[test]
    fn reeb_normalization() {
        for &(kind, c) in &[
            (SignatureKind::Lorentzian, 0.0),
            (SignatureKind::Riemannian, 0.0),
        ] {
            let s = structure(kind, c);
            let mut sampler = Sampler::new(1);
            let t = s.chart().sample_point(&mut sampler).unwrap();
            let f = s.contact_frame(&t).unwrap();
            assert!((dot(&f.eta, &f.xi) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn pointwise_deformation_matches_deformed_structure() {
        let s = structure(SignatureKind::Lorentzian, -3.0);
        let d = s.deformed(2.0).unwrap();
        let mut sampler = Sampler::new(4);
        let t = s.chart().sample_point(&mut sampler).unwrap();
        let direct = d.contact_frame(&t).unwrap();
        let pointwise = s.contact_frame(&t).unwrap().deformed(2.0);
        assert!(direct.metric.sub(&pointwise.metric).max_abs() < 1e-12);
        assert!(direct.d_eta.sub(&pointwise.d_eta).max_abs() < 1e-12);
        for (a, b) in direct.xi.iter().zip(&pointwise.xi) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(s.deformed(0.0).is_err());
    }

    #[test]
    fn constraint_violation_is_rejected() {
        let s = structure(SignatureKind::Lorentzian, 0.0);
        let t = BundlePoint {
            p: vec![0.0; 3],
            u: vec![2.0, 0.0, 0.0],
            level: FiberLevel::Hyperquadric,
        };
        assert!(matches!(
            s.contact_frame(&t),
            Err(GeometryError::NotOnHyperquadric(_))
        ));
    }
}
