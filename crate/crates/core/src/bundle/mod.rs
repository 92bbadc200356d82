//! Geometry of the tangent bundle `TM` in the induced chart `(q, v)`.
//!
//! An ambient vector on `TM` is stored as `[q-components…, v-components…]`.
//! Lifts follow `X^H = X^i ∂_{q^i} − X^i v^j Γ^k_{ij} ∂_{v^k}` and
//! `X^V = X^k ∂_{v^k}`; the Sasaki metric makes the two copies orthogonal.

pub mod chart;
pub mod frame;

use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::geometry::curvature::{
    christoffel, covariant_derivative, exterior_d, lie_bracket, riemann, Christoffel,
};
use crate::geometry::field::{OneForm, VectorField};
use crate::geometry::metric::MetricField;
use crate::linalg::{norm, sub, Mat};
use crate::scalar::{self, Scalar};

pub use chart::BundleChart;
pub use frame::{ContactFrame, ContactStructure};

/// Fiber level `ε′` of the bundle `T_ε′M = {g(u,u) = ε′}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberLevel {
    /// `g(u,u) = −1` over a Lorentzian base.
    Hyperquadric,
    /// `g(u,u) = +1`.
    Sphere,
}

impl FiberLevel {
    pub fn epsilon(self) -> f64 {
        match self {
            FiberLevel::Hyperquadric => -1.0,
            FiberLevel::Sphere => 1.0,
        }
    }
}

impl From<crate::space_forms::SignatureKind> for FiberLevel {
    /// The natural level for a base of the given kind: the tangent
    /// hyperquadric bundle over a Lorentzian base, the unit sphere bundle
    /// over a Riemannian one.
    fn from(kind: crate::space_forms::SignatureKind) -> Self {
        match kind {
            crate::space_forms::SignatureKind::Lorentzian => FiberLevel::Hyperquadric,
            crate::space_forms::SignatureKind::Riemannian => FiberLevel::Sphere,
        }
    }
}

/// Tolerance on `|g(u,u) − ε′|` for a bundle point.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// A point `t = (p, u)` of `T_ε′M`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BundlePoint {
    pub p: Vec<f64>,
    pub u: Vec<f64>,
    pub level: FiberLevel,
}

impl BundlePoint {
    pub fn new<M: MetricField>(
        base: &M,
        p: Vec<f64>,
        u: Vec<f64>,
        level: FiberLevel,
    ) -> Result<Self> {
        if p.len() != base.dim() || u.len() != base.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: base.dim(),
                found: u.len().min(p.len()),
            });
        }
        if !base.domain().contains(&p) {
            return Err(GeometryError::OutsideDomain);
        }
        let g = base.components::<f64>(&p)?;
        let defect = (g.form(&u, &u) - level.epsilon()).abs();
        if defect > CONSTRAINT_TOL {
            return Err(GeometryError::NotOnHyperquadric(defect));
        }
        if level == FiberLevel::Hyperquadric && u[0] <= 0.0 {
            return Err(GeometryError::InvalidParameter(
                "hyperquadric points must be future-pointing (u⁰ > 0)".into(),
            ));
        }
        Ok(BundlePoint { p, u, level })
    }

    /// Ambient coordinates `(q, v)`.
    pub fn ambient(&self) -> Vec<f64> {
        self.p.iter().chain(&self.u).copied().collect()
    }
}

/// Base metric data at a point `(q, v)` of `TM`: everything the pointwise
/// tangent-bundle operators need.
#[derive(Clone, Debug)]
pub struct BaseJet<S> {
    pub q: Vec<S>,
    pub v: Vec<S>,
    pub g: Mat<S>,
    pub gamma: Christoffel<S>,
}

impl<S: Scalar> BaseJet<S> {
    pub fn new<M: MetricField>(base: &M, q: Vec<S>, v: Vec<S>) -> Result<Self> {
        let gamma = christoffel(base, &q)?;
        let g = base.components(&q)?;
        Ok(BaseJet { q, v, g, gamma })
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn inner(&self, x: &[S], y: &[S]) -> S {
        self.g.form(x, y)
    }

    pub fn lift_h(&self, x: &[S]) -> Vec<S> {
        let corr = self.gamma.contract(x, &self.v);
        x.iter().copied().chain(corr.iter().map(|&c| -c)).collect()
    }

    pub fn lift_v(&self, x: &[S]) -> Vec<S> {
        std::iter::repeat_n(S::zero(), x.len())
            .chain(x.iter().copied())
            .collect()
    }

    /// `lift_h(x) + lift_v(y)`.
    pub fn lift(&self, x: &[S], y: &[S]) -> Vec<S> {
        let corr = self.gamma.contract(x, &self.v);
        x.iter()
            .copied()
            .chain(y.iter().zip(&corr).map(|(&a, &c)| a - c))
            .collect()
    }

    /// Splits an ambient vector into `(X, Y)` with `A = X^H + Y^V`.
    pub fn decompose(&self, a: &[S]) -> (Vec<S>, Vec<S>) {
        let n = self.dim();
        let x = a[..n].to_vec();
        let corr = self.gamma.contract(&x, &self.v);
        let y = a[n..].iter().zip(&corr).map(|(&b, &c)| b + c).collect();
        (x, y)
    }

    pub fn sasaki(&self, a: &[S], b: &[S]) -> S {
        let (xa, ya) = self.decompose(a);
        let (xb, yb) = self.decompose(b);
        self.inner(&xa, &xb) + self.inner(&ya, &yb)
    }

    /// `J̃(X^H + Y^V) = X^V − Y^H`.
    pub fn j_tilde(&self, a: &[S]) -> Vec<S> {
        let (x, y) = self.decompose(a);
        let neg_y: Vec<S> = y.iter().map(|&c| -c).collect();
        self.lift(&neg_y, &x)
    }

    /// `β(A) = g(π_* A, u)`.
    pub fn beta(&self, a: &[S]) -> S {
        self.inner(&a[..self.dim()], &self.v)
    }

    /// Canonical vertical field `N = u^V`.
    pub fn canonical_vertical(&self) -> Vec<S> {
        self.lift_v(&self.v)
    }

    /// Geodesic flow `ζ = u^H`.
    pub fn geodesic_flow(&self) -> Vec<S> {
        self.lift_h(&self.v)
    }
}

/// `TM` over a base metric.
#[derive(Clone, Debug)]
pub struct TangentBundle<M> {
    base: M,
}

impl<M: MetricField> TangentBundle<M> {
    pub fn new(base: M) -> Self {
        TangentBundle { base }
    }

    pub fn base(&self) -> &M {
        &self.base
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    /// Dimension of `TM`.
    pub fn dim(&self) -> usize {
        2 * self.base.dim()
    }

    pub fn jet(&self, t: &BundlePoint) -> Result<BaseJet<f64>> {
        BaseJet::new(&self.base, t.p.clone(), t.u.clone())
    }

    pub fn lift_h(&self, x: &[f64], t: &BundlePoint) -> Result<Vec<f64>> {
        Ok(self.jet(t)?.lift_h(x))
    }

    pub fn lift_v(&self, x: &[f64], t: &BundlePoint) -> Result<Vec<f64>> {
        Ok(self.jet(t)?.lift_v(x))
    }

    pub fn sasaki_eval(&self, t: &BundlePoint, a: &[f64], b: &[f64]) -> Result<f64> {
        Ok(self.jet(t)?.sasaki(a, b))
    }

    /// Gram matrix of the Sasaki metric in the coordinate basis of `TM`.
    pub fn sasaki_gram(&self, t: &BundlePoint) -> Result<Mat<f64>> {
        let jet = self.jet(t)?;
        let n = self.dim();
        let basis: Vec<Vec<f64>> = (0..n).map(|i| unit(n, i)).collect();
        Ok(Mat::from_fn(n, n, |i, j| jet.sasaki(&basis[i], &basis[j])))
    }

    pub fn j_tilde(&self, t: &BundlePoint, a: &[f64]) -> Result<Vec<f64>> {
        Ok(self.jet(t)?.j_tilde(a))
    }

    /// Residuals of the lift bracket identities at `t`.
    pub fn bracket_identity_check<X: VectorField, Y: VectorField>(
        &self,
        x: &X,
        y: &Y,
        t: &BundlePoint,
    ) -> Result<BracketResiduals> {
        let at = t.ambient();
        let xh = HorizontalLift::new(&self.base, x);
        let yh = HorizontalLift::new(&self.base, y);
        let xv = VerticalLift(x);
        let yv = VerticalLift(y);
        let jet = self.jet(t)?;

        let lhs_hh = lie_bracket(&xh, &yh, &at)?;
        let base_bracket = lie_bracket(x, y, &t.p)?;
        let r = riemann::<M, f64>(&self.base, &t.p)?;
        let ruv = r.apply(&x.eval(&t.p)?, &y.eval(&t.p)?, &t.u);
        let rhs_hh = sub(&jet.lift_h(&base_bracket), &jet.lift_v(&ruv));

        let lhs_hv = lie_bracket(&xh, &yv, &at)?;
        let nabla = covariant_derivative(&self.base, x, y, &t.p)?;
        let rhs_hv = jet.lift_v(&nabla);

        let lhs_vv = lie_bracket(&xv, &yv, &at)?;
        Ok(BracketResiduals {
            horizontal_horizontal: norm(&sub(&lhs_hh, &rhs_hh)),
            horizontal_vertical: norm(&sub(&lhs_hv, &rhs_hv)),
            vertical_vertical: norm(&lhs_vv),
        })
    }

    /// `|2dβ(A,B) − G̃(A, J̃B)|` with `A`, `B` extended as lifts with constant
    /// base components.
    pub fn beta_identity_check(&self, t: &BundlePoint, a: &Lift, b: &Lift) -> Result<f64> {
        let at = t.ambient();
        let fa = LiftedField::new(&self.base, a.clone());
        let fb = LiftedField::new(&self.base, b.clone());
        let beta = BetaForm(&self.base);
        let lhs = 2.0 * exterior_d(&beta, &fa, &fb, &at)?;
        let jet = self.jet(t)?;
        let va = fa.eval(&at)?;
        let vb = fb.eval(&at)?;
        let rhs = jet.sasaki(&va, &jet.j_tilde(&vb));
        Ok((lhs - rhs).abs())
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BracketResiduals {
    pub horizontal_horizontal: f64,
    pub horizontal_vertical: f64,
    pub vertical_vertical: f64,
}

impl BracketResiduals {
    pub fn max(&self) -> f64 {
        self.horizontal_horizontal
            .max(self.horizontal_vertical)
            .max(self.vertical_vertical)
    }
}

/// Horizontal and vertical base components of a lifted vector `X^H + Y^V`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    pub horizontal: Vec<f64>,
    pub vertical: Vec<f64>,
}

/// `X^H` for a base vector field `X`, as a field on `TM`.
pub struct HorizontalLift<'a, M, X> {
    base: &'a M,
    field: X,
}

impl<'a, M, X> HorizontalLift<'a, M, X> {
    pub fn new(base: &'a M, field: X) -> Self {
        HorizontalLift { base, field }
    }
}

impl<M: MetricField, X: VectorField> VectorField for HorizontalLift<'_, M, X> {
    fn dim(&self) -> usize {
        2 * self.base.dim()
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        let n = self.base.dim();
        let (q, v) = x.split_at(n);
        let gamma = christoffel(self.base, q)?;
        let xq = self.field.eval(q)?;
        let corr = gamma.contract(&xq, v);
        Ok(xq.iter().copied().chain(corr.iter().map(|&c| -c)).collect())
    }
}

/// `X^V` for a base vector field `X`.
pub struct VerticalLift<X>(pub X);

impl<X: VectorField> VectorField for VerticalLift<X> {
    fn dim(&self) -> usize {
        2 * self.0.dim()
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        let n = self.0.dim();
        let xq = self.0.eval(&x[..n])?;
        Ok(std::iter::repeat_n(S::zero(), n).chain(xq).collect())
    }
}

/// `X^H + Y^V` with constant base components `X`, `Y`.
pub struct LiftedField<'a, M> {
    base: &'a M,
    lift: Lift,
}

impl<'a, M> LiftedField<'a, M> {
    pub fn new(base: &'a M, lift: Lift) -> Self {
        LiftedField { base, lift }
    }
}

impl<M: MetricField> VectorField for LiftedField<'_, M> {
    fn dim(&self) -> usize {
        2 * self.base.dim()
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        let n = self.base.dim();
        let (q, v) = x.split_at(n);
        let gamma = christoffel(self.base, q)?;
        let xh: Vec<S> = scalar::from_f64(&self.lift.horizontal);
        let yv: Vec<S> = scalar::from_f64(&self.lift.vertical);
        let corr = gamma.contract(&xh, v);
        Ok(xh
            .iter()
            .copied()
            .chain(yv.iter().zip(&corr).map(|(&a, &c)| a - c))
            .collect())
    }
}

/// `β = g_{ij}(q) v^j dq^i` on `TM`.
pub struct BetaForm<'a, M>(pub &'a M);

impl<M: MetricField> OneForm for BetaForm<'_, M> {
    fn dim(&self) -> usize {
        2 * self.0.dim()
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        let n = self.0.dim();
        let (q, v) = x.split_at(n);
        let g = self.0.components(q)?;
        Ok(g.apply(v)
            .into_iter()
            .chain(std::iter::repeat_n(S::zero(), n))
            .collect())
    }
}

/// Number of negative eigenvalues of a symmetric matrix.
pub fn index_of(m: &Mat<f64>) -> usize {
    nalgebra::SymmetricEigen::new(m.to_nalgebra())
        .eigenvalues
        .iter()
        .filter(|v| **v < 0.0)
        .count()
}
