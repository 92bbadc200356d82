//! Intrinsic chart of the hypersurface `T_ε′M ⊂ TM`.
//!
//! Coordinates are `(x⁰…xⁿ, w¹…wⁿ)`; the embedding sets `q = x`,
//! `v^α = w^α` and solves `g_q(v,v) = ε′` for `v⁰`, taking the positive root
//! (the future-pointing sheet when `ε′ = −1`).

use crate::bundle::{BaseJet, BundlePoint, FiberLevel, TangentBundle};
use crate::error::{GeometryError, Result};
use crate::geometry::metric::{Domain, MetricField};
use crate::linalg::Mat;
use crate::sampling::Sampler;
use crate::scalar::{self, Scalar};

/// Half-width of the fiber coordinate box of the chart domain.
const FIBER_DOMAIN: f64 = 0.6;

#[derive(Clone, Debug)]
pub struct BundleChart<M> {
    bundle: TangentBundle<M>,
    level: FiberLevel,
    domain: Domain,
}

impl<M: MetricField> BundleChart<M> {
    pub fn new(base: M, level: FiberLevel) -> Self {
        let domain = base
            .domain()
            .product(&Domain::cube(base.dim() - 1, FIBER_DOMAIN));
        BundleChart {
            bundle: TangentBundle::new(base),
            level,
            domain,
        }
    }

    pub fn base(&self) -> &M {
        self.bundle.base()
    }

    pub fn bundle(&self) -> &TangentBundle<M> {
        &self.bundle
    }

    pub fn level(&self) -> FiberLevel {
        self.level
    }

    pub fn epsilon(&self) -> f64 {
        self.level.epsilon()
    }

    pub fn base_dim(&self) -> usize {
        self.bundle.base_dim()
    }

    /// `2n + 1`.
    pub fn dim(&self) -> usize {
        2 * self.base_dim() - 1
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Base data at the embedded point `E(y)`.
    pub fn embed<S: Scalar>(&self, y: &[S]) -> Result<BaseJet<S>> {
        let m = self.base_dim();
        if y.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                found: y.len(),
            });
        }
        let q = y[..m].to_vec();
        let w = &y[m..];
        let g = self.base().components(&q)?;
        let v0 = solve_leading(&g, w, self.epsilon())?;
        let v: Vec<S> = std::iter::once(v0).chain(w.iter().copied()).collect();
        BaseJet::new(self.base(), q, v)
    }

    /// Pushes an intrinsic tangent vector forward to `TM`; the `v⁰`
    /// component follows from `G̃(A, N) = 0`.
    pub fn to_ambient<S: Scalar>(&self, jet: &BaseJet<S>, c: &[S]) -> Vec<S> {
        let m = self.base_dim();
        let aq = &c[..m];
        let mut av: Vec<S> = std::iter::once(S::zero())
            .chain(c[m..].iter().copied())
            .collect();
        let gu = jet.g.apply(&jet.v);
        let corr = jet.gamma.contract(aq, &jet.v);
        let mut rhs = S::zero();
        for k in 0..m {
            rhs += gu[k] * (av[k] + corr[k]);
        }
        av[0] = -rhs / gu[0];
        aq.iter().copied().chain(av).collect()
    }

    /// Coordinates of a tangent ambient vector in the intrinsic basis.
    pub fn to_intrinsic<S: Scalar>(&self, a: &[S]) -> Vec<S> {
        let m = self.base_dim();
        a[..m].iter().chain(&a[m + 1..]).copied().collect()
    }

    pub fn coordinates(&self, t: &BundlePoint) -> Vec<f64> {
        t.p.iter().chain(&t.u[1..]).copied().collect()
    }

    pub fn point_at(&self, y: &[f64]) -> Result<BundlePoint> {
        let jet = self.embed(y)?;
        BundlePoint::new(self.base(), jet.q, jet.v, self.level)
    }

    /// Point with base coordinates in `[-0.2, 0.2]^{n+1}` and fiber
    /// coordinates in `[-0.5, 0.5]^n`.
    pub fn sample_point(&self, sampler: &mut Sampler) -> Result<BundlePoint> {
        let p = sampler.base_point(self.base_dim());
        let w = sampler.fiber(self.base_dim() - 1);
        let y: Vec<f64> = p.into_iter().chain(w).collect();
        self.point_at(&y)
    }

    /// Differential of the embedding, `2(n+1) × (2n+1)`.
    pub fn embedding_jacobian(&self, y: &[f64]) -> Result<Mat<f64>> {
        let jet = self.embed(y)?;
        let columns: Vec<Vec<f64>> = (0..self.dim())
            .map(|b| self.to_ambient(&jet, &crate::bundle::unit(self.dim(), b)))
            .collect();
        Ok(Mat::from_columns(&columns))
    }

    /// The embedding map itself, for independent differentiation.
    pub fn embedding(&self, y: &[f64]) -> Result<Vec<f64>> {
        let jet = self.embed(y)?;
        Ok(scalar::to_f64(&jet.q)
            .into_iter()
            .chain(scalar::to_f64(&jet.v))
            .collect())
    }
}

/// Solves `g(v,v) = ε′` for `v⁰` given `v^α = w^α`, returning the positive root.
fn solve_leading<S: Scalar>(g: &Mat<S>, w: &[S], epsilon: f64) -> Result<S> {
    let m = g.rows();
    let a = g[(0, 0)];
    let mut b = S::zero();
    let mut c = S::cst(-epsilon);
    for i in 1..m {
        b += g[(0, i)] * w[i - 1];
        for j in 1..m {
            c += g[(i, j)] * w[i - 1] * w[j - 1];
        }
    }
    let disc = b * b - a * c;
    if disc.re() <= 0.0 || a.re() == 0.0 {
        return Err(GeometryError::OutsideDomain);
    }
    let root = disc.sqrt();
    let v0 = if a.re() > 0.0 {
        (root - b) / a
    } else {
        (-b - root) / a
    };
    if v0.re() <= 0.0 {
        return Err(GeometryError::OutsideDomain);
    }
    Ok(v0)
}
