//! CR integrability of the contact distribution and the pointwise CR symmetry
//! induced by the reflection `L(X) = −X + 2ε′g(u,X)u` of the base.

use serde::Serialize;

use crate::bundle::{unit, BundlePoint, ContactStructure};
use crate::error::{GeometryError, Result};
use crate::geometry::curvature::{lie_bracket, riemann};
use crate::geometry::metric::MetricField;
use crate::linalg::{dot, norm, Mat};

/// Bound on `|η(X)|` for a vector to count as lying in the contact distribution.
pub const DISTRIBUTION_TOL: f64 = 1e-10;

/// `‖P_H([JX,JY] − [X,Y] − J([JX,Y] + [X,JY]))‖ + |η([X,Y] − [JX,JY])|` at `t`,
/// with `X`, `Y` extended by constant base components and `J = φ|_H`.
pub fn cr_integrability_residual<M: MetricField>(
    s: &ContactStructure<M>,
    t: &BundlePoint,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    let frame = s.contact_frame(t)?;
    for v in [x, y] {
        let e = dot(&frame.eta, v);
        if e.abs() > DISTRIBUTION_TOL * norm(v).max(1.0) {
            return Err(GeometryError::NotInDistribution(e));
        }
    }
    let at = &frame.coordinates;
    let xf = s.extension(t, x)?;
    let yf = s.extension(t, y)?;
    let jxf = xf.phi();
    let jyf = yf.phi();

    let jj = lie_bracket(&jxf, &jyf, at)?;
    let plain = lie_bracket(&xf, &yf, at)?;
    let mixed_a = lie_bracket(&jxf, &yf, at)?;
    let mixed_b = lie_bracket(&xf, &jyf, at)?;
    let mixed: Vec<f64> = mixed_a.iter().zip(&mixed_b).map(|(a, b)| a + b).collect();
    let j_mixed = frame.phi.apply(&mixed);

    let nijenhuis: Vec<f64> = (0..at.len())
        .map(|i| jj[i] - plain[i] - j_mixed[i])
        .collect();
    let projected = frame.horizontal_projector().apply(&nijenhuis);
    let partial: Vec<f64> = plain.iter().zip(&jj).map(|(a, b)| a - b).collect();
    Ok(frame.metric.form(&projected, &projected).max(0.0).sqrt() + dot(&frame.eta, &partial).abs())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SymmetryCheck {
    /// `‖LᵀgL − g‖`
    pub residual_orthogonal: f64,
    /// `max |L R(LX,LY)LZ − R(X,Y)Z|` over coordinate triples.
    pub residual_curvature: f64,
    /// `‖dF|_H + Id‖`
    pub residual_minus_id: f64,
    /// `‖dF(ξ) − ξ‖`
    pub residual_reeb: f64,
    /// `‖dF∘J̃ − J̃∘dF‖` on `T(TM)`.
    pub residual_cr_map: f64,
    /// `‖dFᵀ g_η dF − g_η‖`
    pub residual_webster_isometry: f64,
}

impl SymmetryCheck {
    pub fn max(&self) -> f64 {
        [
            self.residual_orthogonal,
            self.residual_curvature,
            self.residual_minus_id,
            self.residual_reeb,
            self.residual_cr_map,
            self.residual_webster_isometry,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn worst_of(&self, other: &SymmetryCheck) -> SymmetryCheck {
        SymmetryCheck {
            residual_orthogonal: self.residual_orthogonal.max(other.residual_orthogonal),
            residual_curvature: self.residual_curvature.max(other.residual_curvature),
            residual_minus_id: self.residual_minus_id.max(other.residual_minus_id),
            residual_reeb: self.residual_reeb.max(other.residual_reeb),
            residual_cr_map: self.residual_cr_map.max(other.residual_cr_map),
            residual_webster_isometry: self
                .residual_webster_isometry
                .max(other.residual_webster_isometry),
        }
    }
}

/// `L = −Id + 2ε′ u (g u)ᵀ`.
pub fn reflection(g: &Mat<f64>, u: &[f64], epsilon: f64) -> Mat<f64> {
    let gu = g.apply(u);
    let n = u.len();
    Mat::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        -id + 2.0 * epsilon * u[i] * gu[j]
    })
}

pub fn check_cr_symmetry<M: MetricField>(
    s: &ContactStructure<M>,
    t: &BundlePoint,
) -> Result<SymmetryCheck> {
    let base = s.base();
    let m = base.dim();
    let g = base.components::<f64>(&t.p)?;
    let l = reflection(&g, &t.u, s.epsilon());

    let residual_orthogonal = l.transpose().matmul(&g).matmul(&l).sub(&g).max_abs();

    let r = riemann::<_, f64>(base, &t.p)?;
    let le: Vec<Vec<f64>> = (0..m).map(|i| l.column(i)).collect();
    let mut residual_curvature: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let pulled = l.apply(&r.apply(&le[i], &le[j], &le[k]));
                let direct = r.apply(&unit(m, i), &unit(m, j), &unit(m, k));
                for (a, b) in pulled.iter().zip(&direct) {
                    residual_curvature = residual_curvature.max((a - b).abs());
                }
            }
        }
    }

    // dF(X^H + Y^V) = (LX)^H + (LY)^V at the fixed point F(t) = t
    let jet = s.chart().bundle().jet(t)?;
    let push = |a: &[f64]| {
        let (xh, yv) = jet.decompose(a);
        jet.lift(&l.apply(&xh), &l.apply(&yv))
    };
    let dim = s.dim();
    let frame = s.contact_frame(t)?;
    let columns: Vec<Vec<f64>> = (0..dim)
        .map(|b| {
            let a = s.chart().to_ambient(&jet, &unit(dim, b));
            s.chart().to_intrinsic(&push(&a))
        })
        .collect();
    let df = Mat::from_columns(&columns);

    let p = frame.horizontal_projector();
    let residual_minus_id = df.matmul(&p).add(&p).max_abs();
    let dxi = df.apply(&frame.xi);
    let residual_reeb = norm(
        &dxi.iter()
            .zip(&frame.xi)
            .map(|(a, b)| a - b)
            .collect::<Vec<_>>(),
    );

    let mut residual_cr_map: f64 = 0.0;
    for b in 0..2 * m {
        let a = unit(2 * m, b);
        let lhs = push(&jet.j_tilde(&a));
        let rhs = jet.j_tilde(&push(&a));
        for (x, y) in lhs.iter().zip(&rhs) {
            residual_cr_map = residual_cr_map.max((x - y).abs());
        }
    }
    let residual_webster_isometry = df
        .transpose()
        .matmul(&frame.metric)
        .matmul(&df)
        .sub(&frame.metric)
        .max_abs();

    Ok(SymmetryCheck {
        residual_orthogonal,
        residual_curvature,
        residual_minus_id,
        residual_reeb,
        residual_cr_map,
        residual_webster_isometry,
    })
}
