//! Levi-Civita connection, curvature and the bracket / exterior-derivative
//! operators on a chart.
//!
//! Curvature convention: `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z`, so the
//! round sphere has `R(X,Y)Z = c(g(Y,Z)X − g(X,Z)Y)` with `c > 0`.

use crate::error::{GeometryError, Result};
use crate::geometry::derivative::DerivativeEngine;
use crate::geometry::field::{directional_derivative, OneForm, VectorField};
use crate::geometry::metric::{check_point, MetricField};
use crate::linalg::{dot, Mat};
use crate::scalar::{self, Dual, Scalar};

/// `Γ^k_{ij}`, stored with the upper index first.
#[derive(Clone, Debug)]
pub struct Christoffel<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> Christoffel<S> {
    fn zeros(dim: usize) -> Self {
        Christoffel {
            dim,
            data: vec![S::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> S {
        self.data[(k * self.dim + i) * self.dim + j]
    }

    #[inline]
    fn set(&mut self, k: usize, i: usize, j: usize, v: S) {
        self.data[(k * self.dim + i) * self.dim + j] = v;
    }

    /// `Γ(X, Y)^k = Γ^k_{ij} X^i Y^j`.
    pub fn contract(&self, x: &[S], y: &[S]) -> Vec<S> {
        let n = self.dim;
        (0..n)
            .map(|k| {
                let mut acc = S::zero();
                for i in 0..n {
                    for j in 0..n {
                        acc += self.get(k, i, j) * x[i] * y[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Christoffel<S>) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.re() - b.re()).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.re().abs()).fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> Christoffel<f64> {
        Christoffel {
            dim: self.dim,
            data: self.data.iter().map(Scalar::re).collect(),
        }
    }
}

/// Metric value and its first partial derivatives `∂_a g` at `x`.
pub fn metric_jet<M: MetricField, S: Scalar>(g: &M, x: &[S]) -> Result<(Mat<S>, Vec<Mat<S>>)> {
    let n = g.dim();
    let mut value = None;
    let mut partials = Vec::with_capacity(n);
    for a in 0..n {
        let m = g.components::<Dual<S>>(&scalar::seed_axis(x, a))?;
        if value.is_none() {
            value = Some(m.map(|d| d.re));
        }
        partials.push(m.map(|d| d.eps));
    }
    let value = match value {
        Some(v) => v,
        None => g.components::<S>(x)?,
    };
    Ok((value, partials))
}

/// Christoffel symbols from a metric value and its first partials.
pub fn christoffel_from_jet<S: Scalar>(
    value: &Mat<S>,
    partials: &[Mat<S>],
) -> Result<Christoffel<S>> {
    let n = value.rows();
    let inv = value.inverse()?;
    let mut gamma = Christoffel::zeros(n);
    // lowered Γ_{l,ij} = ½(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})
    let mut lowered = vec![S::zero(); n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in i..n {
                let v =
                    (partials[i][(j, l)] + partials[j][(i, l)] - partials[l][(i, j)]).scale(0.5);
                lowered[(l * n + i) * n + j] = v;
                lowered[(l * n + j) * n + i] = v;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = S::zero();
                for l in 0..n {
                    acc += inv[(k, l)] * lowered[(l * n + i) * n + j];
                }
                gamma.set(k, i, j, acc);
                gamma.set(k, j, i, acc);
            }
        }
    }
    Ok(gamma)
}

/// Levi-Civita connection coefficients `Γ^k_{ij}` of `g` at `x`.
pub fn christoffel<M: MetricField, S: Scalar>(g: &M, x: &[S]) -> Result<Christoffel<S>> {
    check_point(g, x)?;
    let (value, partials) = metric_jet(g, x)?;
    christoffel_from_jet(&value, &partials)
}

/// `Γ` from central-difference partials of `g`, independent of the dual-number path.
pub fn christoffel_fd<M: MetricField>(
    g: &M,
    x: &[f64],
    engine: &DerivativeEngine,
) -> Result<Christoffel<f64>> {
    check_point(g, x)?;
    let n = g.dim();
    let value = g.components::<f64>(x)?;
    let flat = |y: &[f64]| match g.components::<f64>(y) {
        Ok(m) => (0..n * n).map(|i| m[(i / n, i % n)]).collect(),
        Err(_) => vec![f64::NAN; n * n],
    };
    let partials: Vec<Mat<f64>> = engine
        .jacobian(flat, x)
        .into_iter()
        .map(|d| Mat::from_fn(n, n, |i, j| d[i * n + j]))
        .collect();
    christoffel_from_jet(&value, &partials)
}

/// Riemann tensor `R^l_{kij} = (R(∂_i, ∂_j)∂_k)^l`.
#[derive(Clone, Debug)]
pub struct Riemann<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> Riemann<S> {
    #[inline]
    pub fn get(&self, l: usize, k: usize, i: usize, j: usize) -> S {
        let n = self.dim;
        self.data[((l * n + k) * n + i) * n + j]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `R(X,Y)Z`.
    pub fn apply(&self, x: &[S], y: &[S], z: &[S]) -> Vec<S> {
        let n = self.dim;
        (0..n)
            .map(|l| {
                let mut acc = S::zero();
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            acc += self.get(l, k, i, j) * x[i] * y[j] * z[k];
                        }
                    }
                }
                acc
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.re().abs()).fold(0.0, f64::max)
    }
}

/// Curvature of `g` at `x` from `Γ` and its exact first partials.
pub fn riemann<M: MetricField, S: Scalar>(g: &M, x: &[S]) -> Result<Riemann<S>> {
    check_point(g, x)?;
    let n = g.dim();
    let mut gamma = None;
    let mut d_gamma = Vec::with_capacity(n);
    for a in 0..n {
        let ga = christoffel::<M, Dual<S>>(g, &scalar::seed_axis(x, a))?;
        if gamma.is_none() {
            gamma = Some(Christoffel {
                dim: n,
                data: ga.data.iter().map(|d| d.re).collect(),
            });
        }
        d_gamma.push(Christoffel {
            dim: n,
            data: ga.data.iter().map(|d| d.eps).collect(),
        });
    }
    let gamma = gamma.ok_or(GeometryError::DimensionMismatch {
        expected: 1,
        found: 0,
    })?;
    let mut data = vec![S::zero(); n * n * n * n];
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if j < i {
                        let v = data[((l * n + k) * n + j) * n + i];
                        data[((l * n + k) * n + i) * n + j] = -v;
                        continue;
                    }
                    let mut v = d_gamma[i].get(l, j, k) - d_gamma[j].get(l, i, k);
                    for m in 0..n {
                        v += gamma.get(l, i, m) * gamma.get(m, j, k)
                            - gamma.get(l, j, m) * gamma.get(m, i, k);
                    }
                    data[((l * n + k) * n + i) * n + j] = v;
                }
            }
        }
    }
    Ok(Riemann { dim: n, data })
}

/// Threshold on `|g(X,X)g(Y,Y) − g(X,Y)²|` below which a plane is degenerate.
pub const PLANE_TOL: f64 = 1e-8;

/// Sectional curvature `g(R(X,Y)Y, X) / (g(X,X)g(Y,Y) − g(X,Y)²)`.
pub fn sectional<M: MetricField>(g: &M, x: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
    let m = g.components::<f64>(x)?;
    let denom = m.form(u, u) * m.form(v, v) - m.form(u, v).powi(2);
    if denom.abs() <= PLANE_TOL {
        return Err(GeometryError::DegeneratePlane(denom.abs()));
    }
    let r = riemann::<M, f64>(g, x)?;
    let ruv = r.apply(u, v, v);
    Ok(m.form(&ruv, u) / denom)
}

/// `[V, W]^k = V^i ∂_i W^k − W^i ∂_i V^k`.
pub fn lie_bracket<V: VectorField, W: VectorField, S: Scalar>(
    v: &V,
    w: &W,
    x: &[S],
) -> Result<Vec<S>> {
    let vx = v.eval(x)?;
    let wx = w.eval(x)?;
    let dw_v = directional_derivative(w, x, &vx)?;
    let dv_w = directional_derivative(v, x, &wx)?;
    Ok(dw_v.iter().zip(&dv_w).map(|(&a, &b)| a - b).collect())
}

/// `∇_X Y` at `x` for the Levi-Civita connection of `g`.
pub fn covariant_derivative<M: MetricField, X: VectorField, Y: VectorField>(
    g: &M,
    x_field: &X,
    y_field: &Y,
    x: &[f64],
) -> Result<Vec<f64>> {
    let gamma = christoffel::<M, f64>(g, x)?;
    let xv = x_field.eval(x)?;
    let yv = y_field.eval(x)?;
    let dy = directional_derivative(y_field, x, &xv)?;
    let corr = gamma.contract(&xv, &yv);
    Ok(dy.iter().zip(&corr).map(|(a, b)| a + b).collect())
}

/// `dω(V,W) = ½(V(ω(W)) − W(ω(V)) − ω([V,W]))`.
pub fn exterior_d<O: OneForm, V: VectorField, W: VectorField, S: Scalar>(
    omega: &O,
    v: &V,
    w: &W,
    x: &[S],
) -> Result<S> {
    let vx = v.eval(x)?;
    let wx = w.eval(x)?;
    // V(ω(W)): differentiate the pairing ω(W) along V
    let along_v = {
        let xd = scalar::seed(x, &vx);
        dot(&omega.eval(&xd)?, &w.eval(&xd)?).eps
    };
    let along_w = {
        let xd = scalar::seed(x, &wx);
        dot(&omega.eval(&xd)?, &v.eval(&xd)?).eps
    };
    let bracket = lie_bracket(v, w, x)?;
    let omega_x = omega.eval(x)?;
    Ok((along_v - along_w - dot(&omega_x, &bracket)).scale(0.5))
}

/// Matrix `dω_{ab} = dω(∂_a, ∂_b) = ½(∂_a ω_b − ∂_b ω_a)`.
pub fn exterior_d_matrix<O: OneForm, S: Scalar>(omega: &O, x: &[S]) -> Result<Mat<S>> {
    let n = x.len();
    let partials: Vec<Vec<S>> = (0..n)
        .map(|a| {
            Ok(omega
                .eval(&scalar::seed_axis(x, a))?
                .iter()
                .map(|d| d.eps)
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(Mat::from_fn(n, n, |a, b| {
        (partials[a][b] - partials[b][a]).scale(0.5)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::field::{
        AffineField, AffineForm, ConstantField, Differential, ScalarField,
    };
    use crate::geometry::metric::ConstantMetric;

    #[test]
    fn finite_difference_connection_agrees() {
        use crate::space_forms::{model_metric, SignatureKind, SpaceFormSpec};
        let g = model_metric(SpaceFormSpec::new(SignatureKind::Lorentzian, -3.0, 3).unwrap());
        let x = [0.1, -0.15, 0.05];
        let exact = christoffel::<_, f64>(&g, &x).unwrap();
        let fd = christoffel_fd(&g, &x, &DerivativeEngine::default()).unwrap();
        assert!(exact.max_abs_diff(&fd) < 1e-8);
        assert!(exact.max_abs() > 0.1);
    }

    #[test]
    fn flat_metric_has_zero_connection_and_curvature() {
        let g = ConstantMetric::minkowski(3);
        let x = [0.1, -0.05, 0.2];
        assert_eq!(christoffel::<_, f64>(&g, &x).unwrap().max_abs(), 0.0);
        assert_eq!(riemann::<_, f64>(&g, &x).unwrap().max_abs(), 0.0);
        let k = sectional(&g, &x, &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(k, 0.0);
    }

    #[test]
    fn parallel_vectors_span_degenerate_plane() {
        let g = ConstantMetric::euclidean(3);
        let r = sectional(&g, &[0.0; 3], &[1.0, 2.0, 0.0], &[2.0, 4.0, 0.0]);
        assert!(matches!(r, Err(GeometryError::DegeneratePlane(_))));
    }

    #[test]
    fn constant_fields_commute() {
        let v = ConstantField(vec![1.0, 2.0]);
        let w = ConstantField(vec![-0.5, 3.0]);
        assert_eq!(lie_bracket(&v, &w, &[0.2, 0.1]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn bracket_of_linear_field() {
        // V = x¹∂₂, W = ∂₁  →  [V, W] = −∂₂
        let v = AffineField::new(
            Mat::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]),
            vec![0.0, 0.0],
        );
        let w = ConstantField(vec![1.0, 0.0]);
        let b = lie_bracket(&v, &w, &[0.3, -0.7]).unwrap();
        assert_eq!(b, vec![0.0, -1.0]);
    }

    #[test]
    fn exterior_derivative_half_convention() {
        // ω = x¹ dx², dω(∂₁, ∂₂) = ½
        let omega = AffineForm {
            matrix: Mat::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]),
            offset: vec![0.0, 0.0],
        };
        let e1 = ConstantField(vec![1.0, 0.0]);
        let e2 = ConstantField(vec![0.0, 1.0]);
        let d = exterior_d(&omega, &e1, &e2, &[0.4, 0.9]).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        let dm = exterior_d_matrix(&omega, &[0.4, 0.9]).unwrap();
        assert!((dm[(0, 1)] - 0.5).abs() < 1e-15);
    }

    struct Bump;
    impl ScalarField for Bump {
        fn dim(&self) -> usize {
            3
        }
        fn eval<S: Scalar>(&self, x: &[S]) -> Result<S> {
            Ok(x[0] * x[1].sin() + x[2] * x[2] * x[0])
        }
    }

    #[test]
    fn exact_forms_are_closed() {
        let omega = Differential(Bump);
        let v = AffineField::new(
            Mat::from_rows(&[
                vec![0.0, 1.0, 0.0],
                vec![0.5, 0.0, 0.0],
                vec![0.0, 0.0, 2.0],
            ]),
            vec![1.0, 0.0, -1.0],
        );
        let w = ConstantField(vec![0.3, -0.2, 0.9]);
        let x = [0.3, 0.5, -0.4];
        let d = exterior_d(&omega, &v, &w, &x).unwrap();
        assert!(d.abs() < 1e-8);
        let d_rev = exterior_d(&omega, &w, &v, &x).unwrap();
        assert!((d + d_rev).abs() < 1e-12);
    }
}
