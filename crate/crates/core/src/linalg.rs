//! Small dense linear algebra.
//!
//! [`Mat`] is a row-major matrix generic over [`Scalar`] so that metric
//! inverses can be differentiated. The `f64`-only routines ([`sym_eigen`],
//! [`lstsq_fit`]) delegate the factorizations to nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j])
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<S>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, j)];
            }
            acc
        })
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (k, &vk) in v.iter().enumerate() {
                    acc += self[(i, k)] * vk;
                }
                acc
            })
            .collect()
    }

    /// Bilinear form `aᵀ M b`.
    pub fn form(&self, a: &[S], b: &[S]) -> S {
        let mb = self.apply(b);
        dot(a, &mb)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> Mat<T> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn sub(&self, other: &Mat<S>) -> Mat<S> {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn add(&self, other: &Mat<S>) -> Mat<S> {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn scaled(&self, factor: S) -> Mat<S> {
        self.map(|v| v * factor)
    }

    /// Solves `M X = B` by Gaussian elimination with partial pivoting on the
    /// real parts.
    pub fn solve(&self, rhs: &Mat<S>) -> Result<Mat<S>> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        assert_eq!(n, rhs.rows);
        let scale = self
            .data
            .iter()
            .map(|v| v.re().abs())
            .fold(0.0_f64, f64::max);
        if scale == 0.0 {
            return Err(GeometryError::DegenerateMetric);
        }
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| a[(p, col)].re().abs().total_cmp(&a[(q, col)].re().abs()))
                .unwrap();
            if a[(pivot, col)].re().abs() <= 1e-13 * scale {
                return Err(GeometryError::DegenerateMetric);
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                for j in 0..b.cols {
                    b.data.swap(pivot * b.cols + j, col * b.cols + j);
                }
            }
            let inv = S::one() / a[(col, col)];
            for row in (col + 1)..n {
                let factor = a[(row, col)] * inv;
                for j in col..n {
                    let v = a[(col, j)];
                    a[(row, j)] -= factor * v;
                }
                for j in 0..b.cols {
                    let v = b[(col, j)];
                    b[(row, j)] -= factor * v;
                }
            }
        }
        let mut x = Mat::zeros(n, b.cols);
        for j in 0..b.cols {
            for row in (0..n).rev() {
                let mut acc = b[(row, j)];
                for k in (row + 1)..n {
                    acc -= a[(row, k)] * x[(k, j)];
                }
                x[(row, j)] = acc / a[(row, row)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Mat<S>> {
        self.solve(&Mat::identity(self.rows))
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map_f64()
    }

    fn map_f64(&self) -> Mat<f64> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::re).collect(),
        }
    }
}

impl Mat<f64> {
    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl<S> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (&x, &y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn axpy<S: Scalar>(alpha: S, x: &[S], y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(&a, &b)| alpha * a + b).collect()
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn scale<S: Scalar>(alpha: S, a: &[S]) -> Vec<S> {
    a.iter().map(|&x| alpha * x).collect()
}

pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Default tolerance for merging nearby eigenvalues into one group.
pub const CLUSTER_TOL: f64 = 1e-4;
/// Default bound on the self-adjointness residual `‖mS − (mS)ᵀ‖`.
pub const SELF_ADJOINT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct EigenGroup {
    pub value: f64,
    pub multiplicity: usize,
    /// m-orthonormal basis of the eigenspace (not serialized).
    #[serde(skip)]
    pub vectors: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct SymEigen {
    /// Individual eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Matching m-orthonormal eigenvectors.
    pub vectors: Vec<Vec<f64>>,
    pub groups: Vec<EigenGroup>,
}

impl SymEigen {
    /// Rebuilds `Σ λ v vᵀ m` from the decomposition.
    pub fn reconstruct(&self, m: &Mat<f64>) -> Mat<f64> {
        let n = m.rows();
        let mut out = Mat::zeros(n, n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            let mv = m.apply(v);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += lambda * v[i] * mv[j];
                }
            }
        }
        out
    }

    /// Orthogonal (w.r.t. `m`) projector onto the eigenspace of `group`.
    pub fn projector(&self, group: usize, m: &Mat<f64>) -> Mat<f64> {
        let n = m.rows();
        let mut out = Mat::zeros(n, n);
        for v in &self.groups[group].vectors {
            let mv = m.apply(v);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[i] * mv[j];
                }
            }
        }
        out
    }
}

/// Eigen-decomposition of an operator `s` that is self-adjoint with respect
/// to the positive-definite form `m`.
pub fn sym_eigen(s: &Mat<f64>, m: &Mat<f64>, cluster_tol: f64) -> Result<SymEigen> {
    sym_eigen_with(s, m, cluster_tol, SELF_ADJOINT_TOL)
}

pub fn sym_eigen_with(
    s: &Mat<f64>,
    m: &Mat<f64>,
    cluster_tol: f64,
    adjoint_tol: f64,
) -> Result<SymEigen> {
    let n = s.rows();
    if s.cols() != n || m.rows() != n || m.cols() != n {
        return Err(GeometryError::DimensionMismatch {
            expected: n,
            found: m.rows(),
        });
    }
    let ms = m.matmul(s);
    let residual = ms.sub(&ms.transpose()).max_abs();
    if residual > adjoint_tol {
        return Err(GeometryError::NotSelfAdjoint(residual));
    }
    let chol =
        nalgebra::Cholesky::new(m.to_nalgebra()).ok_or(GeometryError::NotPositiveDefinite)?;
    let l = chol.l();
    let l_inv_t = l
        .clone()
        .try_inverse()
        .ok_or(GeometryError::NotPositiveDefinite)?
        .transpose();
    let a = l.transpose() * s.to_nalgebra() * &l_inv_t;
    let a = (&a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(a);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let y: DVector<f64> = eig.eigenvectors.column(i).into_owned();
            (&l_inv_t * y).iter().copied().collect()
        })
        .collect();

    let mut groups: Vec<EigenGroup> = Vec::new();
    let mut last = f64::INFINITY;
    for (value, vector) in values.iter().zip(&vectors) {
        match groups.last_mut() {
            Some(group) if (last - value).abs() <= cluster_tol => {
                let total = group.value * group.multiplicity as f64 + value;
                group.multiplicity += 1;
                group.value = total / group.multiplicity as f64;
                group.vectors.push(vector.clone());
            }
            _ => groups.push(EigenGroup {
                value: *value,
                multiplicity: 1,
                vectors: vec![vector.clone()],
            }),
        }
        last = *value;
    }
    Ok(SymEigen {
        values,
        vectors,
        groups,
    })
}

/// Smallest singular value below which a design matrix is rank deficient.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct LstsqSolution {
    pub coefficients: Vec<f64>,
    pub residual: f64,
    pub smallest_singular_value: f64,
}

/// Minimizes `‖A c − b‖₂` for a full-column-rank design matrix.
pub fn lstsq_fit(a: &Mat<f64>, b: &[f64]) -> Result<LstsqSolution> {
    if a.rows() != b.len() {
        return Err(GeometryError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    if a.rows() < a.cols() {
        return Err(GeometryError::IndeterminateFit(0.0));
    }
    let svd = a.to_nalgebra().svd(true, true);
    let smallest = svd
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if smallest <= RANK_TOL {
        return Err(GeometryError::IndeterminateFit(smallest));
    }
    let rhs = DVector::from_column_slice(b);
    let c = svd
        .solve(&rhs, 0.0)
        .map_err(|_| GeometryError::IndeterminateFit(smallest))?;
    let coefficients: Vec<f64> = c.iter().copied().collect();
    let fitted = a.apply(&coefficients);
    let residual = norm(&sub(&fitted, b));
    Ok(LstsqSolution {
        coefficients,
        residual,
        smallest_singular_value: smallest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64]) -> Mat<f64> {
        let n = values.len();
        Mat::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 })
    }

    #[test]
    fn identity_has_single_group() {
        let eig = sym_eigen(&Mat::identity(4), &Mat::identity(4), CLUSTER_TOL).unwrap();
        assert_eq!(eig.groups.len(), 1);
        assert_eq!(eig.groups[0].multiplicity, 4);
        assert!((eig.groups[0].value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn near_degenerate_values_cluster() {
        let s = diag(&[2.0, 2.0 + 1e-6, -1.0]);
        let eig = sym_eigen(&s, &Mat::identity(3), CLUSTER_TOL).unwrap();
        assert_eq!(eig.groups.len(), 2);
        assert_eq!(eig.groups[0].multiplicity, 2);
        assert!((eig.groups[0].value - 2.0).abs() < 1e-5);
        assert_eq!(eig.groups[1].multiplicity, 1);
        assert!((eig.groups[1].value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_problem_is_m_orthonormal() {
        let m = Mat::from_rows(&[
            vec![2.0, 0.3, 0.0],
            vec![0.3, 1.0, 0.1],
            vec![0.0, 0.1, 3.0],
        ]);
        // s = m⁻¹ k with k symmetric is m-self-adjoint
        let k = Mat::from_rows(&[
            vec![1.0, 2.0, 0.5],
            vec![2.0, -1.0, 0.0],
            vec![0.5, 0.0, 4.0],
        ]);
        let s = m.solve(&k).unwrap();
        let eig = sym_eigen(&s, &m, CLUSTER_TOL).unwrap();
        for (i, vi) in eig.vectors.iter().enumerate() {
            for (j, vj) in eig.vectors.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((m.form(vi, vj) - expected).abs() < 1e-8);
            }
        }
        assert!(eig.reconstruct(&m).sub(&s).max_abs() < 1e-10);
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn non_self_adjoint_is_rejected() {
        let s = Mat::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
        assert!(matches!(
            sym_eigen(&s, &Mat::identity(2), CLUSTER_TOL),
            Err(GeometryError::NotSelfAdjoint(_))
        ));
    }

    #[test]
    fn lstsq_identity() {
        let b = [0.5, -2.0, 3.25];
        let sol = lstsq_fit(&Mat::identity(3), &b).unwrap();
        for (c, e) in sol.coefficients.iter().zip(b) {
            assert!((c - e).abs() < 1e-14);
        }
        assert!(sol.residual < 1e-14);
    }

    #[test]
    fn lstsq_overdetermined_consistent() {
        let a = Mat::from_rows(&[
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![1.0, 2.0],
            vec![1.0, 3.0],
        ]);
        let b = [1.0, 3.0, 5.0, 7.0];
        let sol = lstsq_fit(&a, &b).unwrap();
        assert!((sol.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((sol.coefficients[1] - 2.0).abs() < 1e-12);
        assert!(sol.residual <= 1e-12);
    }

    #[test]
    fn lstsq_rank_deficient() {
        let a = Mat::from_rows(&[vec![1.0, 0.0], vec![2.0, 0.0], vec![3.0, 0.0]]);
        assert!(matches!(
            lstsq_fit(&a, &[1.0, 2.0, 3.0]),
            Err(GeometryError::IndeterminateFit(_))
        ));
    }

    #[test]
    fn solve_detects_singular() {
        let a = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(a.inverse(), Err(GeometryError::DegenerateMetric));
    }
}
