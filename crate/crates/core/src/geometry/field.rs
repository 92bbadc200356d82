//! Vector fields, scalar fields and one-forms on a chart.

use crate::error::Result;
use crate::linalg::Mat;
use crate::scalar::{self, Dual, Scalar};

pub trait VectorField {
    fn dim(&self) -> usize;
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>>;
}

pub trait ScalarField {
    fn dim(&self) -> usize;
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<S>;
}

/// A one-form, evaluated as its covector components at a point.
pub trait OneForm {
    fn dim(&self) -> usize;
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>>;
}

impl<V: VectorField> VectorField for &V {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        (**self).eval(x)
    }
}

impl<W: OneForm> OneForm for &W {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        (**self).eval(x)
    }
}

/// Derivative of `field` at `x` along `direction`.
pub fn directional_derivative<V: VectorField, S: Scalar>(
    field: &V,
    x: &[S],
    direction: &[S],
) -> Result<Vec<S>> {
    let values = field.eval(&scalar::seed(x, direction))?;
    Ok(values.iter().map(|d: &Dual<S>| d.eps).collect())
}

pub fn scalar_directional_derivative<F: ScalarField, S: Scalar>(
    f: &F,
    x: &[S],
    direction: &[S],
) -> Result<S> {
    Ok(f.eval(&scalar::seed(x, direction))?.eps)
}

/// Field with the same components everywhere.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantField(pub Vec<f64>);

impl VectorField for ConstantField {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn eval<S: Scalar>(&self, _x: &[S]) -> Result<Vec<S>> {
        Ok(scalar::from_f64(&self.0))
    }
}

/// Affine field `V(x) = A x + b`.
#[derive(Clone, Debug)]
pub struct AffineField {
    pub matrix: Mat<f64>,
    pub offset: Vec<f64>,
}

impl AffineField {
    pub fn new(matrix: Mat<f64>, offset: Vec<f64>) -> Self {
        AffineField { matrix, offset }
    }
}

impl VectorField for AffineField {
    fn dim(&self) -> usize {
        self.offset.len()
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        let m: Mat<S> = self.matrix.map(S::cst);
        let ax = m.apply(x);
        Ok(ax
            .iter()
            .zip(&self.offset)
            .map(|(&v, &b)| v + S::cst(b))
            .collect())
    }
}

/// Affine one-form `ω_i(x) = Σ_j A_ij x^j + b_i`.
#[derive(Clone, Debug)]
pub struct AffineForm {
    pub matrix: Mat<f64>,
    pub offset: Vec<f64>,
}

impl OneForm for AffineForm {
    fn dim(&self) -> usize {
        self.offset.len()
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        AffineField {
            matrix: self.matrix.clone(),
            offset: self.offset.clone(),
        }
        .eval(x)
    }
}

/// The exact form `df`.
#[derive(Clone, Debug)]
pub struct Differential<F>(pub F);

impl<F: ScalarField> OneForm for Differential<F> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        (0..x.len())
            .map(|a| Ok(self.0.eval(&scalar::seed_axis(x, a))?.eps))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_field_derivative() {
        let field = AffineField::new(
            Mat::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]),
            vec![0.0, 0.0],
        );
        let d = directional_derivative(&field, &[0.3, 0.4], &[1.0, 0.0]).unwrap();
        assert_eq!(d, vec![0.0, 1.0]);
    }
}
