//! Scalar abstraction used by every geometric evaluator.
//!
//! Metric components, vector fields and one-forms are written once, generic
//! over [`Scalar`]. Plugging in [`Dual`] (possibly nested) yields exact
//! directional derivatives of any order by forward-mode differentiation.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    fn cst(value: f64) -> Self;

    /// Real part, with every infinitesimal dropped.
    fn re(&self) -> f64;

    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;

    fn zero() -> Self {
        Self::cst(0.0)
    }

    fn one() -> Self {
        Self::cst(1.0)
    }

    fn scale(self, factor: f64) -> Self {
        self * Self::cst(factor)
    }

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc *= self;
        }
        acc
    }
}

impl Scalar for f64 {
    #[inline]
    fn cst(value: f64) -> Self {
        value
    }
    #[inline]
    fn re(&self) -> f64 {
        *self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
}

/// First-order dual number `re + eps·ε` with `ε² = 0`.
///
/// Nesting (`Dual<Dual<f64>>`) gives mixed second derivatives, and so on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Dual { re, eps }
    }

    pub fn constant(re: T) -> Self {
        Dual { re, eps: T::zero() }
    }

    pub fn variable(re: T) -> Self {
        Dual { re, eps: T::one() }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Dual::new(self.re * rhs.re, self.re * rhs.eps + self.eps * rhs.re)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let inv = T::one() / rhs.re;
        let re = self.re * inv;
        Dual::new(re, (self.eps - re * rhs.eps) * inv)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}

impl<T: Scalar> AddAssign for Dual<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Scalar> SubAssign for Dual<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Scalar> MulAssign for Dual<T> {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    #[inline]
    fn cst(value: f64) -> Self {
        Dual::constant(T::cst(value))
    }
    #[inline]
    fn re(&self) -> f64 {
        self.re.re()
    }
    fn sqrt(self) -> Self {
        let root = self.re.sqrt();
        Dual::new(root, self.eps / (root + root))
    }
    fn sin(self) -> Self {
        Dual::new(self.re.sin(), self.eps * self.re.cos())
    }
    fn cos(self) -> Self {
        Dual::new(self.re.cos(), -(self.eps * self.re.sin()))
    }
}

/// Lifts a point to dual numbers seeded along `direction`.
pub fn seed<T: Scalar>(x: &[T], direction: &[T]) -> Vec<Dual<T>> {
    x.iter()
        .zip(direction)
        .map(|(&re, &eps)| Dual::new(re, eps))
        .collect()
}

/// Lifts a point to dual numbers seeded along the coordinate axis `axis`.
pub fn seed_axis<T: Scalar>(x: &[T], axis: usize) -> Vec<Dual<T>> {
    x.iter()
        .enumerate()
        .map(|(i, &re)| {
            if i == axis {
                Dual::variable(re)
            } else {
                Dual::constant(re)
            }
        })
        .collect()
}

pub fn lift<T: Scalar>(x: &[T]) -> Vec<Dual<T>> {
    x.iter().map(|&re| Dual::constant(re)).collect()
}

pub fn to_f64<T: Scalar>(x: &[T]) -> Vec<f64> {
    x.iter().map(Scalar::re).collect()
}

pub fn from_f64<T: Scalar>(x: &[f64]) -> Vec<T> {
    x.iter().map(|&v| T::cst(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let x = Dual::variable(3.0);
        let y = x * x * x;
        assert_eq!(y.re, 27.0);
        assert_eq!(y.eps, 27.0);
    }

    #[test]
    fn nested_second_derivative() {
        // f(x) = x^2 sin x, f'' = 2 sin x + 4x cos x - x^2 sin x
        let x0 = 0.7_f64;
        let x = Dual::new(Dual::variable(x0), Dual::constant(1.0));
        let f = x * x * x.sin();
        let expected = 2.0 * x0.sin() + 4.0 * x0 * x0.cos() - x0 * x0 * x0.sin();
        assert!((f.eps.eps - expected).abs() < 1e-14);
    }

    #[test]
    fn quotient_and_sqrt() {
        let x = Dual::variable(4.0_f64);
        let f = Dual::cst(1.0) / x.sqrt();
        assert!((f.re - 0.5).abs() < 1e-15);
        assert!((f.eps + 1.0 / 16.0).abs() < 1e-15);
    }
}
