//! Derivative engines.
//!
//! Geometric evaluators differentiate through [`crate::scalar::Dual`]
//! (forward mode, exact up to rounding). [`DerivativeEngine`] is the
//! central-difference alternative for plain `f64` closures; it is kept as an
//! independent cross-check of the dual-number path.

use serde::Serialize;

use crate::linalg::Mat;

/// Name recorded in reports for the derivative scheme in use.
pub const SCHEME: &str = "forward-mode dual numbers";

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivativeEngine {
    /// Relative step for first derivatives.
    pub first_step: f64,
    /// Relative step for second derivatives.
    pub second_step: f64,
}

impl Default for DerivativeEngine {
    fn default() -> Self {
        DerivativeEngine {
            first_step: 1e-6,
            second_step: 1e-4,
        }
    }
}

impl DerivativeEngine {
    pub fn with_steps(first_step: f64, second_step: f64) -> Self {
        DerivativeEngine {
            first_step,
            second_step,
        }
    }

    fn step(base: f64, x: f64) -> f64 {
        base * x.abs().max(1.0)
    }

    pub fn gradient(&self, f: impl Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
        let mut probe = x.to_vec();
        (0..x.len())
            .map(|i| {
                let h = Self::step(self.first_step, x[i]);
                probe[i] = x[i] + h;
                let plus = f(&probe);
                probe[i] = x[i] - h;
                let minus = f(&probe);
                probe[i] = x[i];
                (plus - minus) / (2.0 * h)
            })
            .collect()
    }

    pub fn hessian(&self, f: impl Fn(&[f64]) -> f64, x: &[f64]) -> Mat<f64> {
        let n = x.len();
        let mut probe = x.to_vec();
        let f0 = f(x);
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            let hi = Self::step(self.second_step, x[i]);
            probe[i] = x[i] + hi;
            let plus = f(&probe);
            probe[i] = x[i] - hi;
            let minus = f(&probe);
            probe[i] = x[i];
            out[(i, i)] = (plus - 2.0 * f0 + minus) / (hi * hi);
            for j in (i + 1)..n {
                let hj = Self::step(self.second_step, x[j]);
                let mut eval = |si: f64, sj: f64| {
                    probe[i] = x[i] + si * hi;
                    probe[j] = x[j] + sj * hj;
                    let v = f(&probe);
                    probe[i] = x[i];
                    probe[j] = x[j];
                    v
                };
                let mixed = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0))
                    / (4.0 * hi * hj);
                out[(i, j)] = mixed;
                out[(j, i)] = mixed;
            }
        }
        out
    }

    /// Partial derivatives of a vector-valued map; entry `[a]` is `∂_a f`.
    pub fn jacobian(&self, f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64]) -> Vec<Vec<f64>> {
        let mut probe = x.to_vec();
        (0..x.len())
            .map(|a| {
                let h = Self::step(self.first_step, x[a]);
                probe[a] = x[a] + h;
                let plus = f(&probe);
                probe[a] = x[a] - h;
                let minus = f(&probe);
                probe[a] = x[a];
                plus.iter()
                    .zip(&minus)
                    .map(|(p, m)| (p - m) / (2.0 * h))
                    .collect()
            })
            .collect()
    }
}
