//! Pang invariants of the eigendistributions of `h` and the five-class
//! classification of non-Sasakian (k,μ)-spaces.

use serde::Serialize;

use crate::bundle::{BundlePoint, ContactFrame, ContactStructure};
use crate::contact::fit::KmuFit;
use crate::contact::operator::{h_matrix, HSpectrum};
use crate::error::{GeometryError, Result};
use crate::geometry::curvature::lie_bracket;
use crate::geometry::metric::MetricField;
use crate::linalg::Mat;

/// `|factor|` at or below which a distribution counts as flat.
pub const FLAT_TOL: f64 = 1e-3;
/// Tolerance on `I = ±1` for fitted invariants.
pub const FITTED_EQUALITY_TOL: f64 = 1e-3;
/// Tolerance on `I = ±1` for exact input.
pub const EXACT_EQUALITY_TOL: f64 = 1e-9;
/// Relative bound on `‖PX − X‖` for eigendistribution membership.
pub const MEMBERSHIP_TOL: f64 = 1e-6;

/// Eigendistribution of `h`, labelled by the sign of its eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Definiteness {
    Positive,
    Negative,
    Flat,
}

impl Definiteness {
    pub fn of(factor: f64) -> Self {
        if factor.abs() <= FLAT_TOL {
            Definiteness::Flat
        } else if factor > 0.0 {
            Definiteness::Positive
        } else {
            Definiteness::Negative
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PangClass {
    A,
    B,
    C,
    D,
    E,
}

impl PangClass {
    pub fn label(self) -> &'static str {
        match self {
            PangClass::A => "a",
            PangClass::B => "b",
            PangClass::C => "c",
            PangClass::D => "d",
            PangClass::E => "e",
        }
    }
}

impl std::fmt::Display for PangClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PangReport {
    pub factor_plus: f64,
    pub factor_minus: f64,
    pub plus: Definiteness,
    pub minus: Definiteness,
    pub class_label: PangClass,
}

/// `((λ+1)² − k − μλ)/λ` on `D(λ)`, `(−(λ−1)² + k − μλ)/λ` on `D(−λ)`.
pub fn pang_factor(k: f64, mu: f64, which: Distribution) -> Result<f64> {
    if k >= 1.0 {
        return Err(GeometryError::Sasakian("Pang factors need k < 1"));
    }
    let lambda = (1.0 - k).sqrt();
    if lambda <= 1e-6 {
        return Err(GeometryError::Sasakian("Pang factors need λ > 0"));
    }
    Ok(match which {
        Distribution::Plus => ((lambda + 1.0).powi(2) - k - mu * lambda) / lambda,
        Distribution::Minus => (-(lambda - 1.0).powi(2) + k - mu * lambda) / lambda,
    })
}

pub fn pang_expected_factor(fit: &KmuFit, which: Distribution) -> Result<f64> {
    match fit.mu {
        Some(mu) if !fit.sasakian => pang_factor(fit.k, mu, which),
        _ => Err(GeometryError::Sasakian(
            "Pang factors are undefined for Sasakian fits",
        )),
    }
}

pub fn class_from_pattern(plus: Definiteness, minus: Definiteness) -> Result<PangClass> {
    use Definiteness::*;
    match (plus, minus) {
        (Positive, Positive) => Ok(PangClass::A),
        (Positive, Negative) => Ok(PangClass::B),
        (Negative, Negative) => Ok(PangClass::C),
        (Positive, Flat) => Ok(PangClass::D),
        (Flat, Negative) => Ok(PangClass::E),
        (p, m) => Err(GeometryError::ClassificationMismatch(format!(
            "no class has D(λ) {p:?} and D(−λ) {m:?}"
        ))),
    }
}

/// Class predicted by the Boeckx invariant; `|I ∓ 1| ≤ tol` are the boundary cases.
pub fn class_from_invariant(invariant: f64, tol: f64) -> PangClass {
    if (invariant - 1.0).abs() <= tol {
        PangClass::D
    } else if (invariant + 1.0).abs() <= tol {
        PangClass::E
    } else if invariant > 1.0 {
        PangClass::A
    } else if invariant > -1.0 {
        PangClass::B
    } else {
        PangClass::C
    }
}

/// Labels the factor pair and, when `invariant` is given, cross-checks the
/// label against the invariant's thresholds.
pub fn classify_pang(
    factor_plus: f64,
    factor_minus: f64,
    invariant: Option<f64>,
    tol: f64,
) -> Result<PangReport> {
    let plus = Definiteness::of(factor_plus);
    let minus = Definiteness::of(factor_minus);
    let class_label = class_from_pattern(plus, minus)?;
    if let Some(i) = invariant {
        let predicted = class_from_invariant(i, tol);
        if predicted != class_label {
            return Err(GeometryError::ClassificationMismatch(format!(
                "definiteness gives {class_label} but I = {i} gives {predicted}"
            )));
        }
    }
    Ok(PangReport {
        factor_plus,
        factor_minus,
        plus,
        minus,
        class_label,
    })
}

/// Eigendistributions of `h` at one point.
pub struct Eigendistributions {
    pub frame: ContactFrame,
    pub spectrum: HSpectrum,
    pub plus: Mat<f64>,
    pub minus: Mat<f64>,
}

impl Eigendistributions {
    pub fn new<M: MetricField>(s: &ContactStructure<M>, t: &BundlePoint) -> Result<Self> {
        let frame = s.contact_frame(t)?;
        let h = h_matrix(s, t, &frame)?;
        let spectrum = HSpectrum::from_matrix(&h, &frame.metric)?;
        if spectrum.is_sasakian() {
            return Err(GeometryError::Sasakian("h vanishes, no eigendistributions"));
        }
        let groups = &spectrum.groups;
        let top = 0;
        let bottom = groups.len() - 1;
        if groups[top].value <= 0.0 || groups[bottom].value >= 0.0 {
            return Err(GeometryError::ClassificationMismatch(
                "spectrum of h is not symmetric about zero".into(),
            ));
        }
        let plus = spectrum.eigen.projector(top, &frame.metric);
        let minus = spectrum.eigen.projector(bottom, &frame.metric);
        Ok(Eigendistributions {
            frame,
            spectrum,
            plus,
            minus,
        })
    }

    pub fn projector(&self, which: Distribution) -> &Mat<f64> {
        match which {
            Distribution::Plus => &self.plus,
            Distribution::Minus => &self.minus,
        }
    }

    pub fn eigenvalue(&self, which: Distribution) -> f64 {
        let groups = &self.spectrum.groups;
        match which {
            Distribution::Plus => groups[0].value,
            Distribution::Minus => groups[groups.len() - 1].value,
        }
    }

    fn check_member(&self, which: Distribution, x: &[f64]) -> Result<()> {
        let g = &self.frame.metric;
        let px = self.projector(which).apply(x);
        let d: Vec<f64> = px.iter().zip(x).map(|(a, b)| a - b).collect();
        let defect = g.form(&d, &d).max(0.0).sqrt();
        let size = g.form(x, x).max(0.0).sqrt();
        if defect > MEMBERSHIP_TOL * size.max(1.0) {
            return Err(GeometryError::NotInDistribution(defect));
        }
        Ok(())
    }
}

/// `Π(X,Y) = 2dη([ξ, X̃], Y)` with `X̃` the constant-component extension of `X`.
pub fn pang_invariant<M: MetricField>(
    s: &ContactStructure<M>,
    t: &BundlePoint,
    which: Distribution,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    let dist = Eigendistributions::new(s, t)?;
    pang_invariant_in(s, &dist, which, x, y)
}

pub fn pang_invariant_in<M: MetricField>(
    s: &ContactStructure<M>,
    dist: &Eigendistributions,
    which: Distribution,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    dist.check_member(which, x)?;
    dist.check_member(which, y)?;
    let field = s.extension(&dist.frame.point, x)?;
    let bracket = lie_bracket(&s.reeb_field(), &field, &dist.frame.coordinates)?;
    Ok(2.0 * dist.frame.d_eta.form(&bracket, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_factors() {
        assert!(pang_factor(0.0, 4.0, Distribution::Plus).unwrap().abs() < 1e-15);
        assert_eq!(pang_factor(-3.0, 10.0, Distribution::Plus).unwrap(), -4.0);
        assert_eq!(pang_factor(-3.0, 10.0, Distribution::Minus).unwrap(), -12.0);
        assert!(pang_factor(1.0, 0.0, Distribution::Plus).is_err());
    }

    #[test]
    fn patterns() {
        use Definiteness::*;
        assert_eq!(
            class_from_pattern(Positive, Positive).unwrap(),
            PangClass::A
        );
        assert_eq!(class_from_pattern(Flat, Negative).unwrap(), PangClass::E);
        assert!(matches!(
            class_from_pattern(Flat, Positive),
            Err(GeometryError::ClassificationMismatch(_))
        ));
        assert_eq!(Definiteness::of(5e-4), Flat);
        assert_eq!(Definiteness::of(-2e-3), Negative);
    }

    #[test]
    fn thresholds() {
        assert_eq!(class_from_invariant(3.0, EXACT_EQUALITY_TOL), PangClass::A);
        assert_eq!(class_from_invariant(0.0, EXACT_EQUALITY_TOL), PangClass::B);
        assert_eq!(class_from_invariant(-2.0, EXACT_EQUALITY_TOL), PangClass::C);
        assert_eq!(
            class_from_invariant(1.0005, FITTED_EQUALITY_TOL),
            PangClass::D
        );
        assert_eq!(class_from_invariant(-1.0, EXACT_EQUALITY_TOL), PangClass::E);
        assert_eq!(
            class_from_invariant(-1.0005, EXACT_EQUALITY_TOL),
            PangClass::C
        );
    }

    #[test]
    fn classify_cross_checks_invariant() {
        let r = classify_pang(-4.0, -12.0, Some(-2.0), FITTED_EQUALITY_TOL).unwrap();
        assert_eq!(r.class_label, PangClass::C);
        assert!(classify_pang(-4.0, -12.0, Some(0.0), FITTED_EQUALITY_TOL).is_err());
    }
}
