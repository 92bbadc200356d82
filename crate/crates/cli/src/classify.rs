//! Realizations of a Boeckx invariant by the two model families.

use kmuforge_core::contact::pang::EXACT_EQUALITY_TOL;
use kmuforge_core::contact::{
    boeckx_from_curvature, boeckx_from_kmu, class_from_invariant, Boeckx, PangClass,
};
use kmuforge_core::space_forms::SignatureKind;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClassifyInput {
    Invariant(f64),
    Kmu { k: f64, mu: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct Realization {
    pub kind: SignatureKind,
    pub c: f64,
    pub class_label: PangClass,
    /// `|I(kind, c) − I|`
    pub round_trip_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    pub invariant: f64,
    pub class_label: PangClass,
    pub realizations: Vec<Realization>,
    pub normal_form: String,
    pub class_b_reading: &'static str,
}

pub const CLASS_B_READING: &str = "class (b) is taken as -1 < I < 1";

/// Curvatures `c` of each family with the given invariant.
pub fn solve_branches(invariant: f64) -> Vec<(SignatureKind, f64)> {
    let i = invariant;
    let mut out = Vec::new();
    // unit tangent sphere bundle: I = (1+c)/|1-c|
    if i > -1.0 {
        out.push((SignatureKind::Riemannian, (i - 1.0) / (i + 1.0)));
    }
    if i > 1.0 {
        out.push((SignatureKind::Riemannian, (i + 1.0) / (i - 1.0)));
    }
    // tangent hyperquadric bundle: I = (c-1)/|c+1|
    if i < 1.0 {
        out.push((SignatureKind::Lorentzian, (1.0 + i) / (1.0 - i)));
    }
    if i < -1.0 {
        out.push((SignatureKind::Lorentzian, (1.0 - i) / (1.0 + i)));
    }
    out
}

pub fn cmd_classify(input: ClassifyInput) -> Result<Classification, CliError> {
    let (invariant, k, mu) = match input {
        ClassifyInput::Invariant(i) => (i, None, None),
        ClassifyInput::Kmu { k, mu } => {
            if k >= 1.0 {
                return Err(CliError::SasakianInput);
            }
            match boeckx_from_kmu(k, mu)? {
                Boeckx::Value(i) => (i, Some(k), Some(mu)),
                Boeckx::Sasakian => return Err(CliError::SasakianInput),
            }
        }
    };
    if !invariant.is_finite() {
        return Err(CliError::Usage(format!(
            "invariant must be finite, got {invariant}"
        )));
    }
    let class_label = class_from_invariant(invariant, EXACT_EQUALITY_TOL);
    let realizations = solve_branches(invariant)
        .into_iter()
        .map(|(kind, c)| {
            let forward = boeckx_from_curvature(kind, c).value().unwrap_or(f64::NAN);
            Realization {
                kind,
                c,
                class_label: class_from_invariant(forward, EXACT_EQUALITY_TOL),
                round_trip_error: (forward - invariant).abs(),
            }
        })
        .collect();
    let normal_form = if invariant <= -1.0 {
        "I <= -1: locally equivalent, up to a D-homothetic deformation, to the tangent hyperquadric bundle of a Lorentzian space form with c <= 0, c != -1"
    } else {
        "I > -1: locally equivalent, up to a D-homothetic deformation, to the unit tangent sphere bundle of a Riemannian space form with c != 1"
    };
    Ok(Classification {
        schema_version: crate::SCHEMA_VERSION,
        k,
        mu,
        invariant,
        class_label,
        realizations,
        normal_form: normal_form.to_string(),
        class_b_reading: CLASS_B_READING,
    })
}
