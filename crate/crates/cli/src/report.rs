//! Full verification run for one model space.

use std::time::Instant;

use kmuforge_core::bundle::frame::FrameResiduals;
use kmuforge_core::bundle::index_of;
use kmuforge_core::bundle::{ContactStructure, FiberLevel, Lift};
use kmuforge_core::contact::fit::kmu_fit_analyses;
use kmuforge_core::contact::pang::{pang_invariant_in, Eigendistributions, FITTED_EQUALITY_TOL};
use kmuforge_core::contact::{
    boeckx_from_curvature, boeckx_invariant, check_cr_symmetry, classify_pang,
    cr_integrability_residual, d_homothety, pang_expected_factor, reeb_derivative_residual,
    sample_pairs, Boeckx, DeformationCheck, DeformationSpec, Distribution, HSpectrum, KmuFit,
    PangReport, PointAnalysis, SymmetryCheck,
};
use kmuforge_core::geometry::curvature::christoffel_fd;
use kmuforge_core::geometry::derivative::SCHEME;
use kmuforge_core::geometry::{christoffel, ConstantField, DerivativeEngine, MetricField};
use kmuforge_core::linalg::{norm, EigenGroup};
use kmuforge_core::sampling::{Sampler, BASE_BOX, FIBER_BOX, RNG_NAME};
use kmuforge_core::space_forms::{curvature_check, model_metric, SignatureKind, SpaceFormSpec};
use serde::Serialize;

use crate::classify::CLASS_B_READING;
use crate::CliError;

pub const MIN_SAMPLES: usize = 8;
pub const HOMOTHETY_FACTORS: [f64; 2] = [0.5, 2.0];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub space_form: f64,
    pub constraint: f64,
    pub derivative_cross_check: f64,
    pub brackets: f64,
    pub beta: f64,
    pub sasaki_normal: f64,
    pub frame_algebraic: f64,
    pub frame_differential: f64,
    pub h_operator: f64,
    pub h_reeb: f64,
    pub h_trace: f64,
    pub spectrum: f64,
    pub reeb_derivative: f64,
    pub kmu_residual: f64,
    pub closed_form_k: f64,
    pub closed_form_mu: f64,
    pub invariant: f64,
    pub pang: f64,
    pub integrability: f64,
    pub symmetry: f64,
    pub homothety_kmu: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            space_form: 5e-4,
            constraint: 1e-10,
            derivative_cross_check: 1e-6,
            brackets: 5e-4,
            beta: 1e-5,
            sasaki_normal: 1e-10,
            frame_algebraic: 1e-8,
            frame_differential: 1e-6,
            h_operator: 1e-5,
            h_reeb: 1e-6,
            h_trace: 1e-4,
            spectrum: 1e-4,
            reeb_derivative: 5e-3,
            kmu_residual: 5e-3,
            closed_form_k: 1e-2,
            closed_form_mu: 5e-2,
            invariant: 1e-2,
            pang: 1e-3,
            integrability: 5e-3,
            symmetry: 1e-6,
            homothety_kmu: 5e-2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub kind: SignatureKind,
    pub c: f64,
    pub base_dim: usize,
    pub samples: usize,
    pub seed: u64,
    #[serde(skip)]
    pub timestamp: bool,
    #[serde(skip)]
    pub tolerances: Tolerances,
    #[serde(skip)]
    pub engine: DerivativeEngine,
}

impl RunConfig {
    pub fn new(
        kind: SignatureKind,
        c: f64,
        base_dim: usize,
        samples: usize,
        seed: u64,
    ) -> Result<Self, CliError> {
        if samples < MIN_SAMPLES {
            return Err(CliError::Usage(format!(
                "--samples must be at least {MIN_SAMPLES}"
            )));
        }
        if base_dim < 2 {
            return Err(CliError::Usage("--dim must be at least 2".into()));
        }
        if !c.is_finite() {
            return Err(CliError::Usage("--c must be finite".into()));
        }
        Ok(RunConfig {
            kind,
            c,
            base_dim,
            samples,
            seed,
            timestamp: true,
            tolerances: Tolerances::default(),
            engine: DerivativeEngine::default(),
        })
    }

    pub fn without_timestamp(mut self) -> Self {
        self.timestamp = false;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub kind: SignatureKind,
    pub c: f64,
    pub base_dim: usize,
    pub bundle_dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub rng: &'static str,
    pub base_box: f64,
    pub fiber_box: f64,
    pub derivative_scheme: &'static str,
    pub cross_check_steps: DerivativeEngine,
    pub fiber_level: FiberLevel,
    pub sheet: &'static str,
    pub tolerances: Tolerances,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// `"max"`: passes when `value ≤ tolerance`; `"min"`: when `value > tolerance`.
    pub bound: &'static str,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            value,
            bound: "max",
            tolerance,
            passed: value <= tolerance,
        }
    }

    fn above(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            value,
            bound: "min",
            tolerance,
            passed: value > tolerance,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumSummary {
    /// Groups at the first sample point.
    pub groups: Vec<EigenGroup>,
    pub max_norm: f64,
    pub sasakian: bool,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClosedForm {
    pub k: f64,
    pub mu: f64,
    pub invariant: Boeckx,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub checks: Vec<Check>,
    pub frame_residuals: FrameResiduals,
    pub h_spectrum: SpectrumSummary,
    pub kmu_fit: KmuFit,
    pub boeckx_invariant: Boeckx,
    pub closed_form: ClosedForm,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pang: Option<PangReport>,
    pub class_b_reading: &'static str,
    pub integrability_residual: f64,
    pub symmetry: SymmetryCheck,
    pub d_homothety: Vec<DeformationCheck>,
    pub passed: bool,
    pub failed_checks: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

/// `(k, μ)` of the model family in closed form.
pub fn closed_form(kind: SignatureKind, c: f64) -> ClosedForm {
    let (k, mu) = match kind {
        SignatureKind::Lorentzian => (1.0 - (c + 1.0).powi(2), 4.0 - 2.0 * c),
        SignatureKind::Riemannian => (c * (2.0 - c), -2.0 * c),
    };
    ClosedForm {
        k,
        mu,
        invariant: boeckx_from_curvature(kind, c),
    }
}

pub fn cmd_report(config: &RunConfig) -> Result<StructureReport, CliError> {
    let started = Instant::now();
    let tol = config.tolerances;
    let spec = SpaceFormSpec::new(config.kind, config.c, config.base_dim)?;
    let base = model_metric(spec);
    let level = FiberLevel::from(config.kind);
    let s = ContactStructure::new(base.clone(), level);
    let m = config.base_dim;
    let dim = s.dim();
    let mut checks = Vec::new();

    checks.push(Check::at_most(
        "space_form_curvature",
        curvature_check(&base, config.c, config.samples, config.seed)?,
        tol.space_form,
    ));

    let mut sampler = Sampler::new(config.seed);
    let samples = sample_pairs(&s, config.samples, &mut sampler)?;
    let bundle = s.chart().bundle();
    let expected_index = 2 * spec.signature().negatives();

    let mut constraint: f64 = 0.0;
    let mut cross_check: f64 = 0.0;
    let mut brackets: f64 = 0.0;
    let mut beta: f64 = 0.0;
    let mut normal: f64 = 0.0;
    let mut index_mismatches = 0usize;
    let mut frame_residuals = FrameResiduals::identity();
    let mut self_adjoint: f64 = 0.0;
    let mut h_reeb: f64 = 0.0;
    let mut anticommute: f64 = 0.0;
    let mut trace: f64 = 0.0;
    let mut reeb_derivative: f64 = 0.0;
    let mut integrability: f64 = 0.0;
    let mut symmetry = SymmetryCheck::default();
    let mut spectra = Vec::new();
    let mut analyses = Vec::new();

    for sample in &samples {
        let t = &sample.point;
        let g = base.components::<f64>(&t.p)?;
        constraint = constraint.max((g.form(&t.u, &t.u) - level.epsilon()).abs());

        let exact = christoffel::<_, f64>(&base, &t.p)?;
        let fd = christoffel_fd(&base, &t.p, &config.engine)?;
        cross_check = cross_check.max(exact.max_abs_diff(&fd));

        let x = ConstantField(sampler.vector(m));
        let y = ConstantField(sampler.vector(m));
        brackets = brackets.max(bundle.bracket_identity_check(&x, &y, t)?.max());
        let a = Lift {
            horizontal: sampler.vector(m),
            vertical: sampler.vector(m),
        };
        let b = Lift {
            horizontal: sampler.vector(m),
            vertical: sampler.vector(m),
        };
        beta = beta.max(bundle.beta_identity_check(t, &a, &b)?);

        let jet = bundle.jet(t)?;
        let n_field = jet.canonical_vertical();
        normal = normal.max((jet.sasaki(&n_field, &n_field) - level.epsilon()).abs());
        if index_of(&bundle.sasaki_gram(t)?) != expected_index {
            index_mismatches += 1;
        }

        let analysis = PointAnalysis::new(&s, t)?;
        let frame = &analysis.frame;
        let h = &analysis.h;
        frame_residuals = frame_residuals.worst_of(&frame.residuals());
        let gh = frame.metric.matmul(h);
        self_adjoint = self_adjoint.max(gh.sub(&gh.transpose()).max_abs());
        h_reeb = h_reeb.max(norm(&h.apply(&frame.xi)));
        anticommute = anticommute.max(h.matmul(&frame.phi).add(&frame.phi.matmul(h)).max_abs());
        trace = trace.max((0..dim).map(|i| h[(i, i)]).sum::<f64>().abs());
        spectra.push(HSpectrum::from_matrix(h, &frame.metric)?);

        let probe = sampler.vector(dim);
        reeb_derivative = reeb_derivative.max(reeb_derivative_residual(&s, t, h, &probe)?);

        let projector = frame.horizontal_projector();
        let hx = projector.apply(&sampler.vector(dim));
        let hy = projector.apply(&sampler.vector(dim));
        integrability = integrability.max(cr_integrability_residual(&s, t, &hx, &hy)?);
        symmetry = symmetry.worst_of(&check_cr_symmetry(&s, t)?);

        analyses.push((analysis, sample.x.clone(), sample.y.clone()));
    }

    checks.push(Check::at_most(
        "bundle_constraint",
        constraint,
        tol.constraint,
    ));
    checks.push(Check::at_most(
        "derivative_cross_check",
        cross_check,
        tol.derivative_cross_check,
    ));
    checks.push(Check::at_most("lift_brackets", brackets, tol.brackets));
    checks.push(Check::at_most("beta_identity", beta, tol.beta));
    checks.push(Check::at_most(
        "canonical_vertical_norm",
        normal,
        tol.sasaki_normal,
    ));
    checks.push(Check::at_most(
        "sasaki_index_mismatches",
        index_mismatches as f64,
        0.0,
    ));
    checks.push(Check::at_most(
        "frame_algebraic",
        frame_residuals.max_algebraic(),
        tol.frame_algebraic,
    ));
    checks.push(Check::at_most(
        "frame_differential",
        frame_residuals.max_differential(),
        tol.frame_differential,
    ));
    checks.push(Check::above(
        "webster_min_eigenvalue",
        frame_residuals.metric_min_eigenvalue,
        0.0,
    ));
    checks.push(Check::above(
        "contact_min_singular_value",
        frame_residuals.contact_min_singular,
        1e-6,
    ));
    checks.push(Check::above(
        "levi_form_min_eigenvalue",
        frame_residuals.levi_min_eigenvalue,
        0.0,
    ));
    checks.push(Check::at_most(
        "h_self_adjoint",
        self_adjoint,
        tol.h_operator,
    ));
    checks.push(Check::at_most("h_reeb", h_reeb, tol.h_reeb));
    checks.push(Check::at_most(
        "h_phi_anticommute",
        anticommute,
        tol.h_operator,
    ));
    checks.push(Check::at_most("h_trace", trace, tol.h_trace));
    checks.push(Check::at_most(
        "reeb_derivative",
        reeb_derivative,
        tol.reeb_derivative,
    ));

    let fit = kmu_fit_analyses(&analyses)?;
    let invariant = boeckx_invariant(&fit)?;
    let reference = closed_form(config.kind, config.c);
    checks.push(Check::at_most(
        "kmu_residual",
        fit.residual,
        tol.kmu_residual,
    ));
    checks.push(Check::at_most(
        "kmu_k_vs_closed_form",
        (fit.k - reference.k).abs(),
        tol.closed_form_k,
    ));

    let max_norm = spectra.iter().map(|sp| sp.norm).fold(0.0, f64::max);
    let sasakian = fit.sasakian;
    let spectrum_mismatches = spectra
        .iter()
        .filter(|sp| !spectrum_shape_ok(sp, &fit, m - 1, tol.spectrum))
        .count();
    checks.push(Check::at_most(
        "h_spectrum_mismatches",
        spectrum_mismatches as f64,
        0.0,
    ));
    match (invariant, reference.invariant) {
        (Boeckx::Value(a), Boeckx::Value(b)) => {
            checks.push(Check::at_most(
                "kmu_mu_vs_closed_form",
                (fit.mu.unwrap_or(f64::NAN) - reference.mu).abs(),
                tol.closed_form_mu,
            ));
            checks.push(Check::at_most(
                "invariant_vs_closed_form",
                (a - b).abs(),
                tol.invariant,
            ));
        }
        (Boeckx::Sasakian, Boeckx::Sasakian) => {
            checks.push(Check::at_most(
                "sasakian_h_norm",
                max_norm,
                kmuforge_core::contact::operator::SASAKIAN_TOL,
            ));
        }
        _ => checks.push(Check::at_most("sasakian_agreement", 1.0, 0.0)),
    }

    let mut pang = None;
    let mut d_checks = Vec::new();
    if let Boeckx::Value(i) = invariant {
        let (report, deviation) = measure_pang(&s, &samples, &fit, i, &mut sampler)?;
        checks.push(Check::at_most("pang_proportionality", deviation, tol.pang));
        pang = Some(report);

        for a in HOMOTHETY_FACTORS {
            let d = d_homothety(&s, &fit, DeformationSpec::new(a)?, &samples)?;
            let name = |what: &str| format!("d_homothety_{a}_{what}");
            checks.push(Check::at_most(
                &name("frame_algebraic"),
                d.frame_residuals.max_algebraic(),
                tol.frame_algebraic,
            ));
            checks.push(Check::at_most(
                &name("frame_differential"),
                d.frame_residuals.max_differential(),
                tol.frame_differential,
            ));
            checks.push(Check::at_most(
                &name("kmu_residual"),
                d.fit.residual,
                tol.kmu_residual,
            ));
            checks.push(Check::at_most(
                &name("invariant_shift"),
                d.invariant_shift,
                tol.invariant,
            ));
            checks.push(Check::at_most(
                &name("k"),
                (d.fit.k - d.expected_k).abs(),
                tol.homothety_kmu,
            ));
            checks.push(Check::at_most(
                &name("mu"),
                (d.fit.mu.unwrap_or(f64::NAN) - d.expected_mu).abs(),
                tol.homothety_kmu,
            ));
            d_checks.push(d);
        }
    }

    checks.push(Check::at_most(
        "cr_integrability",
        integrability,
        tol.integrability,
    ));
    checks.push(Check::at_most("cr_symmetry", symmetry.max(), tol.symmetry));

    let failed_checks: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.clone())
        .collect();
    let (timestamp, wall_clock_seconds) = if config.timestamp {
        (
            Some(chrono::Utc::now().to_rfc3339()),
            Some(started.elapsed().as_secs_f64()),
        )
    } else {
        (None, None)
    };

    Ok(StructureReport {
        schema_version: crate::SCHEMA_VERSION,
        config: ConfigEcho {
            kind: config.kind,
            c: config.c,
            base_dim: m,
            bundle_dim: dim,
            samples: config.samples,
            seed: config.seed,
            rng: RNG_NAME,
            base_box: BASE_BOX,
            fiber_box: FIBER_BOX,
            derivative_scheme: SCHEME,
            cross_check_steps: config.engine,
            fiber_level: level,
            sheet: "u0 > 0 (future-pointing on the hyperquadric bundle)",
            tolerances: tol,
        },
        checks,
        frame_residuals,
        h_spectrum: SpectrumSummary {
            groups: spectra[0].groups.clone(),
            max_norm,
            sasakian,
        },
        kmu_fit: fit,
        boeckx_invariant: invariant,
        closed_form: reference,
        pang,
        class_b_reading: CLASS_B_READING,
        integrability_residual: integrability,
        symmetry,
        d_homothety: d_checks,
        passed: failed_checks.is_empty(),
        failed_checks,
        timestamp,
        wall_clock_seconds,
    })
}

/// `{λ: n, 0: 1, −λ: n}`, or `{0: 2n+1}` when Sasakian.
fn spectrum_shape_ok(sp: &HSpectrum, fit: &KmuFit, n: usize, tol: f64) -> bool {
    let groups = sp.multiplicities();
    if fit.sasakian {
        return sp.is_sasakian() && groups.len() == 1 && groups[0].1 == 2 * n + 1;
    }
    let expected = [(fit.lambda, n), (0.0, 1), (-fit.lambda, n)];
    groups.len() == 3
        && groups
            .iter()
            .zip(&expected)
            .all(|(&(v, k), &(ev, ek))| k == ek && (v - ev).abs() <= tol)
}

/// Measured Pang factors (mean of `Π(X,X)/g(X,X)`) and the worst normalized
/// deviation `|Π(X,Y) − f·g(X,Y)|/(1 + |f|)` from the fitted factor `f`.
fn measure_pang<M: MetricField>(
    s: &ContactStructure<M>,
    samples: &[kmuforge_core::contact::KmuSample],
    fit: &KmuFit,
    invariant: f64,
    sampler: &mut Sampler,
) -> Result<(PangReport, f64), CliError> {
    let dim = s.dim();
    let mut deviation: f64 = 0.0;
    let mut factors = [0.0f64; 2];
    for sample in samples {
        let dist = Eigendistributions::new(s, &sample.point)?;
        for (slot, which) in [Distribution::Plus, Distribution::Minus]
            .into_iter()
            .enumerate()
        {
            let expected = pang_expected_factor(fit, which)?;
            let p = dist.projector(which);
            let x = p.apply(&sampler.vector(dim));
            let y = p.apply(&sampler.vector(dim));
            let g = &dist.frame.metric;
            let pxx = pang_invariant_in(s, &dist, which, &x, &x)?;
            let pxy = pang_invariant_in(s, &dist, which, &x, &y)?;
            factors[slot] += pxx / g.form(&x, &x);
            deviation =
                deviation.max((pxy - expected * g.form(&x, &y)).abs() / (1.0 + expected.abs()));
        }
    }
    let count = samples.len() as f64;
    let report = classify_pang(
        factors[0] / count,
        factors[1] / count,
        Some(invariant),
        FITTED_EQUALITY_TOL,
    )?;
    Ok((report, deviation))
}
