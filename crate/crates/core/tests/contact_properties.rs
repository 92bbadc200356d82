use kmuforge_core::bundle::{ContactStructure, FiberLevel};
use kmuforge_core::contact::pang::{pang_invariant_in, Eigendistributions};
use kmuforge_core::contact::{
    boeckx_from_curvature, boeckx_invariant, h_operator, h_spectrum, kmu_fit, pang_expected_factor,
    reeb_derivative_residual, sample_pairs, Boeckx, Distribution,
};
use kmuforge_core::linalg::Mat;
use kmuforge_core::sampling::Sampler;
use kmuforge_core::space_forms::{model_metric, ModelMetric, SignatureKind, SpaceFormSpec};
use proptest::prelude::*;

fn structure(kind: SignatureKind, c: f64) -> ContactStructure<ModelMetric> {
    ContactStructure::new(
        model_metric(SpaceFormSpec::new(kind, c, 3).unwrap()),
        kind.into(),
    )
}

fn kind_and_curvature() -> impl Strategy<Value = (SignatureKind, f64)> {
    prop_oneof![
        (-3.0..0.9f64).prop_map(|c| (SignatureKind::Lorentzian, c)),
        (-3.0..0.9f64).prop_map(|c| (SignatureKind::Riemannian, c)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn h_anticommutes_with_phi_and_is_traceless((kind, c) in kind_and_curvature(), seed in 0u64..1000) {
        let s = structure(kind, c);
        let mut sampler = Sampler::new(seed);
        let t = s.chart().sample_point(&mut sampler).unwrap();
        let frame = s.contact_frame(&t).unwrap();
        let h = h_operator(&s, &t).unwrap();
        let anti = h.matmul(&frame.phi).add(&frame.phi.matmul(&h));
        prop_assert!(anti.max_abs() <= 1e-5);
        let trace: f64 = (0..5).map(|i| h[(i, i)]).sum();
        prop_assert!(trace.abs() <= 1e-4);
    }

    #[test]
    fn spectrum_is_symmetric((kind, c) in kind_and_curvature(), seed in 0u64..1000) {
        let s = structure(kind, c);
        let mut sampler = Sampler::new(seed);
        let t = s.chart().sample_point(&mut sampler).unwrap();
        let spec = h_spectrum(&s, &t).unwrap();
        let m = spec.multiplicities();
        // the shifted value |c ∓ 1| vanishes only at the Sasakian points excluded by the range
        prop_assert_eq!(m.len(), 3);
        prop_assert!((m[0].0 + m[2].0).abs() <= 1e-4);
        prop_assert_eq!(m[0].1, m[2].1);
        prop_assert_eq!(m[1].1, 1);
        prop_assert!(m[1].0.abs() <= 1e-4);
    }

    #[test]
    fn reeb_derivative_identity((kind, c) in kind_and_curvature(), seed in 0u64..1000) {
        let s = structure(kind, c);
        let mut sampler = Sampler::new(seed);
        let t = s.chart().sample_point(&mut sampler).unwrap();
        let h = h_operator(&s, &t).unwrap();
        for _ in 0..3 {
            let x = sampler.vector(5);
            prop_assert!(reeb_derivative_residual(&s, &t, &h, &x).unwrap() <= 5e-3);
        }
    }
}

#[test]
fn pang_proportionality() {
    for &(kind, c) in &[
        (SignatureKind::Lorentzian, -3.0),
        (SignatureKind::Lorentzian, 0.0),
        (SignatureKind::Lorentzian, 0.5),
        (SignatureKind::Riemannian, 0.0),
        (SignatureKind::Riemannian, 2.0),
    ] {
        let s = structure(kind, c);
        let mut sampler = Sampler::new(41);
        let samples = sample_pairs(&s, 8, &mut sampler).unwrap();
        let fit = kmu_fit(&s, &samples).unwrap();
        let dist = Eigendistributions::new(&s, &samples[0].point).unwrap();
        for which in [Distribution::Plus, Distribution::Minus] {
            let factor = pang_expected_factor(&fit, which).unwrap();
            let p: &Mat<f64> = dist.projector(which);
            for _ in 0..10 {
                let x = p.apply(&sampler.vector(5));
                let y = p.apply(&sampler.vector(5));
                let value = pang_invariant_in(&s, &dist, which, &x, &y).unwrap();
                let expected = factor * dist.frame.metric.form(&x, &y);
                assert!(
                    (value - expected).abs() <= 1e-3 * (1.0 + factor.abs()),
                    "{kind:?} c={c} {which:?}: {value} vs {expected}"
                );
            }
        }
    }
}

#[test]
fn pang_rejects_vectors_outside_the_distribution() {
    let s = structure(SignatureKind::Lorentzian, -3.0);
    let mut sampler = Sampler::new(3);
    let t = s.chart().sample_point(&mut sampler).unwrap();
    let dist = Eigendistributions::new(&s, &t).unwrap();
    let x = sampler.vector(5);
    assert!(pang_invariant_in(&s, &dist, Distribution::Plus, &x, &x).is_err());
}

#[test]
fn plus_distribution_follows_sign_not_lift_type() {
    // for c < −1 the horizontal lifts carry the negative eigenvalue c + 1
    let s = structure(SignatureKind::Lorentzian, -3.0);
    let mut sampler = Sampler::new(5);
    let t = s.chart().sample_point(&mut sampler).unwrap();
    let dist = Eigendistributions::new(&s, &t).unwrap();
    assert!(dist.eigenvalue(Distribution::Plus) > 0.0);
    let jet = s.chart().bundle().jet(&t).unwrap();
    let z = sampler.vector(3);
    let k = jet.inner(&z, &t.u);
    let x: Vec<f64> = z.iter().zip(&t.u).map(|(a, b)| a + k * b).collect();
    let xt = s.chart().to_intrinsic(&s.t_lift(&x, &t).unwrap());
    let projected = dist.projector(Distribution::Plus).apply(&xt);
    for (a, b) in projected.iter().zip(&xt) {
        assert!((a - b).abs() <= 1e-8);
    }
}

#[test]
fn consistency_square_and_sasakian_set() {
    let tested = [-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
    for kind in [SignatureKind::Lorentzian, SignatureKind::Riemannian] {
        for &c in &tested {
            let s = structure(kind, c);
            let mut sampler = Sampler::new(11);
            let samples = sample_pairs(&s, 8, &mut sampler).unwrap();
            let fit = kmu_fit(&s, &samples).unwrap();
            let exceptional = match kind {
                SignatureKind::Lorentzian => c == -1.0,
                SignatureKind::Riemannian => c == 1.0,
            };
            assert_eq!(fit.sasakian, exceptional, "{kind:?} c={c}");
            let fitted = boeckx_invariant(&fit).unwrap();
            match (fitted, boeckx_from_curvature(kind, c)) {
                (Boeckx::Value(a), Boeckx::Value(b)) => {
                    assert!((a - b).abs() <= 1e-2, "{kind:?} c={c}: {a} vs {b}")
                }
                (Boeckx::Sasakian, Boeckx::Sasakian) => {}
                (a, b) => panic!("{kind:?} c={c}: {a:?} vs {b:?}"),
            }
        }
    }
}

#[test]
fn hyperquadric_is_empty_over_riemannian_base() {
    let g = model_metric(SpaceFormSpec::new(SignatureKind::Riemannian, 0.0, 3).unwrap());
    let s = ContactStructure::new(g, FiberLevel::Hyperquadric);
    // g(u,u) = −1 has no solution over a Riemannian base
    assert!(s.chart().point_at(&[0.0; 5]).is_err());
}
