use kmuforge_core::bundle::{BundleChart, FiberLevel};
use kmuforge_core::geometry::field::{AffineField, AffineForm};
use kmuforge_core::geometry::metric::validate_metric;
use kmuforge_core::geometry::{
    christoffel, christoffel_fd, exterior_d, riemann, DerivativeEngine, MetricField,
};
use kmuforge_core::linalg::{sym_eigen, Mat, CLUSTER_TOL};
use kmuforge_core::sampling::Sampler;
use kmuforge_core::space_forms::{
    curvature_check, model_metric, perturbed_metric, SignatureKind, SpaceFormSpec,
};
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = SignatureKind> {
    prop_oneof![
        Just(SignatureKind::Riemannian),
        Just(SignatureKind::Lorentzian)
    ]
}

fn matrix(n: usize, entries: &[f64]) -> Mat<f64> {
    Mat::from_fn(n, n, |i, j| entries[i * n + j])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn space_forms_have_constant_curvature(
        kind in kind(),
        c in -4.0..4.0f64,
        dim in 2usize..=4,
        seed in 0u64..1000,
    ) {
        let g = model_metric(SpaceFormSpec::new(kind, c, dim).unwrap());
        prop_assert!(curvature_check(&g, c, 20, seed).unwrap() <= 5e-4);
    }

    #[test]
    fn signature_holds_on_the_sampling_box(kind in kind(), c in -4.0..4.0f64, dim in 2usize..=4, seed in 0u64..1000) {
        let g = model_metric(SpaceFormSpec::new(kind, c, dim).unwrap());
        let report = validate_metric(&g, 10, 0.2, &mut Sampler::new(seed)).unwrap();
        prop_assert!(report.passes(), "{report:?}");
    }

    /// `∂_k g_ij = Γ^l_{ki} g_lj + Γ^l_{kj} g_il` with `∂g` taken by finite differences.
    #[test]
    fn connection_is_metric_compatible(kind in kind(), c in -3.0..3.0f64, seed in 0u64..1000) {
        let spec = SpaceFormSpec::new(kind, c, 3).unwrap();
        let g = perturbed_metric(spec, 0.05).unwrap();
        let x = Sampler::new(seed).base_point(3);
        let gamma = christoffel::<_, f64>(&g, &x).unwrap();
        let value = g.components::<f64>(&x).unwrap();
        let engine = DerivativeEngine::default();
        for i in 0..3 {
            for j in 0..3 {
                let grad = engine.gradient(|y| g.components::<f64>(y).unwrap()[(i, j)], &x);
                for (k, dg) in grad.iter().enumerate() {
                    let rebuilt: f64 = (0..3)
                        .map(|l| gamma.get(l, k, i) * value[(l, j)] + gamma.get(l, k, j) * value[(i, l)])
                        .sum();
                    prop_assert!((dg - rebuilt).abs() <= 1e-6, "{dg} vs {rebuilt}");
                }
            }
        }
    }

    #[test]
    fn first_bianchi(kind in kind(), c in -3.0..3.0f64, seed in 0u64..1000) {
        let g = perturbed_metric(SpaceFormSpec::new(kind, c, 3).unwrap(), 0.1).unwrap();
        let mut sampler = Sampler::new(seed);
        let x = sampler.base_point(3);
        let r = riemann::<_, f64>(&g, &x).unwrap();
        let (a, b, z) = (sampler.vector(3), sampler.vector(3), sampler.vector(3));
        let sum: Vec<f64> = (0..3)
            .map(|i| r.apply(&a, &b, &z)[i] + r.apply(&b, &z, &a)[i] + r.apply(&z, &a, &b)[i])
            .collect();
        prop_assert!(sum.iter().all(|v| v.abs() <= 5e-4), "{sum:?}");
    }

    #[test]
    fn halving_the_step_barely_moves_the_connection(kind in kind(), c in -3.0..3.0f64, seed in 0u64..1000) {
        let g = model_metric(SpaceFormSpec::new(kind, c, 3).unwrap());
        let x = Sampler::new(seed).base_point(3);
        let coarse = christoffel_fd(&g, &x, &DerivativeEngine::default()).unwrap();
        let fine = christoffel_fd(&g, &x, &DerivativeEngine::with_steps(5e-7, 5e-5)).unwrap();
        prop_assert!(coarse.max_abs_diff(&fine) < 1e-6);
    }

    #[test]
    fn exterior_derivative_is_antisymmetric(
        omega in prop::collection::vec(-1.0..1.0f64, 12),
        v in prop::collection::vec(-1.0..1.0f64, 12),
        w in prop::collection::vec(-1.0..1.0f64, 12),
        x in prop::collection::vec(-1.0..1.0f64, 3),
    ) {
        let form = AffineForm { matrix: matrix(3, &omega), offset: omega[9..].to_vec() };
        let vf = AffineField::new(matrix(3, &v), v[9..].to_vec());
        let wf = AffineField::new(matrix(3, &w), w[9..].to_vec());
        let vw: f64 = exterior_d(&form, &vf, &wf, &x).unwrap();
        let wv: f64 = exterior_d(&form, &wf, &vf, &x).unwrap();
        prop_assert!((vw + wv).abs() <= 1e-12);
    }

    /// Operators self-adjoint for a positive form `m` are rebuilt from their
    /// eigenpairs.
    #[test]
    fn eigen_reconstruction(a in prop::collection::vec(-1.0..1.0f64, 16), b in prop::collection::vec(-1.0..1.0f64, 16)) {
        let a = matrix(4, &a);
        let sym = a.add(&a.transpose());
        let b = matrix(4, &b);
        let m = b.transpose().matmul(&b).add(&Mat::identity(4));
        let s = m.inverse().unwrap().matmul(&sym);
        let eig = sym_eigen(&s, &m, CLUSTER_TOL).unwrap();
        prop_assert!(eig.reconstruct(&m).sub(&s).max_abs() <= 1e-6);
    }

    #[test]
    fn bundle_tangent_space_is_normal_to_n(kind in kind(), c in -3.0..3.0f64, seed in 0u64..1000) {
        let g = model_metric(SpaceFormSpec::new(kind, c, 3).unwrap());
        let chart = BundleChart::new(&g, FiberLevel::from(kind));
        let t = chart.sample_point(&mut Sampler::new(seed)).unwrap();
        let y = chart.coordinates(&t);
        let jac = chart.embedding_jacobian(&y).unwrap();
        let jet = chart.embed(&y).unwrap();
        let n = jet.canonical_vertical();
        prop_assert!((jet.sasaki(&n, &n) - FiberLevel::from(kind).epsilon()).abs() <= 1e-10);
        for col in 0..chart.dim() {
            prop_assert!(jet.sasaki(&jac.column(col), &n).abs() <= 1e-10);
        }
    }
}
