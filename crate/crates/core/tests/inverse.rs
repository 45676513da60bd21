use frozen_spectra::charfn::w_function;
use frozen_spectra::fixtures::{right_supported_indicators, right_supported_smooth};
use frozen_spectra::funcrep::PiecewisePoly;
use frozen_spectra::inverse::{
    delta_from_spectrum, reconstruct, relative_l2, staircase_solve, window_count, SpectraPair,
};
use frozen_spectra::spectrum::locate_eigenvalues;
use frozen_spectra::{Bvp, Complex64, FunctionRep, Problem, Rho, Spectrum};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PI: f64 = std::f64::consts::PI;

/// Random piecewise-linear function supported in `[b, pi]`.
fn right_supported(seed: u64, b: f64) -> FunctionRep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cuts = rng.gen_range(1..5);
    let mut bp: Vec<f64> = (0..cuts).map(|_| rng.gen_range(b..PI)).collect();
    bp.extend([b, PI]);
    bp.sort_by(f64::total_cmp);
    bp.dedup_by(|x, y| (*x - *y).abs() < 1e-3);
    let pieces = bp
        .windows(2)
        .map(|_| frozen_spectra::funcrep::Cubic::real([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 0.0, 0.0]))
        .collect();
    FunctionRep::clipped(&PiecewisePoly::new(bp, pieces).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exact_data_is_reconstructed(seed in any::<u64>(), a in 0.4f64..1.6, gap in 0.2f64..1.2) {
        let b = (a + gap).min(PI - 0.2);
        let (p, q) = (right_supported(seed, b), right_supported(seed ^ 0xff, b));
        let w0 = w_function(Bvp::Dirichlet, &p, &q, a, b).unwrap();
        let w1 = w_function(Bvp::Neumann, &p, &q, a, b).unwrap();
        let out = staircase_solve(&w0, &w1, a, b).unwrap();
        prop_assert_eq!(out.window_count, window_count(a, b));
        prop_assert!(relative_l2(&out.p, &p) <= 1e-10);
        prop_assert!(relative_l2(&out.q, &q) <= 1e-10);
    }
}

#[test]
fn product_formula_recovers_delta() {
    let prob = right_supported_smooth(1.0, 1.8);
    let spec = locate_eigenvalues(&prob, Bvp::Dirichlet, 200).unwrap();
    for l in [
        Complex64::new(10.3, 0.0),
        Complex64::new(-4.0, 2.0),
        Complex64::new(55.0, 9.0),
    ] {
        let want = prob.delta(Bvp::Dirichlet, l);
        let got = delta_from_spectrum(Bvp::Dirichlet, &spec, l);
        assert!(
            (got - want).norm() < 1e-4 * want.norm().max(1.0),
            "{l}: {got} vs {want}"
        );
    }
}

#[test]
fn smooth_fixtures_reconstruct_from_spectra() {
    for (a, b) in [(1.0, 1.8), (1.5, 2.0)] {
        let prob = right_supported_smooth(a, b);
        let pair = SpectraPair::new(
            locate_eigenvalues(&prob, Bvp::Dirichlet, 200).unwrap(),
            locate_eigenvalues(&prob, Bvp::Neumann, 200).unwrap(),
        )
        .unwrap();
        let out = reconstruct(&pair, a, b, 150).unwrap();
        assert!(relative_l2(&out.p, prob.p()) < 1e-2);
        assert!(relative_l2(&out.q, prob.q()) < 1e-2);
        assert!(out.residuals.contains_key("junction"));
    }
}

#[test]
fn different_fixtures_give_different_reconstructions() {
    let (a, b) = (1.0, 1.8);
    let rebuild = |prob: &Problem| {
        let pair = SpectraPair::new(
            locate_eigenvalues(prob, Bvp::Dirichlet, 200).unwrap(),
            locate_eigenvalues(prob, Bvp::Neumann, 200).unwrap(),
        )
        .unwrap();
        reconstruct(&pair, a, b, 150).unwrap()
    };
    let first = right_supported_indicators(a, b);
    let second = right_supported_smooth(a, b);
    let out = rebuild(&first);
    assert!(relative_l2(&out.p, second.p()) > 0.1);
    assert!(relative_l2(&out.q, second.q()) > 0.1);
}

#[test]
fn spectra_pairs_are_validated() {
    let d = Spectrum::unperturbed(Bvp::Dirichlet, 10);
    let n = Spectrum::unperturbed(Bvp::Neumann, 10);
    assert!(SpectraPair::new(n.clone(), d.clone()).is_err());
    assert_eq!(SpectraPair::new(d.clone(), n.clone()).unwrap().len(), 10);
    let pair = SpectraPair::new(d, n).unwrap();
    assert!(reconstruct(&pair, 1.0, 1.0 + 1e-6, 5).is_err());
    let zero = reconstruct(&pair, 1.0, 2.0, 10).unwrap();
    assert!(zero.p.l2_norm() < 1e-12 && zero.q.l2_norm() < 1e-12);
}

#[test]
fn unperturbed_product_is_exact() {
    let spec = Spectrum::unperturbed(Bvp::Neumann, 50);
    let l = Complex64::new(3.7, 1.1);
    let want = (Rho::from_lambda(l).rho() * PI).cos();
    assert!((delta_from_spectrum(Bvp::Neumann, &spec, l) - want).norm() < 1e-12);
}
