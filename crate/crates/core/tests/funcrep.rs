use frozen_spectra::fixtures::random_problem;
use frozen_spectra::funcrep::{
    fourier_coeff, linear_combine, moment_integral, shift_reflect, Basis, Branch, MomentArg, MomentKind, TrigBasis,
};
use frozen_spectra::verify::acceptance::oracle_gap;
use frozen_spectra::{Complex64, FunctionRep, Rho};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PI: f64 = std::f64::consts::PI;

const KINDS: [MomentKind; 3] = [MomentKind::Sin, MomentKind::Cos, MomentKind::Sinc];
const ARGS: [MomentArg; 3] = [MomentArg::T, MomentArg::UpperMinusT, MomentArg::TMinusLower];

fn piecewise(seed: u64, degree: usize, complex: bool) -> FunctionRep {
    random_problem(&mut ChaCha8Rng::seed_from_u64(seed), degree, complex, 1.0)
        .p()
        .clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_matches_quadrature(
        seed in any::<u64>(),
        radius in 0.0f64..25.0,
        angle in 0.0f64..PI,
        kind in 0usize..3,
        arg in 0usize..3,
        lo in 0.0f64..2.0,
        width in 0.05f64..1.1,
    ) {
        let f = piecewise(seed, 3, true);
        let rho = Rho::new(Complex64::from_polar(radius, angle));
        let (gap, mass) = oracle_gap(&f, &rho, KINDS[kind], (lo, lo + width), ARGS[arg]);
        prop_assert!(gap <= 1e-11 * mass.max(1.0), "gap {gap:e}, mass {mass:e}");
    }

    #[test]
    fn even_kernels_are_even_in_rho(seed in any::<u64>(), re in -15.0f64..15.0, im in -6.0f64..6.0) {
        let f = piecewise(seed, 2, false);
        let rho = Rho::new(Complex64::new(re, im));
        for kind in [MomentKind::Cos, MomentKind::Sinc] {
            let x = f.moment(&rho, kind, 0.0, PI, MomentArg::T);
            let y = f.moment(&rho.neg(), kind, 0.0, PI, MomentArg::T);
            prop_assert!((x - y).norm() <= 1e-12 * (1.0 + x.norm()), "{kind:?}: {x} vs {y}");
        }
    }

    #[test]
    fn series_and_closed_branches_overlap(seed in any::<u64>(), r in 0.4f64..0.6, angle in 0.0f64..(2.0 * PI)) {
        let f = piecewise(seed, 3, true);
        let rho = Rho::new(Complex64::from_polar(r, angle));
        for kind in KINDS {
            let s = f.moment_with(&rho, kind, 0.0, PI, MomentArg::T, Branch::Series);
            let c = f.moment_with(&rho, kind, 0.0, PI, MomentArg::T, Branch::Closed);
            prop_assert!((s - c).norm() <= 1e-12, "{kind:?}: {s} vs {c}");
        }
    }

    #[test]
    fn reflection_twice_is_identity(seed in any::<u64>(), c in 0.0f64..PI) {
        let g = piecewise(seed, 3, true);
        let back = shift_reflect(&shift_reflect(&g, c).unwrap(), c).unwrap();
        for k in 0..=400 {
            let t = PI * k as f64 / 400.0;
            if c - t > 0.0 && c - t < PI {
                prop_assert!((back.eval(t) - g.eval(t)).norm() <= 1e-13);
            }
        }
    }

    #[test]
    fn linear_combination_is_pointwise(seed in any::<u64>(), x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let prob = random_problem(&mut rng, 3, false, 1.0);
        let (alpha, beta) = (Complex64::new(x, 0.0), Complex64::new(y, 0.5));
        let h = linear_combine(alpha, prob.p(), beta, prob.q()).unwrap();
        for k in 0..=100 {
            let t = PI * (k as f64 + 0.37) / 101.0;
            let want = prob.p().eval(t) * alpha + prob.q().eval(t) * beta;
            prop_assert!((h.eval(t) - want).norm() <= 1e-13 * (1.0 + want.norm()));
        }
    }
}

#[test]
fn cosine_moment_of_one_over_the_whole_interval() {
    let one = FunctionRep::constant(Complex64::new(1.0, 0.0));
    for r in [0.0, 1e-7, 0.3, 2.5, 40.0] {
        let rho = Rho::real(r);
        let got = one.moment(&rho, MomentKind::Sinc, 0.0, PI, MomentArg::T);
        let want = if r == 0.0 {
            PI * PI / 2.0
        } else {
            2.0 * (0.5 * r * PI).sin().powi(2) / (r * r)
        };
        assert!(
            (got.re - want).abs() <= 1e-13 * want.abs().max(1.0),
            "rho {r}: {got} vs {want}"
        );
    }
}

#[test]
fn fourier_coefficients_of_a_trig_series() {
    let coeffs: Vec<Complex64> = (0..5).map(|k| Complex64::new(k as f64 + 1.0, -0.5)).collect();
    for basis in [
        TrigBasis::Sine,
        TrigBasis::Cosine,
        TrigBasis::HalfSine,
        TrigBasis::HalfCosine,
    ] {
        let f = FunctionRep::trig(frozen_spectra::funcrep::TrigSeries::new(basis, coeffs.clone()));
        for (k, want) in coeffs.iter().enumerate() {
            let n = basis.first_index() + k;
            let got = fourier_coeff(&f, Basis { kind: basis, n }) / basis.norm_sq(n);
            assert!((got - want).norm() < 1e-12, "{basis:?} n={n}: {got} vs {want}");
        }
    }
}

#[test]
fn moment_interval_is_validated() {
    let f = FunctionRep::zero();
    let rho = Rho::real(1.0);
    assert!(moment_integral(&f, &rho, MomentKind::Sin, 1.0, 0.5, MomentArg::T).is_err());
    assert!(moment_integral(&f, &rho, MomentKind::Sin, 0.0, 4.0, MomentArg::T).is_err());
    assert!(moment_integral(&f, &rho, MomentKind::Sin, 0.0, PI, MomentArg::T).is_ok());
}

#[test]
fn trig_series_cannot_be_reflected() {
    let f = frozen_spectra::fixtures::divergent_sine_coefficient(5);
    assert!(shift_reflect(&f, 1.0).is_err());
}
