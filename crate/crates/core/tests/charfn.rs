use frozen_spectra::charfn::{a_term, b_term, delta_determinant, delta_expanded, phi, u_function, w_function};
use frozen_spectra::fixtures::{
    box_bump_delta_closed_form, box_bump_pairs, complex_grid, named_fixtures, random_problem,
};
use frozen_spectra::funcrep::{linear_combine, PiecewisePoly};
use frozen_spectra::verify::acceptance::dual_path_gap;
use frozen_spectra::{Bvp, Complex64, FunctionRep, Problem, Rho};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PI: f64 = std::f64::consts::PI;

fn lambda(r: f64, angle: f64) -> Complex64 {
    Complex64::from_polar(r, angle)
}

/// Random piecewise function on `[lo, hi]`, zero elsewhere.
fn supported(seed: u64, lo: f64, hi: f64) -> FunctionRep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_problem(&mut rng, 2, true, 1.0).p().clone();
    let pp = f.as_piecewise().unwrap();
    let squeezed = PiecewisePoly::combine(&[(Complex64::new(1.0, 0.0), pp)], lo, hi);
    FunctionRep::clipped(&squeezed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn determinant_and_expansion_agree(seed in any::<u64>(), r in 0.0f64..500.0, angle in -0.2f64..(PI / 2.0 + 0.2)) {
        let prob = random_problem(&mut ChaCha8Rng::seed_from_u64(seed), 2, true, 1.5);
        for j in Bvp::BOTH {
            let gap = dual_path_gap(&prob, j, lambda(r, angle));
            prop_assert!(gap <= 1e-10, "j={j:?}: {gap:e}");
        }
    }

    #[test]
    fn cross_term_is_bilinear_and_antisymmetric(seed in any::<u64>(), r in 0.0f64..200.0, angle in 0.0f64..PI, x in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let first = random_problem(&mut rng, 2, true, 1.0);
        let (p1, q) = (first.p().clone(), first.q().clone());
        let p2 = random_problem(&mut rng, 2, true, 1.0).p().clone();
        let (a, b) = (first.a(), first.b());
        let rho = Rho::from_lambda(lambda(r, angle));
        let alpha = Complex64::new(x, 0.3);
        let one = Complex64::new(1.0, 0.0);
        let mixed = linear_combine(alpha, &p1, one, &p2).unwrap();
        for j in Bvp::BOTH {
            let lhs = b_term(j, &rho, &mixed, &q, a, b);
            let rhs = b_term(j, &rho, &p1, &q, a, b) * alpha + b_term(j, &rho, &p2, &q, a, b);
            let scale = 1.0 + lhs.norm().max(rhs.norm());
            prop_assert!((lhs - rhs).norm() <= 1e-11 * scale);
            let swapped = b_term(j, &rho, &q, &p1, a, b);
            let direct = b_term(j, &rho, &p1, &q, a, b);
            prop_assert!((swapped + direct).norm() <= 1e-11 * (1.0 + direct.norm()));
        }
    }

    #[test]
    fn cross_term_vanishes_for_one_sided_support(seed in any::<u64>(), r in 0.0f64..300.0, angle in 0.0f64..PI) {
        let (a, b) = (1.0, 2.0);
        let rho = Rho::from_lambda(lambda(r, angle));
        let left = (supported(seed, 0.0, a), supported(seed ^ 1, 0.0, a));
        let right = (supported(seed ^ 2, b, PI), supported(seed ^ 3, b, PI));
        for j in Bvp::BOTH {
            prop_assert!(b_term(j, &rho, &left.0, &left.1, a, b).norm() <= 1e-12);
            prop_assert!(b_term(j, &rho, &right.0, &right.1, a, b).norm() <= 1e-12);
        }
    }
}

#[test]
fn determinant_and_expansion_agree_on_every_fixture() {
    for (name, prob) in named_fixtures() {
        for j in Bvp::BOTH {
            for l in complex_grid()
                .into_iter()
                .chain([lambda(500.0, PI), lambda(300.0, -2.0)])
            {
                let gap = dual_path_gap(&prob, j, l);
                assert!(gap <= 1e-10, "{name} j={j:?} lambda={l}: {gap:e}");
            }
        }
    }
}

#[test]
fn zero_problem_gives_phi_at_pi() {
    let prob = Problem::zero(1.0, 2.0).unwrap();
    for l in [c(-3.0), c(0.0), c(2.25), Complex64::new(40.0, 7.0)] {
        let rho = Rho::from_lambda(l);
        let sr = l.sqrt();
        let want0 = if l == c(0.0) { c(PI) } else { (sr * PI).sin() / sr };
        let want1 = (sr * PI).cos();
        assert!((delta_expanded(Bvp::Dirichlet, &rho, &prob).total - want0).norm() < 1e-13);
        assert!((delta_expanded(Bvp::Neumann, &rho, &prob).total - want1).norm() < 1e-13);
        assert!((delta_determinant(Bvp::Neumann, &rho, &prob) - want1).norm() < 1e-13);
    }
}

#[test]
fn phi_limits_at_the_origin() {
    let zero = Rho::from_lambda(c(0.0));
    assert_eq!(phi(Bvp::Dirichlet, &zero, 0.7), c(0.7));
    assert_eq!(phi(Bvp::Neumann, &zero, 0.7), c(1.0));
}

#[test]
fn printed_pairs_match_their_closed_form() {
    let (first, second) = box_bump_pairs();
    for j in Bvp::BOTH {
        for k in 0..50 {
            let l = c(-5.0 + 405.0 * k as f64 / 49.0);
            let want = box_bump_delta_closed_form(j, l);
            let rho = Rho::from_lambda(l);
            for prob in [&first, &second] {
                let got = delta_expanded(j, &rho, prob).total;
                assert!(
                    (got - want).norm() <= 1e-10 * (1.0 + want.norm()),
                    "{j:?} at {l}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn a_terms_vanish_for_zero_coefficients() {
    let prob = Problem::zero(0.5, 2.5).unwrap();
    let rho = Rho::real(3.3);
    for j in Bvp::BOTH {
        assert_eq!(a_term(j, 0, &rho, &prob), c(0.0));
        assert_eq!(a_term(j, 1, &rho, &prob), c(0.0));
    }
}

#[test]
fn w_is_the_sum_and_difference_of_u() {
    let prob = random_problem(&mut ChaCha8Rng::seed_from_u64(3), 2, true, 1.0);
    let (p, q, a, b) = (prob.p(), prob.q(), prob.a(), prob.b());
    let w0 = w_function(Bvp::Dirichlet, p, q, a, b).unwrap();
    let w1 = w_function(Bvp::Neumann, p, q, a, b).unwrap();
    let u0 = u_function(0, p, q, a, b).unwrap();
    let u1 = u_function(1, p, q, a, b).unwrap();
    for k in 0..500 {
        let t = PI * (k as f64 + 0.5) / 500.0;
        assert!((u0.eval(t) * 2.0 - w0.eval(t) - w1.eval(t)).norm() < 1e-12);
        assert!((u1.eval(t) * 2.0 - w0.eval(t) + w1.eval(t)).norm() < 1e-12);
    }
}

#[test]
fn problem_rejects_bad_frozen_arguments() {
    for (a, b) in [(0.0, 1.0), (2.0, 1.0), (1.0, PI), (1.0, 1.0)] {
        assert!(Problem::zero(a, b).is_err(), "a={a}, b={b}");
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
