use frozen_spectra::charfn::{a_term, delta_expanded};
use frozen_spectra::fixtures::{random_half_profile, real_grid};
use frozen_spectra::nonuniq::{admissible_t, build_sr, confusable_pairs, delta_scale, verify_coincidence, BumpSpec};
use frozen_spectra::{Bvp, Complex64, Problem, Rho};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PI: f64 = std::f64::consts::PI;

fn frozen_args() -> impl Strategy<Value = (f64, f64)> {
    (0.3f64..1.4, 0.3f64..1.4).prop_map(|(a, gap)| (a, (a + gap).min(PI - 0.3)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bump_pairs_kill_both_a_terms(seed in any::<u64>(), (a, b) in frozen_args(), frac in 0.2f64..1.0, r in 0.0f64..400.0, angle in 0.0f64..PI) {
        let t = frac * admissible_t(a, b);
        let bump = BumpSpec::new(random_half_profile(&mut ChaCha8Rng::seed_from_u64(seed), t)).unwrap();
        let (s, rr) = build_sr(&bump, a, b).unwrap();
        let prob = Problem::new(a, b, s, rr).unwrap();
        let rho = Rho::from_lambda(Complex64::from_polar(r, angle));
        for j in Bvp::BOTH {
            let total = a_term(j, 0, &rho, &prob) + a_term(j, 1, &rho, &prob);
            prop_assert!(total.norm() <= 1e-11 * delta_scale(j, &rho).max(1.0), "{j:?}: {total}");
        }
    }

    #[test]
    fn confusable_pairs_share_characteristic_functions(seed in any::<u64>(), (a, b) in frozen_args(), frac in 0.2f64..1.0) {
        let t = frac * admissible_t(a, b);
        let bump = BumpSpec::new(random_half_profile(&mut ChaCha8Rng::seed_from_u64(seed), t)).unwrap();
        let (s, r) = build_sr(&bump, a, b).unwrap();
        let (first, second) = confusable_pairs(&s, &r).unwrap();
        let report = verify_coincidence(&first, &second, a, b, &real_grid(), 0).unwrap();
        prop_assert!(report.max_discrepancy <= 1e-10, "{}", report.max_discrepancy);
    }
}

#[test]
fn confusable_pairs_differ_as_functions() {
    let (a, b) = (1.0, 2.0);
    let bump = BumpSpec::boxcar(0.5 * admissible_t(a, b)).unwrap();
    let (s, r) = build_sr(&bump, a, b).unwrap();
    let (first, second) = confusable_pairs(&s, &r).unwrap();
    let diff: f64 = (0..1000)
        .map(|k| PI * (k as f64 + 0.5) / 1000.0)
        .map(|t| (first.0.eval(t) - second.0.eval(t)).norm())
        .fold(0.0, f64::max);
    assert!(diff > 0.5);
    let report = verify_coincidence(&first, &second, a, b, &real_grid(), 15).unwrap();
    assert!(
        report.eigenvalue_gap_by_j.iter().all(|g| *g <= 1e-8),
        "{:?}",
        report.eigenvalue_gap_by_j
    );
    let p1 = Problem::new(a, b, first.0, first.1).unwrap();
    let p2 = Problem::new(a, b, second.0, second.1).unwrap();
    let rho = Rho::from_lambda(Complex64::new(17.0, 3.0));
    for j in Bvp::BOTH {
        let (x, y) = (delta_expanded(j, &rho, &p1), delta_expanded(j, &rho, &p2));
        assert!((x.total - y.total).norm() <= 1e-10 * x.total.norm().max(1.0));
    }
}

#[test]
fn oversized_bumps_are_refused() {
    let (a, b) = (1.0, 1.5);
    let bump = BumpSpec::hat(admissible_t(a, b) * 1.1).unwrap();
    assert!(build_sr(&bump, a, b).is_err());
    assert!(build_sr(&BumpSpec::hat(0.1).unwrap(), 2.0, 1.0).is_err());
}
