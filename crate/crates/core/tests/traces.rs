use frozen_spectra::fixtures::{divergent_sine_coefficient, random_problem};
use frozen_spectra::funcrep::{TrigBasis, TrigSeries};
use frozen_spectra::traces::{mirrored_pair, trace_coefficients, trace_compare, trend};
use frozen_spectra::{Bvp, Complex64, FunctionRep};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PI: f64 = std::f64::consts::PI;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mirrored_piecewise_pairs_cancel_termwise(seed in any::<u64>(), a in 0.2f64..1.5) {
        let p = random_problem(&mut ChaCha8Rng::seed_from_u64(seed), 2, false, 1.0).p().clone();
        let prob = mirrored_pair(&p, a).unwrap();
        prop_assert!((prob.b() - (PI - a)).abs() < 1e-15);
        for row in trace_coefficients(&prob, Bvp::Dirichlet, 60).unwrap() {
            prop_assert!(row.s_n.norm() <= 1e-13 * (1.0 + row.a_n.norm()), "n={}: {}", row.n, row.s_n);
        }
    }

    #[test]
    fn rows_are_sums_of_their_parts(seed in any::<u64>(), j in 0u8..2) {
        let prob = random_problem(&mut ChaCha8Rng::seed_from_u64(seed), 2, true, 1.0);
        let rows = trace_coefficients(&prob, Bvp::from_index(j).unwrap(), 40).unwrap();
        let mut partial = Complex64::new(0.0, 0.0);
        for row in rows {
            prop_assert_eq!(row.s_n, row.a_n + row.b_n);
            partial += row.s_n;
            prop_assert!((row.coeff_partial - partial).norm() <= 1e-14 * (1.0 + partial.norm()));
        }
    }
}

#[test]
fn mirrored_sine_series_cancels_and_diverges() {
    let prob = mirrored_pair(&divergent_sine_coefficient(60), PI / 3.0).unwrap();
    let rows = trace_compare(&prob, Bvp::Dirichlet, 40).unwrap();
    assert!(rows.iter().all(|r| r.s_n.norm() <= 1e-13));
    let a_sum: Complex64 = rows.iter().take(20).map(|r| r.a_n).sum();
    assert!(a_sum.re > 1.0, "{a_sum}");
    let last = rows.last().unwrap().eig_partial.unwrap();
    assert!(last.norm() <= 2e-3, "{last}");
}

#[test]
fn eigenvalue_sums_follow_coefficient_sums() {
    let p = FunctionRep::trig(TrigSeries::new(TrigBasis::Sine, vec![Complex64::new(1.0, 0.0)]));
    let q = FunctionRep::trig(TrigSeries::new(
        TrigBasis::Cosine,
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ));
    let prob = frozen_spectra::Problem::new(1.0, 2.0, p, q).unwrap();
    for j in Bvp::BOTH {
        let rows = trace_compare(&prob, j, 120).unwrap();
        for row in rows.iter().filter(|r| r.n >= 50) {
            assert!(row.gap().unwrap() < 1e-2, "{j:?} n={}: {:?}", row.n, row.gap());
        }
        assert!(trend(&rows).is_some());
    }
}

#[test]
fn mirrored_pair_rejects_other_bases() {
    let half = FunctionRep::trig(TrigSeries::new(TrigBasis::HalfCosine, vec![Complex64::new(1.0, 0.0)]));
    assert!(mirrored_pair(&half, 1.0).is_err());
    assert!(mirrored_pair(&FunctionRep::zero(), 2.0).is_err());
}
