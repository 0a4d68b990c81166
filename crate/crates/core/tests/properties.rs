use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tracedist_core::harness::format_float;
use tracedist_core::predictions::{
    charge_q0_trace_distance, discrimination_probability, page_trace_distance, Bipartition,
};
use tracedist_core::quantum::{
    difference_spectrum, reduced_density_matrix, sample_page_state, trace_distance,
    ChargeAssignment, Stats,
};

fn part(n: u32, n_b: u32) -> Bipartition {
    Bipartition::new(n, n_b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>(), n in 2u32..=5, n_a in 1u32..=2) {
        let n_a = n_a.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rhos: Vec<_> = (0..3)
            .map(|_| reduced_density_matrix(&sample_page_state(n, &mut rng).unwrap().normalized().unwrap(), n_a).unwrap())
            .collect();
        let d = |i: usize, j: usize| trace_distance(&rhos[i], &rhos[j]).unwrap();
        prop_assert!(d(0, 0).abs() < 1e-12);
        prop_assert!((d(0, 1) - d(1, 0)).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&d(0, 1)));
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-12);
    }

    #[test]
    fn difference_spectrum_matches_dense_route(seed in any::<u64>(), n in 1u32..=6, n_a in 0u32..=6) {
        let n_a = n_a.min(n);
        prop_assume!(n_a >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = sample_page_state(n, &mut rng).unwrap().normalized().unwrap();
        let phi = sample_page_state(n, &mut rng).unwrap().normalized().unwrap();
        let fast: f64 = difference_spectrum(&psi, &phi, n_a).unwrap().iter().map(|l| l.abs()).sum::<f64>() / 2.0;
        let dense = trace_distance(
            &reduced_density_matrix(&psi, n_a).unwrap(),
            &reduced_density_matrix(&phi, n_a).unwrap(),
        ).unwrap();
        prop_assert!((fast - dense).abs() < 1e-10);
    }

    #[test]
    fn page_average_decreases_as_more_is_traced(n in 2u32..=60) {
        let values: Vec<f64> = (0..=n).map(|b| page_trace_distance(part(n, b))).collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        prop_assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn charge_q0_stays_in_unit_interval(n in 2u32..=60, n_b in 1u32..=59) {
        prop_assume!(n_b < n);
        let v = charge_q0_trace_distance(part(n, n_b)).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn discrimination_probability_is_affine(d in 0.0f64..=1.0) {
        let p = discrimination_probability(d).unwrap();
        prop_assert!((p - (0.5 + d / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn format_float_round_trips_twelve_digits(x in prop::num::f64::NORMAL) {
        let back: f64 = format_float(x).parse().unwrap();
        prop_assert!(((back - x) / x).abs() < 1e-11);
    }

    #[test]
    fn partial_charges_add_up(charges in prop::collection::vec(-3i64..=3, 1..=8), index in any::<usize>(), cut in 0usize..=8) {
        let n = charges.len();
        let cut = cut.min(n);
        let ca = ChargeAssignment::new(charges).unwrap();
        let index = index % (1usize << n);
        prop_assert_eq!(
            ca.partial_charge(index, 0, cut) + ca.partial_charge(index, cut, n - cut),
            ca.basis_charge(index)
        );
    }

    #[test]
    fn sector_dimensions_cover_the_space(n in 1u32..=10) {
        let ca = ChargeAssignment::hamming(n);
        let total: usize = (0..=n as i64).map(|q| ca.sector_dim(q)).sum();
        prop_assert_eq!(total, 1usize << n);
    }

    #[test]
    fn stats_are_shift_invariant(values in prop::collection::vec(-1e3f64..1e3, 2..50), shift in -1e3f64..1e3) {
        let a = Stats::from_samples(&values).unwrap();
        let shifted: Vec<f64> = values.iter().map(|v| v + shift).collect();
        let b = Stats::from_samples(&shifted).unwrap();
        prop_assert!((b.mean - a.mean - shift).abs() < 1e-9);
        prop_assert!((b.std_dev - a.std_dev).abs() < 1e-7);
        prop_assert!((a.stderr - a.std_dev / (values.len() as f64).sqrt()).abs() < 1e-12);
    }
}
