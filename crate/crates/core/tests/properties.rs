mod common;

use common::random_state;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varqsim::optimizers::{minimize_bfgs, minimize_simplex, BfgsOptions, Gradient, SimplexOptions};
use varqsim::partitioned::{random_circuit, PartitionedState};
use varqsim::problems::CoverGenerator;
use varqsim::statevector::Bitstring;
use varqsim::variational::QaoaAngles;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_is_undone_by_its_negative(n in 1usize..8, seed in any::<u64>(), theta in -6.0f64..6.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_pauli_string(n, &mut rng);
        let s0 = random_state(n, seed);
        let mut s = s0.clone();
        s.apply_pauli_rotation(&p, theta).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        s.apply_pauli_rotation(&p, -theta).unwrap();
        prop_assert!(s.max_abs_diff(&s0) < 1e-12);
    }

    #[test]
    fn split_then_gather_is_lossless(n in 1usize..9, m_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let m = 1 + ((n - 1) as f64 * m_frac) as usize;
        let s = random_state(n, seed);
        let part = PartitionedState::split(&s, m).unwrap();
        prop_assert_eq!(part.num_ranks(), 1 << (n - m));
        prop_assert_eq!(part.gather().unwrap(), s);
    }

    #[test]
    fn partitioned_replay_matches(n in 2usize..8, m_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let m = 2 + ((n - 2) as f64 * m_frac) as usize;
        let s0 = random_state(n, seed);
        let mut mono = s0.clone();
        let mut part = PartitionedState::split(&s0, m).unwrap();
        for op in random_circuit(n, 40, m.min(2), seed) {
            op.apply(&mut mono).unwrap();
            op.apply_partitioned(&mut part).unwrap();
        }
        prop_assert!(part.gather().unwrap().max_abs_diff(&mono) < 1e-12);
    }

    #[test]
    fn bitstrings_print_and_parse_back(bits in proptest::collection::vec(any::<bool>(), 1..40)) {
        let b = Bitstring::from_bits(&bits).unwrap();
        let text = b.to_string();
        prop_assert_eq!(text.len(), bits.len());
        // most significant bit first
        prop_assert_eq!(text.ends_with('1'), bits[0]);
        prop_assert_eq!(text.parse::<Bitstring>().unwrap(), b);
    }

    #[test]
    fn planted_covers_are_ground_states(n in 1usize..11, flights in 1usize..10, seed in any::<u64>()) {
        let planted = CoverGenerator::new(n, flights).generate(seed);
        prop_assume!(planted.is_ok());
        let planted = planted.unwrap();
        let model = planted.instance.to_ising();
        prop_assert_eq!(planted.instance.cost(&planted.planted).unwrap(), 0);
        let ground = model.ground_states().unwrap();
        prop_assert!((ground.energy + model.offset()).abs() < 1e-12);
        prop_assert!(ground.states.contains(&planted.planted));
    }

    #[test]
    fn qaoa_parameters_round_trip(p in 1usize..8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let betas: Vec<f64> = (0..p).map(|_| rng.random_range(-3.0..3.0)).collect();
        let gammas: Vec<f64> = (0..p).map(|_| rng.random_range(-3.0..3.0)).collect();
        let a = QaoaAngles::new(betas.clone(), gammas.clone()).unwrap();
        let x = a.to_params();
        prop_assert_eq!(&x[..p], &gammas[..]);
        prop_assert_eq!(&x[p..], &betas[..]);
        prop_assert_eq!(QaoaAngles::from_params(&x).unwrap(), a);
    }

    #[test]
    fn optimizers_never_overdraw(budget in 1usize..120, dim in 1usize..6, shift in -3.0f64..3.0) {
        let f = |x: &[f64]| x.iter().map(|v| (v - shift).powi(2)).sum::<f64>();
        let x0 = vec![0.0; dim];
        let s = minimize_simplex(f, &x0, &SimplexOptions { max_evals: budget, ..Default::default() }).unwrap();
        prop_assert!(s.evals <= budget);
        prop_assert_eq!(s.history.len(), s.evals);
        let b = minimize_bfgs(f, Gradient::FiniteDifference, &x0, &BfgsOptions { max_evals: budget, ..Default::default() }).unwrap();
        prop_assert!(b.evals <= budget);
        prop_assert!(b.best_value <= f(&x0) || b.evals == 0);
    }
}
