mod common;

use chainbound::dataset::Matrix;
use chainbound::learners::TrainConfig;
use chainbound::oracles::{exhaustive_rademacher, stump_grid};
use chainbound::rademacher::{enumerate_rademacher, estimate_rademacher, loss_correlation_sup, HypothesisClass};
use chainbound::sign::Sign;
use proptest::prelude::*;
use rand::Rng;

fn sample(seed: u64, m: usize, d: usize) -> (Matrix, Vec<Sign>) {
    let mut rng = common::rng(seed);
    let x: Vec<f64> = (0..m * d).map(|_| rng.random_range(0..5) as f64).collect();
    let y = common::random_signs(&mut rng, m, 0.5);
    (Matrix::new(m, d, x).unwrap(), y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sups_lie_in_range(seed in any::<u64>(), m in 1usize..20, d in 1usize..4) {
        let (rows, y) = sample(seed, m, d);
        let sigma = common::random_signs(&mut common::rng(seed ^ 1), m, 0.5);
        for class in [HypothesisClass::Stumps, HypothesisClass::Surrogate(TrainConfig::stump())] {
            let v = loss_correlation_sup(&rows, &y, &sigma, &class).unwrap();
            prop_assert!((0.0..=2.0).contains(&v));
        }
    }

    #[test]
    fn enlarging_a_finite_class_never_lowers_the_sup(seed in any::<u64>(), m in 1usize..10, size in 1usize..6) {
        let mut rng = common::rng(seed);
        let y = common::random_signs(&mut rng, m, 0.5);
        let sigma = common::random_signs(&mut rng, m, 0.5);
        let members: Vec<Vec<Sign>> = (0..size + 1).map(|_| common::random_signs(&mut rng, m, 0.5)).collect();
        let rows = Matrix::new(m, 1, vec![0.0; m]).unwrap();
        let small = HypothesisClass::Finite(members[..size].to_vec());
        let large = HypothesisClass::Finite(members);
        let a = loss_correlation_sup(&rows, &y, &sigma, &small).unwrap();
        let b = loss_correlation_sup(&rows, &y, &sigma, &large).unwrap();
        prop_assert!(b >= a);
    }

    #[test]
    fn exact_stump_sup_dominates_refitting(seed in any::<u64>(), m in 1usize..25, d in 1usize..4) {
        let (rows, y) = sample(seed, m, d);
        let sigma = common::random_signs(&mut common::rng(seed ^ 2), m, 0.5);
        let exact = loss_correlation_sup(&rows, &y, &sigma, &HypothesisClass::Stumps).unwrap();
        let refit = loss_correlation_sup(&rows, &y, &sigma, &HypothesisClass::Surrogate(TrainConfig::stump())).unwrap();
        prop_assert!(exact >= refit - 1e-12, "{exact} < {refit}");
        // One-dimensional logistic models are thresholds or constants, hence
        // stumps.
        let (line, y1) = sample(seed, m, 1);
        let exact1 = loss_correlation_sup(&line, &y1, &sigma, &HypothesisClass::Stumps).unwrap();
        let logistic = HypothesisClass::Surrogate(TrainConfig { max_iterations: 50, ..TrainConfig::logistic() });
        let refit1 = loss_correlation_sup(&line, &y1, &sigma, &logistic).unwrap();
        prop_assert!(exact1 >= refit1 - 1e-12, "{exact1} < {refit1}");
    }

    #[test]
    fn stump_enumeration_matches_the_grid_oracle(seed in any::<u64>(), m in 1usize..=8, d in 1usize..3) {
        let (rows, y) = sample(seed, m, d);
        let fast = enumerate_rademacher(&rows, &y, &HypothesisClass::Stumps).unwrap();
        let slow = exhaustive_rademacher(&y, &stump_grid(&rows)).unwrap();
        prop_assert!((fast.mean - slow).abs() < 1e-12, "{} vs {slow}", fast.mean);
    }
}

#[test]
fn monte_carlo_converges_to_enumeration() {
    for (i, m) in [4usize, 7, 10, 12].into_iter().enumerate() {
        let (rows, y) = sample(100 + i as u64, m, 2);
        let class = HypothesisClass::Stumps;
        let exact = enumerate_rademacher(&rows, &y, &class).unwrap().mean;
        let mc = estimate_rademacher(&rows, &y, 3000, i as u64, &class).unwrap();
        assert!(
            (mc.mean - exact).abs() <= 3.0 * mc.std_error,
            "m={m}: {} +- {} vs {exact}",
            mc.mean,
            mc.std_error
        );
    }
}

#[test]
fn estimates_are_seed_deterministic() {
    let (rows, y) = sample(9, 30, 2);
    let a = estimate_rademacher(&rows, &y, 100, 4, &HypothesisClass::Stumps).unwrap();
    let b = estimate_rademacher(&rows, &y, 100, 4, &HypothesisClass::Stumps).unwrap();
    assert_eq!(a, b);
    let c = estimate_rademacher(&rows, &y, 100, 5, &HypothesisClass::Stumps).unwrap();
    assert_ne!(a.mean, c.mean);
}
