#![allow(dead_code)]

use chainbound::dataset::{Matrix, MultiLabelDataset};
use chainbound::dependency::TransitionTable;
use chainbound::sign::Sign;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dist(p: f64) -> [f64; 2] {
    [1.0 - p, p]
}

/// Arbitrary kernel and marginal, each entry uniform on (0, 1).
pub fn random_table(rng: &mut ChaCha8Rng) -> TransitionTable {
    let a: f64 = rng.random();
    let b: f64 = rng.random();
    let q: f64 = rng.random();
    TransitionTable::from_probabilities(2, [dist(a), dist(b)], dist(q)).unwrap()
}

pub fn random_signs(rng: &mut ChaCha8Rng, n: usize, p_pos: f64) -> Vec<Sign> {
    (0..n)
        .map(|_| {
            if rng.random::<f64>() < p_pos {
                Sign::Pos
            } else {
                Sign::Neg
            }
        })
        .collect()
}

/// Features on a coarse grid so that ties occur.
pub fn random_dataset(rng: &mut ChaCha8Rng, m: usize, d: usize, k: usize) -> MultiLabelDataset {
    let flat: Vec<f64> = (0..m * d)
        .map(|_| rng.random_range(0..6) as f64 * 0.5)
        .collect();
    let labels = (0..m).map(|_| random_signs(rng, k, 0.5)).collect();
    MultiLabelDataset::new(Matrix::new(m, d, flat).unwrap(), labels).unwrap()
}

pub fn signs(v: &[i64]) -> Vec<Sign> {
    v.iter().map(|&x| Sign::try_from_i64(x).unwrap()).collect()
}
