//! Cross-checks the production estimators against the brute-force oracles.

use chainbound::dataset::Matrix;
use chainbound::dependency::TransitionTable;
use chainbound::oracles::{brute_force_min_stump_loss, exhaustive_rademacher, max_assignment_tv, stump_grid};
use chainbound::rademacher::enumerate_rademacher;
use chainbound::{gamma_exact, train_erm, HypothesisClass, Sign, TrainConfig};

pub fn run_example() -> chainbound::Result<()> {
    let t = TransitionTable::from_probabilities(2, [[0.8, 0.2], [0.35, 0.65]], [0.6, 0.4])?;
    for n in [1, 3, 6, 10] {
        println!("n={n:>2}: gamma_exact {:.12} oracle {:.12}", gamma_exact(&t, n, 12)?, max_assignment_tv(&t, n)?);
    }

    let rows = Matrix::from_rows(&[[0.1, 3.0], [0.4, 1.0], [0.2, 2.0], [0.9, 0.0], [0.5, 2.5], [0.7, 1.5]])?;
    let y: Vec<Sign> = [1, -1, 1, -1, 1, -1].iter().map(|&v| Sign::try_from_i64(v).unwrap()).collect();
    let w = [1.0, 2.0, 0.5, 1.0, 1.0, 0.25];
    let clf = train_erm(&rows, &y, &w, &TrainConfig::stump())?;
    let preds = clf.predict_rows(&rows)?;
    let loss: f64 = preds.iter().zip(&y).zip(&w).filter(|((p, t), _)| p != t).fold(0.0, |acc, (_, w)| acc + w);
    println!("stump ERM loss {loss}, oracle {}", brute_force_min_stump_loss(&rows, &y, &w));

    let fast = enumerate_rademacher(&rows, &y, &HypothesisClass::Stumps)?.mean;
    let slow = exhaustive_rademacher(&y, &stump_grid(&rows))?;
    println!("Rademacher: sweep {fast:.12}, oracle {slow:.12}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
