//! Chain orders proposed by each strategy on data whose generative chain is
//! hidden behind a label permutation.

use chainbound::ordering::pairwise_rho;
use chainbound::{generate, propose_order, EvaluationConfig, GeneratorSpec, OrderStrategy};

pub fn run_example() -> chainbound::Result<()> {
    let spec = GeneratorSpec {
        transition_matrices: vec![[[0.95, 0.05], [0.1, 0.9]], [[0.6, 0.4], [0.4, 0.6]], [[0.85, 0.15], [0.2, 0.8]]],
        ..GeneratorSpec::symmetric(800, 2, 4, 0.0, 21)
    };
    // Original label j is stored in column perm^-1(j).
    let data = generate(&spec)?.data.permute_labels(&[2, 0, 3, 1])?;

    for a in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|b| if a == b { "  -  ".into() } else { format!("{:.3}", pairwise_rho(&data, a, b, 1.0).unwrap()) })
            .collect();
        println!("rho({a}, .) = [{}]", row.join(", "));
    }

    let mut eval = EvaluationConfig::default();
    eval.bound.n_sigma = 50;
    for strategy in [
        OrderStrategy::Identity,
        OrderStrategy::Random { seed: 4 },
        OrderStrategy::GreedyMinRho,
        OrderStrategy::GreedyMaxRho,
        OrderStrategy::ExhaustiveMinBound { evaluation: eval },
    ] {
        let order = propose_order(&data, &strategy, 1.0)?;
        let name = serde_json::to_value(&strategy)?["kind"].as_str().unwrap_or_default().to_string();
        println!("{name:>20}: {order}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
