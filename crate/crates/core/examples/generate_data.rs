//! Draws a synthetic dataset whose labels follow a known Markov chain and
//! compares the empirical kernels with the generating ones.

use chainbound::dependency::{estimate_transitions, rho};
use chainbound::{generate, GeneratorSpec};

pub fn run_example() -> chainbound::Result<()> {
    let spec = GeneratorSpec {
        label_noise: 0.05,
        ..GeneratorSpec::symmetric(5000, 3, 4, 0.7, 42)
    };
    let g = generate(&spec)?;
    println!("generated m={} d={} K={}", g.data.m(), g.data.d(), g.data.k());

    for truth in &g.ground_truth {
        let k = truth.k;
        let est = estimate_transitions(&g.data.label_column(k - 2), &g.data.label_column(k - 1), 1.0)?;
        println!(
            "step {k}: P(stay) true {:.3} / estimated {:.3}, rho true {:.3} / estimated {:.3}",
            truth.trans[1][1],
            est.trans[1][1],
            rho(truth),
            rho(&est)
        );
    }

    let mut csv = Vec::new();
    g.data.write_csv(&mut csv)?;
    let text = String::from_utf8_lossy(&csv);
    for line in text.lines().take(3) {
        println!("  {line}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
