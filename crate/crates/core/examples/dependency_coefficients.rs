//! Dependency coefficients of one chain step: per-index TV, the gamma
//! vector in each evaluation mode, and the Monte-Carlo diagnostic.

use chainbound::dependency::{gamma_monte_carlo, per_index_tv, CoefficientMode};
use chainbound::{coefficients_for_step, gamma_exact, gamma_upper, generate, ChainOrder, GeneratorSpec, Sign};

pub fn run_example() -> chainbound::Result<()> {
    let data = generate(&GeneratorSpec::symmetric(400, 1, 2, 0.6, 3))?.data;
    let order = ChainOrder::identity(2);
    let c = coefficients_for_step(&data, &order, 2, 1.0, 12, CoefficientMode::Auto)?;
    println!("m={} rho={:.4} per-index rho={:.4} s={:.4e}", c.m(), c.rho, c.per_index_rho, c.s);
    for l in [1, c.m() - 20, c.m() - 12, c.m() - 5, c.m(), c.m() + 1] {
        let g = &c.gamma[l - 1];
        println!("  gamma[{:>3}] n={:>3} {:?} = {:.6}", g.l, g.n, g.mode, g.value);
    }

    let table = chainbound::dependency::transitions_for_step(&data, &order, 2, 1.0)?;
    println!(
        "per-index TV: prev=-1 {:.4}, prev=+1 {:.4}",
        per_index_tv(&table, Sign::Neg),
        per_index_tv(&table, Sign::Pos)
    );
    for n in [1, 4, 8, 12] {
        let (mc, se) = gamma_monte_carlo(&table, n, 10_000, 1)?;
        println!(
            "  n={n:>2}: exact {:.5}, upper {:.5}, Monte Carlo {:.5} +- {:.5}",
            gamma_exact(&table, n, 12)?,
            gamma_upper(&table, n),
            mc,
            se
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
