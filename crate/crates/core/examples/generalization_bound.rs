//! Per-step generalization bounds of a trained chain next to its observed
//! test risk.

use chainbound::{bound_chain, generate, train_chain, BoundConfig, ChainOrder, GeneratorSpec, TrainConfig};

pub fn run_example() -> chainbound::Result<()> {
    for dep in [0.0, 0.5, 0.9] {
        let spec = GeneratorSpec::symmetric(1000, 2, 3, dep, 11);
        let train = generate(&spec)?.data;
        let test = generate(&GeneratorSpec { seed: 12, m: 5000, ..spec })?.data;
        let fit = train_chain(&train, &ChainOrder::identity(3), &TrainConfig::stump())?;
        let report = bound_chain(&train, Some(&test), &fit.model, &BoundConfig::default())?;
        println!("dep={dep}");
        for s in &report.steps {
            println!(
                "  k={} train {:.3} test {:.3} R={:.3} gamma_1={:.3} conc={:.3} rhs={:.3}{}",
                s.k,
                s.empirical_risk,
                s.test_risk.unwrap_or(f64::NAN),
                s.rademacher.mean,
                s.gamma_1,
                s.concentration_term,
                s.rhs,
                if s.vacuous { " (vacuous)" } else { "" }
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
