//! Empirical Rademacher complexity of the stump loss class: exact
//! enumeration against Monte Carlo, and the refitting lower estimate.

use chainbound::rademacher::enumerate_rademacher;
use chainbound::{estimate_rademacher, generate, GeneratorSpec, HypothesisClass, TrainConfig};

pub fn run_example() -> chainbound::Result<()> {
    let small = generate(&GeneratorSpec::symmetric(12, 2, 1, 0.0, 5))?.data;
    let y = small.label_column(0);
    let exact = enumerate_rademacher(small.features(), &y, &HypothesisClass::Stumps)?;
    let mc = estimate_rademacher(small.features(), &y, 2000, 0, &HypothesisClass::Stumps)?;
    println!("m=12 enumerated {:.5}, Monte Carlo {:.5} +- {:.5}", exact.mean, mc.mean, mc.std_error);

    for m in [50, 200, 1000] {
        let data = generate(&GeneratorSpec::symmetric(m, 3, 1, 0.0, 5))?.data;
        let y = data.label_column(0);
        let stumps = estimate_rademacher(data.features(), &y, 200, 1, &HypothesisClass::Stumps)?;
        let refit = estimate_rademacher(
            data.features(),
            &y,
            200,
            1,
            &HypothesisClass::Surrogate(TrainConfig::logistic()),
        )?;
        println!(
            "m={m:>4}: stumps {:.4} +- {:.4}, logistic refit {:.4} +- {:.4}",
            stumps.mean, stumps.std_error, refit.mean, refit.std_error
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
