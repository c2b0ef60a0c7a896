//! Trains a classifier chain with each learner and predicts held-out label
//! vectors.

use chainbound::chain::chain_step_risks;
use chainbound::{generate, predict_chain, train_chain, ChainOrder, GeneratorSpec, LearnerKind, TrainConfig};

pub fn run_example() -> chainbound::Result<()> {
    let spec = GeneratorSpec::symmetric(600, 2, 3, 0.8, 7);
    let data = generate(&spec)?.data;
    let (train, test) = data.split(0.7, 7)?;
    let order = ChainOrder::parse("0,1,2", 3)?;

    for learner in [LearnerKind::Stump, LearnerKind::Logistic] {
        let config = TrainConfig { learner, ..TrainConfig::default() };
        let fit = train_chain(&train, &order, &config)?;
        let held_out = chain_step_risks(&fit.model, &test)?;
        println!("{learner}: train risks {:?}", fit.step_risks);
        println!("{learner}: test risks  {held_out:?}");
    }

    let fit = train_chain(&train, &order, &TrainConfig::stump())?;
    let x = test.features().row(0);
    println!("x = {x:?} -> {:?} (truth {:?})", predict_chain(&fit.model, x)?, test.label_row(0));
    println!("model JSON: {} bytes", fit.model.to_json()?.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
