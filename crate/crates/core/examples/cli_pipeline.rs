//! The command-line pipeline run in-process: generate, train, bound and
//! compare, all in a scratch directory.

use chainbound::cli::main_with_args;

pub fn run_example() -> chainbound::Result<()> {
    let dir = tempfile::tempdir().map_err(|e| chainbound::Error::io("<tempdir>", e))?;
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (data, model, bound, compare) = (p("data.csv"), p("model.json"), p("bound.json"), p("compare.json"));
    let steps: Vec<Vec<&str>> = vec![
        vec!["gen", "--m", "500", "--d", "2", "--k", "3", "--dep", "0.8", "--seed", "1", "--out", &data],
        vec!["train", "--data", &data, "--labels", "3", "--train-frac", "0.7", "--seed", "1", "--out", &model],
        vec!["bound", "--data", &data, "--labels", "3", "--model", &model, "--train-frac", "0.7", "--seed", "1", "--out", &bound],
        vec!["compare", "--data", &data, "--labels", "3", "--order", "0,1,2", "--order", "2,1,0", "--n-sigma", "50", "--out", &compare],
    ];
    for args in steps {
        let status = main_with_args(std::iter::once("chainbound").chain(args.iter().copied()));
        println!("chainbound {} -> exit {status}", args[0]);
        if status != 0 {
            return Err(chainbound::Error::invalid(format!("{} failed", args[0])));
        }
    }
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&bound).map_err(|e| chainbound::Error::io(&bound, e))?)?;
    for s in report["steps"].as_array().unwrap() {
        println!("  step {}: test {:.3}, rhs {:.3}", s["k"], s["test_risk"].as_f64().unwrap(), s["rhs"].as_f64().unwrap());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
