//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always visible under
//! `cargo test`. Exits non-zero if any criterion fails.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use chainbound::bound::{bound_chain, compute_bound, BoundConfig};
use chainbound::chain::{train_chain, ChainOrder};
use chainbound::datagen::{generate, GeneratorSpec};
use chainbound::dataset::{Matrix, MultiLabelDataset};
use chainbound::dependency::{
    coefficients_for_step, coefficients_from_table, estimate_transitions, gamma_exact, gamma_upper, rho,
    CoefficientMode, DependencyCoefficients, DEFAULT_N_EXACT,
};
use chainbound::learners::TrainConfig;
use chainbound::oracles::{exhaustive_rademacher, max_assignment_tv, stump_grid};
use chainbound::ordering::{evaluate_order, propose_order, EvaluationConfig, OrderStrategy};
use chainbound::rademacher::{enumerate_rademacher, estimate_rademacher, HypothesisClass, RademacherEstimate, SupMethod};
use chainbound::sign::Sign;
use rand::Rng;
use rayon::prelude::*;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_independent_reduction() -> Result<String, String> {
    let data = generate(&GeneratorSpec::symmetric(100, 2, 1, 0.0, 1)).unwrap().data;
    let fit = train_chain(&data, &ChainOrder::identity(1), &TrainConfig::stump()).unwrap();
    let config = BoundConfig::default();
    let report = bound_chain(&data, None, &fit.model, &config).unwrap();
    let step = &report.steps[0];
    ensure(step.rho == 0.0 && step.gamma_1 == 0.0 && step.s == 100.0, || {
        format!("step-1 coefficients not zero: rho={} gamma_1={} s={}", step.rho, step.gamma_1, step.s)
    })?;
    let classical = step.empirical_risk + step.rademacher.mean + ((1.0 / config.delta).ln() / 200.0).sqrt();
    ensure((step.rhs - classical).abs() <= 1e-12, || format!("rhs {} vs classical {classical}", step.rhs))?;

    let c = DependencyCoefficients::independent(1, 100, 1.0, 12);
    let rhs = compute_bound(0.1, &c, &RademacherEstimate::fixed(0.2, SupMethod::ExactStump), 0.05, 100)
        .unwrap()
        .rhs;
    let reference = 0.422_387_341_534_040_8;
    ensure((rhs - reference).abs() <= 1e-12, || format!("worked value {rhs} vs {reference}"))?;
    Ok(format!("chain rhs {:.12} = classical; worked example rhs {rhs:.10}", step.rhs))
}

/// `m` rows whose previous label is balanced and whose current label is `+1`
/// in exactly three quarters of each block.
fn exactly_independent(m: usize) -> MultiLabelDataset {
    assert_eq!(m % 8, 0);
    let labels: Vec<Vec<Sign>> = (0..m)
        .map(|i| {
            let prev = if i < m / 2 { Sign::Neg } else { Sign::Pos };
            let curr = if i % 4 == 0 { Sign::Neg } else { Sign::Pos };
            vec![prev, curr]
        })
        .collect();
    let rows: Vec<[f64; 1]> = (0..m).map(|i| [i as f64]).collect();
    MultiLabelDataset::new(Matrix::from_rows(&rows).unwrap(), labels).unwrap()
}

fn c2_zero_dependence() -> Result<String, String> {
    for m in [8usize, 64, 400] {
        let data = exactly_independent(m);
        let c = coefficients_for_step(&data, &ChainOrder::identity(2), 2, 0.0, DEFAULT_N_EXACT, CoefficientMode::Auto)
            .unwrap();
        ensure(c.rho == 0.0 && c.per_index_rho == 0.0, || format!("m={m}: rho {} / {}", c.rho, c.per_index_rho))?;
        ensure(c.gamma.iter().all(|g| g.value == 0.0), || format!("m={m}: non-zero gamma"))?;
        ensure(c.s == m as f64, || format!("m={m}: s = {}", c.s))?;
    }
    Ok("rho = 0, gamma = 0, s = m exactly for m in {8, 64, 400}".into())
}

fn c3_exact_tv_oracle() -> Result<String, String> {
    let tables: Vec<_> = {
        let mut rng = common::rng(3);
        (0..100).map(|_| common::random_table(&mut rng)).collect()
    };
    let worst = tables
        .par_iter()
        .enumerate()
        .map(|(i, t)| -> Result<f64, String> {
            let mut worst = 0.0f64;
            for n in 0..=12 {
                let fast = gamma_exact(t, n, DEFAULT_N_EXACT).unwrap();
                let slow = max_assignment_tv(t, n).unwrap();
                worst = worst.max((fast - slow).abs());
                ensure((fast - slow).abs() <= 1e-12, || format!("table {i}, n={n}: {fast} vs {slow}"))?;
                ensure(gamma_upper(t, n) >= fast, || format!("table {i}, n={n}: upper below exact"))?;
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(format!("100 tables x n=0..12, max |exact - oracle| = {worst:.1e}, upper >= exact"))
}

fn c4_markov_identity() -> Result<String, String> {
    let mut rng = common::rng(4);
    for i in 0..1000 {
        let m = rng.random_range(2..200);
        let (p_prev, p_curr): (f64, f64) = (rng.random(), rng.random());
        let prev = common::random_signs(&mut rng, m, p_prev);
        let curr = common::random_signs(&mut rng, m, p_curr);
        let alpha = [0.0, 0.5, 1.0][i % 3];
        let t = estimate_transitions(&prev, &curr, alpha).unwrap();
        let c = coefficients_from_table(&t, m, DEFAULT_N_EXACT, CoefficientMode::Auto).unwrap();
        let n = m - 1;
        let direct = if n <= DEFAULT_N_EXACT { gamma_exact(&t, n, DEFAULT_N_EXACT).unwrap() } else { gamma_upper(&t, n) };
        ensure(c.rho == c.gamma_1() && c.gamma_1() == direct, || {
            format!("table {i}: rho {} gamma_1 {} direct {direct}", c.rho, c.gamma_1())
        })?;
    }
    Ok("rho == gamma[1] bitwise on 1000 estimated tables".into())
}

fn c5_monotonicity() -> Result<String, String> {
    let mut rng = common::rng(5);
    for i in 0..100 {
        let t = common::random_table(&mut rng);
        let values: Vec<f64> = (0..=12).map(|n| gamma_exact(&t, n, DEFAULT_N_EXACT).unwrap()).collect();
        ensure(values.windows(2).all(|w| w[1] >= w[0]), || format!("table {i}: gamma_exact {values:?}"))?;
        let c = coefficients_from_table(&t, 40, DEFAULT_N_EXACT, CoefficientMode::Auto).unwrap();
        ensure(c.gamma.windows(2).all(|w| w[1].value <= w[0].value), || format!("table {i}: gamma vector increases"))?;
    }
    Ok("gamma_exact non-decreasing in n; gamma non-increasing in l (100 tables)".into())
}

fn c6_estimator_consistency() -> Result<String, String> {
    let truth = GeneratorSpec::symmetric(10_000, 1, 2, 0.8, 0).ground_truth().unwrap();
    let true_rho = rho(&truth[0]);
    ensure((true_rho - 0.8).abs() < 1e-12, || format!("ground-truth rho {true_rho}"))?;
    let deviations: Vec<f64> = (0..20u64)
        .into_par_iter()
        .map(|seed| {
            let data = generate(&GeneratorSpec::symmetric(10_000, 1, 2, 0.8, seed)).unwrap().data;
            let c = coefficients_for_step(&data, &ChainOrder::identity(2), 2, 1.0, DEFAULT_N_EXACT, CoefficientMode::Auto)
                .unwrap();
            (c.per_index_rho - true_rho).abs()
        })
        .collect();
    let worst = deviations.iter().cloned().fold(0.0, f64::max);
    ensure(worst <= 0.05, || format!("max |rho_hat - 0.8| = {worst}"))?;
    Ok(format!("20 seeds at m=10^4, max |rho_hat - 0.8| = {worst:.4}"))
}

fn c7_rademacher_oracle() -> Result<String, String> {
    let mut checked = 0;
    let mut worst_gap = 0.0f64;
    let mut worst_z = 0.0f64;
    for m in 2..=8usize {
        for rep in 0..3u64 {
            let mut rng = common::rng(700 + 10 * m as u64 + rep);
            let x: Vec<f64> = (0..2 * m).map(|_| rng.random_range(0..5) as f64).collect();
            let rows = Matrix::new(m, 2, x).unwrap();
            let y = common::random_signs(&mut rng, m, 0.5);
            let exact = enumerate_rademacher(&rows, &y, &HypothesisClass::Stumps).unwrap().mean;
            let oracle = exhaustive_rademacher(&y, &stump_grid(&rows)).unwrap();
            worst_gap = worst_gap.max((exact - oracle).abs());
            ensure((exact - oracle).abs() <= 1e-12, || format!("m={m}: {exact} vs oracle {oracle}"))?;
            let mc = estimate_rademacher(&rows, &y, 2000, rep, &HypothesisClass::Stumps).unwrap();
            let gap = (mc.mean - exact).abs();
            if mc.std_error > 0.0 {
                worst_z = worst_z.max(gap / mc.std_error);
            }
            ensure(gap <= 3.0 * mc.std_error, || {
                format!("m={m}: Monte Carlo {} +- {} vs {exact}", mc.mean, mc.std_error)
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} samples, max |enum - oracle| = {worst_gap:.1e}, max Monte-Carlo z = {worst_z:.2}"
    ))
}

fn c8_bound_validity() -> Result<String, String> {
    struct Run {
        informative: usize,
        violations: Vec<String>,
    }
    let runs: Vec<Run> = (0..100u64)
        .into_par_iter()
        .map(|r| {
            let spec = GeneratorSpec::symmetric(500, 2, 3, 0.6, r);
            let train = generate(&spec).unwrap().data;
            let test = generate(&GeneratorSpec { m: 20_000, seed: 1_000_000 + r, ..spec }).unwrap().data;
            let fit = train_chain(&train, &ChainOrder::identity(3), &TrainConfig::stump()).unwrap();
            let config = BoundConfig {
                rademacher_seed: r,
                ..BoundConfig::default()
            };
            let report = bound_chain(&train, Some(&test), &fit.model, &config).unwrap();
            let mut run = Run {
                informative: 0,
                violations: Vec::new(),
            };
            for s in &report.steps {
                if s.rhs < 1.0 {
                    run.informative += 1;
                    let risk = s.test_risk.unwrap();
                    if risk > s.rhs {
                        run.violations.push(format!("run {r} step {}: test {risk} > rhs {}", s.k, s.rhs));
                    }
                }
            }
            run
        })
        .collect();
    let informative: usize = runs.iter().map(|r| r.informative).sum();
    let violations: Vec<&String> = runs.iter().flat_map(|r| &r.violations).collect();
    ensure(violations.is_empty(), || format!("{} violations, first: {}", violations.len(), violations[0]))?;
    Ok(format!(
        "100 runs, {informative} of 300 steps non-vacuous, 0 violations"
    ))
}

fn c9_dependence_monotonicity() -> Result<String, String> {
    let mut summary = Vec::new();
    for seed in 0..5u64 {
        let mut conc: Vec<Vec<(f64, f64)>> = Vec::new();
        for dep in [0.0, 0.4, 0.8] {
            let data = generate(&GeneratorSpec::symmetric(500, 2, 3, dep, seed)).unwrap().data;
            let fit = train_chain(&data, &ChainOrder::identity(3), &TrainConfig::stump()).unwrap();
            let report = bound_chain(&data, None, &fit.model, &BoundConfig::default()).unwrap();
            conc.push(report.steps.iter().map(|s| (s.concentration_term, s.s)).collect());
        }
        for k in 2..=3 {
            let series: Vec<(f64, f64)> = conc.iter().map(|c| c[k - 1]).collect();
            ensure(series.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1), || {
                format!("seed {seed}, step {k}: (concentration, s) over dep = {series:?}")
            })?;
            if seed == 0 {
                summary.push(format!(
                    "k={k}: {:.3} < {:.3} < {:.3}",
                    series[0].0, series[1].0, series[2].0
                ));
            }
        }
    }
    Ok(format!("strict in dep over 5 seeds, m=500; seed 0 {}", summary.join(", ")))
}

fn balanced_k3() -> MultiLabelDataset {
    let rows: Vec<[f64; 1]> = (0..8).map(|i| [i as f64]).collect();
    let labels = (0..8)
        .map(|i| (0..3).map(|b| if i >> b & 1 == 1 { Sign::Pos } else { Sign::Neg }).collect())
        .collect();
    MultiLabelDataset::new(Matrix::from_rows(&rows).unwrap(), labels).unwrap()
}

fn c10_order_machinery() -> Result<String, String> {
    let mut eval = EvaluationConfig::default();
    eval.bound.n_sigma = 50;
    for seed in 0..3u64 {
        let data = generate(&GeneratorSpec::symmetric(300, 2, 3, 0.7, seed)).unwrap().data;
        let chosen = propose_order(&data, &OrderStrategy::ExhaustiveMinBound { evaluation: eval.clone() }, eval.bound.alpha)
            .unwrap();
        let (train, test) = data.split(eval.train_fraction, eval.split_seed).unwrap();
        let scores: Vec<(ChainOrder, f64)> = ChainOrder::all(3)
            .into_iter()
            .map(|o| {
                let s = evaluate_order(&train, &test, &o, &eval).unwrap().rhs_sum();
                (o, s)
            })
            .collect();
        let mut best = &scores[0];
        for s in &scores {
            if s.1 < best.1 {
                best = s;
            }
        }
        ensure(chosen == best.0, || format!("seed {seed}: exhaustive {chosen} vs brute force {}", best.0))?;
        for strategy in [OrderStrategy::GreedyMinRho, OrderStrategy::GreedyMaxRho] {
            let o = propose_order(&data, &strategy, 1.0).unwrap();
            let mut sorted = o.as_slice().to_vec();
            sorted.sort_unstable();
            ensure(sorted == vec![0, 1, 2], || format!("{strategy:?} returned {o}"))?;
        }
    }
    let tie = balanced_k3();
    let lo = propose_order(&tie, &OrderStrategy::GreedyMinRho, 1.0).unwrap();
    let hi = propose_order(&tie, &OrderStrategy::GreedyMaxRho, 1.0).unwrap();
    ensure(lo == hi && lo.as_slice() == [0, 1, 2], || format!("all-equal rho: min {lo}, max {hi}"))?;
    Ok("exhaustive = brute force on 3 datasets; greedy ties resolve to 0,1,2".into())
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_chainbound"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr).trim())
    })
}

const CLI_SCRIPT: &[&[&str]] = &[
    &["gen", "--m", "400", "--d", "3", "--k", "3", "--dep", "0.9", "--seed", "42", "--out", "data.csv"],
    &["train", "--data", "data.csv", "--labels", "3", "--order", "0,1,2", "--learner", "stump", "--seed", "42", "--out", "model.json"],
    &["train", "--data", "data.csv", "--labels", "3", "--order", "2,0,1", "--learner", "logistic", "--seed", "42", "--out", "logistic.json"],
    &["train", "--data", "data.csv", "--labels", "3", "--train-frac", "0.7", "--seed", "3", "--out", "split.json"],
    &["predict", "--data", "data.csv", "--model", "model.json", "--out", "pred.csv"],
    &["predict", "--data", "data.csv", "--model", "logistic.json", "--out", "pred_logistic.csv"],
    &["coeffs", "--data", "data.csv", "--labels", "3", "--out", "coeffs.json"],
    &["bound", "--data", "data.csv", "--labels", "3", "--model", "model.json", "--delta", "0.05", "--seed", "7", "--out", "bound.json"],
    &["bound", "--data", "data.csv", "--labels", "3", "--model", "logistic.json", "--n-sigma", "30", "--out", "bound_logistic.json"],
    &["bound", "--data", "data.csv", "--labels", "3", "--model", "split.json", "--train-frac", "0.7", "--seed", "3", "--out", "bound_split.json"],
    &["order", "--data", "data.csv", "--labels", "3", "--strategy", "identity", "--out", "o_identity.json"],
    &["order", "--data", "data.csv", "--labels", "3", "--strategy", "random", "--seed", "5", "--out", "o_random.json"],
    &["order", "--data", "data.csv", "--labels", "3", "--strategy", "greedy-min-rho", "--out", "o_min.json"],
    &["order", "--data", "data.csv", "--labels", "3", "--strategy", "greedy-max-rho", "--out", "o_max.json"],
    &["order", "--data", "data.csv", "--labels", "3", "--strategy", "exhaustive", "--n-sigma", "20", "--out", "o_exhaustive.json"],
    &["compare", "--data", "data.csv", "--labels", "3", "--order", "0,1,2", "--order", "2,1,0", "--n-sigma", "40", "--out", "compare.json"],
];

fn c11_cli_determinism() -> Result<String, String> {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    for dir in [a.path(), b.path()] {
        for args in CLI_SCRIPT {
            run_cli(dir, args)?;
        }
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    for name in &names {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).map_err(|e| format!("{name:?} missing in second run: {e}"))?;
        ensure(x == y, || format!("{name:?} differs between runs"))?;
    }
    Ok(format!("{} commands, {} output files byte-identical", CLI_SCRIPT.len(), names.len()))
}

fn main() {
    let criteria: [(&str, Duration, Check); 11] = [
        ("independent reduction", Duration::from_secs(1), c1_independent_reduction),
        ("zero-dependence property", Duration::from_secs(1), c2_zero_dependence),
        ("exact-TV oracle equivalence", Duration::from_secs(60), c3_exact_tv_oracle),
        ("Markov identity rho = gamma_1", Duration::from_secs(5), c4_markov_identity),
        ("monotonicity of gamma", Duration::from_secs(60), c5_monotonicity),
        ("estimator consistency", Duration::from_secs(30), c6_estimator_consistency),
        ("Rademacher oracle equivalence", Duration::from_secs(60), c7_rademacher_oracle),
        ("empirical bound validity", Duration::from_secs(600), c8_bound_validity),
        ("dependence monotonicity of the bound", Duration::from_secs(300), c9_dependence_monotonicity),
        ("order machinery", Duration::from_secs(300), c10_order_machinery),
        ("CLI end-to-end determinism", Duration::from_secs(120), c11_cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
