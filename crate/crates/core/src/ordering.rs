//! Chain-order selection and comparison driven by the dependency
//! coefficients.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bound::{bound_chain, BoundConfig, BoundReport};
use crate::chain::{train_chain, ChainOrder};
use crate::dataset::MultiLabelDataset;
use crate::dependency::{estimate_transitions, rho};
use crate::error::{Error, Result};
use crate::learners::TrainConfig;
use crate::sign::Sign;

/// Largest label count for exhaustive search (`6! = 720` chains).
pub const MAX_EXHAUSTIVE_K: usize = 6;

/// How a candidate order is trained and scored on held-out data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationConfig {
    pub train: TrainConfig,
    pub bound: BoundConfig,
    pub train_fraction: f64,
    pub split_seed: u64,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        EvaluationConfig {
            train: TrainConfig::default(),
            bound: BoundConfig::default(),
            train_fraction: 0.7,
            split_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderStrategy {
    Identity,
    Random { seed: u64 },
    GreedyMinRho,
    GreedyMaxRho,
    /// Minimizes the summed per-step bound over all permutations
    /// (`K <= 6`); `evaluation.bound.delta` is the confidence parameter.
    ExhaustiveMinBound { evaluation: EvaluationConfig },
}

/// Binary entropy (nats) of a label column's empirical marginal.
pub fn label_entropy(column: &[Sign]) -> f64 {
    let p = column.iter().filter(|s| **s == Sign::Pos).count() as f64 / column.len() as f64;
    [p, 1.0 - p]
        .iter()
        .filter(|&&q| q > 0.0)
        .map(|&q| -q * q.ln())
        .sum()
}

/// Per-index rho of the table from label `from` to label `to`.
pub fn pairwise_rho(data: &MultiLabelDataset, from: usize, to: usize, alpha: f64) -> Result<f64> {
    let t = estimate_transitions(&data.label_column(from), &data.label_column(to), alpha)?;
    Ok(rho(&t))
}

fn greedy(data: &MultiLabelDataset, alpha: f64, maximize: bool) -> Result<ChainOrder> {
    let k = data.k();
    let columns: Vec<Vec<Sign>> = (0..k).map(|j| data.label_column(j)).collect();
    let mut start = 0;
    let mut best_h = f64::NEG_INFINITY;
    for (j, col) in columns.iter().enumerate() {
        let h = label_entropy(col);
        if h > best_h {
            best_h = h;
            start = j;
        }
    }
    let mut order = vec![start];
    let mut used = vec![false; k];
    used[start] = true;
    while order.len() < k {
        let last = *order.last().unwrap();
        let mut pick: Option<(usize, f64)> = None;
        for cand in (0..k).filter(|&c| !used[c]) {
            let r = rho(&estimate_transitions(&columns[last], &columns[cand], alpha)?);
            let better = match pick {
                None => true,
                Some((_, best)) => {
                    if maximize {
                        r > best
                    } else {
                        r < best
                    }
                }
            };
            if better {
                pick = Some((cand, r));
            }
        }
        let (cand, _) = pick.expect("an unused label remains");
        used[cand] = true;
        order.push(cand);
    }
    ChainOrder::new(order, k)
}

/// Trains on `train` with `order`, then bounds against `test`.
pub fn evaluate_order(
    train: &MultiLabelDataset,
    test: &MultiLabelDataset,
    order: &ChainOrder,
    eval: &EvaluationConfig,
) -> Result<BoundReport> {
    let fit = train_chain(train, order, &eval.train)?;
    bound_chain(train, Some(test), &fit.model, &eval.bound)
}

fn exhaustive(data: &MultiLabelDataset, eval: &EvaluationConfig) -> Result<ChainOrder> {
    let k = data.k();
    if k > MAX_EXHAUSTIVE_K {
        return Err(Error::TooLarge {
            what: "labels for exhaustive order search",
            found: k,
            limit: MAX_EXHAUSTIVE_K,
        });
    }
    let (train, test) = data.split(eval.train_fraction, eval.split_seed)?;
    let candidates = ChainOrder::all(k);
    let scores: Vec<f64> = candidates
        .par_iter()
        .map(|o| evaluate_order(&train, &test, o, eval).map(|r| r.rhs_sum()))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s < scores[best] {
            best = i;
        }
    }
    Ok(candidates[best].clone())
}

/// Proposes a chain order with the given strategy.
pub fn propose_order(data: &MultiLabelDataset, strategy: &OrderStrategy, alpha: f64) -> Result<ChainOrder> {
    let k = data.k();
    match strategy {
        OrderStrategy::Identity => Ok(ChainOrder::identity(k)),
        OrderStrategy::Random { seed } => {
            let mut order: Vec<usize> = (0..k).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
            ChainOrder::new(order, k)
        }
        OrderStrategy::GreedyMinRho => greedy(data, alpha, false),
        OrderStrategy::GreedyMaxRho => greedy(data, alpha, true),
        OrderStrategy::ExhaustiveMinBound { evaluation } => {
            let mut eval = evaluation.clone();
            eval.bound.alpha = alpha;
            exhaustive(data, &eval)
        }
    }
}

/// One row of an order comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderComparison {
    pub order: ChainOrder,
    pub mean_test_risk: f64,
    pub per_step_test_risk: Vec<f64>,
    pub mean_rhs: f64,
    pub per_step_rhs: Vec<f64>,
}

impl OrderComparison {
    pub fn from_report(report: &BoundReport) -> Self {
        let per_step_test_risk: Vec<f64> = report.steps.iter().filter_map(|s| s.test_risk).collect();
        let per_step_rhs: Vec<f64> = report.steps.iter().map(|s| s.rhs).collect();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        OrderComparison {
            order: report.meta.order.clone(),
            mean_test_risk: mean(&per_step_test_risk),
            mean_rhs: mean(&per_step_rhs),
            per_step_test_risk,
            per_step_rhs,
        }
    }
}

/// Trains one chain per order on a shared split and reports test risks and
/// bounds. Rows follow the input order.
pub fn compare_orders(
    data: &MultiLabelDataset,
    orders: &[ChainOrder],
    eval: &EvaluationConfig,
) -> Result<Vec<OrderComparison>> {
    if orders.is_empty() {
        return Err(Error::invalid("no orders to compare"));
    }
    for o in orders {
        if o.len() != data.k() {
            return Err(Error::InvalidPermutation(format!(
                "order {o} does not cover the {} labels",
                data.k()
            )));
        }
    }
    let (train, test) = data.split(eval.train_fraction, eval.split_seed)?;
    orders
        .par_iter()
        .map(|o| evaluate_order(&train, &test, o, eval).map(|r| OrderComparison::from_report(&r)))
        .collect()
}
