//! Brute-force reference implementations for tests and acceptance runs.
//!
//! Nothing here is used by the production estimators, and nothing here calls
//! them: only the shared data types ([`TransitionTable`], [`Sign`],
//! [`FeatureRows`]) cross the boundary. Sizes are capped so every oracle
//! stays a plain enumeration.

use crate::dataset::FeatureRows;
use crate::dependency::TransitionTable;
use crate::error::{Error, Result};
use crate::sign::Sign;

pub const MAX_JOINT_VARIABLES: usize = 16;
pub const MAX_ORACLE_M: usize = 12;

/// A fully materialized distribution over `{-1, +1}^n`. Outcome index bit `j`
/// set means coordinate `j` is `+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitJoint {
    n: usize,
    probabilities: Vec<f64>,
}

impl ExplicitJoint {
    pub fn new(n: usize, probabilities: Vec<f64>) -> Result<Self> {
        if n > MAX_JOINT_VARIABLES {
            return Err(Error::TooLarge {
                what: "joint variables",
                found: n,
                limit: MAX_JOINT_VARIABLES,
            });
        }
        if probabilities.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                what: "joint outcomes",
                expected: 1 << n,
                found: probabilities.len(),
            });
        }
        if probabilities.iter().any(|p| p.is_nan() || *p < 0.0) {
            return Err(Error::invalid("negative probability"));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("probabilities sum to {total}")));
        }
        Ok(ExplicitJoint { n, probabilities })
    }

    /// Point mass on one outcome.
    pub fn point(n: usize, outcome: usize) -> Result<Self> {
        let mut p = vec![0.0; 1 << n];
        p[outcome] = 1.0;
        Self::new(n, p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

/// `sum over all 2^n outcomes |p - q|`.
pub fn brute_force_tv(p: &ExplicitJoint, q: &ExplicitJoint) -> Result<f64> {
    if p.n != q.n {
        return Err(Error::DimensionMismatch {
            what: "joint dimension",
            expected: p.n,
            found: q.n,
        });
    }
    Ok(p.probabilities
        .iter()
        .zip(&q.probabilities)
        .map(|(a, b)| (a - b).abs())
        .sum())
}

fn product(factors: &[[f64; 2]]) -> Vec<f64> {
    let mut probs = vec![1.0];
    for f in factors {
        let half = probs.len();
        let mut next = vec![0.0; 2 * half];
        for (idx, p) in probs.iter().enumerate() {
            next[idx] = p * f[0];
            next[idx + half] = p * f[1];
        }
        probs = next;
    }
    probs
}

/// Both product measures for one previous-label assignment:
/// `(prod_j P(. | prev_j), prod_j P(.))`.
pub fn materialize_product(table: &TransitionTable, prev: &[Sign]) -> Result<(ExplicitJoint, ExplicitJoint)> {
    let n = prev.len();
    if n > MAX_JOINT_VARIABLES {
        return Err(Error::TooLarge {
            what: "assignment length",
            found: n,
            limit: MAX_JOINT_VARIABLES,
        });
    }
    let cond: Vec<[f64; 2]> = prev
        .iter()
        .map(|s| match s {
            Sign::Neg => table.trans[0],
            Sign::Pos => table.trans[1],
        })
        .collect();
    let marg = vec![table.marginal; n];
    Ok((
        ExplicitJoint::new(n, product(&cond))?,
        ExplicitJoint::new(n, product(&marg))?,
    ))
}

/// Max over all `2^n` previous-label assignments of the materialized product
/// TV.
pub fn max_assignment_tv(table: &TransitionTable, n: usize) -> Result<f64> {
    let mut best = 0.0f64;
    for mask in 0..1usize << n {
        let prev: Vec<Sign> = (0..n)
            .map(|j| if mask >> j & 1 == 1 { Sign::Pos } else { Sign::Neg })
            .collect();
        let (p, q) = materialize_product(table, &prev)?;
        best = best.max(brute_force_tv(&p, &q)?);
    }
    Ok(best)
}

/// Every stump of the threshold grid as an explicit prediction table, one
/// `Vec<Sign>` per `(feature, threshold, polarity)`.
pub fn stump_grid<R: FeatureRows + ?Sized>(rows: &R) -> Vec<Vec<Sign>> {
    let m = rows.n_rows();
    let mut members = Vec::new();
    for j in 0..rows.width() {
        let mut values: Vec<f64> = (0..m).map(|i| rows.value(i, j)).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        let mut thresholds = vec![f64::NEG_INFINITY];
        thresholds.extend(values.windows(2).map(|w| (w[0] + w[1]) / 2.0));
        thresholds.push(f64::INFINITY);
        for t in thresholds {
            for pol in [Sign::Pos, Sign::Neg] {
                members.push(
                    (0..m)
                        .map(|i| if rows.value(i, j) > t { pol } else { -pol })
                        .collect(),
                );
            }
        }
    }
    members
}

/// Smallest weighted 0/1 loss over the explicit stump grid.
pub fn brute_force_min_stump_loss<R: FeatureRows + ?Sized>(rows: &R, targets: &[Sign], weights: &[f64]) -> f64 {
    stump_grid(rows)
        .iter()
        .map(|f| {
            f.iter()
                .zip(targets)
                .zip(weights)
                .filter(|((p, y), _)| p != y)
                .fold(0.0, |acc, (_, w)| acc + w)
        })
        .fold(f64::INFINITY, f64::min)
}

/// `E_sigma sup_f (2/m) |sum_i sigma_i 1{f_i != y_i}|` by enumerating every
/// sign vector and every class member.
pub fn exhaustive_rademacher(targets: &[Sign], finite_class: &[Vec<Sign>]) -> Result<f64> {
    let m = targets.len();
    if m == 0 {
        return Err(Error::invalid("empty sample"));
    }
    if m > MAX_ORACLE_M {
        return Err(Error::TooLarge {
            what: "oracle sample size",
            found: m,
            limit: MAX_ORACLE_M,
        });
    }
    if finite_class.iter().any(|f| f.len() != m) {
        return Err(Error::invalid("class member length differs from the sample"));
    }
    let mut total = 0.0;
    for mask in 0..1usize << m {
        let mut best = 0.0f64;
        for f in finite_class {
            let mut s = 0i64;
            for i in 0..m {
                if f[i] != targets[i] {
                    s += if mask >> i & 1 == 1 { 1 } else { -1 };
                }
            }
            best = best.max(2.0 * s.abs() as f64 / m as f64);
        }
        total += best;
    }
    Ok(total / (1usize << m) as f64)
}
