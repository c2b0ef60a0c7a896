//! Empirical Rademacher complexity of the 0/1-loss class over a realized
//! (possibly augmented) sample:
//!
//! ```text
//! R = E_sigma [ sup_f (2/m) | sum_i sigma_i 1{f(z_i) != y_i} | ]
//! ```
//!
//! With `1{f != y} = (1 - y f) / 2` the inner sum is `A/2 - B(f)/2` where
//! `A = sum_i sigma_i` and `B(f) = sum_i sigma_i y_i f(z_i)`, so the supremum
//! only needs the range `[B_min, B_max]` of `B` over the class.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::FeatureRows;
use crate::error::{Error, Result};
use crate::learners::{train_erm, StumpSweeper, TrainConfig};
use crate::sign::Sign;

pub const DEFAULT_N_SIGMA: usize = 200;
/// Largest sample for which all `2^m` sign vectors are enumerated.
pub const MAX_ENUMERATION_M: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupMethod {
    ExactStump,
    ErmSurrogate,
    Exhaustive,
}

/// The hypothesis class whose loss class is measured.
#[derive(Debug, Clone, PartialEq)]
pub enum HypothesisClass {
    /// All decision stumps; the supremum is computed exactly.
    Stumps,
    /// The class trained by `config`; the supremum is approximated by refitting
    /// with signed targets, giving a lower estimate.
    Surrogate(TrainConfig),
    /// An explicit finite class given by each member's predictions on the
    /// sample.
    Finite(Vec<Vec<Sign>>),
}

impl HypothesisClass {
    pub fn sup_method(&self) -> SupMethod {
        match self {
            HypothesisClass::Stumps => SupMethod::ExactStump,
            HypothesisClass::Surrogate(_) => SupMethod::ErmSurrogate,
            HypothesisClass::Finite(_) => SupMethod::Exhaustive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RademacherEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_sigma: usize,
    pub sup_method: SupMethod,
}

impl RademacherEstimate {
    /// A fixed value with no sampling error, e.g. for analytic reductions.
    pub fn fixed(mean: f64, sup_method: SupMethod) -> Self {
        RademacherEstimate {
            mean,
            std_error: 0.0,
            n_sigma: 1,
            sup_method,
        }
    }
}

/// Evaluates the supremum for many sign vectors over one sample, caching the
/// per-class preprocessing.
pub struct LossCorrelation<'a, R: FeatureRows + ?Sized> {
    rows: &'a R,
    targets: &'a [Sign],
    class: &'a HypothesisClass,
    sweeper: Option<StumpSweeper>,
}

impl<'a, R: FeatureRows + Sync + ?Sized> LossCorrelation<'a, R> {
    pub fn new(rows: &'a R, targets: &'a [Sign], class: &'a HypothesisClass) -> Result<Self> {
        let m = rows.n_rows();
        if m == 0 {
            return Err(Error::invalid("Rademacher complexity of an empty sample"));
        }
        if targets.len() != m {
            return Err(Error::DimensionMismatch {
                what: "targets",
                expected: m,
                found: targets.len(),
            });
        }
        if let HypothesisClass::Finite(members) = class {
            if members.is_empty() {
                return Err(Error::invalid("finite class has no members"));
            }
            if let Some(bad) = members.iter().find(|f| f.len() != m) {
                return Err(Error::DimensionMismatch {
                    what: "class member predictions",
                    expected: m,
                    found: bad.len(),
                });
            }
        }
        let sweeper = matches!(class, HypothesisClass::Stumps).then(|| StumpSweeper::new(rows));
        Ok(LossCorrelation {
            rows,
            targets,
            class,
            sweeper,
        })
    }

    pub fn m(&self) -> usize {
        self.targets.len()
    }

    /// `sup_f (2/m) |sum_i sigma_i 1{f(z_i) != y_i}|` for one sign vector.
    pub fn sup(&self, sigma: &[Sign]) -> Result<f64> {
        let m = self.m();
        if sigma.len() != m {
            return Err(Error::DimensionMismatch {
                what: "sigma",
                expected: m,
                found: sigma.len(),
            });
        }
        let mf = m as f64;
        let a: f64 = sigma.iter().map(|s| s.to_f64()).sum();
        let coeffs: Vec<f64> = sigma
            .iter()
            .zip(self.targets)
            .map(|(s, y)| s.to_f64() * y.to_f64())
            .collect();
        let from_range = |(b_min, b_max): (f64, f64)| (a - b_min).abs().max((a - b_max).abs()) / mf;

        match self.class {
            HypothesisClass::Stumps => {
                let sweeper = self.sweeper.as_ref().expect("sweeper prepared for stumps");
                Ok(from_range(sweeper.correlation_range(&coeffs)))
            }
            HypothesisClass::Surrogate(config) => {
                // Maximize B with targets sign(c) and weights |c|, and minimize
                // it with the targets flipped; both fits are class members.
                let weights: Vec<f64> = coeffs.iter().map(|c| c.abs()).collect();
                let up: Vec<Sign> = coeffs.iter().map(|&c| Sign::of_score(c)).collect();
                let down: Vec<Sign> = up.iter().map(|&s| -s).collect();
                let b_of = |targets: &[Sign]| -> Result<f64> {
                    let f = train_erm(self.rows, targets, &weights, config)?;
                    let preds = f.predict_rows(self.rows)?;
                    Ok(coeffs.iter().zip(&preds).map(|(c, p)| c * p.to_f64()).sum())
                };
                let b1 = b_of(&up)?;
                let b2 = b_of(&down)?;
                Ok(from_range((b1.min(b2), b1.max(b2))))
            }
            HypothesisClass::Finite(members) => Ok(members
                .iter()
                .map(|f| {
                    let s: f64 = sigma
                        .iter()
                        .zip(f)
                        .zip(self.targets)
                        .filter(|((_, p), y)| p != y)
                        .map(|((s, _), _)| s.to_f64())
                        .sum();
                    2.0 * s.abs() / mf
                })
                .fold(0.0, f64::max)),
        }
    }

    /// Monte-Carlo average over `n_sigma` uniform sign vectors. Draw `t` uses
    /// the ChaCha stream `t` of `seed`, so the result does not depend on the
    /// thread schedule.
    pub fn estimate(&self, n_sigma: usize, seed: u64) -> Result<RademacherEstimate> {
        if n_sigma == 0 {
            return Err(Error::invalid("n_sigma must be at least 1"));
        }
        let m = self.m();
        let values: Vec<f64> = (0..n_sigma)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(t as u64);
                let sigma: Vec<Sign> = (0..m)
                    .map(|_| if rng.random::<bool>() { Sign::Pos } else { Sign::Neg })
                    .collect();
                self.sup(&sigma)
            })
            .collect::<Result<_>>()?;
        Ok(summarize(&values, self.class.sup_method()))
    }

    /// Exact expectation by enumerating all `2^m` sign vectors.
    pub fn enumerate(&self) -> Result<RademacherEstimate> {
        let m = self.m();
        if m > MAX_ENUMERATION_M {
            return Err(Error::TooLarge {
                what: "sample size for sigma enumeration",
                found: m,
                limit: MAX_ENUMERATION_M,
            });
        }
        let n = 1usize << m;
        let values: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|mask| {
                let sigma: Vec<Sign> = (0..m)
                    .map(|i| if mask >> i & 1 == 1 { Sign::Pos } else { Sign::Neg })
                    .collect();
                self.sup(&sigma)
            })
            .collect::<Result<_>>()?;
        let mean = values.iter().sum::<f64>() / n as f64;
        Ok(RademacherEstimate {
            mean,
            std_error: 0.0,
            n_sigma: n,
            sup_method: self.class.sup_method(),
        })
    }
}

fn summarize(values: &[f64], sup_method: SupMethod) -> RademacherEstimate {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std_error = if values.len() > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    RademacherEstimate {
        mean,
        std_error,
        n_sigma: values.len(),
        sup_method,
    }
}

/// One-shot form of [`LossCorrelation::sup`].
pub fn loss_correlation_sup<R: FeatureRows + Sync + ?Sized>(
    rows: &R,
    targets: &[Sign],
    sigma: &[Sign],
    class: &HypothesisClass,
) -> Result<f64> {
    LossCorrelation::new(rows, targets, class)?.sup(sigma)
}

/// Monte-Carlo Rademacher estimate with `n_sigma` draws.
pub fn estimate_rademacher<R: FeatureRows + Sync + ?Sized>(
    rows: &R,
    targets: &[Sign],
    n_sigma: usize,
    seed: u64,
    class: &HypothesisClass,
) -> Result<RademacherEstimate> {
    LossCorrelation::new(rows, targets, class)?.estimate(n_sigma, seed)
}

/// Exact Rademacher expectation via all `2^m` sign vectors (`m <= 20`).
pub fn enumerate_rademacher<R: FeatureRows + Sync + ?Sized>(
    rows: &R,
    targets: &[Sign],
    class: &HypothesisClass,
) -> Result<RademacherEstimate> {
    LossCorrelation::new(rows, targets, class)?.enumerate()
}
