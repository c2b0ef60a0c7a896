//! Exact sweeps over the decision-stump class.
//!
//! A stump `(feature, threshold, polarity)` predicts `polarity` when
//! `x[feature] > threshold` and `-polarity` otherwise. Candidate thresholds
//! per feature are `-inf`, the midpoints between consecutive distinct sorted
//! values and `+inf`; the two sentinels realize the constant predictors.

use crate::dataset::FeatureRows;
use crate::sign::Sign;

/// One cut of a sorted feature column: the first `left` rows of the sort
/// order satisfy `x <= threshold`.
#[derive(Debug, Clone, Copy)]
struct Cut {
    left: usize,
    threshold: f64,
}

#[derive(Debug, Clone)]
struct FeatureOrder {
    sorted: Vec<usize>,
    cuts: Vec<Cut>,
}

/// Sorted per-feature orders of a sample, reusable across many weightings.
#[derive(Debug, Clone)]
pub struct StumpSweeper {
    n_rows: usize,
    features: Vec<FeatureOrder>,
}

/// Best stump found by a sweep together with its objective value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StumpFit {
    pub feature: usize,
    pub threshold: f64,
    pub polarity: Sign,
    pub loss: f64,
}

fn midpoint(a: f64, b: f64) -> f64 {
    let mid = a + (b - a) / 2.0;
    if a <= mid && mid < b {
        mid
    } else {
        a
    }
}

impl StumpSweeper {
    pub fn new<R: FeatureRows + ?Sized>(rows: &R) -> Self {
        let m = rows.n_rows();
        let features = (0..rows.width())
            .map(|j| {
                let mut sorted: Vec<usize> = (0..m).collect();
                sorted.sort_by(|&a, &b| rows.value(a, j).total_cmp(&rows.value(b, j)).then(a.cmp(&b)));
                let mut cuts = vec![Cut {
                    left: 0,
                    threshold: f64::NEG_INFINITY,
                }];
                for p in 1..m {
                    let lo = rows.value(sorted[p - 1], j);
                    let hi = rows.value(sorted[p], j);
                    if lo < hi {
                        cuts.push(Cut {
                            left: p,
                            threshold: midpoint(lo, hi),
                        });
                    }
                }
                cuts.push(Cut {
                    left: m,
                    threshold: f64::INFINITY,
                });
                FeatureOrder { sorted, cuts }
            })
            .collect();
        StumpSweeper { n_rows: m, features }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn width(&self) -> usize {
        self.features.len()
    }

    /// Number of `(feature, threshold, polarity)` candidates in the grid.
    pub fn n_candidates(&self) -> usize {
        self.features.iter().map(|f| 2 * f.cuts.len()).sum()
    }

    /// Thresholds of the candidate grid for `feature`, ascending.
    pub fn thresholds(&self, feature: usize) -> impl Iterator<Item = f64> + '_ {
        self.features[feature].cuts.iter().map(|c| c.threshold)
    }

    /// Exact minimizer of the weighted 0/1 loss over the candidate grid.
    ///
    /// Ties go to the lowest feature index, then the lowest threshold, then
    /// polarity `+1`.
    pub fn min_weighted_loss(&self, targets: &[Sign], weights: &[f64]) -> StumpFit {
        debug_assert_eq!(targets.len(), self.n_rows);
        debug_assert_eq!(weights.len(), self.n_rows);
        let total: f64 = weights.iter().sum();
        // Loss of polarity +1 at threshold -inf: every row predicted +1.
        let start: f64 = targets
            .iter()
            .zip(weights)
            .filter(|(t, _)| **t == Sign::Neg)
            .map(|(_, w)| *w)
            .sum();

        let mut best = StumpFit {
            feature: 0,
            threshold: f64::NEG_INFINITY,
            polarity: Sign::Pos,
            loss: f64::INFINITY,
        };
        for (j, feat) in self.features.iter().enumerate() {
            let mut loss_pos = start;
            let mut moved = 0;
            for cut in &feat.cuts {
                while moved < cut.left {
                    let i = feat.sorted[moved];
                    // Row moves to the `-polarity` side.
                    match targets[i] {
                        Sign::Pos => loss_pos += weights[i],
                        Sign::Neg => loss_pos -= weights[i],
                    }
                    moved += 1;
                }
                let loss_neg = total - loss_pos;
                if loss_pos < best.loss {
                    best = StumpFit {
                        feature: j,
                        threshold: cut.threshold,
                        polarity: Sign::Pos,
                        loss: loss_pos,
                    };
                }
                if loss_neg < best.loss {
                    best = StumpFit {
                        feature: j,
                        threshold: cut.threshold,
                        polarity: Sign::Neg,
                        loss: loss_neg,
                    };
                }
            }
        }
        best
    }

    /// `(min, max)` of `sum_i coeffs[i] * f(row_i)` over every stump in the
    /// grid, both polarities included.
    pub fn correlation_range(&self, coeffs: &[f64]) -> (f64, f64) {
        debug_assert_eq!(coeffs.len(), self.n_rows);
        let total: f64 = coeffs.iter().sum();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for feat in &self.features {
            // With polarity +1: sum = total - 2 * (sum of coeffs on the left).
            let mut left = 0.0;
            let mut moved = 0;
            for cut in &feat.cuts {
                while moved < cut.left {
                    left += coeffs[feat.sorted[moved]];
                    moved += 1;
                }
                let s = total - 2.0 * left;
                lo = lo.min(s).min(-s);
                hi = hi.max(s).max(-s);
            }
        }
        (lo, hi)
    }
}
