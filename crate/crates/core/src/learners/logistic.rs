//! Weighted, L2-penalized logistic regression fitted by full-batch gradient
//! descent from the zero vector.

use crate::dataset::FeatureRows;
use crate::sign::Sign;

/// `ln(1 + exp(-t))` without overflow.
#[cfg(test)]
fn log1p_exp_neg(t: f64) -> f64 {
    if t > 0.0 {
        (-t).exp().ln_1p()
    } else {
        -t + t.exp().ln_1p()
    }
}

/// `1 / (1 + exp(t))`.
fn sigmoid_neg(t: f64) -> f64 {
    if t >= 0.0 {
        let e = (-t).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + t.exp())
    }
}

pub(crate) struct Fit {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

pub(crate) fn score(weights: &[f64], intercept: f64, row: &[f64]) -> f64 {
    weights.iter().zip(row).map(|(w, x)| w * x).sum::<f64>() + intercept
}

/// Weighted mean logistic loss plus `l2 / 2 * |w|^2` (intercept unpenalized).
#[cfg(test)]
pub(crate) fn objective<R: FeatureRows + ?Sized>(
    rows: &R,
    targets: &[Sign],
    sample_weights: &[f64],
    fit: &Fit,
    l2: f64,
) -> f64 {
    let total: f64 = sample_weights.iter().sum();
    let mut buf = Vec::with_capacity(rows.width());
    let mut loss = 0.0;
    for i in 0..rows.n_rows() {
        if sample_weights[i] == 0.0 {
            continue;
        }
        rows.row_into(i, &mut buf);
        let margin = targets[i].to_f64() * score(&fit.weights, fit.intercept, &buf);
        loss += sample_weights[i] * log1p_exp_neg(margin);
    }
    let penalty: f64 = fit.weights.iter().map(|w| w * w).sum();
    loss / total + 0.5 * l2 * penalty
}

pub(crate) fn fit<R: FeatureRows + ?Sized>(
    rows: &R,
    targets: &[Sign],
    sample_weights: &[f64],
    max_iterations: usize,
    learning_rate: f64,
    l2: f64,
) -> Fit {
    let m = rows.n_rows();
    let d = rows.width();
    let total: f64 = sample_weights.iter().sum();
    // Materialize once; gradient descent touches every row per iteration.
    let dense: Vec<Vec<f64>> = (0..m).map(|i| rows.row_vec(i)).collect();

    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut grad = vec![0.0; d];
    for _ in 0..max_iterations {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut grad_b = 0.0;
        for (i, x) in dense.iter().enumerate() {
            let sw = sample_weights[i];
            if sw == 0.0 {
                continue;
            }
            let y = targets[i].to_f64();
            let coef = -sw * y * sigmoid_neg(y * score(&w, b, x)) / total;
            for (g, xj) in grad.iter_mut().zip(x) {
                *g += coef * xj;
            }
            grad_b += coef;
        }
        for (wj, g) in w.iter_mut().zip(&grad) {
            *wj -= learning_rate * (g + l2 * *wj);
        }
        b -= learning_rate * grad_b;
    }
    Fit {
        weights: w,
        intercept: b,
    }
}
