//! Label-dependency coefficients of a classifier chain under a first-order
//! Markov model of consecutive chain labels.
//!
//! For chain step `k >= 2` the transition kernel `P(y^(k) | y^(k-1))` and the
//! marginal `P(y^(k))` are estimated from the two label columns. From them:
//!
//! ```text
//! per-index TV(a)  = sum_b |P(b | a) - P(b)|                     (range [0, 2])
//! gamma(n)         = sup over previous labels a_1..a_n of
//!                    sum_{y in {-1,+1}^n} |prod_j P(y_j | a_j) - prod_j P(y_j)|
//! gamma[l]         = gamma(m - l)   for l = 1..=m,   gamma[m + 1] = 0
//! rho              = gamma[1]
//! s                = sum_{l=1}^{m} (1 + 2m * gamma[l + 1])^2
//! ```
//!
//! All distances use the sum-of-absolute-differences form (twice the usual
//! total variation distance).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::ChainOrder;
use crate::dataset::MultiLabelDataset;
use crate::error::{Error, Result};
use crate::sign::Sign;

pub const DEFAULT_ALPHA: f64 = 1.0;
pub const DEFAULT_N_EXACT: usize = 12;
/// Largest index-set size accepted by [`gamma_exact`]; binomial weights stay
/// finite in `f64` up to here.
pub const MAX_EXACT_N: usize = 1000;

const STOCHASTIC_TOL: f64 = 1e-12;

/// Empirical (or ground-truth) Markov kernel between chain steps `k - 1` and
/// `k`. Index `0` is label `-1`, index `1` is label `+1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionTable {
    pub k: usize,
    /// `trans[a][b] = P(y^(k) = b | y^(k-1) = a)`.
    pub trans: [[f64; 2]; 2],
    /// `marginal[b] = P(y^(k) = b)`.
    pub marginal: [f64; 2],
    /// `counts[a][b]` transitions observed.
    pub counts: [[u64; 2]; 2],
    pub smoothing_alpha: f64,
}

fn check_distribution(p: &[f64; 2], what: &str) -> Result<()> {
    if p.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::invalid(format!("{what} has an entry outside [0, 1]: {p:?}")));
    }
    if (p[0] + p[1] - 1.0).abs() > STOCHASTIC_TOL {
        return Err(Error::invalid(format!("{what} does not sum to 1: {p:?}")));
    }
    Ok(())
}

impl TransitionTable {
    /// A table given directly by its kernel and marginal (no counts).
    pub fn from_probabilities(k: usize, trans: [[f64; 2]; 2], marginal: [f64; 2]) -> Result<Self> {
        let table = TransitionTable {
            k,
            trans,
            marginal,
            counts: [[0; 2]; 2],
            smoothing_alpha: 0.0,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        check_distribution(&self.trans[0], "transition row -1")?;
        check_distribution(&self.trans[1], "transition row +1")?;
        check_distribution(&self.marginal, "marginal")
    }

    pub fn at_step(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    /// Conditional distribution of the current label given `prev`.
    pub fn row(&self, prev: Sign) -> [f64; 2] {
        self.trans[prev.index()]
    }

    /// Whether both transition rows coincide with the marginal exactly.
    pub fn is_independent(&self) -> bool {
        self.trans[0] == self.marginal && self.trans[1] == self.marginal
    }
}

/// Laplace-smoothed estimate of the transition kernel and the marginal of
/// the current label.
pub fn estimate_transitions(prev: &[Sign], curr: &[Sign], alpha: f64) -> Result<TransitionTable> {
    if prev.len() != curr.len() {
        return Err(Error::DimensionMismatch {
            what: "label column lengths",
            expected: prev.len(),
            found: curr.len(),
        });
    }
    if prev.is_empty() {
        return Err(Error::invalid("cannot estimate transitions from zero rows"));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("smoothing alpha must be >= 0, got {alpha}")));
    }
    let mut counts = [[0u64; 2]; 2];
    for (a, b) in prev.iter().zip(curr) {
        counts[a.index()][b.index()] += 1;
    }
    let mut trans = [[0.5; 2]; 2];
    for (a, row) in counts.iter().enumerate() {
        let denom = (row[0] + row[1]) as f64 + 2.0 * alpha;
        if denom > 0.0 {
            let p_pos = (row[1] as f64 + alpha) / denom;
            trans[a] = [1.0 - p_pos, p_pos];
        }
    }
    let m = prev.len() as f64;
    let curr_pos = (counts[0][1] + counts[1][1]) as f64;
    let p_pos = (curr_pos + alpha) / (m + 2.0 * alpha);
    Ok(TransitionTable {
        k: 2,
        trans,
        marginal: [1.0 - p_pos, p_pos],
        counts,
        smoothing_alpha: alpha,
    })
}

/// `sum_b |P(b | prev) - P(b)|`.
pub fn per_index_tv(table: &TransitionTable, prev: Sign) -> f64 {
    let row = table.row(prev);
    (row[0] - table.marginal[0]).abs() + (row[1] - table.marginal[1]).abs()
}

/// Per-index dependence maximized over the previous label.
pub fn rho(table: &TransitionTable) -> f64 {
    per_index_tv(table, Sign::Neg).max(per_index_tv(table, Sign::Pos))
}

/// Binomial coefficients `C(row, 0..=row)`; exact integers up to row ~56.
fn binomial_row(row: usize) -> Vec<f64> {
    let mut c = vec![1.0; row + 1];
    for r in 1..=row {
        for j in (1..r).rev() {
            c[j] += c[j - 1];
        }
    }
    c
}

fn powers(base: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|e| base.powi(e as i32)).collect()
}

/// Exact product TV for a fixed assignment with `n_pos` previous labels equal
/// to `+1` and `n_neg` equal to `-1`.
///
/// Both product measures are invariant under permuting coordinates within
/// each block, so outcomes are grouped by the number of `+1` current labels
/// in each block.
pub fn product_tv_for_split(table: &TransitionTable, n_pos: usize, n_neg: usize) -> f64 {
    let n = n_pos + n_neg;
    if n == 0 {
        return 0.0;
    }
    let [neg_neg, neg_pos] = table.trans[0];
    let [pos_neg, pos_pos] = table.trans[1];
    let [q_neg, q_pos] = table.marginal;

    let pp = powers(pos_pos, n_pos);
    let pn = powers(pos_neg, n_pos);
    let np = powers(neg_pos, n_neg);
    let nn = powers(neg_neg, n_neg);
    // q is factored per block in the same order as p, so rows equal to the
    // marginal cancel exactly.
    let qp = powers(q_pos, n);
    let qn = powers(q_neg, n);
    let c_pos = binomial_row(n_pos);
    let c_neg = binomial_row(n_neg);

    let mut total = 0.0;
    for u in 0..=n_pos {
        let p_block = pp[u] * pn[n_pos - u];
        for v in 0..=n_neg {
            let p = p_block * np[v] * nn[n_neg - v];
            let q = qp[u] * qn[n_pos - u] * qp[v] * qn[n_neg - v];
            total += c_pos[u] * c_neg[v] * (p - q).abs();
        }
    }
    total
}

/// Exact `gamma(n)`: the supremum over all `2^n` previous-label assignments
/// of the product TV.
pub fn gamma_exact(table: &TransitionTable, n: usize, n_exact: usize) -> Result<f64> {
    if n > n_exact {
        return Err(Error::TooLarge {
            what: "index-set size for exact gamma",
            found: n,
            limit: n_exact,
        });
    }
    if n > MAX_EXACT_N {
        return Err(Error::TooLarge {
            what: "index-set size for exact gamma",
            found: n,
            limit: MAX_EXACT_N,
        });
    }
    Ok((0..=n)
        .map(|n_pos| product_tv_for_split(table, n_pos, n - n_pos))
        .fold(0.0, f64::max))
}

/// `min(2, n * rho)`: subadditivity of TV over product coordinates bounds
/// every assignment's product TV by the sum of per-index TVs.
pub fn gamma_upper(table: &TransitionTable, n: usize) -> f64 {
    (n as f64 * rho(table)).min(2.0)
}

/// Monte-Carlo estimate of the product TV at the assignment where every
/// previous label maximizes the per-index TV.
///
/// Samples `y` from the mixture `r = (p + q) / 2` and averages
/// `|p - q| / r = 2 |tanh(L / 2)|` with `L = ln(q(y) / p(y))`, so every draw
/// lies in `[0, 2]`. Returns `(estimate, standard error)`.
pub fn gamma_monte_carlo(table: &TransitionTable, n: usize, n_samples: usize, seed: u64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::invalid("Monte-Carlo gamma needs n >= 1"));
    }
    if n_samples < 100 {
        return Err(Error::invalid(format!("need at least 100 samples, got {n_samples}")));
    }
    let prev = if per_index_tv(table, Sign::Pos) > per_index_tv(table, Sign::Neg) {
        Sign::Pos
    } else {
        Sign::Neg
    };
    let p = table.row(prev);
    let q = table.marginal;
    if p == q {
        return Ok((0.0, 0.0));
    }
    let log_ratio = [(q[0] / p[0]).ln(), (q[1] / p[1]).ln()];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_samples {
        let source = if rng.random::<bool>() { p } else { q };
        let n_pos = (0..n).filter(|_| rng.random::<f64>() < source[1]).count();
        let mut l = 0.0;
        if n_pos > 0 {
            l += n_pos as f64 * log_ratio[1];
        }
        if n_pos < n {
            l += (n - n_pos) as f64 * log_ratio[0];
        }
        let term = 2.0 * (l / 2.0).tanh().abs();
        sum += term;
        sum_sq += term * term;
    }
    let ns = n_samples as f64;
    let mean = sum / ns;
    let var = ((sum_sq - ns * mean * mean) / (ns - 1.0)).max(0.0);
    Ok((mean, (var / ns).sqrt()))
}

/// How one gamma entry was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaMode {
    Exact,
    UpperBound,
    MonteCarlo,
    EmptySet,
}

/// Which gamma evaluator [`coefficients_from_table`] may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientMode {
    /// Exact whenever `n <= n_exact`, the certified upper bound otherwise.
    #[default]
    Auto,
    ExactOnly,
    UpperOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaEntry {
    pub l: usize,
    pub n: usize,
    pub value: f64,
    pub mode: GammaMode,
}

/// Coefficients for one chain step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DependencyCoefficients {
    pub k: usize,
    pub rho: f64,
    /// Single-coordinate dependence `max_a per_index_tv(a)` of the same table.
    pub per_index_rho: f64,
    /// Entries for `l = 1..=m + 1`.
    pub gamma: Vec<GammaEntry>,
    pub s: f64,
    pub alpha: f64,
    pub n_exact: usize,
}

impl DependencyCoefficients {
    /// Sample size the coefficients were computed for.
    pub fn m(&self) -> usize {
        self.gamma.len() - 1
    }

    /// `gamma[l]` with the 1-based index used throughout.
    pub fn gamma_at(&self, l: usize) -> f64 {
        self.gamma[l - 1].value
    }

    pub fn gamma_1(&self) -> f64 {
        self.gamma_at(1)
    }

    /// The no-dependence reduction used for chain step 1: every coefficient
    /// is zero and `s = m`.
    pub fn independent(k: usize, m: usize, alpha: f64, n_exact: usize) -> Self {
        let gamma = gamma_entries(m, |l, n| {
            let mode = if n == 0 || l == m + 1 { GammaMode::EmptySet } else { GammaMode::Exact };
            (0.0, mode)
        });
        let s = aggregate_s(&gamma, m);
        DependencyCoefficients {
            k,
            rho: 0.0,
            per_index_rho: 0.0,
            gamma,
            s,
            alpha,
            n_exact,
        }
    }
}

fn gamma_entries(m: usize, mut value: impl FnMut(usize, usize) -> (f64, GammaMode)) -> Vec<GammaEntry> {
    (1..=m + 1)
        .map(|l| {
            let n = m.saturating_sub(l);
            let (value, mode) = value(l, n);
            GammaEntry { l, n, value, mode }
        })
        .collect()
}

/// `s = sum_{l=1}^{m} (1 + 2m * gamma[l + 1])^2`.
pub fn aggregate_s(gamma: &[GammaEntry], m: usize) -> f64 {
    let two_m = 2.0 * m as f64;
    gamma[1..=m]
        .iter()
        .map(|g| {
            let t = 1.0 + two_m * g.value;
            t * t
        })
        .sum()
}

/// Fills the gamma vector and aggregates for a sample of size `m`.
pub fn coefficients_from_table(
    table: &TransitionTable,
    m: usize,
    n_exact: usize,
    mode: CoefficientMode,
) -> Result<DependencyCoefficients> {
    if m == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    table.validate()?;
    let largest = m - 1;
    if mode == CoefficientMode::ExactOnly && largest > n_exact {
        return Err(Error::TooLarge {
            what: "index-set size for exact-only coefficients",
            found: largest,
            limit: n_exact,
        });
    }
    let exact_upto = match mode {
        CoefficientMode::UpperOnly => 0,
        _ => largest.min(n_exact),
    };
    // exact[n] for n = 0..=exact_upto; gamma depends on n only.
    let exact: Vec<f64> = (0..=exact_upto)
        .into_par_iter()
        .map(|n| gamma_exact(table, n, n_exact))
        .collect::<Result<_>>()?;
    let upper_rho = rho(table);

    let gamma = gamma_entries(m, |l, n| {
        if l == m + 1 || n == 0 {
            (0.0, GammaMode::EmptySet)
        } else if n <= exact_upto {
            (exact[n], GammaMode::Exact)
        } else {
            ((n as f64 * upper_rho).min(2.0), GammaMode::UpperBound)
        }
    });
    let s = aggregate_s(&gamma, m);
    Ok(DependencyCoefficients {
        k: table.k,
        rho: gamma[0].value,
        per_index_rho: upper_rho,
        gamma,
        s,
        alpha: table.smoothing_alpha,
        n_exact,
    })
}

/// Table between the labels at chain steps `k - 1` and `k` of `order`.
pub fn transitions_for_step(
    data: &MultiLabelDataset,
    order: &ChainOrder,
    k: usize,
    alpha: f64,
) -> Result<TransitionTable> {
    if order.len() != data.k() {
        return Err(Error::InvalidPermutation(format!(
            "order has {} entries but the data has {} labels",
            order.len(),
            data.k()
        )));
    }
    if k < 2 {
        return Err(Error::UndefinedStep(k));
    }
    if k > data.k() {
        return Err(Error::invalid(format!("step {k} exceeds the {} chain labels", data.k())));
    }
    let prev = data.label_column(order.label_at_step(k - 1));
    let curr = data.label_column(order.label_at_step(k));
    Ok(estimate_transitions(&prev, &curr, alpha)?.at_step(k))
}

/// Estimated coefficients for 1-based chain step `k >= 2`.
pub fn coefficients_for_step(
    data: &MultiLabelDataset,
    order: &ChainOrder,
    k: usize,
    alpha: f64,
    n_exact: usize,
    mode: CoefficientMode,
) -> Result<DependencyCoefficients> {
    let table = transitions_for_step(data, order, k, alpha)?;
    coefficients_from_table(&table, data.m(), n_exact, mode)
}
