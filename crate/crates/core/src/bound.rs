//! Per-step generalization bound for a trained chain:
//!
//! ```text
//! L(f_k) <= L_hat(f_k) + gamma_1 + rho + R_m + sqrt(s * ln(1/delta) / (2 m^2))
//! ```
//!
//! holding with probability at least `1 - delta` at each step separately.

use serde::{Deserialize, Serialize};

use crate::chain::{chain_step_risks, chain_views, ChainModel, ChainOrder};
use crate::dataset::MultiLabelDataset;
use crate::dependency::{
    coefficients_for_step, CoefficientMode, DependencyCoefficients, DEFAULT_ALPHA, DEFAULT_N_EXACT,
};
use crate::error::{Error, Result};
use crate::learners::LearnerKind;
use crate::rademacher::{HypothesisClass, LossCorrelation, RademacherEstimate, DEFAULT_N_SIGMA};

/// Settings for [`bound_chain`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundConfig {
    pub delta: f64,
    pub alpha: f64,
    pub n_exact: usize,
    pub mode: CoefficientMode,
    pub n_sigma: usize,
    pub rademacher_seed: u64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            delta: 0.05,
            alpha: DEFAULT_ALPHA,
            n_exact: DEFAULT_N_EXACT,
            mode: CoefficientMode::Auto,
            n_sigma: DEFAULT_N_SIGMA,
            rademacher_seed: 0,
        }
    }
}

impl BoundConfig {
    pub fn validate(&self) -> Result<()> {
        check_delta(self.delta)?;
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::invalid(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if self.n_sigma == 0 {
            return Err(Error::invalid("n_sigma must be at least 1"));
        }
        Ok(())
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("delta must lie in (0, 1), got {delta}")))
    }
}

/// The bound at one chain step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStep {
    pub k: usize,
    /// Original label index trained at this step.
    pub label_index: usize,
    pub empirical_risk: f64,
    pub test_risk: Option<f64>,
    pub rho: f64,
    pub gamma_1: f64,
    pub s: f64,
    pub rademacher: RademacherEstimate,
    pub concentration_term: f64,
    pub rhs: f64,
    pub vacuous: bool,
}

/// `sqrt(s * ln(1/delta) / (2 m^2))`.
pub fn concentration_term(s: f64, delta: f64, m: usize) -> f64 {
    let m = m as f64;
    (s * (1.0 / delta).ln() / (2.0 * m * m)).sqrt()
}

/// Assembles one step of the bound. The right-hand side is not clamped;
/// values `>= 1` are flagged vacuous.
pub fn compute_bound(
    empirical_risk: f64,
    coeffs: &DependencyCoefficients,
    rad: &RademacherEstimate,
    delta: f64,
    m: usize,
) -> Result<BoundStep> {
    check_delta(delta)?;
    if m == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    if coeffs.m() != m {
        return Err(Error::DimensionMismatch {
            what: "coefficient sample size",
            expected: m,
            found: coeffs.m(),
        });
    }
    let conc = concentration_term(coeffs.s, delta, m);
    let gamma_1 = coeffs.gamma_1();
    let rhs = empirical_risk + gamma_1 + coeffs.rho + rad.mean + conc;
    Ok(BoundStep {
        k: coeffs.k,
        label_index: 0,
        empirical_risk,
        test_risk: None,
        rho: coeffs.rho,
        gamma_1,
        s: coeffs.s,
        rademacher: rad.clone(),
        concentration_term: conc,
        rhs,
        vacuous: rhs >= 1.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundMeta {
    pub m: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub order: ChainOrder,
    pub delta: f64,
    pub learner: LearnerKind,
    pub alpha: f64,
    pub n_exact: usize,
    pub seeds: BoundSeeds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSeeds {
    pub train: u64,
    pub rademacher: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub meta: BoundMeta,
    pub steps: Vec<BoundStep>,
}

impl BoundReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn rhs_sum(&self) -> f64 {
        self.steps.iter().map(|s| s.rhs).sum()
    }
}

/// The class whose Rademacher complexity enters the bound for a learner.
pub fn hypothesis_class_for(model: &ChainModel) -> HypothesisClass {
    match model.train_config.learner {
        LearnerKind::Stump => HypothesisClass::Stumps,
        LearnerKind::Logistic => HypothesisClass::Surrogate(model.train_config.clone()),
    }
}

/// Bound for every step of `model`, which must have been trained on
/// `train`. Test-set risks are reported alongside when `test` is given.
///
/// Step `t` draws its sign vectors from `config.rademacher_seed + t - 1`.
pub fn bound_chain(
    train: &MultiLabelDataset,
    test: Option<&MultiLabelDataset>,
    model: &ChainModel,
    config: &BoundConfig,
) -> Result<BoundReport> {
    config.validate()?;
    model.check_compatible(train)?;
    if let Some(t) = test {
        model.check_compatible(t)?;
    }
    let m = train.m();
    let risks = chain_step_risks(model, train)?;
    let test_risks = test.map(|t| chain_step_risks(model, t)).transpose()?;
    let views = chain_views(model, train)?;
    let class = hypothesis_class_for(model);

    let mut steps = Vec::with_capacity(model.n_labels());
    for (p, view) in views.iter().enumerate() {
        let k = p + 1;
        let label = model.order.label_at_step(k);
        let coeffs = if k == 1 {
            DependencyCoefficients::independent(1, m, config.alpha, config.n_exact)
        } else {
            coefficients_for_step(train, &model.order, k, config.alpha, config.n_exact, config.mode)?
        };
        let targets = train.label_column(label);
        let rad = LossCorrelation::new(view, &targets, &class)?
            .estimate(config.n_sigma, config.rademacher_seed.wrapping_add(p as u64))
            .map_err(|e| e.at_step(k))?;
        let mut step = compute_bound(risks[p], &coeffs, &rad, config.delta, m)?;
        step.label_index = label;
        step.test_risk = test_risks.as_ref().map(|r| r[p]);
        steps.push(step);
    }
    Ok(BoundReport {
        meta: BoundMeta {
            m,
            k: model.n_labels(),
            order: model.order.clone(),
            delta: config.delta,
            learner: model.train_config.learner,
            alpha: config.alpha,
            n_exact: config.n_exact,
            seeds: BoundSeeds {
                train: model.train_config.seed,
                rademacher: config.rademacher_seed,
            },
        },
        steps,
    })
}
