//! Classifier chains: `K` binary classifiers trained one after another, each
//! on the input features augmented with the predictions of the classifiers
//! before it.
//!
//! Chain steps are 1-based (`k = 1..=K`); label indices and chain positions
//! in [`ChainOrder`] are 0-based.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{AugmentedView, FeatureRows, MultiLabelDataset};
use crate::error::{Error, Result};
use crate::learners::{disagreement, train_erm, BinaryClassifier, TrainConfig};
use crate::sign::Sign;

/// A permutation of `0..K`: position `p` of the chain trains label `order[p]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct ChainOrder(Vec<usize>);

impl ChainOrder {
    pub fn new(order: Vec<usize>, k: usize) -> Result<Self> {
        if order.len() != k {
            return Err(Error::InvalidPermutation(format!(
                "expected {k} entries, found {}",
                order.len()
            )));
        }
        Self::try_from(order)
    }

    pub fn identity(k: usize) -> Self {
        ChainOrder((0..k).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Label trained at 1-based chain step `step`.
    pub fn label_at_step(&self, step: usize) -> usize {
        self.0[step - 1]
    }

    /// Inverse permutation: chain position of each original label.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.0.len()];
        for (pos, &label) in self.0.iter().enumerate() {
            inv[label] = pos;
        }
        inv
    }

    /// Parses a comma-separated list such as `"2,0,1"`.
    pub fn parse(text: &str, k: usize) -> Result<Self> {
        let order = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("not an index: {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(order, k)
    }

    /// Every permutation of `0..k` in lexicographic order.
    pub fn all(k: usize) -> Vec<ChainOrder> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..k).collect();
        loop {
            out.push(ChainOrder(cur.clone()));
            // next permutation
            let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl TryFrom<Vec<usize>> for ChainOrder {
    type Error = Error;

    fn try_from(order: Vec<usize>) -> Result<Self> {
        let k = order.len();
        if k == 0 {
            return Err(Error::InvalidPermutation("empty order".into()));
        }
        let mut seen = vec![false; k];
        for &label in &order {
            if label >= k {
                return Err(Error::InvalidPermutation(format!(
                    "label index {label} out of range for {k} labels"
                )));
            }
            if std::mem::replace(&mut seen[label], true) {
                return Err(Error::InvalidPermutation(format!("label {label} repeated")));
            }
        }
        Ok(ChainOrder(order))
    }
}

impl From<ChainOrder> for Vec<usize> {
    fn from(o: ChainOrder) -> Self {
        o.0
    }
}

impl std::fmt::Display for ChainOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// A trained chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainModel {
    pub order: ChainOrder,
    pub train_config: TrainConfig,
    pub classifiers: Vec<BinaryClassifier>,
}

/// Output of [`train_chain`]: the model plus the per-step training risks.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainTraining {
    pub model: ChainModel,
    pub step_risks: Vec<f64>,
}

impl ChainModel {
    /// Input width `d` of the first classifier.
    pub fn input_width(&self) -> usize {
        self.classifiers[0].trained_width()
    }

    pub fn n_labels(&self) -> usize {
        self.order.len()
    }

    /// Checks width and label count against a dataset.
    pub fn check_compatible(&self, data: &MultiLabelDataset) -> Result<()> {
        if data.d() != self.input_width() {
            return Err(Error::SchemaMismatch(format!(
                "model expects {} features, data has {}",
                self.input_width(),
                data.d()
            )));
        }
        if data.k() != self.n_labels() {
            return Err(Error::SchemaMismatch(format!(
                "model has {} labels, data has {}",
                self.n_labels(),
                data.k()
            )));
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.classifiers.len() != self.order.len() {
            return Err(Error::SchemaMismatch(format!(
                "{} classifiers for {} labels",
                self.classifiers.len(),
                self.order.len()
            )));
        }
        let d = self.input_width();
        for (p, c) in self.classifiers.iter().enumerate() {
            if c.trained_width() != d + p {
                return Err(Error::SchemaMismatch(format!(
                    "classifier at step {} has width {}, expected {}",
                    p + 1,
                    c.trained_width(),
                    d + p
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: ChainModel = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }
}

/// Trains the chain: for each step the classifier is fitted on `z^(k)` with
/// uniform weights, then its own training predictions are appended.
pub fn train_chain(
    data: &MultiLabelDataset,
    order: &ChainOrder,
    config: &TrainConfig,
) -> Result<ChainTraining> {
    if order.len() != data.k() {
        return Err(Error::InvalidPermutation(format!(
            "order has {} entries but the data has {} labels",
            order.len(),
            data.k()
        )));
    }
    config.validate()?;
    let weights = vec![1.0; data.m()];
    let mut view = AugmentedView::new(data, order.as_slice());
    let mut classifiers = Vec::with_capacity(data.k());
    let mut step_risks = Vec::with_capacity(data.k());
    for step in 1..=data.k() {
        let targets = data.label_column(order.label_at_step(step));
        let model = train_erm(&view, &targets, &weights, config).map_err(|e| e.at_step(step))?;
        let preds = model.predict_rows(&view).map_err(|e| e.at_step(step))?;
        step_risks.push(disagreement(&preds, &targets));
        classifiers.push(model);
        if step < data.k() {
            view = view.augment(&preds)?;
        }
    }
    Ok(ChainTraining {
        model: ChainModel {
            order: order.clone(),
            train_config: config.clone(),
            classifiers,
        },
        step_risks,
    })
}

/// Chained prediction for one input; the result is indexed by original
/// label.
pub fn predict_chain(model: &ChainModel, x: &[f64]) -> Result<Vec<Sign>> {
    if x.len() != model.input_width() {
        return Err(Error::DimensionMismatch {
            what: "input width",
            expected: model.input_width(),
            found: x.len(),
        });
    }
    let mut z = x.to_vec();
    let mut out = vec![Sign::Neg; model.n_labels()];
    for (step, clf) in model.classifiers.iter().enumerate() {
        let y = clf.predict(&z)?;
        out[model.order.as_slice()[step]] = y;
        z.push(y.to_f64());
    }
    Ok(out)
}

/// [`predict_chain`] for every row, in parallel over rows.
pub fn predict_chain_batch(model: &ChainModel, data: &MultiLabelDataset) -> Result<Vec<Vec<Sign>>> {
    if data.d() != model.input_width() {
        return Err(Error::SchemaMismatch(format!(
            "model expects {} features, data has {}",
            model.input_width(),
            data.d()
        )));
    }
    (0..data.m())
        .into_par_iter()
        .map(|i| predict_chain(model, data.features().row(i)))
        .collect()
}

/// The augmented inputs `z^(k)` for every step, propagated through the
/// chain's own predictions on `data`. Element `k - 1` is the step-`k` view.
pub fn chain_views<'a>(model: &ChainModel, data: &'a MultiLabelDataset) -> Result<Vec<AugmentedView<'a>>> {
    model.check_compatible(data)?;
    let mut views = Vec::with_capacity(model.n_labels());
    let mut view = AugmentedView::new(data, model.order.as_slice());
    for (p, clf) in model.classifiers.iter().enumerate() {
        let preds = clf.predict_rows(&view).map_err(|e| e.at_step(p + 1))?;
        let next = view.augment(&preds)?;
        views.push(view);
        view = next;
    }
    Ok(views)
}

/// Per-step empirical 0/1 risk of each classifier against its label, with
/// predictions propagated along the chain on `data`.
pub fn chain_step_risks(model: &ChainModel, data: &MultiLabelDataset) -> Result<Vec<f64>> {
    let views = chain_views(model, data)?;
    views
        .iter()
        .zip(&model.classifiers)
        .enumerate()
        .map(|(p, (view, clf))| {
            let targets = data.label_column(model.order.as_slice()[p]);
            let preds = clf.predict_rows(view)?;
            debug_assert_eq!(view.width(), data.d() + p);
            Ok(disagreement(&preds, &targets))
        })
        .collect()
}
