//! Binary base classifiers for the chain and their empirical 0/1 risk.
//!
//! Two hypothesis classes are provided. Decision stumps are trained by an
//! exact weighted 0/1-loss minimization over a finite threshold grid;
//! logistic models minimize a weighted logistic surrogate by gradient
//! descent.

mod logistic;
mod stump;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use stump::{StumpFit, StumpSweeper};

use crate::dataset::FeatureRows;
use crate::error::{Error, Result};
use crate::sign::Sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnerKind {
    Stump,
    Logistic,
}

impl std::fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LearnerKind::Stump => "stump",
            LearnerKind::Logistic => "logistic",
        })
    }
}

impl std::str::FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stump" => Ok(LearnerKind::Stump),
            "logistic" => Ok(LearnerKind::Logistic),
            other => Err(Error::invalid(format!("unknown learner {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learner: LearnerKind,
    pub max_iterations: usize,
    pub learning_rate: f64,
    pub l2_penalty: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learner: LearnerKind::Stump,
            max_iterations: 300,
            learning_rate: 0.5,
            l2_penalty: 0.0,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn stump() -> Self {
        Self::default()
    }

    pub fn logistic() -> Self {
        TrainConfig {
            learner: LearnerKind::Logistic,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(Error::invalid("max_iterations must be at least 1"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::invalid("learning_rate must be a positive finite number"));
        }
        if !(self.l2_penalty >= 0.0 && self.l2_penalty.is_finite()) {
            return Err(Error::invalid("l2_penalty must be non-negative"));
        }
        Ok(())
    }
}

/// A trained `{-1, +1}`-valued classifier over inputs of a fixed width.
#[derive(Debug, Clone, PartialEq)]
pub enum BinaryClassifier {
    Stump {
        feature: usize,
        threshold: f64,
        polarity: Sign,
        trained_width: usize,
    },
    Logistic {
        weights: Vec<f64>,
        intercept: f64,
    },
}

impl BinaryClassifier {
    pub fn kind(&self) -> LearnerKind {
        match self {
            BinaryClassifier::Stump { .. } => LearnerKind::Stump,
            BinaryClassifier::Logistic { .. } => LearnerKind::Logistic,
        }
    }

    pub fn trained_width(&self) -> usize {
        match self {
            BinaryClassifier::Stump { trained_width, .. } => *trained_width,
            BinaryClassifier::Logistic { weights, .. } => weights.len(),
        }
    }

    pub fn predict(&self, row: &[f64]) -> Result<Sign> {
        if row.len() != self.trained_width() {
            return Err(Error::DimensionMismatch {
                what: "input width",
                expected: self.trained_width(),
                found: row.len(),
            });
        }
        Ok(self.predict_unchecked(row))
    }

    #[inline]
    pub(crate) fn predict_unchecked(&self, row: &[f64]) -> Sign {
        match self {
            BinaryClassifier::Stump {
                feature,
                threshold,
                polarity,
                ..
            } => {
                if row[*feature] > *threshold {
                    *polarity
                } else {
                    -*polarity
                }
            }
            BinaryClassifier::Logistic { weights, intercept } => {
                Sign::of_score(logistic::score(weights, *intercept, row))
            }
        }
    }

    /// Predictions on every row of `rows`.
    pub fn predict_rows<R: FeatureRows + ?Sized>(&self, rows: &R) -> Result<Vec<Sign>> {
        if rows.width() != self.trained_width() {
            return Err(Error::DimensionMismatch {
                what: "input width",
                expected: self.trained_width(),
                found: rows.width(),
            });
        }
        let mut buf = Vec::with_capacity(rows.width());
        Ok((0..rows.n_rows())
            .map(|i| {
                rows.row_into(i, &mut buf);
                self.predict_unchecked(&buf)
            })
            .collect())
    }
}

fn check_training_inputs<R: FeatureRows + ?Sized>(
    rows: &R,
    targets: &[Sign],
    weights: &[f64],
) -> Result<()> {
    let m = rows.n_rows();
    if m == 0 {
        return Err(Error::invalid("training set is empty"));
    }
    if targets.len() != m {
        return Err(Error::DimensionMismatch {
            what: "targets",
            expected: m,
            found: targets.len(),
        });
    }
    if weights.len() != m {
        return Err(Error::DimensionMismatch {
            what: "weights",
            expected: m,
            found: weights.len(),
        });
    }
    if rows.width() == 0 {
        return Err(Error::invalid("rows have zero width"));
    }
    if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
        return Err(Error::invalid("weights must be finite and non-negative"));
    }
    if weights.iter().all(|w| *w == 0.0) {
        return Err(Error::invalid("weights are all zero"));
    }
    for i in 0..m {
        for j in 0..rows.width() {
            if !rows.value(i, j).is_finite() {
                return Err(Error::invalid(format!(
                    "non-finite feature value at row {i}, column {j}"
                )));
            }
        }
    }
    Ok(())
}

/// Fits a classifier by (weighted) empirical risk minimization.
///
/// Stumps are the exact minimizer of the weighted 0/1 loss; logistic models
/// run `max_iterations` gradient steps on the weighted logistic loss.
pub fn train_erm<R: FeatureRows + ?Sized>(
    rows: &R,
    targets: &[Sign],
    weights: &[f64],
    config: &TrainConfig,
) -> Result<BinaryClassifier> {
    config.validate()?;
    check_training_inputs(rows, targets, weights)?;
    Ok(match config.learner {
        LearnerKind::Stump => {
            let fit = StumpSweeper::new(rows).min_weighted_loss(targets, weights);
            BinaryClassifier::Stump {
                feature: fit.feature,
                threshold: fit.threshold,
                polarity: fit.polarity,
                trained_width: rows.width(),
            }
        }
        LearnerKind::Logistic => {
            let fit = logistic::fit(
                rows,
                targets,
                weights,
                config.max_iterations,
                config.learning_rate,
                config.l2_penalty,
            );
            BinaryClassifier::Logistic {
                weights: fit.weights,
                intercept: fit.intercept,
            }
        }
    })
}

/// Fraction of rows whose prediction disagrees with the target.
pub fn empirical_risk<R: FeatureRows + ?Sized>(
    model: &BinaryClassifier,
    rows: &R,
    targets: &[Sign],
) -> Result<f64> {
    if rows.n_rows() == 0 {
        return Err(Error::invalid("cannot evaluate risk on an empty sample"));
    }
    if targets.len() != rows.n_rows() {
        return Err(Error::DimensionMismatch {
            what: "targets",
            expected: rows.n_rows(),
            found: targets.len(),
        });
    }
    let preds = model.predict_rows(rows)?;
    Ok(disagreement(&preds, targets))
}

/// `(1/m) * #{i : a_i != b_i}`.
pub fn disagreement(a: &[Sign], b: &[Sign]) -> f64 {
    let errors = a.iter().zip(b).filter(|(x, y)| x != y).count();
    errors as f64 / a.len() as f64
}

// --- serialization ------------------------------------------------------

/// JSON has no infinities; non-finite reals are written as strings.
#[derive(Debug, Clone, Copy)]
struct JsonReal(f64);

impl Serialize for JsonReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_finite() {
            s.serialize_f64(v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for JsonReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(JsonReal(v)),
            Raw::Str(s) => match s.as_str() {
                "inf" => Ok(JsonReal(f64::INFINITY)),
                "-inf" => Ok(JsonReal(f64::NEG_INFINITY)),
                "nan" => Ok(JsonReal(f64::NAN)),
                other => Err(serde::de::Error::custom(format!("not a real: {other:?}"))),
            },
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ClassifierRepr {
    kind: LearnerKind,
    parameters: Vec<JsonReal>,
    trained_width: usize,
}

impl From<&BinaryClassifier> for ClassifierRepr {
    fn from(c: &BinaryClassifier) -> Self {
        let parameters = match c {
            BinaryClassifier::Stump {
                feature,
                threshold,
                polarity,
                ..
            } => vec![*feature as f64, *threshold, polarity.to_f64()],
            BinaryClassifier::Logistic { weights, intercept } => {
                weights.iter().copied().chain(std::iter::once(*intercept)).collect()
            }
        }
        .into_iter()
        .map(JsonReal)
        .collect();
        ClassifierRepr {
            kind: c.kind(),
            parameters,
            trained_width: c.trained_width(),
        }
    }
}

impl TryFrom<ClassifierRepr> for BinaryClassifier {
    type Error = Error;

    fn try_from(r: ClassifierRepr) -> Result<Self> {
        let p: Vec<f64> = r.parameters.into_iter().map(|v| v.0).collect();
        match r.kind {
            LearnerKind::Stump => {
                let [feature, threshold, polarity] = p[..] else {
                    return Err(Error::invalid("stump needs exactly 3 parameters"));
                };
                if feature < 0.0 || feature.fract() != 0.0 || feature as usize >= r.trained_width {
                    return Err(Error::invalid(format!("invalid stump feature index {feature}")));
                }
                Ok(BinaryClassifier::Stump {
                    feature: feature as usize,
                    threshold,
                    polarity: Sign::try_from_f64(polarity)?,
                    trained_width: r.trained_width,
                })
            }
            LearnerKind::Logistic => {
                if p.len() != r.trained_width + 1 {
                    return Err(Error::DimensionMismatch {
                        what: "logistic parameters",
                        expected: r.trained_width + 1,
                        found: p.len(),
                    });
                }
                let mut weights = p;
                let intercept = weights.pop().unwrap_or(0.0);
                Ok(BinaryClassifier::Logistic { weights, intercept })
            }
        }
    }
}

impl Serialize for BinaryClassifier {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ClassifierRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryClassifier {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ClassifierRepr::deserialize(d)?;
        BinaryClassifier::try_from(repr).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Matrix;

    fn column(values: &[f64]) -> Matrix {
        Matrix::new(values.len(), 1, values.to_vec()).unwrap()
    }

    fn signs(v: &[i64]) -> Vec<Sign> {
        v.iter().map(|&x| Sign::try_from_i64(x).unwrap()).collect()
    }

    #[test]
    fn separable_stump() {
        let rows = column(&[1.0, 2.0, 3.0, 4.0]);
        let y = signs(&[-1, -1, 1, 1]);
        let model = train_erm(&rows, &y, &[1.0; 4], &TrainConfig::stump()).unwrap();
        match model {
            BinaryClassifier::Stump {
                threshold, polarity, ..
            } => {
                assert!(threshold > 2.0 && threshold < 3.0);
                assert_eq!(polarity, Sign::Pos);
            }
            _ => unreachable!(),
        }
        assert_eq!(empirical_risk(&model, &rows, &y).unwrap(), 0.0);
    }

    #[test]
    fn constant_targets_give_constant_stump() {
        let rows = column(&[5.0, -1.0, 3.0]);
        let y = signs(&[1, 1, 1]);
        let model = train_erm(&rows, &y, &[1.0; 3], &TrainConfig::stump()).unwrap();
        assert_eq!(empirical_risk(&model, &rows, &y).unwrap(), 0.0);
        // The -inf sentinel comes first in the tie order.
        assert!(matches!(
            model,
            BinaryClassifier::Stump { threshold, polarity: Sign::Pos, .. } if threshold == f64::NEG_INFINITY
        ));
        assert_eq!(model.predict(&[1e300]).unwrap(), Sign::Pos);
        assert_eq!(model.predict(&[-1e300]).unwrap(), Sign::Pos);
    }

    #[test]
    fn xor_stump_risk_is_a_quarter() {
        let rows = column(&[1.0, 2.0, 3.0, 4.0]);
        let y = signs(&[1, -1, 1, -1]);
        let model = train_erm(&rows, &y, &[1.0; 4], &TrainConfig::stump()).unwrap();
        assert_eq!(empirical_risk(&model, &rows, &y).unwrap(), 0.25);
    }

    #[test]
    fn stump_predict_definition() {
        let s = BinaryClassifier::Stump {
            feature: 0,
            threshold: 2.5,
            polarity: Sign::Pos,
            trained_width: 1,
        };
        assert_eq!(s.predict(&[3.0]).unwrap(), Sign::Pos);
        assert_eq!(s.predict(&[2.0]).unwrap(), Sign::Neg);
        assert!(matches!(s.predict(&[1.0, 2.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn logistic_zero_model_ties_to_positive() {
        let z = BinaryClassifier::Logistic {
            weights: vec![0.0, 0.0],
            intercept: 0.0,
        };
        assert_eq!(z.predict(&[-3.0, 7.0]).unwrap(), Sign::Pos);
        assert_eq!(z.predict(&[0.0, 0.0]).unwrap(), Sign::Pos);
    }

    #[test]
    fn logistic_learns_separable_data() {
        let rows = Matrix::from_rows(&[[-2.0, 0.1], [-1.0, -0.3], [1.0, 0.2], [2.0, -0.1]]).unwrap();
        let y = signs(&[-1, -1, 1, 1]);
        let model = train_erm(&rows, &y, &[1.0; 4], &TrainConfig::logistic()).unwrap();
        assert_eq!(empirical_risk(&model, &rows, &y).unwrap(), 0.0);
        let again = train_erm(&rows, &y, &[1.0; 4], &TrainConfig::logistic()).unwrap();
        assert_eq!(model, again);
    }

    #[test]
    fn weights_change_the_minimizer() {
        let rows = column(&[1.0, 2.0, 3.0]);
        let y = signs(&[1, -1, -1]);
        let heavy_first = train_erm(&rows, &y, &[10.0, 1.0, 1.0], &TrainConfig::stump()).unwrap();
        assert_eq!(heavy_first.predict(&[1.0]).unwrap(), Sign::Pos);
        let zero_first = train_erm(&rows, &y, &[0.0, 1.0, 1.0], &TrainConfig::stump()).unwrap();
        assert_eq!(empirical_risk(&zero_first, &column(&[2.0, 3.0]), &y[1..]).unwrap(), 0.0);
    }

    #[test]
    fn risk_counts_disagreements() {
        assert!((disagreement(&signs(&[1, -1, 1]), &signs(&[1, 1, 1])) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn training_errors() {
        let rows = column(&[1.0, f64::NAN]);
        let y = signs(&[1, -1]);
        assert!(train_erm(&rows, &y, &[1.0; 2], &TrainConfig::stump()).is_err());
        let rows = column(&[1.0, 2.0]);
        assert!(train_erm(&rows, &y, &[0.0; 2], &TrainConfig::stump()).is_err());
        assert!(train_erm(&rows, &y[..1], &[1.0; 2], &TrainConfig::stump()).is_err());
        let empty = Matrix::new(0, 1, vec![]).unwrap();
        assert!(train_erm(&empty, &[], &[], &TrainConfig::stump()).is_err());
        assert!(empirical_risk(
            &BinaryClassifier::Logistic { weights: vec![0.0], intercept: 0.0 },
            &empty,
            &[]
        )
        .is_err());
        let bad = TrainConfig {
            learning_rate: 0.0,
            ..TrainConfig::logistic()
        };
        assert!(train_erm(&rows, &y, &[1.0; 2], &bad).is_err());
    }

    #[test]
    fn json_round_trip_keeps_sentinels() {
        let s = BinaryClassifier::Stump {
            feature: 1,
            threshold: f64::INFINITY,
            polarity: Sign::Neg,
            trained_width: 3,
        };
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"kind":"stump","parameters":[1.0,"inf",-1.0],"trained_width":3}"#);
        let back: BinaryClassifier = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);

        let l = BinaryClassifier::Logistic {
            weights: vec![0.1 + 0.2, -1.0 / 3.0],
            intercept: 1e-17,
        };
        let back: BinaryClassifier = serde_json::from_str(&serde_json::to_string(&l).unwrap()).unwrap();
        assert_eq!(back, l);
        assert!(serde_json::from_str::<BinaryClassifier>(
            r#"{"kind":"stump","parameters":[5.0,0.0,1.0],"trained_width":3}"#
        )
        .is_err());
    }
}
