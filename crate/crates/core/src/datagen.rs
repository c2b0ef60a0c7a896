//! Synthetic multi-label data whose labels follow a known Markov chain.
//!
//! Label 0 is drawn from `first_marginal`; label `k` is drawn from
//! `transition_matrices[k - 1]` given label `k - 1`. Features depend on the
//! clean label 0 only, so later labels are predictable only through the
//! chain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Matrix, MultiLabelDataset};
use crate::dependency::TransitionTable;
use crate::error::{Error, Result};
use crate::sign::Sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureModel {
    /// Coordinate 0 is `N(+-class_separation/2, 1)` by the sign of label 0;
    /// the remaining `d - 1` coordinates are pure noise.
    GaussianPerLabel,
    NoiseOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub m: usize,
    pub d: usize,
    #[serde(rename = "K")]
    pub k: usize,
    /// `K - 1` kernels, `transition_matrices[t][a][b] = P(y_{t+1} = b | y_t = a)`
    /// with index 0 for `-1`.
    pub transition_matrices: Vec<[[f64; 2]; 2]>,
    /// Probability that label 0 is `+1`.
    pub first_marginal: f64,
    pub feature_model: FeatureModel,
    pub class_separation: f64,
    pub label_noise: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    /// `K` labels linked by symmetric kernels with `P(stay) = (1 + dep) / 2`.
    pub fn symmetric(m: usize, d: usize, k: usize, dep: f64, seed: u64) -> Self {
        let stay = (1.0 + dep) / 2.0;
        GeneratorSpec {
            m,
            d,
            k,
            transition_matrices: vec![[[stay, 1.0 - stay], [1.0 - stay, stay]]; k.saturating_sub(1)],
            first_marginal: 0.5,
            feature_model: FeatureModel::GaussianPerLabel,
            class_separation: 2.0,
            label_noise: 0.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.d == 0 || self.k == 0 {
            return Err(Error::invalid("m, d and K must all be at least 1"));
        }
        if self.transition_matrices.len() != self.k - 1 {
            return Err(Error::DimensionMismatch {
                what: "transition matrices",
                expected: self.k - 1,
                found: self.transition_matrices.len(),
            });
        }
        for (t, mat) in self.transition_matrices.iter().enumerate() {
            for row in mat {
                if row.iter().any(|p| !(0.0..=1.0).contains(p)) || (row[0] + row[1] - 1.0).abs() > 1e-12 {
                    return Err(Error::invalid(format!(
                        "transition matrix {t} is not row-stochastic: {mat:?}"
                    )));
                }
            }
        }
        if !(0.0..=1.0).contains(&self.first_marginal) {
            return Err(Error::invalid("first_marginal must lie in [0, 1]"));
        }
        if !(self.class_separation >= 0.0 && self.class_separation.is_finite()) {
            return Err(Error::invalid("class_separation must be non-negative"));
        }
        if !(0.0..0.5).contains(&self.label_noise) {
            return Err(Error::invalid("label_noise must lie in [0, 0.5)"));
        }
        Ok(())
    }

    /// Exact `P(y_k = +1)` of the clean chain, for every label.
    pub fn clean_marginals(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.k);
        let mut p = self.first_marginal;
        out.push(p);
        for mat in &self.transition_matrices {
            p = (1.0 - p) * mat[0][1] + p * mat[1][1];
            out.push(p);
        }
        out
    }

    /// Exact `P(y_k = +1)` after independent label flips.
    pub fn observed_marginals(&self) -> Vec<f64> {
        let e = self.label_noise;
        self.clean_marginals()
            .into_iter()
            .map(|p| p * (1.0 - e) + (1.0 - p) * e)
            .collect()
    }

    /// Ground truth for steps `k = 2..=K`: the exact kernel and marginal of
    /// the observed (post-noise) label pair `(y_{k-1}, y_k)`. Without label
    /// noise this is `transition_matrices[k - 2]` itself.
    pub fn ground_truth(&self) -> Result<Vec<TransitionTable>> {
        let e = self.label_noise;
        let flip = [[1.0 - e, e], [e, 1.0 - e]];
        let clean = self.clean_marginals();
        self.transition_matrices
            .iter()
            .enumerate()
            .map(|(t, mat)| {
                let prev = [1.0 - clean[t], clean[t]];
                let mut joint = [[0.0; 2]; 2];
                for a in 0..2 {
                    for b in 0..2 {
                        let j = prev[a] * mat[a][b];
                        for (oa, row) in joint.iter_mut().enumerate() {
                            for (ob, cell) in row.iter_mut().enumerate() {
                                *cell += j * flip[a][oa] * flip[b][ob];
                            }
                        }
                    }
                }
                let mut trans = *mat;
                for a in 0..2 {
                    let total = joint[a][0] + joint[a][1];
                    if total > 0.0 {
                        let p_pos = joint[a][1] / total;
                        trans[a] = [1.0 - p_pos, p_pos];
                    }
                }
                let p_pos = joint[0][1] + joint[1][1];
                TransitionTable::from_probabilities(t + 2, trans, [1.0 - p_pos, p_pos])
            })
            .collect()
    }
}

/// Generated data plus the exact kernels it was drawn from.
#[derive(Debug, Clone)]
pub struct Generated {
    pub data: MultiLabelDataset,
    pub ground_truth: Vec<TransitionTable>,
}

#[derive(Serialize)]
struct GroundTruthFile<'a> {
    spec: &'a GeneratorSpec,
    tables: &'a [TransitionTable],
}

impl Generated {
    /// `{spec, tables}` as pretty JSON.
    pub fn ground_truth_json(&self, spec: &GeneratorSpec) -> Result<String> {
        Ok(serde_json::to_string_pretty(&GroundTruthFile {
            spec,
            tables: &self.ground_truth,
        })?)
    }
}

fn draw(rng: &mut ChaCha8Rng, p_pos: f64) -> Sign {
    if rng.random::<f64>() < p_pos {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// Samples a dataset; row `i` uses ChaCha stream `i` of `spec.seed`.
pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    spec.validate()?;
    let rows: Vec<(Vec<f64>, Vec<Sign>)> = (0..spec.m)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(i as u64);
            let mut clean = Vec::with_capacity(spec.k);
            let mut y = draw(&mut rng, spec.first_marginal);
            clean.push(y);
            for mat in &spec.transition_matrices {
                y = draw(&mut rng, mat[y.index()][1]);
                clean.push(y);
            }
            let labels = clean
                .iter()
                .map(|&y| if rng.random::<f64>() < spec.label_noise { -y } else { y })
                .collect();
            let shift = match spec.feature_model {
                FeatureModel::GaussianPerLabel => clean[0].to_f64() * spec.class_separation / 2.0,
                FeatureModel::NoiseOnly => 0.0,
            };
            let features = (0..spec.d)
                .map(|j| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    if j == 0 {
                        z + shift
                    } else {
                        z
                    }
                })
                .collect();
            (features, labels)
        })
        .collect();

    let mut flat = Vec::with_capacity(spec.m * spec.d);
    let mut labels = Vec::with_capacity(spec.m);
    for (x, y) in rows {
        flat.extend(x);
        labels.push(y);
    }
    let data = MultiLabelDataset::new(Matrix::new(spec.m, spec.d, flat)?, labels)?;
    Ok(Generated {
        data,
        ground_truth: spec.ground_truth()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copy_chain_duplicates_labels() {
        let spec = GeneratorSpec::symmetric(200, 2, 4, 1.0, 5);
        let g = generate(&spec).unwrap();
        for k in 1..4 {
            assert_eq!(g.data.label_column(k), g.data.label_column(k - 1));
        }
    }

    #[test]
    fn same_seed_same_data() {
        let spec = GeneratorSpec::symmetric(50, 3, 3, 0.4, 17);
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a.data, b.data);
        let other = generate(&GeneratorSpec { seed: 18, ..spec }).unwrap();
        assert_ne!(a.data, other.data);
    }

    #[test]
    fn marginal_propagation() {
        let spec = GeneratorSpec {
            first_marginal: 0.8,
            transition_matrices: vec![[[0.7, 0.3], [0.2, 0.8]]],
            label_noise: 0.1,
            ..GeneratorSpec::symmetric(10, 1, 2, 0.0, 0)
        };
        let clean = spec.clean_marginals();
        assert!((clean[1] - (0.2 * 0.3 + 0.8 * 0.8)).abs() < 1e-15);
        let obs = spec.observed_marginals();
        assert!((obs[0] - (0.8 * 0.9 + 0.2 * 0.1)).abs() < 1e-15);
        let gt = GeneratorSpec { label_noise: 0.0, ..spec.clone() }.ground_truth().unwrap();
        assert_eq!(gt[0].k, 2);
        for (got, want) in gt[0].trans.iter().flatten().zip([0.7, 0.3, 0.2, 0.8]) {
            assert!((got - want).abs() < 1e-15);
        }
        let noisy = spec.ground_truth().unwrap();
        assert!((noisy[0].marginal[1] - obs[1]).abs() < 1e-15);
        assert!(noisy[0].trans[1][1] < 0.8 && noisy[0].trans[0][1] > 0.3);
    }

    #[test]
    fn invalid_specs() {
        let good = GeneratorSpec::symmetric(10, 1, 2, 0.5, 0);
        assert!(good.validate().is_ok());
        let bad_matrix = GeneratorSpec {
            transition_matrices: vec![[[0.7, 0.4], [0.5, 0.5]]],
            ..good.clone()
        };
        assert!(generate(&bad_matrix).is_err());
        assert!(GeneratorSpec { label_noise: 0.5, ..good.clone() }.validate().is_err());
        assert!(GeneratorSpec { first_marginal: 1.5, ..good.clone() }.validate().is_err());
        assert!(GeneratorSpec { transition_matrices: vec![], ..good }.validate().is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = GeneratorSpec::symmetric(10, 2, 3, 0.3, 1);
        let back: GeneratorSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }
}
