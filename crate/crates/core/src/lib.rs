//! Classifier chains for multi-label classification with dependency-aware
//! generalization bounds.
//!
//! A chain trains one binary classifier per label; step `k` sees the
//! features plus the chain's own predictions for the `k - 1` earlier labels.
//! The bound at each step combines the empirical risk, a Rademacher term and
//! total-variation coefficients that measure how strongly consecutive labels
//! depend on each other.
//!
//! ```
//! use chainbound::{bound_chain, generate, train_chain, BoundConfig, ChainOrder, GeneratorSpec, TrainConfig};
//!
//! let g = generate(&GeneratorSpec::symmetric(200, 2, 3, 0.6, 1)).unwrap();
//! let fit = train_chain(&g.data, &ChainOrder::identity(3), &TrainConfig::stump()).unwrap();
//! let report = bound_chain(&g.data, None, &fit.model, &BoundConfig::default()).unwrap();
//! assert_eq!(report.steps.len(), 3);
//! ```

pub mod bound;
pub mod chain;
pub mod cli;
pub mod datagen;
pub mod dataset;
pub mod dependency;
pub mod error;
pub mod learners;
pub mod oracles;
pub mod ordering;
pub mod rademacher;
pub mod sign;

pub use bound::{bound_chain, compute_bound, BoundConfig, BoundReport, BoundStep};
pub use chain::{predict_chain, predict_chain_batch, train_chain, ChainModel, ChainOrder, ChainTraining};
pub use datagen::{generate, FeatureModel, GeneratorSpec, Generated};
pub use dataset::{AugmentedView, FeatureRows, Matrix, MultiLabelDataset};
pub use dependency::{
    coefficients_for_step, estimate_transitions, gamma_exact, gamma_monte_carlo, gamma_upper, rho,
    CoefficientMode, DependencyCoefficients, GammaEntry, GammaMode, TransitionTable,
};
pub use error::{Error, Result};
pub use learners::{train_erm, BinaryClassifier, LearnerKind, TrainConfig};
pub use ordering::{compare_orders, propose_order, EvaluationConfig, OrderComparison, OrderStrategy};
pub use rademacher::{estimate_rademacher, HypothesisClass, RademacherEstimate};
pub use sign::Sign;
