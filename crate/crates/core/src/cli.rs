//! Command-line front end.
//!
//! Every command is a pure function of its input files, flags and seeds.
//! Failures print one JSON line to stderr,
//! `{"error":"<code>","exit_code":<n>,"message":"..."}`, and exit with a
//! code that identifies the failure class (see [`exit_code`]).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bound::{bound_chain, BoundConfig};
use crate::chain::{predict_chain_batch, train_chain, ChainModel, ChainOrder};
use crate::dataset::MultiLabelDataset;
use crate::datagen::{generate, GeneratorSpec};
use crate::dependency::{coefficients_for_step, CoefficientMode, DEFAULT_ALPHA, DEFAULT_N_EXACT};
use crate::error::{Error, Result};
use crate::learners::{LearnerKind, TrainConfig};
use crate::ordering::{compare_orders, propose_order, EvaluationConfig, OrderStrategy};
use crate::rademacher::DEFAULT_N_SIGMA;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_BAD_INPUT: i32 = 4;
pub const EXIT_SCHEMA: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "chainbound", version, about = "Classifier chains with dependency-aware generalization bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic Markov-chain dataset (CSV + ground-truth JSON).
    Gen(GenArgs),
    /// Train a classifier chain.
    Train(TrainArgs),
    /// Predict label vectors with a trained chain.
    Predict(PredictArgs),
    /// Estimate dependency coefficients for each chain step.
    Coeffs(CoeffsArgs),
    /// Evaluate the per-step generalization bound of a trained chain.
    Bound(BoundArgs),
    /// Propose a chain order.
    Order(OrderArgs),
    /// Compare several chain orders on a shared split.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LearnerArg {
    Stump,
    Logistic,
}

impl From<LearnerArg> for LearnerKind {
    fn from(l: LearnerArg) -> Self {
        match l {
            LearnerArg::Stump => LearnerKind::Stump,
            LearnerArg::Logistic => LearnerKind::Logistic,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Identity,
    Random,
    GreedyMinRho,
    GreedyMaxRho,
    Exhaustive,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long)]
    pub k: usize,
    /// Dependence strength: symmetric kernels with P(stay) = (1 + dep) / 2.
    #[arg(long, default_value_t = 0.0)]
    pub dep: f64,
    #[arg(long, default_value_t = 2.0)]
    pub sep: f64,
    #[arg(long = "label-noise", default_value_t = 0.0)]
    pub label_noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV; the ground truth goes to `<stem>.truth.json` beside it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Number of trailing label columns in the CSV.
    #[arg(long)]
    pub labels: usize,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub input: DataArgs,
    /// Comma-separated 0-based label indices; identity when omitted.
    #[arg(long)]
    pub order: Option<String>,
    #[arg(long, value_enum, default_value_t = LearnerArg::Stump)]
    pub learner: LearnerArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Train on this fraction of a seeded split instead of all rows.
    #[arg(long = "train-frac")]
    pub train_frac: Option<f64>,
    /// Model JSON; a training report goes to `<stem>.report.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Label columns present in the CSV (default: the model's label count).
    #[arg(long)]
    pub labels: Option<usize>,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub input: DataArgs,
    #[arg(long)]
    pub order: Option<String>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long = "n-exact", default_value_t = DEFAULT_N_EXACT)]
    pub n_exact: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub input: DataArgs,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long = "n-exact", default_value_t = DEFAULT_N_EXACT)]
    pub n_exact: usize,
    #[arg(long = "n-sigma", default_value_t = DEFAULT_N_SIGMA)]
    pub n_sigma: usize,
    /// Seeds the train/test split and the Rademacher draws.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use the same split as `train --train-frac`; the held-out part gives
    /// test risks.
    #[arg(long = "train-frac")]
    pub train_frac: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum, default_value_t = LearnerArg::Stump)]
    pub learner: LearnerArg,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long = "n-exact", default_value_t = DEFAULT_N_EXACT)]
    pub n_exact: usize,
    #[arg(long = "n-sigma", default_value_t = DEFAULT_N_SIGMA)]
    pub n_sigma: usize,
    #[arg(long = "train-frac", default_value_t = 0.7)]
    pub train_frac: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl EvalArgs {
    fn config(&self) -> Result<EvaluationConfig> {
        let bound = BoundConfig {
            delta: self.delta,
            alpha: self.alpha,
            n_exact: self.n_exact,
            mode: CoefficientMode::Auto,
            n_sigma: self.n_sigma,
            rademacher_seed: self.seed,
        };
        bound.validate()?;
        check_fraction(self.train_frac)?;
        Ok(EvaluationConfig {
            train: train_config(self.learner, self.seed),
            bound,
            train_fraction: self.train_frac,
            split_seed: self.seed,
        })
    }
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    #[command(flatten)]
    pub input: DataArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::Identity)]
    pub strategy: StrategyArg,
    #[command(flatten)]
    pub eval: EvalArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: DataArgs,
    /// An order to evaluate; repeat the flag for each order.
    #[arg(long, required = true)]
    pub order: Vec<String>,
    #[command(flatten)]
    pub eval: EvalArgs,
    #[arg(long)]
    pub out: PathBuf,
}

fn train_config(learner: LearnerArg, seed: u64) -> TrainConfig {
    TrainConfig {
        learner: learner.into(),
        ..TrainConfig::default()
    }
    .with_seed(seed)
}

fn check_fraction(f: f64) -> Result<()> {
    if f > 0.0 && f < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("--train-frac must lie in (0, 1), got {f}")))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("--alpha must be >= 0, got {alpha}")))
    }
}

/// `dir/stem.<suffix>` next to `path`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut body = text.to_owned();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &serde_json::to_string_pretty(value)?)
}

fn load_model(path: &Path) -> Result<ChainModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ChainModel::from_json(&text)
}

fn parse_order(text: Option<&str>, k: usize) -> Result<ChainOrder> {
    match text {
        Some(t) => ChainOrder::parse(t, k),
        None => Ok(ChainOrder::identity(k)),
    }
}

/// Optionally splits `data` with the same rule as `train --train-frac`.
fn maybe_split(
    data: MultiLabelDataset,
    frac: Option<f64>,
    seed: u64,
) -> Result<(MultiLabelDataset, Option<MultiLabelDataset>)> {
    match frac {
        Some(f) => {
            check_fraction(f)?;
            let (a, b) = data.split(f, seed)?;
            Ok((a, Some(b)))
        }
        None => Ok((data, None)),
    }
}

#[derive(Serialize)]
struct TrainingReport<'a> {
    m: usize,
    #[serde(rename = "K")]
    k: usize,
    order: &'a ChainOrder,
    learner: LearnerKind,
    seed: u64,
    step_risks: &'a [f64],
}

#[derive(Serialize)]
struct OrderOutput<'a> {
    strategy: &'a OrderStrategy,
    order: &'a ChainOrder,
}

/// Executes one parsed command.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Gen(a) => {
            if !(a.dep >= 0.0 && a.dep <= 1.0) {
                return Err(Error::invalid(format!("--dep must lie in [0, 1], got {}", a.dep)));
            }
            let spec = GeneratorSpec {
                class_separation: a.sep,
                label_noise: a.label_noise,
                ..GeneratorSpec::symmetric(a.m, a.d, a.k, a.dep, a.seed)
            };
            let g = generate(&spec)?;
            g.data.save_csv(&a.out)?;
            write_text(&sibling(&a.out, "truth.json"), &g.ground_truth_json(&spec)?)
        }
        Command::Train(a) => {
            let data = MultiLabelDataset::load_csv(&a.input.data, a.input.labels)?;
            let order = parse_order(a.order.as_deref(), data.k())?;
            let (train, _) = maybe_split(data, a.train_frac, a.seed)?;
            let config = train_config(a.learner, a.seed);
            let fit = train_chain(&train, &order, &config)?;
            write_text(&a.out, &fit.model.to_json()?)?;
            write_json(
                &sibling(&a.out, "report.json"),
                &TrainingReport {
                    m: train.m(),
                    k: train.k(),
                    order: &order,
                    learner: config.learner,
                    seed: a.seed,
                    step_risks: &fit.step_risks,
                },
            )
        }
        Command::Predict(a) => {
            let model = load_model(&a.model)?;
            let data = MultiLabelDataset::load_csv(&a.data, a.labels.unwrap_or(model.n_labels()))?;
            if data.d() != model.input_width() {
                return Err(Error::SchemaMismatch(format!(
                    "model expects {} features, data has {}",
                    model.input_width(),
                    data.d()
                )));
            }
            let preds = predict_chain_batch(&model, &data)?;
            let mut out = String::new();
            let names: Vec<String> = if data.k() == model.n_labels() {
                data.label_names().to_vec()
            } else {
                (0..model.n_labels()).map(|j| format!("y{j}")).collect()
            };
            out.push_str(&names.join(","));
            out.push('\n');
            for row in preds {
                let fields: Vec<String> = row.iter().map(|s| s.to_string()).collect();
                out.push_str(&fields.join(","));
                out.push('\n');
            }
            write_text(&a.out, &out)
        }
        Command::Coeffs(a) => {
            check_alpha(a.alpha)?;
            let data = MultiLabelDataset::load_csv(&a.input.data, a.input.labels)?;
            let order = parse_order(a.order.as_deref(), data.k())?;
            let reports = (2..=data.k())
                .map(|k| coefficients_for_step(&data, &order, k, a.alpha, a.n_exact, CoefficientMode::Auto))
                .collect::<Result<Vec<_>>>()?;
            write_json(&a.out, &reports)
        }
        Command::Bound(a) => {
            let model = load_model(&a.model)?;
            let data = MultiLabelDataset::load_csv(&a.input.data, a.input.labels)?;
            model.check_compatible(&data)?;
            let (train, test) = maybe_split(data, a.train_frac, a.seed)?;
            let config = BoundConfig {
                delta: a.delta,
                alpha: a.alpha,
                n_exact: a.n_exact,
                mode: CoefficientMode::Auto,
                n_sigma: a.n_sigma,
                rademacher_seed: a.seed,
            };
            let report = bound_chain(&train, test.as_ref(), &model, &config)?;
            write_text(&a.out, &report.to_json()?)
        }
        Command::Order(a) => {
            let data = MultiLabelDataset::load_csv(&a.input.data, a.input.labels)?;
            let eval = a.eval.config()?;
            let strategy = match a.strategy {
                StrategyArg::Identity => OrderStrategy::Identity,
                StrategyArg::Random => OrderStrategy::Random { seed: a.eval.seed },
                StrategyArg::GreedyMinRho => OrderStrategy::GreedyMinRho,
                StrategyArg::GreedyMaxRho => OrderStrategy::GreedyMaxRho,
                StrategyArg::Exhaustive => OrderStrategy::ExhaustiveMinBound { evaluation: eval },
            };
            let order = propose_order(&data, &strategy, a.eval.alpha)?;
            write_json(
                &a.out,
                &OrderOutput {
                    strategy: &strategy,
                    order: &order,
                },
            )
        }
        Command::Compare(a) => {
            let data = MultiLabelDataset::load_csv(&a.input.data, a.input.labels)?;
            let eval = a.eval.config()?;
            let orders = a
                .order
                .iter()
                .map(|o| ChainOrder::parse(o, data.k()))
                .collect::<Result<Vec<_>>>()?;
            let table = compare_orders(&data, &orders, &eval)?;
            write_json(&a.out, &table)
        }
    }
}

/// `(code name, exit status)` for an error.
pub fn exit_code(err: &Error) -> (&'static str, i32) {
    match err {
        Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => ("missing_file", EXIT_IO),
        Error::Io { .. } => ("io_error", EXIT_IO),
        Error::Csv { .. } | Error::Json(_) | Error::NotASign(_) => ("bad_input", EXIT_BAD_INPUT),
        Error::SchemaMismatch(_) | Error::DimensionMismatch { .. } => ("schema_mismatch", EXIT_SCHEMA),
        Error::InvalidArgument(_)
        | Error::InvalidPermutation(_)
        | Error::TooLarge { .. }
        | Error::UndefinedStep(_) => ("invalid_argument", EXIT_USAGE),
        Error::Step { source, .. } => exit_code(source),
    }
}

fn report_error(code: &str, status: i32, message: &str) {
    let line = serde_json::json!({ "error": code, "exit_code": status, "message": message });
    eprintln!("{line}");
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            report_error("invalid_argument", EXIT_USAGE, first.trim_start_matches("error: "));
            return EXIT_USAGE;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let (code, status) = exit_code(&e);
            report_error(code, status, &e.to_string());
            status
        }
    }
}
