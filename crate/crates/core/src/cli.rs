//! The `smlc` command line: `eval`, `search`, `train` and `predict`.
//!
//! Exit codes: 0 success, 2 input error, 3 configuration error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::classifiers::{ClassifierError, Predictor, TrainedModel};
use crate::data::{fit_discretization, load_csv, read_records, DataError, Dataset, Encoder, RawTable, Schema};
use crate::harness::{
    run_trials, run_trials_per_trial_discretization, ClassifierKind, ClassifierSpec, HarnessError, TrialConfig,
};
use crate::partition::{pm_search, Partition, SearchConfig, SearchError, SearchResult};
use crate::scoring::PriorSpec;

pub const MODEL_FORMAT_VERSION: u32 = 1;
pub const SEARCH_FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Config(_) => 3,
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        match e {
            DataError::InvalidTrainFraction(_) => CliError::Config(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ClassifierError> for CliError {
    fn from(e: ClassifierError) -> Self {
        match e {
            ClassifierError::InvalidSubsetSize { .. } | ClassifierError::TooManyComponents { .. } => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::InvalidConfig(_) => CliError::Config(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(_) | HarnessError::UnknownClassifier(_) => CliError::Config(e.to_string()),
            HarnessError::Data(d) => d.into(),
            HarnessError::Classifier(c) => c.into(),
            HarnessError::Search(s) => s.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "smlc",
    version,
    about = "Classifiers selected by supervised marginal likelihood"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Repeated random-split evaluation against Naive Bayes
    Eval(EvalArgs),
    /// Find a predictor partition on the full dataset
    Search(SearchArgs),
    /// Train one classifier on the full dataset
    Train(TrainArgs),
    /// Apply a saved model to new rows
    Predict(PredictArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long = "class-col")]
    pub class_col: String,
    #[arg(long, default_value_t = 3)]
    pub bins: usize,
}

#[derive(Debug, Args)]
pub struct SearchFlags {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub patience: usize,
    #[arg(long = "max-block-size")]
    pub max_block_size: Option<usize>,
    #[arg(long, default_value = "uniform:1.0")]
    pub prior: String,
}

impl SearchFlags {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            restarts: self.restarts,
            patience: self.patience,
            max_block_size: self.max_block_size,
            seed: self.seed,
            ..SearchConfig::default()
        }
    }

    fn prior(&self) -> Result<PriorSpec, CliError> {
        self.prior
            .parse()
            .map_err(|e: crate::scoring::ScoringError| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long = "train-frac", default_value_t = 0.75)]
    pub train_frac: f64,
    #[arg(long)]
    pub classifiers: String,
    #[arg(long = "global-discretize", default_value_t = true, action = ArgAction::Set)]
    pub global_discretize: bool,
    #[command(flatten)]
    pub search: SearchFlags,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub search: SearchFlags,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub classifier: String,
    #[command(flatten)]
    pub search: SearchFlags,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

/// On-disk model: the encoder that maps raw rows, and count-based
/// parameters so the model is exact under its prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub schema: Schema,
    pub encoder: Encoder,
    pub classifier: ClassifierSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub search: Option<SearchResult>,
    pub model: TrainedModel,
}

impl ModelFile {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(CliError::Input(format!(
                "unsupported model format version {}",
                self.format_version
            )));
        }
        if self.encoder.schema() != self.schema {
            return Err(CliError::Input("model schema does not match its encoder".into()));
        }
        if self.model.class_arity() != self.schema.class_arity {
            return Err(CliError::Input("model class arity does not match its schema".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchFile {
    pub format_version: u32,
    pub predictor_names: Vec<String>,
    pub prior: PriorSpec,
    pub config: SearchConfig,
    /// Best partition with predictor names in place of indices.
    pub named_blocks: Vec<Vec<String>>,
    pub result: SearchResult,
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::Input(e.to_string()))
}

fn load(args: &DataArgs) -> Result<(RawTable, Encoder, Dataset), CliError> {
    if args.bins == 0 {
        return Err(CliError::Config("--bins must be at least 1".into()));
    }
    let table = load_csv(open(&args.data)?, &args.class_col)?;
    let encoder = Encoder::fit(&table, &fit_discretization(&table, args.bins, None))?;
    let data = encoder.encode(&table)?;
    Ok((table, encoder, data))
}

fn parse_classifiers(list: &str, prior: PriorSpec, search: &SearchConfig) -> Result<Vec<ClassifierSpec>, CliError> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let kind: ClassifierKind = s.parse().map_err(|e: HarnessError| CliError::Config(e.to_string()))?;
            Ok(ClassifierSpec::new(kind, prior, Some(search.clone())))
        })
        .collect()
}

fn eval(args: &EvalArgs) -> Result<(), CliError> {
    let prior = args.search.prior()?;
    let specs = parse_classifiers(&args.classifiers, prior, &args.search.config())?;
    let cfg = TrialConfig {
        trials: args.trials,
        train_fraction: args.train_frac,
        master_seed: args.search.seed,
    };
    if !(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0) {
        return Err(CliError::Config(format!(
            "--train-frac {} outside (0, 1)",
            cfg.train_fraction
        )));
    }
    let (table, _, data) = load(&args.data)?;
    let mut report = if args.global_discretize {
        run_trials(&data, &specs, &cfg)?
    } else {
        run_trials_per_trial_discretization(&table, args.data.bins, &specs, &cfg)?
    };
    report.config.bins = Some(args.data.bins);
    report.config.global_discretize = Some(args.global_discretize);
    write_json(&args.out, &report)
}

fn search(args: &SearchArgs) -> Result<(), CliError> {
    let prior = args.search.prior()?;
    let config = args.search.config();
    config.validate()?;
    let (_, encoder, data) = load(&args.data)?;
    let result = pm_search(&data, &prior, &config)?;
    let names = &encoder.schema().predictor_names;
    let named_blocks = named(&result.best_partition, names);
    write_json(
        &args.out,
        &SearchFile {
            format_version: SEARCH_FORMAT_VERSION,
            predictor_names: names.clone(),
            prior,
            config,
            named_blocks,
            result,
        },
    )
}

fn named(partition: &Partition, names: &[String]) -> Vec<Vec<String>> {
    partition
        .blocks()
        .iter()
        .map(|b| b.indices().iter().map(|&i| names[i].clone()).collect())
        .collect()
}

fn train(args: &TrainArgs) -> Result<(), CliError> {
    let prior = args.search.prior()?;
    let kind: ClassifierKind = args
        .classifier
        .parse()
        .map_err(|e: HarnessError| CliError::Config(e.to_string()))?;
    let spec = ClassifierSpec::new(kind, prior, Some(args.search.config()));
    let (_, encoder, data) = load(&args.data)?;
    spec.validate(data.n_predictors())?;
    let (model, search) = spec.train(&data, None)?;
    write_json(
        &args.out,
        &ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            schema: encoder.schema(),
            encoder,
            classifier: spec,
            search,
            model,
        },
    )
}

fn predict(args: &PredictArgs) -> Result<(), CliError> {
    let file: ModelFile = serde_json::from_reader(open(&args.model)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.model.display())))?;
    file.validate()?;
    let records = read_records(open(&args.input)?)?;
    let mut out = csv::Writer::from_writer(create(&args.out)?);
    let csv_err = |e: csv::Error| CliError::Input(e.to_string());
    let mut header: Vec<String> = file.encoder.class_values.iter().map(|c| format!("p_{c}")).collect();
    header.push("predicted".into());
    out.write_record(&header).map_err(csv_err)?;
    for (cells, line) in records.rows.iter().zip(&records.lines) {
        let x = file
            .encoder
            .encode_record(&records.header, cells)
            .map_err(|e| CliError::Input(format!("line {line}: {e}")))?;
        let p = file.model.predict(&x);
        let mut row: Vec<String> = p.probs().iter().map(|v| v.to_string()).collect();
        row.push(file.encoder.class_values[p.argmax() as usize].clone());
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush().map_err(|e| CliError::Input(e.to_string()))
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Search(a) => search(a),
        Command::Train(a) => train(a),
        Command::Predict(a) => predict(a),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("smlc: {e}");
            e.exit_code()
        }
    }
}
