//! Loss functions, the repeated random-split protocol and gains relative
//! to vanilla Naive Bayes.

mod loss;
mod report;
mod spec;
mod trials;

pub use loss::{log_loss, zero_one_loss};
pub use report::{
    gains_vs_nb, ClassifierMeans, EvalReport, Gain, LossGain, Ratio, ReportConfig, REPORT_FORMAT_VERSION,
};
pub use spec::{ClassifierKind, ClassifierSpec};
pub use trials::{run_trials, run_trials_per_trial_discretization, ClassifierTrial, TrialConfig, TrialResult};

use crate::classifiers::ClassifierError;
use crate::data::DataError;
use crate::partition::SearchError;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum HarnessError {
    #[error("{predictions} predictions for {truth} labels")]
    LengthMismatch { predictions: usize, truth: usize },
    #[error("no predictions to score")]
    NoPredictions,
    #[error("zero probability assigned to the true class of row {row}")]
    ZeroProbability { row: usize },
    #[error("unknown classifier {0:?} (expected nb, om<i>, pm or anb)")]
    UnknownClassifier(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("trial {trial}: split leaves {train} training and {test} test rows")]
    DegenerateSplit { trial: u64, train: usize, test: usize },
    #[error("report has no Naive Bayes baseline")]
    NbAbsent,
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error(transparent)]
    Search(#[from] SearchError),
}
