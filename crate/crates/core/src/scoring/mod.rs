//! Sufficient statistics and the scoring kernel: the closed-form log
//! supervised marginal likelihood of a diagnostic model and the family
//! meta-score averaging it over a set of models.

mod counts;
mod gamma;
mod prior;
mod sml;

pub use counts::{build_count_table, ConfigSpace, CountTable, RelevantSubset};
pub use gamma::{ln_gamma, log_gamma};
pub use prior::PriorSpec;
pub use sml::{log_family_score, log_sml, log_sml_counts, logsumexp, FamilyScore};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ScoringError {
    #[error("log_gamma argument {0} is not positive")]
    NonPositiveGamma(f64),
    #[error("predictor index {index} out of range for {n} predictors")]
    InvalidSubset { index: usize, n: usize },
    #[error("subset indices must be strictly increasing: {0:?}")]
    UnsortedSubset(Vec<usize>),
    #[error("invalid prior: {0}")]
    InvalidPrior(String),
    #[error("prior hyperparameter underflows for a configuration space of 10^{log10_q:.1} cells")]
    DegeneratePrior { log10_q: f64 },
    #[error("family score of an empty model list")]
    EmptyFamily,
    #[error("invalid count table: {0}")]
    InvalidTable(String),
}
