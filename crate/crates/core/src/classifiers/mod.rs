//! Trained predictors. Diagnostic models and their mixtures predict
//! `P(y | x)` directly from class counts per predictor configuration; Naive
//! Bayes and augmented Naive Bayes go through the Bayes rule.

mod anb;
mod diagnostic;
mod distribution;
mod mixture;
mod nb;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::partition::{Partition, PartitionError};
use crate::scoring::ScoringError;

pub use anb::AnbClassifier;
pub use diagnostic::DiagnosticClassifier;
pub use distribution::ClassDistribution;
pub use mixture::{
    binomial, build_omi, build_omi_capped, build_pm_mixture, normalize_log_weights, subsets_of_size, MixtureClassifier,
    DEFAULT_OMI_CAP,
};
pub use nb::NbClassifier;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ClassifierError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("mixture needs at least one component")]
    EmptyMixture,
    #[error("relevant subset size {size} outside 1..={n}")]
    InvalidSubsetSize { size: usize, n: usize },
    #[error("C({n}, {size}) = {} subsets exceeds the cap of {cap}", count.map_or("overflow".to_string(), |c| c.to_string()))]
    TooManyComponents {
        n: usize,
        size: usize,
        count: Option<u64>,
        cap: u64,
    },
    #[error("partition covers {partition} predictors, dataset has {dataset}")]
    PartitionMismatch { partition: usize, dataset: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub trait Predictor {
    fn predict(&self, x: &[u32]) -> ClassDistribution;
    fn class_arity(&self) -> u32;
}

fn check_partition(partition: &Partition, data: &Dataset) -> Result<(), ClassifierError> {
    if partition.n_predictors() != data.n_predictors() {
        return Err(ClassifierError::PartitionMismatch {
            partition: partition.n_predictors(),
            dataset: data.n_predictors(),
        });
    }
    Ok(())
}

/// Any trained classifier, as persisted in model files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrainedModel {
    Nb(NbClassifier),
    Omi {
        size: usize,
        mixture: MixtureClassifier,
    },
    Pm {
        partition: Partition,
        mixture: MixtureClassifier,
    },
    Anb(AnbClassifier),
}

impl Predictor for TrainedModel {
    fn predict(&self, x: &[u32]) -> ClassDistribution {
        match self {
            TrainedModel::Nb(m) => m.predict(x),
            TrainedModel::Omi { mixture, .. } | TrainedModel::Pm { mixture, .. } => mixture.predict(x),
            TrainedModel::Anb(m) => m.predict(x),
        }
    }

    fn class_arity(&self) -> u32 {
        match self {
            TrainedModel::Nb(m) => m.class_arity(),
            TrainedModel::Omi { mixture, .. } | TrainedModel::Pm { mixture, .. } => mixture.class_arity(),
            TrainedModel::Anb(m) => m.class_arity(),
        }
    }
}

impl TrainedModel {
    pub fn mixture(&self) -> Option<&MixtureClassifier> {
        match self {
            TrainedModel::Omi { mixture, .. } | TrainedModel::Pm { mixture, .. } => Some(mixture),
            _ => None,
        }
    }

    pub fn partition(&self) -> Option<&Partition> {
        match self {
            TrainedModel::Pm { partition, .. } => Some(partition),
            TrainedModel::Anb(m) => Some(m.partition()),
            _ => None,
        }
    }
}
