//! Diagnostic Bayesian network classifiers selected and weighted by
//! supervised (conditional) marginal likelihood.
//!
//! The crate covers the full pipeline:
//!
//! * [`data`]: CSV loading, equal-frequency discretization, categorical
//!   encoding and seeded train/test splits.
//! * [`scoring`]: sparse sufficient statistics, the closed-form log
//!   supervised marginal likelihood and the family meta-score.
//! * [`classifiers`]: single diagnostic models, subset mixtures (OMi),
//!   partition mixtures (PM), vanilla Naive Bayes and augmented Naive Bayes.
//! * [`partition`]: stochastic greedy search over predictor partitions.
//! * [`harness`]: loss functions, the repeated-split evaluation protocol and
//!   gains relative to Naive Bayes.
//! * [`cli`]: the `smlc` command-line surface.
//!
//! All probability arithmetic is carried out in natural-log space.

pub mod classifiers;
pub mod cli;
pub mod data;
pub mod harness;
pub mod partition;
pub mod scoring;
pub mod seed;

mod float_str;

pub use data::{Dataset, DiscretizationSpec, RawTable, Schema, SplitPlan};

pub use classifiers::{
    AnbClassifier, ClassDistribution, DiagnosticClassifier, MixtureClassifier, NbClassifier, Predictor, TrainedModel,
};
pub use partition::{Partition, SearchConfig, SearchResult};
pub use scoring::{CountTable, FamilyScore, PriorSpec, RelevantSubset};
