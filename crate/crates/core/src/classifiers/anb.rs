use serde::{Deserialize, Serialize};

use super::{ClassDistribution, ClassifierError, Predictor};
use crate::data::Dataset;
use crate::partition::Partition;
use crate::scoring::{build_count_table, CountTable, PriorSpec};

/// Augmented Naive Bayes: every partition block is fully connected and acts
/// as one meta-attribute whose value is the tuple of its members' values;
/// there are no arcs between blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnbClassifier {
    prior: PriorSpec,
    partition: Partition,
    class_counts: Vec<u64>,
    blocks: Vec<CountTable>,
}

impl AnbClassifier {
    pub fn build(partition: &Partition, train: &Dataset, prior: PriorSpec) -> Result<Self, ClassifierError> {
        prior.validate()?;
        super::check_partition(partition, train)?;
        if train.is_empty() {
            return Err(ClassifierError::EmptyTrainingSet);
        }
        let mut class_counts = vec![0u64; train.class_arity() as usize];
        for &y in train.labels() {
            class_counts[y as usize] += 1;
        }
        let blocks = partition
            .blocks()
            .iter()
            .map(|b| build_count_table(train, b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AnbClassifier {
            prior,
            partition: partition.clone(),
            class_counts,
            blocks,
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn class_counts(&self) -> &[u64] {
        &self.class_counts
    }

    pub fn blocks(&self) -> &[CountTable] {
        &self.blocks
    }

    /// Bayes rule over meta-attributes. Each block contributes
    /// `(N_bjk + β_b) / (N_k + q_b β_b)` at its configuration `j`, where a
    /// configuration absent from training keeps only the prior pseudo-count.
    pub fn predict(&self, x: &[u32]) -> ClassDistribution {
        let r = self.class_counts.len() as u32;
        let class_cell = self.prior.class_cell(r);
        let mut log_w: Vec<f64> = self
            .class_counts
            .iter()
            .map(|&n| (n as f64 + class_cell).ln())
            .collect();
        let mut config = Vec::new();
        for block in &self.blocks {
            let space = block.space();
            let (cell, block_total) = match self.prior {
                PriorSpec::UniformCell { alpha } => {
                    let q = space.size().map_or(space.log_size().exp(), |q| q as f64);
                    (alpha, alpha * q)
                }
                PriorSpec::EquivalentSampleSize { ess } => {
                    let cell = self.prior.cell(&space, r).unwrap_or(0.0);
                    (cell, ess / f64::from(r))
                }
            };
            // too large to represent: the factor is uniform across classes in the limit
            if !(cell > 0.0 && block_total.is_finite()) {
                continue;
            }
            block.subset().project_into(x, &mut config);
            let counts = block.counts(&config);
            for (k, lw) in log_w.iter_mut().enumerate() {
                let n_jk = counts.map_or(0, |c| c[k]);
                *lw += (n_jk as f64 + cell).ln() - (self.class_counts[k] as f64 + block_total).ln();
            }
        }
        ClassDistribution::from_log_weights(&log_w)
    }
}

impl Predictor for AnbClassifier {
    fn predict(&self, x: &[u32]) -> ClassDistribution {
        AnbClassifier::predict(self, x)
    }

    fn class_arity(&self) -> u32 {
        self.class_counts.len() as u32
    }
}
