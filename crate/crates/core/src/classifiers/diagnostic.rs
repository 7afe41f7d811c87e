use serde::{Deserialize, Serialize};

use super::{ClassDistribution, ClassifierError, Predictor};
use crate::data::Dataset;
use crate::scoring::{build_count_table, log_sml, CountTable, PriorSpec, RelevantSubset};

/// A diagnostic model: the class conditioned on a relevant predictor
/// subset, with Dirichlet parameters integrated out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiagnosticRepr", into = "DiagnosticRepr")]
pub struct DiagnosticClassifier {
    table: CountTable,
    prior: PriorSpec,
    cell: f64,
}

impl DiagnosticClassifier {
    pub fn new(table: CountTable, prior: PriorSpec) -> Result<Self, ClassifierError> {
        let cell = prior.cell(&table.space(), table.class_arity())?;
        Ok(DiagnosticClassifier { table, prior, cell })
    }

    pub fn build(train: &Dataset, subset: &RelevantSubset, prior: PriorSpec) -> Result<Self, ClassifierError> {
        Self::new(build_count_table(train, subset)?, prior)
    }

    pub fn table(&self) -> &CountTable {
        &self.table
    }

    pub fn prior(&self) -> &PriorSpec {
        &self.prior
    }

    pub fn subset(&self) -> &RelevantSubset {
        self.table.subset()
    }

    pub fn log_sml(&self) -> f64 {
        log_sml(&self.table, &self.prior).expect("prior validated at construction")
    }

    /// `(N_jk + N'_jk) / (N_j + N'_j)` at the query's configuration `j`;
    /// the prior predictive for configurations absent from training.
    pub fn predict(&self, x: &[u32]) -> ClassDistribution {
        let r = self.table.class_arity() as usize;
        let config = self.table.subset().project(x);
        match self.table.counts(&config) {
            Some(counts) => ClassDistribution::from_weights(counts.iter().map(|&c| c as f64 + self.cell).collect()),
            None => ClassDistribution::from_weights(vec![1.0; r]),
        }
    }
}

impl Predictor for DiagnosticClassifier {
    fn predict(&self, x: &[u32]) -> ClassDistribution {
        DiagnosticClassifier::predict(self, x)
    }

    fn class_arity(&self) -> u32 {
        self.table.class_arity()
    }
}

#[derive(Serialize, Deserialize)]
struct DiagnosticRepr {
    prior: PriorSpec,
    table: CountTable,
}

impl From<DiagnosticClassifier> for DiagnosticRepr {
    fn from(d: DiagnosticClassifier) -> Self {
        DiagnosticRepr {
            prior: d.prior,
            table: d.table,
        }
    }
}

impl TryFrom<DiagnosticRepr> for DiagnosticClassifier {
    type Error = ClassifierError;
    fn try_from(r: DiagnosticRepr) -> Result<Self, Self::Error> {
        DiagnosticClassifier::new(r.table, r.prior)
    }
}
