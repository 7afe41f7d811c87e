use serde::{Deserialize, Serialize};

use super::{ClassDistribution, ClassifierError, Predictor};
use crate::data::Dataset;
use crate::scoring::PriorSpec;

/// Vanilla Naive Bayes over categorical predictors. Stores raw counts;
/// smoothing is applied at prediction time from the prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbClassifier {
    prior: PriorSpec,
    arities: Vec<u32>,
    class_counts: Vec<u64>,
    /// `tables[i][v][k]`: rows with predictor `i` at value `v` and class `k`.
    tables: Vec<Vec<Vec<u64>>>,
}

impl NbClassifier {
    pub fn build(train: &Dataset, prior: PriorSpec) -> Result<Self, ClassifierError> {
        prior.validate()?;
        if train.is_empty() {
            return Err(ClassifierError::EmptyTrainingSet);
        }
        let schema = train.schema();
        let r = schema.class_arity as usize;
        let mut class_counts = vec![0u64; r];
        let mut tables: Vec<Vec<Vec<u64>>> = schema
            .predictor_arities
            .iter()
            .map(|&a| vec![vec![0; r]; a as usize])
            .collect();
        for (row, &y) in train.rows().iter().zip(train.labels()) {
            class_counts[y as usize] += 1;
            for (table, &v) in tables.iter_mut().zip(row) {
                table[v as usize][y as usize] += 1;
            }
        }
        Ok(NbClassifier {
            prior,
            arities: schema.predictor_arities.clone(),
            class_counts,
            tables,
        })
    }

    pub fn class_counts(&self) -> &[u64] {
        &self.class_counts
    }

    pub fn tables(&self) -> &[Vec<Vec<u64>>] {
        &self.tables
    }

    pub fn prior(&self) -> &PriorSpec {
        &self.prior
    }

    /// Pseudo-count of one (value, class) cell of predictor `i`.
    fn value_cell(&self, i: usize) -> f64 {
        let r = self.class_counts.len() as f64;
        match self.prior {
            PriorSpec::UniformCell { alpha } => alpha,
            PriorSpec::EquivalentSampleSize { ess } => ess / (r * f64::from(self.arities[i])),
        }
    }

    /// `P(k | x) ∝ P̂(k) Π_i P̂(x_i | k)` from smoothed counts. Values outside
    /// a predictor's arity count as unobserved.
    pub fn predict(&self, x: &[u32]) -> ClassDistribution {
        let r = self.class_counts.len() as u32;
        let class_cell = self.prior.class_cell(r);
        let mut log_w: Vec<f64> = self
            .class_counts
            .iter()
            .map(|&n| (n as f64 + class_cell).ln())
            .collect();
        for (i, (table, &v)) in self.tables.iter().zip(x).enumerate() {
            let b = self.value_cell(i);
            let total_b = b * f64::from(self.arities[i]);
            for (k, lw) in log_w.iter_mut().enumerate() {
                let n_v = table.get(v as usize).map_or(0, |c| c[k]);
                *lw += (n_v as f64 + b).ln() - (self.class_counts[k] as f64 + total_b).ln();
            }
        }
        ClassDistribution::from_log_weights(&log_w)
    }
}

impl Predictor for NbClassifier {
    fn predict(&self, x: &[u32]) -> ClassDistribution {
        NbClassifier::predict(self, x)
    }

    fn class_arity(&self) -> u32 {
        self.class_counts.len() as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Schema;

    fn data(arities: Vec<u32>, rows: Vec<Vec<u32>>, labels: Vec<u32>) -> Dataset {
        Dataset::new(Schema::anonymous(arities, 2).unwrap(), rows, labels).unwrap()
    }

    #[test]
    fn tallies() {
        let nb = NbClassifier::build(&data(vec![2], vec![vec![0], vec![1]], vec![0, 1]), PriorSpec::default()).unwrap();
        assert_eq!(nb.class_counts(), &[1, 1]);
        assert_eq!(nb.tables()[0], vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn no_predictors_is_class_marginal() {
        let nb = NbClassifier::build(&data(vec![], vec![vec![]; 3], vec![0, 0, 1]), PriorSpec::default()).unwrap();
        let p = nb.predict(&[]);
        assert!((p.prob(0) - 0.6).abs() < 1e-15 && (p.prob(1) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn doubling_doubles_counts() {
        let rows = vec![vec![0, 1], vec![1, 1], vec![1, 0]];
        let labels = vec![0, 1, 1];
        let once = NbClassifier::build(&data(vec![2, 2], rows.clone(), labels.clone()), PriorSpec::default()).unwrap();
        let twice = NbClassifier::build(
            &data(
                vec![2, 2],
                [rows.clone(), rows].concat(),
                [labels.clone(), labels].concat(),
            ),
            PriorSpec::default(),
        )
        .unwrap();
        assert!(once
            .class_counts()
            .iter()
            .zip(twice.class_counts())
            .all(|(a, b)| 2 * a == *b));
        for (ta, tb) in once.tables().iter().zip(twice.tables()) {
            for (ra, rb) in ta.iter().zip(tb) {
                assert!(ra.iter().zip(rb).all(|(a, b)| 2 * a == *b));
            }
        }
    }

    #[test]
    fn hand_evaluated_bayes_rule() {
        // class counts [2,1]; table [[2,0],[0,1]]; x = 0
        // class 0: (3/5)(3/4) = 9/20, class 1: (2/5)(1/3) = 2/15  =>  27/35
        let nb = NbClassifier::build(
            &data(vec![2], vec![vec![0], vec![0], vec![1]], vec![0, 0, 1]),
            PriorSpec::default(),
        )
        .unwrap();
        let p = nb.predict(&[0]);
        assert!((p.prob(0) - 27.0 / 35.0).abs() < 1e-12);
        assert!((p.prob(0) - 0.7714).abs() < 1e-4 && (p.prob(1) - 0.2286).abs() < 1e-4);
    }

    #[test]
    fn symmetric_counts_give_uniform() {
        let nb = NbClassifier::build(
            &data(vec![2], vec![vec![0], vec![1], vec![0], vec![1]], vec![0, 0, 1, 1]),
            PriorSpec::default(),
        )
        .unwrap();
        assert_eq!(nb.predict(&[1]).probs(), &[0.5, 0.5]);
    }

    #[test]
    fn empty_training_set() {
        assert_eq!(
            NbClassifier::build(&data(vec![2], vec![], vec![]), PriorSpec::default()).unwrap_err(),
            ClassifierError::EmptyTrainingSet
        );
    }
}
