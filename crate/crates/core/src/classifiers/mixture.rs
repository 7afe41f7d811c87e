use serde::{Deserialize, Serialize};

use super::{ClassDistribution, ClassifierError, DiagnosticClassifier, Predictor};
use crate::data::Dataset;
use crate::partition::Partition;
use crate::scoring::{logsumexp, PriorSpec, RelevantSubset};

/// Largest number of size-`i` subsets [`build_omi`] will enumerate.
pub const DEFAULT_OMI_CAP: u64 = 100_000;

/// Diagnostic models averaged with weights proportional to their supervised
/// marginal likelihoods (uniform model prior).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MixtureRepr", into = "MixtureRepr")]
pub struct MixtureClassifier {
    components: Vec<DiagnosticClassifier>,
    log_weights: Vec<f64>,
}

impl MixtureClassifier {
    /// Weights each component by its own log SML.
    pub fn from_components(components: Vec<DiagnosticClassifier>) -> Result<Self, ClassifierError> {
        let scores: Vec<f64> = components.iter().map(DiagnosticClassifier::log_sml).collect();
        Self::with_scores(components, &scores)
    }

    /// Weights proportional to `exp(scores)`, normalized by log-sum-exp.
    pub fn with_scores(components: Vec<DiagnosticClassifier>, scores: &[f64]) -> Result<Self, ClassifierError> {
        if components.is_empty() {
            return Err(ClassifierError::EmptyMixture);
        }
        if components.len() != scores.len() {
            return Err(ClassifierError::InvalidModel(format!(
                "{} components but {} scores",
                components.len(),
                scores.len()
            )));
        }
        let r = components[0].table().class_arity();
        if components.iter().any(|c| c.table().class_arity() != r) {
            return Err(ClassifierError::InvalidModel(
                "components disagree on class arity".into(),
            ));
        }
        let log_weights = normalize_log_weights(scores);
        Ok(MixtureClassifier {
            components,
            log_weights,
        })
    }

    pub fn build(train: &Dataset, subsets: &[RelevantSubset], prior: PriorSpec) -> Result<Self, ClassifierError> {
        let components = subsets
            .iter()
            .map(|s| DiagnosticClassifier::build(train, s, prior))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_components(components)
    }

    pub fn components(&self) -> &[DiagnosticClassifier] {
        &self.components
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn weights(&self) -> Vec<f64> {
        self.log_weights.iter().map(|w| w.exp()).collect()
    }

    /// `Σ_M w_M · P(y | x, M)`; probabilities, not log-probabilities, are averaged.
    pub fn predict(&self, x: &[u32]) -> ClassDistribution {
        let r = self.components[0].table().class_arity() as usize;
        let mut mix = vec![0.0; r];
        for (c, lw) in self.components.iter().zip(&self.log_weights) {
            let w = lw.exp();
            if w == 0.0 {
                continue;
            }
            for (m, p) in mix.iter_mut().zip(c.predict(x).probs()) {
                *m += w * p;
            }
        }
        ClassDistribution::from_weights(mix)
    }
}

/// `scores − logsumexp(scores)`.
pub fn normalize_log_weights(scores: &[f64]) -> Vec<f64> {
    let z = logsumexp(scores);
    scores.iter().map(|s| s - z).collect()
}

impl Predictor for MixtureClassifier {
    fn predict(&self, x: &[u32]) -> ClassDistribution {
        MixtureClassifier::predict(self, x)
    }

    fn class_arity(&self) -> u32 {
        self.components[0].table().class_arity()
    }
}

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// All size-`k` subsets of `0..n` in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<RelevantSubset> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(RelevantSubset::new(idx.clone()).expect("increasing"));
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return out;
        };
        idx[pos] += 1;
        for p in pos + 1..k {
            idx[p] = idx[p - 1] + 1;
        }
    }
}

/// OMi: one component per size-`size` predictor subset.
pub fn build_omi(train: &Dataset, size: usize, prior: PriorSpec) -> Result<MixtureClassifier, ClassifierError> {
    build_omi_capped(train, size, prior, DEFAULT_OMI_CAP)
}

pub fn build_omi_capped(
    train: &Dataset,
    size: usize,
    prior: PriorSpec,
    cap: u64,
) -> Result<MixtureClassifier, ClassifierError> {
    let n = train.n_predictors();
    if size == 0 || size > n {
        return Err(ClassifierError::InvalidSubsetSize { size, n });
    }
    let count = binomial(n as u64, size as u64);
    match count {
        Some(c) if c <= cap => {}
        _ => return Err(ClassifierError::TooManyComponents { n, size, count, cap }),
    }
    MixtureClassifier::build(train, &subsets_of_size(n, size), prior)
}

/// PM mixture: one component per partition block.
pub fn build_pm_mixture(
    partition: &Partition,
    train: &Dataset,
    prior: PriorSpec,
) -> Result<MixtureClassifier, ClassifierError> {
    super::check_partition(partition, train)?;
    MixtureClassifier::build(train, partition.blocks(), prior)
}

#[derive(Serialize, Deserialize)]
struct MixtureRepr {
    #[serde(with = "crate::float_str::vec")]
    log_weights: Vec<f64>,
    components: Vec<DiagnosticClassifier>,
}

impl From<MixtureClassifier> for MixtureRepr {
    fn from(m: MixtureClassifier) -> Self {
        MixtureRepr {
            log_weights: m.log_weights,
            components: m.components,
        }
    }
}

impl TryFrom<MixtureRepr> for MixtureClassifier {
    type Error = ClassifierError;
    fn try_from(r: MixtureRepr) -> Result<Self, Self::Error> {
        if r.components.is_empty() {
            return Err(ClassifierError::EmptyMixture);
        }
        if r.components.len() != r.log_weights.len() {
            return Err(ClassifierError::InvalidModel(
                "weights and components differ in length".into(),
            ));
        }
        if logsumexp(&r.log_weights).abs() > 1e-9 {
            return Err(ClassifierError::InvalidModel("mixture weights do not sum to 1".into()));
        }
        Ok(MixtureClassifier {
            components: r.components,
            log_weights: r.log_weights,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Schema;
    use crate::scoring::{build_count_table, CountTable};

    fn data(n: usize, rows: &[(Vec<u32>, u32)]) -> Dataset {
        Dataset::new(
            Schema::anonymous(vec![2; n], 2).unwrap(),
            rows.iter().map(|r| r.0.clone()).collect(),
            rows.iter().map(|r| r.1).collect(),
        )
        .unwrap()
    }

    fn xor_rows() -> Vec<(Vec<u32>, u32)> {
        let mut rows = Vec::new();
        for rep in 0..5u32 {
            for a in 0..2u32 {
                for b in 0..2u32 {
                    rows.push((vec![a, b, rep % 2], a ^ b));
                }
            }
        }
        rows
    }

    #[test]
    fn binomials_and_enumeration() {
        assert_eq!(binomial(4, 2), Some(6));
        assert_eq!(binomial(60, 30), Some(118_264_581_564_861_424));
        assert_eq!(binomial(200, 100), None);
        let s = subsets_of_size(4, 2);
        assert_eq!(s.len(), 6);
        assert_eq!(s[0].indices(), &[0, 1]);
        assert_eq!(s[5].indices(), &[2, 3]);
        assert_eq!(subsets_of_size(3, 3).len(), 1);
    }

    #[test]
    fn omi_component_counts() {
        let rows: Vec<_> = (0..8u32)
            .map(|i| (vec![i & 1, i >> 1 & 1, i >> 2 & 1, 0], i & 1))
            .collect();
        let d = data(4, &rows);
        assert_eq!(build_omi(&d, 2, PriorSpec::default()).unwrap().components().len(), 6);
        let d3 = data(3, &rows.iter().map(|(x, y)| (x[..3].to_vec(), *y)).collect::<Vec<_>>());
        let m = build_omi(&d3, 3, PriorSpec::default()).unwrap();
        assert_eq!(m.components().len(), 1);
        assert_eq!(m.log_weights(), &[0.0]);
        assert!(matches!(
            build_omi_capped(&d, 2, PriorSpec::default(), 5),
            Err(ClassifierError::TooManyComponents { count: Some(6), .. })
        ));
        assert!(matches!(
            build_omi(&d, 0, PriorSpec::default()),
            Err(ClassifierError::InvalidSubsetSize { .. })
        ));
        assert!(matches!(
            build_omi(&d, 5, PriorSpec::default()),
            Err(ClassifierError::InvalidSubsetSize { .. })
        ));
    }

    #[test]
    fn xor_pair_dominates_om2() {
        let d = data(3, &xor_rows());
        let m = build_omi(&d, 2, PriorSpec::default()).unwrap();
        // independent check: weights are the normalized exp of each subset's SML
        let direct: Vec<f64> = m
            .components()
            .iter()
            .map(|c| {
                crate::scoring::log_sml(&build_count_table(&d, c.subset()).unwrap(), &PriorSpec::default()).unwrap()
            })
            .collect();
        let best = direct.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert_eq!(m.components()[best].subset().indices(), &[0, 1]);
        let heaviest = m
            .log_weights()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(heaviest, best);
    }

    #[test]
    fn pm_mixture_one_component_per_block() {
        let d = data(3, &xor_rows());
        let p = Partition::from_labels(&[0, 1, 1]);
        let m = build_pm_mixture(&p, &d, PriorSpec::default()).unwrap();
        assert_eq!(m.components().len(), 2);
        let single = build_pm_mixture(&Partition::single_block(3), &d, PriorSpec::default()).unwrap();
        assert_eq!(single.weights(), vec![1.0]);
        assert!(build_pm_mixture(&Partition::singletons(2), &d, PriorSpec::default()).is_err());
    }

    fn fixed_component(counts: [u64; 2]) -> DiagnosticClassifier {
        // empty subset, so every query hits the single configuration
        let mut t = CountTable::empty(RelevantSubset::empty(), vec![], 2);
        for (k, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                t.add(&[], k as u32);
            }
        }
        DiagnosticClassifier::new(t, PriorSpec::UniformCell { alpha: 1.0 }).unwrap()
    }

    #[test]
    fn weighted_prediction() {
        let a = fixed_component([3, 0]); // (3+1)/(3+2) = 0.8
        let b = fixed_component([1, 2]); // (1+1)/(3+2) = 0.4
        assert!((a.predict(&[]).prob(0) - 0.8).abs() < 1e-15);
        assert!((b.predict(&[]).prob(0) - 0.4).abs() < 1e-15);
        let m = MixtureClassifier::with_scores(vec![a, b], &[0.75f64.ln(), 0.25f64.ln()]).unwrap();
        let p = m.predict(&[]);
        assert!((p.prob(0) - 0.7).abs() < 1e-12 && (p.prob(1) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn symmetric_components_cancel() {
        let a = fixed_component([1000, 0]);
        let b = fixed_component([0, 1000]);
        let m = MixtureClassifier::with_scores(vec![a.clone(), b], &[-4.0, -4.0]).unwrap();
        let p = m.predict(&[]);
        assert!((p.prob(0) - 0.5).abs() < 1e-12);
        let single = MixtureClassifier::from_components(vec![a.clone()]).unwrap();
        assert_eq!(single.predict(&[]), a.predict(&[]));
    }

    #[test]
    fn weights_shift_invariant() {
        let scores = [-10.0, -12.5, -11.0];
        let base = normalize_log_weights(&scores);
        assert!(logsumexp(&base).abs() < 1e-12);
        for shift in [-1e5, -3.0, 7.0, 400.0] {
            let shifted: Vec<f64> = scores.iter().map(|s| s + shift).collect();
            for (a, b) in normalize_log_weights(&shifted).iter().zip(&base) {
                assert!((a.exp() - b.exp()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let d = data(3, &xor_rows());
        let m = build_omi(&d, 2, PriorSpec::default()).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<MixtureClassifier>(&json).unwrap(), m);
    }
}
