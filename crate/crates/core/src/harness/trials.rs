use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{self, EvalReport, ReportConfig};
use super::{log_loss, zero_one_loss, ClassifierSpec, HarnessError};
use crate::classifiers::{ClassDistribution, Predictor};
use crate::data::{fit_discretization, split_indices, Dataset, Encoder, RawTable, SplitPlan};
use crate::partition::{Partition, SearchConfig, SearchResult};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub trials: usize,
    pub train_fraction: f64,
    pub master_seed: u64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            trials: 50,
            train_fraction: 0.75,
            master_seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierTrial {
    pub classifier: String,
    pub zero_one_loss: f64,
    pub log_loss: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub partition: Option<Partition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial_index: u64,
    pub n_train: usize,
    pub n_test: usize,
    /// Every classifier in this trial saw exactly these rows.
    pub train_digest: String,
    pub test_digest: String,
    pub results: Vec<ClassifierTrial>,
}

fn check_specs(specs: &[ClassifierSpec], n_predictors: usize, cfg: &TrialConfig) -> Result<(), HarnessError> {
    if cfg.trials == 0 {
        return Err(HarnessError::Config("trials must be at least 1".into()));
    }
    if specs.is_empty() {
        return Err(HarnessError::Config("no classifiers requested".into()));
    }
    for (i, s) in specs.iter().enumerate() {
        s.validate(n_predictors)?;
        if specs[..i].iter().any(|t| t.name == s.name) {
            return Err(HarnessError::Config(format!("classifier {:?} listed twice", s.name)));
        }
    }
    Ok(())
}

/// The search config a spec uses in `trial`: its seed is re-derived per
/// trial so trials search independently.
fn trial_search(cfg: &SearchConfig, trial: u64) -> SearchConfig {
    SearchConfig {
        seed: seed::derive(seed::derive(cfg.seed, seed::stream::SEARCH), trial),
        ..cfg.clone()
    }
}

fn run_one_trial(
    trial: u64,
    train: &Dataset,
    test: &Dataset,
    specs: &[ClassifierSpec],
) -> Result<TrialResult, HarnessError> {
    if train.is_empty() || test.is_empty() {
        return Err(HarnessError::DegenerateSplit {
            trial,
            train: train.len(),
            test: test.len(),
        });
    }
    // PM and ANB with identical prior and search settings share one search
    let mut searches: HashMap<String, SearchResult> = HashMap::new();
    let mut results = Vec::with_capacity(specs.len());
    for spec in specs {
        let spec = ClassifierSpec {
            search: spec.search.as_ref().map(|s| trial_search(s, trial)),
            ..spec.clone()
        };
        let key = serde_json::to_string(&(&spec.prior, &spec.search)).expect("serializable");
        let (model, found) = spec.train(train, searches.get(&key))?;
        if let Some(found) = found {
            searches.entry(key).or_insert(found);
        }
        let predictions: Vec<ClassDistribution> = test.rows().iter().map(|x| model.predict(x)).collect();
        results.push(ClassifierTrial {
            classifier: spec.name.clone(),
            zero_one_loss: zero_one_loss(&predictions, test.labels())?,
            log_loss: log_loss(&predictions, test.labels())?,
            partition: model.partition().cloned(),
        });
    }
    Ok(TrialResult {
        trial_index: trial,
        n_train: train.len(),
        n_test: test.len(),
        train_digest: train.digest(),
        test_digest: test.digest(),
        results,
    })
}

/// Repeated random train/test splits of an already encoded dataset. Trials
/// run in parallel; results are assembled in trial order, so the report is
/// a pure function of the inputs.
pub fn run_trials(data: &Dataset, specs: &[ClassifierSpec], cfg: &TrialConfig) -> Result<EvalReport, HarnessError> {
    check_specs(specs, data.n_predictors(), cfg)?;
    let trials = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let plan = SplitPlan::new(cfg.train_fraction, cfg.master_seed, t);
            let (train, test) = split_indices(data.len(), &plan)?;
            run_one_trial(t, &data.select(&train), &data.select(&test), specs)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let config = ReportConfig::new(data, specs, cfg, None);
    Ok(report::assemble(config, trials))
}

/// Like [`run_trials`], but numeric columns are discretized per trial with
/// cut points fit on that trial's training rows only.
pub fn run_trials_per_trial_discretization(
    table: &RawTable,
    bins: usize,
    specs: &[ClassifierSpec],
    cfg: &TrialConfig,
) -> Result<EvalReport, HarnessError> {
    let global = Encoder::fit(table, &fit_discretization(table, bins, None))?.encode(table)?;
    check_specs(specs, table.columns.len(), cfg)?;
    let trials = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let plan = SplitPlan::new(cfg.train_fraction, cfg.master_seed, t);
            let (train_idx, test_idx) = split_indices(table.n_rows(), &plan)?;
            let spec = fit_discretization(table, bins, Some(&train_idx));
            let data = Encoder::fit(table, &spec)?.encode(table)?;
            run_one_trial(t, &data.select(&train_idx), &data.select(&test_idx), specs)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let config = ReportConfig::new(&global, specs, cfg, Some(bins));
    Ok(report::assemble(config, trials))
}
