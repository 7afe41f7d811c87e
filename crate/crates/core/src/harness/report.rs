use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ClassifierSpec, HarnessError, TrialConfig, TrialResult};
use crate::data::Dataset;

pub const REPORT_FORMAT_VERSION: u32 = 1;

/// Everything that determines a report, echoed into it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub dataset_digest: String,
    pub n_rows: usize,
    pub n_predictors: usize,
    pub class_arity: u32,
    pub trials: usize,
    pub train_fraction: f64,
    pub master_seed: u64,
    pub bins: Option<usize>,
    pub global_discretize: Option<bool>,
    pub classifiers: Vec<ClassifierSpec>,
}

impl ReportConfig {
    pub fn new(data: &Dataset, specs: &[ClassifierSpec], cfg: &TrialConfig, per_trial_bins: Option<usize>) -> Self {
        ReportConfig {
            dataset_digest: data.digest(),
            n_rows: data.len(),
            n_predictors: data.n_predictors(),
            class_arity: data.class_arity(),
            trials: cfg.trials,
            train_fraction: cfg.train_fraction,
            master_seed: cfg.master_seed,
            bins: per_trial_bins,
            global_discretize: per_trial_bins.map(|_| false),
            classifiers: specs.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierMeans {
    pub classifier: String,
    pub zero_one_loss: f64,
    pub log_loss: f64,
}

/// `classifier / nb`, undefined when the baseline loss is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratio(pub Option<f64>);

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Some(v) => s.serialize_f64(v),
            None => s.serialize_str("undefined"),
        }
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Ratio(Some(v))),
            Raw::Str(s) if s == "undefined" => Ok(Ratio(None)),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad ratio {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossGain {
    pub nb: f64,
    pub classifier: f64,
    /// `nb − classifier`; positive means better than Naive Bayes.
    pub difference: f64,
    pub ratio: Ratio,
}

impl LossGain {
    fn new(nb: f64, classifier: f64) -> Self {
        LossGain {
            nb,
            classifier,
            difference: nb - classifier,
            ratio: Ratio((nb != 0.0).then(|| classifier / nb)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gain {
    pub classifier: String,
    pub zero_one: LossGain,
    pub log_loss: LossGain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub format_version: u32,
    pub config: ReportConfig,
    pub trials: Vec<TrialResult>,
    pub means: Vec<ClassifierMeans>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gains: Option<Vec<Gain>>,
}

impl EvalReport {
    pub fn mean(&self, classifier: &str) -> Option<&ClassifierMeans> {
        self.means.iter().find(|m| m.classifier == classifier)
    }
}

pub(super) fn assemble(config: ReportConfig, trials: Vec<TrialResult>) -> EvalReport {
    let n = trials.len() as f64;
    let means = config
        .classifiers
        .iter()
        .map(|spec| {
            let of = |f: fn(&super::ClassifierTrial) -> f64| {
                trials
                    .iter()
                    .map(|t| t.results.iter().find(|r| r.classifier == spec.name).map_or(f64::NAN, f))
                    .sum::<f64>()
                    / n
            };
            ClassifierMeans {
                classifier: spec.name.clone(),
                zero_one_loss: of(|r| r.zero_one_loss),
                log_loss: of(|r| r.log_loss),
            }
        })
        .collect();
    let mut report = EvalReport {
        format_version: REPORT_FORMAT_VERSION,
        config,
        trials,
        means,
        gains: None,
    };
    report.gains = gains_vs_nb(&report).ok();
    report
}

/// Difference and ratio of every classifier's mean losses against the
/// Naive Bayes entry named `nb`.
pub fn gains_vs_nb(report: &EvalReport) -> Result<Vec<Gain>, HarnessError> {
    let nb = report.mean("nb").ok_or(HarnessError::NbAbsent)?;
    Ok(report
        .means
        .iter()
        .map(|m| Gain {
            classifier: m.classifier.clone(),
            zero_one: LossGain::new(nb.zero_one_loss, m.zero_one_loss),
            log_loss: LossGain::new(nb.log_loss, m.log_loss),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(means: Vec<(&str, f64, f64)>) -> EvalReport {
        EvalReport {
            format_version: REPORT_FORMAT_VERSION,
            config: ReportConfig {
                dataset_digest: String::new(),
                n_rows: 0,
                n_predictors: 0,
                class_arity: 2,
                trials: 1,
                train_fraction: 0.75,
                master_seed: 1,
                bins: None,
                global_discretize: None,
                classifiers: vec![],
            },
            trials: vec![],
            means: means
                .into_iter()
                .map(|(c, z, l)| ClassifierMeans {
                    classifier: c.into(),
                    zero_one_loss: z,
                    log_loss: l,
                })
                .collect(),
            gains: None,
        }
    }

    #[test]
    fn self_gain_is_identity() {
        let g = gains_vs_nb(&report(vec![("nb", 0.4, 0.7)])).unwrap();
        assert_eq!(g[0].zero_one.difference, 0.0);
        assert_eq!(g[0].zero_one.ratio, Ratio(Some(1.0)));
        assert_eq!(g[0].log_loss.ratio, Ratio(Some(1.0)));
    }

    #[test]
    fn arithmetic() {
        let g = gains_vs_nb(&report(vec![("nb", 0.4, 0.7), ("pm", 0.3, 0.7)])).unwrap();
        assert!((g[1].zero_one.difference - 0.1).abs() < 1e-15);
        assert!((g[1].zero_one.ratio.0.unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn zero_baseline_ratio_undefined() {
        let g = gains_vs_nb(&report(vec![("nb", 0.0, 0.1), ("pm", 0.2, 0.1)])).unwrap();
        assert_eq!(g[1].zero_one.ratio, Ratio(None));
        assert!((g[1].zero_one.difference + 0.2).abs() < 1e-15);
        let json = serde_json::to_string(&g[1].zero_one).unwrap();
        assert!(json.contains(r#""ratio":"undefined""#));
        assert_eq!(serde_json::from_str::<LossGain>(&json).unwrap(), g[1].zero_one);
    }

    #[test]
    fn needs_nb() {
        assert_eq!(
            gains_vs_nb(&report(vec![("pm", 0.1, 0.2)])).unwrap_err(),
            HarnessError::NbAbsent
        );
    }
}
