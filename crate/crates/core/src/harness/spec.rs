use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::classifiers::{build_omi, build_pm_mixture, AnbClassifier, NbClassifier, TrainedModel};
use crate::data::Dataset;
use crate::partition::{pm_search, SearchConfig, SearchResult};
use crate::scoring::PriorSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    Nb,
    Omi(usize),
    Pm,
    Anb,
}

impl ClassifierKind {
    pub fn needs_search(&self) -> bool {
        matches!(self, ClassifierKind::Pm | ClassifierKind::Anb)
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifierKind::Nb => write!(f, "nb"),
            ClassifierKind::Omi(i) => write!(f, "om{i}"),
            ClassifierKind::Pm => write!(f, "pm"),
            ClassifierKind::Anb => write!(f, "anb"),
        }
    }
}

impl FromStr for ClassifierKind {
    type Err = HarnessError;

    /// `nb`, `om<i>`, `pm` or `anb`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "nb" => Ok(ClassifierKind::Nb),
            "pm" => Ok(ClassifierKind::Pm),
            "anb" => Ok(ClassifierKind::Anb),
            _ => s
                .strip_prefix("om")
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .map(ClassifierKind::Omi)
                .ok_or(HarnessError::UnknownClassifier(s)),
        }
    }
}

/// What to train: the classifier kind, its prior and, for PM and ANB, how
/// to search for the partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    pub name: String,
    pub kind: ClassifierKind,
    pub prior: PriorSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub search: Option<SearchConfig>,
}

impl ClassifierSpec {
    pub fn new(kind: ClassifierKind, prior: PriorSpec, search: Option<SearchConfig>) -> Self {
        let search = if kind.needs_search() {
            Some(search.unwrap_or_default())
        } else {
            None
        };
        ClassifierSpec {
            name: kind.to_string(),
            kind,
            prior,
            search,
        }
    }

    pub fn validate(&self, n_predictors: usize) -> Result<(), HarnessError> {
        self.prior.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        match self.kind {
            ClassifierKind::Omi(i) if i == 0 || i > n_predictors => Err(HarnessError::Config(format!(
                "{}: subset size must lie in 1..={n_predictors}",
                self.name
            ))),
            ClassifierKind::Pm | ClassifierKind::Anb => match &self.search {
                None => Err(HarnessError::Config(format!("{} needs a search config", self.name))),
                Some(s) => s.validate().map_err(|e| HarnessError::Config(e.to_string())),
            },
            _ => Ok(()),
        }
    }

    /// Trains on `train`. `search` supplies a partition already found for
    /// this training set; otherwise PM and ANB run their own search.
    pub fn train(
        &self,
        train: &Dataset,
        search: Option<&SearchResult>,
    ) -> Result<(TrainedModel, Option<SearchResult>), HarnessError> {
        let found = match (self.kind.needs_search(), search) {
            (false, _) => None,
            (true, Some(s)) => Some(s.clone()),
            (true, None) => {
                let cfg = self.search.clone().unwrap_or_default();
                Some(pm_search(train, &self.prior, &cfg)?)
            }
        };
        let model = match self.kind {
            ClassifierKind::Nb => TrainedModel::Nb(NbClassifier::build(train, self.prior)?),
            ClassifierKind::Omi(size) => TrainedModel::Omi {
                size,
                mixture: build_omi(train, size, self.prior)?,
            },
            ClassifierKind::Pm => {
                let partition = found.as_ref().expect("searched").best_partition.clone();
                let mixture = build_pm_mixture(&partition, train, self.prior)?;
                TrainedModel::Pm { partition, mixture }
            }
            ClassifierKind::Anb => {
                let partition = &found.as_ref().expect("searched").best_partition;
                TrainedModel::Anb(AnbClassifier::build(partition, train, self.prior)?)
            }
        };
        Ok((model, found))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_kinds() {
        assert_eq!("nb".parse::<ClassifierKind>().unwrap(), ClassifierKind::Nb);
        assert_eq!("OM3".parse::<ClassifierKind>().unwrap(), ClassifierKind::Omi(3));
        assert_eq!("anb".parse::<ClassifierKind>().unwrap(), ClassifierKind::Anb);
        assert!("om0".parse::<ClassifierKind>().is_err());
        assert!("tan".parse::<ClassifierKind>().is_err());
        assert_eq!(ClassifierKind::Omi(2).to_string(), "om2");
    }

    #[test]
    fn search_attached_only_when_needed() {
        assert!(
            ClassifierSpec::new(ClassifierKind::Nb, PriorSpec::default(), Some(SearchConfig::default()))
                .search
                .is_none()
        );
        assert!(ClassifierSpec::new(ClassifierKind::Pm, PriorSpec::default(), None)
            .search
            .is_some());
        let om5 = ClassifierSpec::new(ClassifierKind::Omi(5), PriorSpec::default(), None);
        assert!(om5.validate(4).is_err());
        assert!(om5.validate(5).is_ok());
    }
}
