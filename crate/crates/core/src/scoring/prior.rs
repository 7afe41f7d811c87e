use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ConfigSpace, ScoringError};

/// Rule producing the Dirichlet pseudo-counts `N'_jk` of every
/// (configuration, class) cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PriorSpec {
    /// `N'_jk = alpha` for every cell.
    UniformCell { alpha: f64 },
    /// `N'_jk = ess / (q * r)`: the prior strength `ess` spread evenly over
    /// all `q * r` cells, which keeps priors marginally consistent across
    /// factorizations (BDeu).
    EquivalentSampleSize { ess: f64 },
}

impl Default for PriorSpec {
    fn default() -> Self {
        PriorSpec::UniformCell { alpha: 1.0 }
    }
}

impl PriorSpec {
    pub fn validate(&self) -> Result<(), ScoringError> {
        let (name, v) = match *self {
            PriorSpec::UniformCell { alpha } => ("alpha", alpha),
            PriorSpec::EquivalentSampleSize { ess } => ("ess", ess),
        };
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(ScoringError::InvalidPrior(format!(
                "{name} = {v} must be positive and finite"
            )))
        }
    }

    /// Pseudo-count of a single cell in a table with `space` configurations
    /// and `class_arity` classes.
    pub fn cell(&self, space: &ConfigSpace, class_arity: u32) -> Result<f64, ScoringError> {
        self.validate()?;
        let v = match *self {
            PriorSpec::UniformCell { alpha } => alpha,
            PriorSpec::EquivalentSampleSize { ess } => match space.size() {
                Some(q) => ess / (q as f64 * class_arity as f64),
                None => (ess.ln() - space.log_size() - (class_arity as f64).ln()).exp(),
            },
        };
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(ScoringError::DegeneratePrior {
                log10_q: space.log_size() / std::f64::consts::LN_10,
            })
        }
    }

    /// Pseudo-count of one class cell of the class marginal `P(Y)`.
    pub fn class_cell(&self, class_arity: u32) -> f64 {
        match *self {
            PriorSpec::UniformCell { alpha } => alpha,
            PriorSpec::EquivalentSampleSize { ess } => ess / class_arity as f64,
        }
    }
}

impl fmt::Display for PriorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PriorSpec::UniformCell { alpha } => write!(f, "uniform:{alpha}"),
            PriorSpec::EquivalentSampleSize { ess } => write!(f, "bdeu:{ess}"),
        }
    }
}

impl FromStr for PriorSpec {
    type Err = ScoringError;

    /// Parses `uniform:<alpha>` or `bdeu:<ess>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (mode, value) = s
            .split_once(':')
            .ok_or_else(|| ScoringError::InvalidPrior(format!("{s:?}: expected MODE:VALUE")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| ScoringError::InvalidPrior(format!("{value:?} is not a number")))?;
        let prior = match mode.trim() {
            "uniform" => PriorSpec::UniformCell { alpha: v },
            "bdeu" | "ess" => PriorSpec::EquivalentSampleSize { ess: v },
            other => return Err(ScoringError::InvalidPrior(format!("unknown prior mode {other:?}"))),
        };
        prior.validate()?;
        Ok(prior)
    }
}
