use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{propose_move, Partition};
use crate::data::Dataset;
use crate::scoring::{
    build_count_table, log_family_score, log_sml, FamilyScore, PriorSpec, RelevantSubset, ScoringError,
};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitMode {
    #[default]
    Singletons,
    Random,
}

/// Knobs of the stochastic greedy search. Every restart climbs from its
/// initial partition, accepting only strict improvements, and stops after
/// `patience` consecutive rejected proposals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub patience: usize,
    pub max_block_size: Option<usize>,
    pub seed: u64,
    pub init_mode: InitMode,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 10,
            patience: 200,
            max_block_size: None,
            seed: 1,
            init_mode: InitMode::Singletons,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.restarts == 0 {
            return Err(SearchError::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.patience == 0 {
            return Err(SearchError::InvalidConfig("patience must be at least 1".into()));
        }
        if self.max_block_size == Some(0) {
            return Err(SearchError::InvalidConfig("max block size must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SearchError {
    #[error("invalid search config: {0}")]
    InvalidConfig(String),
    #[error("cannot partition a dataset without predictors")]
    NoPredictors,
    #[error(transparent)]
    Scoring(#[from] ScoringError),
}

/// Per-block log SML memo keyed by block contents, so blocks untouched by a
/// move are never rescored.
#[derive(Debug, Default)]
pub struct ScoreCache {
    scores: HashMap<RelevantSubset, f64>,
    hits: u64,
}

impl ScoreCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn block_score(
        &mut self,
        train: &Dataset,
        prior: &PriorSpec,
        block: &RelevantSubset,
    ) -> Result<f64, ScoringError> {
        if let Some(&s) = self.scores.get(block) {
            self.hits += 1;
            #[cfg(debug_assertions)]
            if self.hits.is_multiple_of(64) {
                let fresh = log_sml(&build_count_table(train, block)?, prior)?;
                assert_eq!(fresh.to_bits(), s.to_bits(), "stale cached score for {block:?}");
            }
            return Ok(s);
        }
        let s = log_sml(&build_count_table(train, block)?, prior)?;
        self.scores.insert(block.clone(), s);
        Ok(s)
    }

    pub fn score(
        &mut self,
        partition: &Partition,
        train: &Dataset,
        prior: &PriorSpec,
    ) -> Result<FamilyScore, ScoringError> {
        let members = partition
            .blocks()
            .iter()
            .map(|b| self.block_score(train, prior, b))
            .collect::<Result<Vec<_>, _>>()?;
        log_family_score(&members)
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }
}

/// Family meta-score of the partition's blocks.
pub fn score_partition(partition: &Partition, train: &Dataset, prior: &PriorSpec) -> Result<FamilyScore, ScoringError> {
    ScoreCache::new().score(partition, train, prior)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartTrace {
    pub restart: usize,
    pub initial_partition: Partition,
    #[serde(with = "crate::float_str")]
    pub initial_score: f64,
    pub final_partition: Partition,
    #[serde(with = "crate::float_str")]
    pub final_score: f64,
    pub proposals: u64,
    pub accepted: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_partition: Partition,
    pub best_score: FamilyScore,
    pub best_restart: usize,
    pub proposals_evaluated: u64,
    pub traces: Vec<RestartTrace>,
}

fn initial_partition<R: Rng + ?Sized>(n: usize, config: &SearchConfig, rng: &mut R) -> Partition {
    match config.init_mode {
        InitMode::Singletons => Partition::singletons(n),
        InitMode::Random => {
            let mut labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            if let Some(cap) = config.max_block_size {
                let mut sizes = vec![0usize; n];
                let mut fresh = n;
                for l in labels.iter_mut() {
                    if sizes[*l] == cap {
                        *l = fresh;
                        fresh += 1;
                    } else {
                        sizes[*l] += 1;
                    }
                }
            }
            Partition::from_labels(&labels)
        }
    }
}

/// Stochastic greedy search for the partition maximizing the family
/// meta-score; deterministic given `config.seed`.
pub fn pm_search(train: &Dataset, prior: &PriorSpec, config: &SearchConfig) -> Result<SearchResult, SearchError> {
    config.validate()?;
    prior.validate()?;
    let n = train.n_predictors();
    if n == 0 {
        return Err(SearchError::NoPredictors);
    }
    let mut cache = ScoreCache::new();
    let mut traces = Vec::with_capacity(config.restarts);
    let mut best: Option<(Partition, FamilyScore, usize)> = None;
    let mut proposals_evaluated = 0u64;

    for restart in 0..config.restarts {
        let mut rng = seed::rng(seed::derive(
            seed::derive(config.seed, seed::stream::RESTART),
            restart as u64,
        ));
        let initial = initial_partition(n, config, &mut rng);
        let initial_score = cache.score(&initial, train, prior)?;
        let mut current = initial.clone();
        let mut current_score = initial_score.clone();
        let (mut proposals, mut accepted, mut rejected_in_a_row) = (0u64, 0u64, 0usize);
        while rejected_in_a_row < config.patience {
            let Ok((candidate, _)) = propose_move(&current, config.max_block_size, &mut rng) else {
                break;
            };
            proposals += 1;
            let score = cache.score(&candidate, train, prior)?;
            if score.log_value > current_score.log_value {
                current = candidate;
                current_score = score;
                accepted += 1;
                rejected_in_a_row = 0;
            } else {
                rejected_in_a_row += 1;
            }
        }
        proposals_evaluated += proposals;
        traces.push(RestartTrace {
            restart,
            initial_partition: initial,
            initial_score: initial_score.log_value,
            final_partition: current.clone(),
            final_score: current_score.log_value,
            proposals,
            accepted,
        });
        // strict comparison keeps the lowest restart index on ties
        if best
            .as_ref()
            .is_none_or(|(_, s, _)| current_score.log_value > s.log_value)
        {
            best = Some((current, current_score, restart));
        }
    }
    let (best_partition, best_score, best_restart) = best.expect("at least one restart");
    Ok(SearchResult {
        best_partition,
        best_score,
        best_restart,
        proposals_evaluated,
        traces,
    })
}
