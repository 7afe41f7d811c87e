//! Predictor partitions and the stochastic greedy search that picks one by
//! family meta-score.

mod moves;
mod search;

use serde::{Deserialize, Serialize};

use crate::scoring::RelevantSubset;

pub use moves::{propose_move, MoveError, MoveKind};
pub use search::{
    pm_search, score_partition, InitMode, RestartTrace, ScoreCache, SearchConfig, SearchError, SearchResult,
};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PartitionError {
    #[error("partition has an empty block")]
    EmptyBlock,
    #[error("predictor {0} appears in more than one block")]
    Overlap(usize),
    #[error("partition covers {found:?} but should cover 0..{n}")]
    NotCovering { n: usize, found: Vec<usize> },
}

/// Disjoint, nonempty blocks of predictor indices covering `0..n`.
///
/// Blocks are kept in canonical order (by smallest member), so two
/// partitions with the same blocks compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<RelevantSubset>", into = "Vec<RelevantSubset>")]
pub struct Partition {
    blocks: Vec<RelevantSubset>,
}

impl Partition {
    pub fn new(mut blocks: Vec<RelevantSubset>) -> Result<Self, PartitionError> {
        if blocks.iter().any(RelevantSubset::is_empty) {
            return Err(PartitionError::EmptyBlock);
        }
        let n: usize = blocks.iter().map(RelevantSubset::len).sum();
        let mut seen = vec![false; n];
        let mut stray = Vec::new();
        for &i in blocks.iter().flat_map(|b| b.indices()) {
            match seen.get_mut(i) {
                Some(true) => return Err(PartitionError::Overlap(i)),
                Some(s) => *s = true,
                None => stray.push(i),
            }
        }
        if !stray.is_empty() {
            let mut found: Vec<usize> = blocks.iter().flat_map(|b| b.indices().iter().copied()).collect();
            found.sort_unstable();
            return Err(PartitionError::NotCovering { n, found });
        }
        blocks.sort_by_key(|b| b.indices()[0]);
        Ok(Partition { blocks })
    }

    /// Builds from a block label per predictor.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (i, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(i);
        }
        let blocks = groups
            .into_values()
            .map(|v| RelevantSubset::new(v).expect("indices pushed in order"))
            .collect();
        Partition::new(blocks).expect("labels define a partition")
    }

    pub fn singletons(n: usize) -> Self {
        Partition::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn single_block(n: usize) -> Self {
        Partition::from_labels(&vec![0; n])
    }

    pub fn blocks(&self) -> &[RelevantSubset] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn n_predictors(&self) -> usize {
        self.blocks.iter().map(RelevantSubset::len).sum()
    }

    /// Block index of every predictor.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n_predictors()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block.indices() {
                labels[i] = b;
            }
        }
        labels
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(RelevantSubset::len).max().unwrap_or(0)
    }
}

impl TryFrom<Vec<RelevantSubset>> for Partition {
    type Error = PartitionError;
    fn try_from(blocks: Vec<RelevantSubset>) -> Result<Self, Self::Error> {
        Partition::new(blocks)
    }
}

impl From<Partition> for Vec<RelevantSubset> {
    fn from(p: Partition) -> Self {
        p.blocks
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (b, block) in self.blocks.iter().enumerate() {
            if b > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (k, i) in block.indices().iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "X{}", i + 1)?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}
