use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    /// One predictor moves into another existing block.
    Relocate,
    /// One predictor leaves its block to become a singleton.
    RelocateToNew,
    /// Two blocks become one.
    Merge,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MoveError {
    #[error("no move applies to {0}")]
    NoMove(String),
}

/// Draws a neighbouring partition: picks uniformly among the applicable move
/// kinds, then uniformly among that kind's operands. The result always
/// differs from `partition` and respects `max_block_size`.
pub fn propose_move<R: Rng + ?Sized>(
    partition: &Partition,
    max_block_size: Option<usize>,
    rng: &mut R,
) -> Result<(Partition, MoveKind), MoveError> {
    let cap = max_block_size.unwrap_or(usize::MAX);
    let blocks = partition.blocks();
    let mut labels = partition.labels();

    let relocations: Vec<(usize, usize)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(from, block)| {
            block.indices().iter().flat_map(move |&v| {
                blocks
                    .iter()
                    .enumerate()
                    .filter(move |&(to, b)| to != from && b.len() < cap)
                    .map(move |(to, _)| (v, to))
            })
        })
        .collect();
    let detachable: Vec<usize> = blocks
        .iter()
        .filter(|b| b.len() >= 2)
        .flat_map(|b| b.indices().iter().copied())
        .collect();
    let merges: Vec<(usize, usize)> = (0..blocks.len())
        .flat_map(|a| (a + 1..blocks.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| blocks[a].len() + blocks[b].len() <= cap)
        .collect();

    let mut kinds = Vec::with_capacity(3);
    if !relocations.is_empty() {
        kinds.push(MoveKind::Relocate);
    }
    if !detachable.is_empty() {
        kinds.push(MoveKind::RelocateToNew);
    }
    if !merges.is_empty() {
        kinds.push(MoveKind::Merge);
    }
    if kinds.is_empty() {
        return Err(MoveError::NoMove(partition.to_string()));
    }
    let kind = kinds[rng.random_range(0..kinds.len())];
    match kind {
        MoveKind::Relocate => {
            // uniform over predictors that can move, then over their targets
            let mut movable: Vec<usize> = relocations.iter().map(|&(v, _)| v).collect();
            movable.dedup();
            let v = movable[rng.random_range(0..movable.len())];
            let targets: Vec<usize> = relocations.iter().filter(|&&(u, _)| u == v).map(|&(_, t)| t).collect();
            labels[v] = targets[rng.random_range(0..targets.len())];
        }
        MoveKind::RelocateToNew => {
            let v = detachable[rng.random_range(0..detachable.len())];
            labels[v] = blocks.len();
        }
        MoveKind::Merge => {
            let (a, b) = merges[rng.random_range(0..merges.len())];
            for l in labels.iter_mut().filter(|l| **l == b) {
                *l = a;
            }
        }
    }
    Ok((Partition::from_labels(&labels), kind))
}
