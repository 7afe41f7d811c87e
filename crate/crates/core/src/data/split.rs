use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{DataError, Dataset};
use crate::seed;

/// One train/test split of the repeated-split protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub train_fraction: f64,
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SplitPlan {
    pub fn new(train_fraction: f64, master_seed: u64, trial_index: u64) -> Self {
        SplitPlan {
            train_fraction,
            master_seed,
            trial_index,
        }
    }

    pub fn trial_seed(&self) -> u64 {
        seed::derive(seed::derive(self.master_seed, seed::stream::SPLIT), self.trial_index)
    }

    /// `ceil(train_fraction * n)`, tolerant of representation error such as
    /// `0.7 * 10 = 7.000000000000001`.
    pub fn train_size(&self, n: usize) -> usize {
        let raw = self.train_fraction * n as f64;
        ((raw - 1e-9).ceil().max(0.0) as usize).min(n)
    }
}

/// Permutes `0..n` with the plan's trial seed and cuts it into (train, test).
pub fn split_indices(n: usize, plan: &SplitPlan) -> Result<(Vec<usize>, Vec<usize>), DataError> {
    if !(plan.train_fraction > 0.0 && plan.train_fraction < 1.0) {
        return Err(DataError::InvalidTrainFraction(plan.train_fraction));
    }
    if n < 2 {
        return Err(DataError::TooFewRows(n));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seed::rng(plan.trial_seed()));
    let test = order.split_off(plan.train_size(n));
    Ok((order, test))
}

pub fn split(data: &Dataset, plan: &SplitPlan) -> Result<(Dataset, Dataset), DataError> {
    let (train, test) = split_indices(data.len(), plan)?;
    Ok((data.select(&train), data.select(&test)))
}
