use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ScoringError;
use crate::data::Dataset;

/// Sorted, distinct predictor indices: the parents of the class node in a
/// diagnostic model. May be empty (the class-marginal model).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct RelevantSubset(Vec<usize>);

impl RelevantSubset {
    pub fn new(indices: Vec<usize>) -> Result<Self, ScoringError> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ScoringError::UnsortedSubset(indices));
        }
        Ok(RelevantSubset(indices))
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        RelevantSubset(indices)
    }

    pub fn empty() -> Self {
        RelevantSubset(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, n: usize) -> Result<(), ScoringError> {
        match self.0.last() {
            Some(&index) if index >= n => Err(ScoringError::InvalidSubset { index, n }),
            _ => Ok(()),
        }
    }

    /// The values of this subset's predictors in `row`, written into `out`.
    pub fn project_into(&self, row: &[u32], out: &mut Vec<u32>) {
        out.clear();
        out.extend(self.0.iter().map(|&i| row[i]));
    }

    pub fn project(&self, row: &[u32]) -> Vec<u32> {
        self.0.iter().map(|&i| row[i]).collect()
    }
}

impl TryFrom<Vec<usize>> for RelevantSubset {
    type Error = ScoringError;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        RelevantSubset::new(v)
    }
}

impl From<RelevantSubset> for Vec<usize> {
    fn from(s: RelevantSubset) -> Self {
        s.0
    }
}

/// Size of a joint configuration space: the exact product of arities when it
/// fits in 64 bits, and its natural log always.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigSpace {
    size: Option<u64>,
    log_size: f64,
}

impl ConfigSpace {
    pub fn of(arities: &[u32]) -> Self {
        let size = arities.iter().try_fold(1u64, |acc, &a| acc.checked_mul(u64::from(a)));
        let log_size = arities.iter().map(|&a| f64::from(a).ln()).sum();
        ConfigSpace { size, log_size }
    }

    pub fn size(&self) -> Option<u64> {
        self.size
    }

    pub fn log_size(&self) -> f64 {
        self.log_size
    }
}

/// Sparse sufficient statistics `N_jk` over a relevant subset: for every
/// observed predictor configuration `j`, the per-class counts. Configurations
/// with no rows are never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CountTableRepr", into = "CountTableRepr")]
pub struct CountTable {
    subset: RelevantSubset,
    arities: Vec<u32>,
    class_arity: u32,
    cells: BTreeMap<Vec<u32>, Vec<u64>>,
    total: u64,
}

impl CountTable {
    /// An empty table over `subset`, whose predictors have `arities`.
    pub fn empty(subset: RelevantSubset, arities: Vec<u32>, class_arity: u32) -> Self {
        assert_eq!(subset.len(), arities.len(), "one arity per subset member");
        CountTable {
            subset,
            arities,
            class_arity,
            cells: BTreeMap::new(),
            total: 0,
        }
    }

    /// Adds one observation of class `label` at configuration `config`.
    pub fn add(&mut self, config: &[u32], label: u32) {
        debug_assert_eq!(config.len(), self.subset.len());
        debug_assert!(label < self.class_arity);
        match self.cells.get_mut(config) {
            Some(counts) => counts[label as usize] += 1,
            None => {
                let mut counts = vec![0; self.class_arity as usize];
                counts[label as usize] = 1;
                self.cells.insert(config.to_vec(), counts);
            }
        }
        self.total += 1;
    }

    pub fn subset(&self) -> &RelevantSubset {
        &self.subset
    }

    pub fn arities(&self) -> &[u32] {
        &self.arities
    }

    pub fn class_arity(&self) -> u32 {
        self.class_arity
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn space(&self) -> ConfigSpace {
        ConfigSpace::of(&self.arities)
    }

    /// Number of stored (observed) configurations.
    pub fn n_configs(&self) -> usize {
        self.cells.len()
    }

    pub fn counts(&self, config: &[u32]) -> Option<&[u64]> {
        self.cells.get(config).map(Vec::as_slice)
    }

    /// Observed configurations in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&[u32], &[u64])> {
        self.cells.iter().map(|(k, v)| (k.as_slice(), v.as_slice()))
    }

    /// Counts over configurations: `N_k`.
    pub fn class_totals(&self) -> Vec<u64> {
        let mut totals = vec![0; self.class_arity as usize];
        for counts in self.cells.values() {
            for (t, c) in totals.iter_mut().zip(counts) {
                *t += c;
            }
        }
        totals
    }
}

/// Tallies `N_jk` for `subset` in one pass over `data`.
pub fn build_count_table(data: &Dataset, subset: &RelevantSubset) -> Result<CountTable, ScoringError> {
    let schema = data.schema();
    subset.check(schema.n_predictors())?;
    let arities = subset.indices().iter().map(|&i| schema.predictor_arities[i]).collect();
    let mut table = CountTable::empty(subset.clone(), arities, schema.class_arity);
    let mut key = Vec::with_capacity(subset.len());
    for (row, &y) in data.rows().iter().zip(data.labels()) {
        subset.project_into(row, &mut key);
        table.add(&key, y);
    }
    Ok(table)
}

#[derive(Serialize, Deserialize)]
struct CountTableRepr {
    subset: RelevantSubset,
    arities: Vec<u32>,
    class_arity: u32,
    total: u64,
    configs: Vec<Vec<u32>>,
    counts: Vec<Vec<u64>>,
}

impl From<CountTable> for CountTableRepr {
    fn from(t: CountTable) -> Self {
        let (configs, counts) = t.cells.into_iter().unzip();
        CountTableRepr {
            subset: t.subset,
            arities: t.arities,
            class_arity: t.class_arity,
            total: t.total,
            configs,
            counts,
        }
    }
}

impl TryFrom<CountTableRepr> for CountTable {
    type Error = ScoringError;

    fn try_from(r: CountTableRepr) -> Result<Self, Self::Error> {
        let bad = |m: String| Err(ScoringError::InvalidTable(m));
        if r.subset.len() != r.arities.len() {
            return bad("subset and arities differ in length".into());
        }
        if r.configs.len() != r.counts.len() {
            return bad("configs and counts differ in length".into());
        }
        let mut cells = BTreeMap::new();
        let mut total = 0u64;
        for (config, counts) in r.configs.into_iter().zip(r.counts) {
            if config.len() != r.arities.len() || config.iter().zip(&r.arities).any(|(v, a)| v >= a) {
                return bad(format!("configuration {config:?} outside the arities"));
            }
            if counts.len() != r.class_arity as usize {
                return bad(format!("configuration {config:?} has {} counts", counts.len()));
            }
            let n: u64 = counts.iter().sum();
            if n == 0 {
                return bad(format!("configuration {config:?} is empty"));
            }
            total += n;
            if cells.insert(config, counts).is_some() {
                return bad("duplicate configuration".into());
            }
        }
        if total != r.total {
            return bad(format!("counts sum to {total}, table claims {}", r.total));
        }
        Ok(CountTable {
            subset: r.subset,
            arities: r.arities,
            class_arity: r.class_arity,
            cells,
            total,
        })
    }
}
