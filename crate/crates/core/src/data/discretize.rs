use serde::{Deserialize, Serialize};

use super::{ColumnData, DataError, RawTable};

/// Cut points for one numeric column. A value `v` falls into bin
/// `#{c in cuts : c < v}`, so bins are `(-inf, c1], (c1, c2], ..., (ck, inf)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnCuts {
    pub name: String,
    pub bin_count: usize,
    pub cuts: Vec<f64>,
}

impl ColumnCuts {
    pub fn validate(&self) -> Result<(), DataError> {
        if self.bin_count == 0 {
            return Err(DataError::InvalidDiscretization(format!(
                "column {:?}: bin count 0",
                self.name
            )));
        }
        if self.cuts.len() > self.bin_count - 1 {
            return Err(DataError::InvalidDiscretization(format!(
                "column {:?}: {} cut points for {} bins",
                self.name,
                self.cuts.len(),
                self.bin_count
            )));
        }
        if self.cuts.iter().any(|c| !c.is_finite()) || self.cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DataError::InvalidDiscretization(format!(
                "column {:?}: cut points not strictly increasing",
                self.name
            )));
        }
        Ok(())
    }

    pub fn arity(&self) -> u32 {
        self.cuts.len() as u32 + 1
    }

    pub fn bin(&self, v: f64) -> u32 {
        bin_index(&self.cuts, v)
    }
}

/// Cut points for every numeric column of a table; JSON-serializable so a
/// fitted discretization can be reapplied to held-out data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationSpec {
    pub columns: Vec<ColumnCuts>,
}

impl DiscretizationSpec {
    pub fn get(&self, name: &str) -> Option<&ColumnCuts> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn validate(&self) -> Result<(), DataError> {
        self.columns.iter().try_for_each(ColumnCuts::validate)
    }
}

pub fn bin_index(cuts: &[f64], v: f64) -> u32 {
    cuts.partition_point(|&c| c < v) as u32
}

/// Equal-frequency cut points over `values` for at most `bins` bins.
///
/// Bins are filled greedily from the smallest value: each takes the rounded
/// average of what remains, then extends to the end of any tied group it
/// cuts into. Degenerate inputs give fewer cut points.
pub fn fit_equal_frequency(values: &[f64], bins: usize) -> Vec<f64> {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut cuts = Vec::new();
    if n == 0 || bins <= 1 {
        return cuts;
    }
    let mut consumed = 0usize;
    for b in 0..bins - 1 {
        let remaining_bins = bins - b;
        let remaining = n - consumed;
        let take = ((2 * remaining + remaining_bins) / (2 * remaining_bins)).max(1);
        let mut end = consumed + take;
        if end >= n {
            break;
        }
        let cut = sorted[end - 1];
        while end < n && sorted[end] == cut {
            end += 1;
        }
        if end >= n {
            break;
        }
        cuts.push(cut);
        consumed = end;
    }
    cuts
}

/// Fits cut points for every numeric column, optionally on a row subset.
pub fn fit_discretization(table: &RawTable, bins: usize, rows: Option<&[usize]>) -> DiscretizationSpec {
    let columns = table
        .columns
        .iter()
        .filter_map(|col| match &col.data {
            ColumnData::Numeric(values) => {
                let cuts = match rows {
                    Some(idx) => {
                        let sub: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
                        fit_equal_frequency(&sub, bins)
                    }
                    None => fit_equal_frequency(values, bins),
                };
                Some(ColumnCuts {
                    name: col.name.clone(),
                    bin_count: bins.max(1),
                    cuts,
                })
            }
            ColumnData::Categorical(_) => None,
        })
        .collect();
    DiscretizationSpec { columns }
}
