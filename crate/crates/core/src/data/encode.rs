use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{ColumnCuts, ColumnData, DataError, Dataset, DiscretizationSpec, RawTable, Schema};

/// Maps one raw predictor column to value indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnEncoder {
    Numeric(ColumnCuts),
    Categorical { name: String, vocab: Vec<String> },
}

impl ColumnEncoder {
    pub fn name(&self) -> &str {
        match self {
            ColumnEncoder::Numeric(c) => &c.name,
            ColumnEncoder::Categorical { name, .. } => name,
        }
    }

    pub fn arity(&self) -> u32 {
        match self {
            ColumnEncoder::Numeric(c) => c.arity(),
            ColumnEncoder::Categorical { vocab, .. } => (vocab.len() as u32).max(1),
        }
    }

    /// Encodes a raw cell. Categorical values outside the vocabulary map to
    /// `vocab.len()`, an index no training row carries; classifiers treat it
    /// as an unseen configuration.
    pub fn encode_cell(&self, cell: &str) -> Result<u32, DataError> {
        match self {
            ColumnEncoder::Numeric(c) => {
                RawTable::parse_numeric(cell)
                    .map(|v| c.bin(v))
                    .ok_or_else(|| DataError::Unencodable {
                        column: c.name.clone(),
                        value: cell.to_owned(),
                    })
            }
            ColumnEncoder::Categorical { vocab, .. } => {
                Ok(vocab.iter().position(|v| v == cell).unwrap_or(vocab.len()) as u32)
            }
        }
    }
}

/// Everything needed to turn raw rows into a [`Dataset`]: per-column
/// encoders and the class vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Encoder {
    pub predictors: Vec<ColumnEncoder>,
    pub class_name: String,
    pub class_values: Vec<String>,
}

fn first_appearance(values: &[String]) -> Vec<String> {
    let mut seen = HashMap::new();
    let mut vocab = Vec::new();
    for v in values {
        if !seen.contains_key(v.as_str()) {
            seen.insert(v.as_str(), vocab.len());
            vocab.push(v.clone());
        }
    }
    vocab
}

impl Encoder {
    /// Numeric columns take their cut points from `spec`; categorical
    /// columns and the class are indexed in first-appearance order. A class
    /// with fewer than two observed values is padded with placeholder names
    /// so the class arity is always at least 2.
    pub fn fit(table: &RawTable, spec: &DiscretizationSpec) -> Result<Self, DataError> {
        spec.validate()?;
        let predictors = table
            .columns
            .iter()
            .map(|col| match &col.data {
                ColumnData::Numeric(_) => spec
                    .get(&col.name)
                    .cloned()
                    .map(ColumnEncoder::Numeric)
                    .ok_or_else(|| DataError::MissingCuts(col.name.clone())),
                ColumnData::Categorical(values) => Ok(ColumnEncoder::Categorical {
                    name: col.name.clone(),
                    vocab: first_appearance(values),
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut class_values = first_appearance(&table.class_values);
        while class_values.len() < 2 {
            class_values.push(format!("<unobserved-{}>", class_values.len()));
        }
        Ok(Encoder {
            predictors,
            class_name: table.class_name.clone(),
            class_values,
        })
    }

    pub fn schema(&self) -> Schema {
        Schema {
            predictor_names: self.predictors.iter().map(|p| p.name().to_owned()).collect(),
            predictor_arities: self.predictors.iter().map(ColumnEncoder::arity).collect(),
            class_name: self.class_name.clone(),
            class_arity: self.class_values.len() as u32,
        }
    }

    pub fn encode(&self, table: &RawTable) -> Result<Dataset, DataError> {
        if table.columns.len() != self.predictors.len() {
            return Err(DataError::InvalidDataset(format!(
                "table has {} predictor columns, encoder expects {}",
                table.columns.len(),
                self.predictors.len()
            )));
        }
        let n = table.n_rows();
        let mut rows = vec![Vec::with_capacity(self.predictors.len()); n];
        for (col, enc) in table.columns.iter().zip(&self.predictors) {
            let unencodable = |value: String| DataError::Unencodable {
                column: col.name.clone(),
                value,
            };
            match (&col.data, enc) {
                (ColumnData::Numeric(values), ColumnEncoder::Numeric(cuts)) => {
                    for (row, &v) in rows.iter_mut().zip(values) {
                        row.push(cuts.bin(v));
                    }
                }
                (ColumnData::Categorical(values), ColumnEncoder::Categorical { vocab, .. }) => {
                    for (row, v) in rows.iter_mut().zip(values) {
                        let idx = vocab
                            .iter()
                            .position(|w| w == v)
                            .ok_or_else(|| unencodable(v.clone()))?;
                        row.push(idx as u32);
                    }
                }
                _ => return Err(unencodable(format!("<column kind mismatch for {}>", col.name))),
            }
        }
        let labels = table
            .class_values
            .iter()
            .map(|v| {
                self.class_values
                    .iter()
                    .position(|w| w == v)
                    .map(|i| i as u32)
                    .ok_or_else(|| DataError::Unencodable {
                        column: self.class_name.clone(),
                        value: v.clone(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Dataset::new(self.schema(), rows, labels)
    }

    /// Encodes one raw record given its header; columns not known to the
    /// encoder (such as the class) are ignored.
    pub fn encode_record(&self, header: &[String], cells: &[String]) -> Result<Vec<u32>, DataError> {
        self.predictors
            .iter()
            .map(|enc| {
                let pos = header
                    .iter()
                    .position(|h| h == enc.name())
                    .ok_or_else(|| DataError::InvalidDataset(format!("input lacks column {:?}", enc.name())))?;
                enc.encode_cell(&cells[pos])
            })
            .collect()
    }
}

/// Fits an [`Encoder`] against `spec` and encodes `table` with it.
pub fn encode(table: &RawTable, spec: &DiscretizationSpec) -> Result<Dataset, DataError> {
    Encoder::fit(table, spec)?.encode(table)
}
