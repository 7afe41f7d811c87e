//! Tabular data: loading, discretization, encoding and train/test splits.

mod discretize;
mod encode;
mod split;
mod table;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use discretize::{bin_index, fit_discretization, fit_equal_frequency, ColumnCuts, DiscretizationSpec};
pub use encode::{encode, ColumnEncoder, Encoder};
pub use split::{split, split_indices, SplitPlan};
pub use table::{load_csv, read_records, ColumnData, RawColumn, RawTable, Records};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DataError {
    #[error("empty file: no header row")]
    EmptyFile,
    #[error("unknown class column {0:?}")]
    UnknownClassColumn(String),
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow { line: u64, expected: usize, found: usize },
    #[error("line {line}, column {column:?}: missing value")]
    MissingValue { line: u64, column: String },
    #[error("csv error: {0}")]
    Csv(String),
    #[error("duplicate column name {0:?}")]
    DuplicateColumn(String),
    #[error("numeric column {0:?} has no discretization cut points")]
    MissingCuts(String),
    #[error("column {column:?} value {value:?} cannot be encoded")]
    Unencodable { column: String, value: String },
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("invalid discretization: {0}")]
    InvalidDiscretization(String),
    #[error("cannot split a dataset with {0} rows (need at least 2)")]
    TooFewRows(usize),
    #[error("train fraction {0} outside (0, 1)")]
    InvalidTrainFraction(f64),
}

/// Names and arities of the predictors and the class variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub predictor_names: Vec<String>,
    pub predictor_arities: Vec<u32>,
    pub class_name: String,
    pub class_arity: u32,
}

impl Schema {
    pub fn new(
        predictor_names: Vec<String>,
        predictor_arities: Vec<u32>,
        class_name: impl Into<String>,
        class_arity: u32,
    ) -> Result<Self, DataError> {
        let schema = Schema {
            predictor_names,
            predictor_arities,
            class_name: class_name.into(),
            class_arity,
        };
        schema.validate()?;
        Ok(schema)
    }

    /// Schema with generated names `X1..Xn` and class `Y`.
    pub fn anonymous(predictor_arities: Vec<u32>, class_arity: u32) -> Result<Self, DataError> {
        let names = (1..=predictor_arities.len()).map(|i| format!("X{i}")).collect();
        Self::new(names, predictor_arities, "Y", class_arity)
    }

    pub fn validate(&self) -> Result<(), DataError> {
        if self.predictor_names.len() != self.predictor_arities.len() {
            return Err(DataError::InvalidSchema(format!(
                "{} names but {} arities",
                self.predictor_names.len(),
                self.predictor_arities.len()
            )));
        }
        if let Some(i) = self.predictor_arities.iter().position(|&a| a == 0) {
            return Err(DataError::InvalidSchema(format!("predictor {i} has arity 0")));
        }
        if self.class_arity < 2 {
            return Err(DataError::InvalidSchema(format!(
                "class arity {} < 2",
                self.class_arity
            )));
        }
        Ok(())
    }

    pub fn n_predictors(&self) -> usize {
        self.predictor_arities.len()
    }
}

/// Encoded categorical data: `rows[t][i]` is the value index of predictor
/// `i` in row `t`, `labels[t]` the class index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    schema: Schema,
    rows: Vec<Vec<u32>>,
    labels: Vec<u32>,
}

impl Dataset {
    pub fn new(schema: Schema, rows: Vec<Vec<u32>>, labels: Vec<u32>) -> Result<Self, DataError> {
        schema.validate()?;
        if rows.len() != labels.len() {
            return Err(DataError::InvalidDataset(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let n = schema.n_predictors();
        for (t, (row, &y)) in rows.iter().zip(&labels).enumerate() {
            if row.len() != n {
                return Err(DataError::InvalidDataset(format!(
                    "row {t} has {} values, schema has {n} predictors",
                    row.len()
                )));
            }
            for (i, (&v, &a)) in row.iter().zip(&schema.predictor_arities).enumerate() {
                if v >= a {
                    return Err(DataError::InvalidDataset(format!(
                        "row {t} predictor {i}: value {v} >= arity {a}"
                    )));
                }
            }
            if y >= schema.class_arity {
                return Err(DataError::InvalidDataset(format!(
                    "row {t}: label {y} >= class arity {}",
                    schema.class_arity
                )));
            }
        }
        Ok(Dataset { schema, rows, labels })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_predictors(&self) -> usize {
        self.schema.n_predictors()
    }

    pub fn class_arity(&self) -> u32 {
        self.schema.class_arity
    }

    /// Rows selected by index, in the given order, sharing this schema.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Keeps only the given predictor columns, in the given order.
    pub fn project(&self, columns: &[usize]) -> Dataset {
        let schema = Schema {
            predictor_names: columns
                .iter()
                .map(|&i| self.schema.predictor_names[i].clone())
                .collect(),
            predictor_arities: columns.iter().map(|&i| self.schema.predictor_arities[i]).collect(),
            class_name: self.schema.class_name.clone(),
            class_arity: self.schema.class_arity,
        };
        Dataset {
            schema,
            rows: self
                .rows
                .iter()
                .map(|r| columns.iter().map(|&i| r[i]).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    /// SHA-256 over the schema and every encoded row, hex encoded.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(&self.schema).expect("schema serializes"));
        for (row, y) in self.rows.iter().zip(&self.labels) {
            for v in row {
                h.update(v.to_le_bytes());
            }
            h.update(y.to_le_bytes());
            h.update([0xff]);
        }
        hex::encode(h.finalize())
    }
}
