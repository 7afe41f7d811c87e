use std::collections::HashSet;
use std::io::Read;

use super::DataError;

/// Header plus validated string cells of a CSV source.
#[derive(Debug, Clone, PartialEq)]
pub struct Records {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// 1-based source line of each row.
    pub lines: Vec<u64>,
}

/// Reads a headed CSV, rejecting ragged rows and empty cells.
pub fn read_records<R: Read>(source: R) -> Result<Records, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut iter = reader.records();
    let header = match iter.next() {
        None => return Err(DataError::EmptyFile),
        Some(rec) => rec.map_err(|e| DataError::Csv(e.to_string()))?,
    };
    let header: Vec<String> = header.iter().map(str::to_owned).collect();
    if header.len() == 1 && header[0].is_empty() {
        return Err(DataError::EmptyFile);
    }
    let mut seen = HashSet::new();
    for name in &header {
        if !seen.insert(name.as_str()) {
            return Err(DataError::DuplicateColumn(name.clone()));
        }
    }
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for rec in iter {
        let rec = rec.map_err(|e| DataError::Csv(e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != header.len() {
            return Err(DataError::RaggedRow {
                line,
                expected: header.len(),
                found: rec.len(),
            });
        }
        if let Some(col) = rec.iter().position(str::is_empty) {
            return Err(DataError::MissingValue {
                line,
                column: header[col].clone(),
            });
        }
        rows.push(rec.iter().map(str::to_owned).collect());
        lines.push(line);
    }
    Ok(Records { header, rows, lines })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Numeric(Vec<f64>),
    Categorical(Vec<String>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Numeric(v) => v.len(),
            ColumnData::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, ColumnData::Numeric(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawColumn {
    pub name: String,
    pub data: ColumnData,
}

/// Typed predictor columns plus the extracted class column.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub columns: Vec<RawColumn>,
    pub class_name: String,
    pub class_values: Vec<String>,
}

impl RawTable {
    pub fn n_rows(&self) -> usize {
        self.class_values.len()
    }

    /// Parses a cell as a finite real, the criterion for numeric columns.
    pub fn parse_numeric(cell: &str) -> Option<f64> {
        cell.parse::<f64>().ok().filter(|v| v.is_finite())
    }
}

/// Loads a headed CSV and splits off `class_column`. A predictor column is
/// numeric when every cell parses as a finite number, categorical otherwise.
pub fn load_csv<R: Read>(source: R, class_column: &str) -> Result<RawTable, DataError> {
    let records = read_records(source)?;
    let class_idx = records
        .header
        .iter()
        .position(|h| h == class_column)
        .ok_or_else(|| DataError::UnknownClassColumn(class_column.to_owned()))?;

    let mut columns = Vec::with_capacity(records.header.len() - 1);
    for (c, name) in records.header.iter().enumerate() {
        if c == class_idx {
            continue;
        }
        let numeric: Option<Vec<f64>> = records.rows.iter().map(|r| RawTable::parse_numeric(&r[c])).collect();
        let data = match numeric {
            Some(v) => ColumnData::Numeric(v),
            None => ColumnData::Categorical(records.rows.iter().map(|r| r[c].clone()).collect()),
        };
        columns.push(RawColumn {
            name: name.clone(),
            data,
        });
    }
    Ok(RawTable {
        columns,
        class_name: class_column.to_owned(),
        class_values: records.rows.iter().map(|r| r[class_idx].clone()).collect(),
    })
}
