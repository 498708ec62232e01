//! Column-oriented categorical datasets.

mod discretize;
mod folds;
mod schema;

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use discretize::{cut_points, discretize};
pub use folds::{stratified_folds, FoldAssignment};
pub use schema::{ColumnType, Schema, DEFAULT_BINS};

use crate::error::{Error, Result};

/// Categorical code. Column `j` holds values in `0..arity(j)`.
pub type Code = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Feature,
    Sensitive,
    Label,
}

/// Immutable table of categorical codes with one sensitive and one label column.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Vec<Code>>,
    arities: Vec<u32>,
    roles: Vec<Role>,
    /// Per-column category labels, indexed by code.
    categories: Vec<Vec<String>>,
    n_rows: usize,
}

impl Dataset {
    /// Builds a dataset from already-encoded columns. Category labels default to
    /// the decimal code.
    pub fn from_codes(
        names: Vec<String>,
        columns: Vec<Vec<Code>>,
        arities: Vec<u32>,
        sensitive: usize,
        label: usize,
    ) -> Result<Self> {
        let categories = arities
            .iter()
            .map(|&a| (0..a).map(|c| c.to_string()).collect())
            .collect();
        Self::new(names, columns, arities, categories, sensitive, label)
    }

    pub fn new(
        names: Vec<String>,
        columns: Vec<Vec<Code>>,
        arities: Vec<u32>,
        categories: Vec<Vec<String>>,
        sensitive: usize,
        label: usize,
    ) -> Result<Self> {
        let m = names.len();
        if columns.len() != m || arities.len() != m || categories.len() != m {
            return Err(Error::InvalidDataset(
                "names, columns, arities and categories differ in length".into(),
            ));
        }
        if m == 0 {
            return Err(Error::EmptyDataset);
        }
        for idx in [sensitive, label] {
            if idx >= m {
                return Err(Error::ColumnOutOfRange {
                    index: idx,
                    n_columns: m,
                });
            }
        }
        if sensitive == label {
            return Err(Error::InvalidDataset(
                "sensitive and label must be different columns".into(),
            ));
        }
        let n_rows = columns[0].len();
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n_rows {
                return Err(Error::InvalidDataset(format!(
                    "column `{}` has {} rows, expected {n_rows}",
                    names[j],
                    col.len()
                )));
            }
            if arities[j] == 0 {
                return Err(Error::InvalidDataset(format!(
                    "column `{}` has zero arity",
                    names[j]
                )));
            }
            if categories[j].len() != arities[j] as usize {
                return Err(Error::InvalidDataset(format!(
                    "column `{}` has {} category labels for arity {}",
                    names[j],
                    categories[j].len(),
                    arities[j]
                )));
            }
            if let Some(&bad) = col.iter().find(|&&c| c >= arities[j]) {
                return Err(Error::InvalidDataset(format!(
                    "column `{}` contains code {bad} >= arity {}",
                    names[j], arities[j]
                )));
            }
        }
        let mut roles = vec![Role::Feature; m];
        roles[sensitive] = Role::Sensitive;
        roles[label] = Role::Label;
        Ok(Dataset {
            names,
            columns,
            arities,
            roles,
            categories,
            n_rows,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[Code] {
        &self.columns[j]
    }

    pub fn arity(&self, j: usize) -> u32 {
        self.arities[j]
    }

    pub fn arities(&self) -> &[u32] {
        &self.arities
    }

    pub fn name(&self, j: usize) -> &str {
        &self.names[j]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn role(&self, j: usize) -> Role {
        self.roles[j]
    }

    pub fn sensitive(&self) -> usize {
        self.roles
            .iter()
            .position(|&r| r == Role::Sensitive)
            .expect("dataset invariant: one sensitive column")
    }

    pub fn label(&self) -> usize {
        self.roles
            .iter()
            .position(|&r| r == Role::Label)
            .expect("dataset invariant: one label column")
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn categories(&self, j: usize) -> &[String] {
        &self.categories[j]
    }

    pub fn decode(&self, j: usize, code: Code) -> &str {
        &self.categories[j][code as usize]
    }

    /// Errors unless `j` names a column.
    pub fn check_column(&self, j: usize) -> Result<()> {
        if j < self.n_columns() {
            Ok(())
        } else {
            Err(Error::ColumnOutOfRange {
                index: j,
                n_columns: self.n_columns(),
            })
        }
    }

    /// Columns with the feature role, ascending.
    pub fn feature_columns(&self) -> Vec<usize> {
        (0..self.n_columns())
            .filter(|&j| self.roles[j] == Role::Feature)
            .collect()
    }

    /// New dataset holding the given rows, in the given order. Arities and
    /// category labels are kept, so codes stay comparable across subsets.
    pub fn subset_rows(&self, rows: &[usize]) -> Dataset {
        let columns = self
            .columns
            .iter()
            .map(|col| rows.iter().map(|&r| col[r]).collect())
            .collect();
        Dataset {
            names: self.names.clone(),
            columns,
            arities: self.arities.clone(),
            roles: self.roles.clone(),
            categories: self.categories.clone(),
            n_rows: rows.len(),
        }
    }

    /// Writes the decoded table as CSV with a header row.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.names)?;
        let mut record = Vec::with_capacity(self.n_columns());
        for r in 0..self.n_rows {
            record.clear();
            record.extend((0..self.n_columns()).map(|j| self.decode(j, self.columns[j][r])));
            out.write_record(&record)?;
        }
        out.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }
}

/// Result of [`load_csv`]: the dataset plus how many rows were dropped for
/// missing cells.
#[derive(Debug, Clone)]
pub struct LoadedCsv {
    pub dataset: Dataset,
    pub dropped_rows: usize,
}

fn is_missing(cell: &str) -> bool {
    matches!(cell, "" | "?" | "NA" | "NaN" | "nan" | "null")
}

pub fn load_csv(path: &Path, schema: &Schema) -> Result<LoadedCsv> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, schema)
}

/// Parses CSV text with a header row according to `schema`.
///
/// Categorical codes follow first-appearance order. Numeric columns are
/// discretized into equal-frequency bins. Rows with a missing cell are dropped.
pub fn read_csv<R: Read>(reader: R, schema: &Schema) -> Result<LoadedCsv> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let width = header.len();

    for name in schema.referenced_columns() {
        if !header.iter().any(|h| h == name) {
            return Err(Error::UnknownColumn(name.to_string()));
        }
    }

    let mut raw: Vec<Vec<String>> = vec![Vec::new(); width];
    let mut dropped_rows = 0usize;
    for record in rdr.records() {
        let record = record?;
        if record.len() != width {
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            return Err(Error::RowLengthMismatch {
                line,
                expected: width,
                found: record.len(),
            });
        }
        if record.iter().any(is_missing) {
            dropped_rows += 1;
            continue;
        }
        for (j, cell) in record.iter().enumerate() {
            raw[j].push(cell.to_string());
        }
    }
    if raw[0].is_empty() {
        return Err(Error::EmptyDataset);
    }
    if dropped_rows > 0 {
        log::warn!("dropped {dropped_rows} rows with missing values");
    }

    let mut columns = Vec::with_capacity(width);
    let mut arities = Vec::with_capacity(width);
    let mut categories = Vec::with_capacity(width);
    for (j, name) in header.iter().enumerate() {
        let (codes, labels) = if *name == schema.label && schema.positive_label.is_some() {
            let positive = schema.positive_label.as_deref().unwrap_or_default();
            let codes = raw[j].iter().map(|v| Code::from(v == positive)).collect();
            (codes, vec![format!("!{positive}"), positive.to_string()])
        } else {
            match schema.column_type(name) {
                ColumnType::Categorical => encode_categorical(&raw[j]),
                ColumnType::Numeric => encode_numeric(name, &raw[j], schema.bins_for(name))?,
            }
        };
        arities.push(labels.len() as u32);
        columns.push(codes);
        categories.push(labels);
    }

    let sensitive = header
        .iter()
        .position(|h| *h == schema.sensitive)
        .ok_or_else(|| Error::UnknownColumn(schema.sensitive.clone()))?;
    let label = header
        .iter()
        .position(|h| *h == schema.label)
        .ok_or_else(|| Error::UnknownColumn(schema.label.clone()))?;
    let dataset = Dataset::new(header, columns, arities, categories, sensitive, label)?;
    Ok(LoadedCsv {
        dataset,
        dropped_rows,
    })
}

/// Codes by first appearance; returns codes and the label of each code.
fn encode_categorical(values: &[String]) -> (Vec<Code>, Vec<String>) {
    let mut index: HashMap<&str, Code> = HashMap::new();
    let mut labels = Vec::new();
    let codes = values
        .iter()
        .map(|v| {
            *index.entry(v.as_str()).or_insert_with(|| {
                labels.push(v.clone());
                (labels.len() - 1) as Code
            })
        })
        .collect();
    (codes, labels)
}

fn encode_numeric(name: &str, values: &[String], n_bins: usize) -> Result<(Vec<Code>, Vec<String>)> {
    let parsed = values
        .iter()
        .map(|v| {
            v.parse::<f64>().map_err(|_| {
                Error::InvalidDataset(format!("column `{name}`: `{v}` is not numeric"))
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let cuts = cut_points(&parsed, n_bins)?;
    let codes = parsed.iter().map(|&v| discretize::code_for(&cuts, v)).collect();
    let mut labels = Vec::with_capacity(cuts.len() + 1);
    for b in 0..=cuts.len() {
        let label = match (b.checked_sub(1).map(|i| cuts[i]), cuts.get(b)) {
            (None, Some(hi)) => format!("<{hi}"),
            (Some(lo), Some(hi)) => format!("[{lo},{hi})"),
            (Some(lo), None) => format!(">={lo}"),
            (None, None) => "all".to_string(),
        };
        labels.push(label);
    }
    Ok((codes, labels))
}
