//! Key-value schema files describing how CSV columns are interpreted.
//!
//! ```text
//! # comments start with '#'
//! sensitive = sex
//! label = income
//! positive = >50K
//! n_bins = 5
//! type.age = numeric
//! bins.age = 4
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

pub const DEFAULT_BINS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnType {
    Categorical,
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    pub sensitive: String,
    pub label: String,
    /// When set, the label column is binarized: this value maps to 1, anything else to 0.
    pub positive_label: Option<String>,
    pub default_bins: usize,
    pub types: BTreeMap<String, ColumnType>,
    pub bins: BTreeMap<String, usize>,
}

impl Schema {
    pub fn new(sensitive: impl Into<String>, label: impl Into<String>) -> Self {
        Schema {
            sensitive: sensitive.into(),
            label: label.into(),
            positive_label: None,
            default_bins: DEFAULT_BINS,
            types: BTreeMap::new(),
            bins: BTreeMap::new(),
        }
    }

    pub fn with_positive(mut self, value: impl Into<String>) -> Self {
        self.positive_label = Some(value.into());
        self
    }

    pub fn with_numeric(mut self, column: impl Into<String>, bins: Option<usize>) -> Self {
        let column = column.into();
        if let Some(b) = bins {
            self.bins.insert(column.clone(), b);
        }
        self.types.insert(column, ColumnType::Numeric);
        self
    }

    pub fn column_type(&self, column: &str) -> ColumnType {
        self.types
            .get(column)
            .copied()
            .unwrap_or(ColumnType::Categorical)
    }

    pub fn bins_for(&self, column: &str) -> usize {
        self.bins.get(column).copied().unwrap_or(self.default_bins)
    }

    /// Every column name the schema mentions.
    pub fn referenced_columns(&self) -> impl Iterator<Item = &str> {
        [self.sensitive.as_str(), self.label.as_str()]
            .into_iter()
            .chain(self.types.keys().map(String::as_str))
            .chain(self.bins.keys().map(String::as_str))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut sensitive = None;
        let mut label = None;
        let mut positive_label = None;
        let mut default_bins = DEFAULT_BINS;
        let mut types = BTreeMap::new();
        let mut bins = BTreeMap::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Schema(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| Error::Schema(format!("line {}: {what}", lineno + 1));

            match key {
                "sensitive" => sensitive = Some(value.to_string()),
                "label" => label = Some(value.to_string()),
                "positive" | "positive_label" => positive_label = Some(value.to_string()),
                "n_bins" => default_bins = parse_bins(value).map_err(|m| bad(&m))?,
                _ => {
                    if let Some(col) = key.strip_prefix("type.") {
                        let ty = match value {
                            "categorical" => ColumnType::Categorical,
                            "numeric" => ColumnType::Numeric,
                            other => return Err(bad(&format!("unknown column type `{other}`"))),
                        };
                        types.insert(col.to_string(), ty);
                    } else if let Some(col) = key.strip_prefix("bins.") {
                        bins.insert(col.to_string(), parse_bins(value).map_err(|m| bad(&m))?);
                    } else {
                        return Err(bad(&format!("unknown key `{key}`")));
                    }
                }
            }
        }

        let sensitive =
            sensitive.ok_or_else(|| Error::Schema("no sensitive column declared".into()))?;
        let label = label.ok_or_else(|| Error::Schema("no label column declared".into()))?;
        if sensitive == label {
            return Err(Error::Schema(
                "sensitive and label columns must differ".into(),
            ));
        }
        Ok(Schema {
            sensitive,
            label,
            positive_label,
            default_bins,
            types,
            bins,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("sensitive = {}\nlabel = {}\n", self.sensitive, self.label);
        if let Some(p) = &self.positive_label {
            out.push_str(&format!("positive = {p}\n"));
        }
        out.push_str(&format!("n_bins = {}\n", self.default_bins));
        for (col, ty) in &self.types {
            let ty = match ty {
                ColumnType::Categorical => "categorical",
                ColumnType::Numeric => "numeric",
            };
            out.push_str(&format!("type.{col} = {ty}\n"));
        }
        for (col, b) in &self.bins {
            out.push_str(&format!("bins.{col} = {b}\n"));
        }
        out
    }
}

fn parse_bins(value: &str) -> std::result::Result<usize, String> {
    let b: usize = value
        .parse()
        .map_err(|_| format!("invalid bin count `{value}`"))?;
    if b < 2 {
        return Err(format!("bin count must be at least 2, got {b}"));
    }
    Ok(b)
}
