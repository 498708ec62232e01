use crate::data::{Code, Dataset};
use crate::error::{Error, Result};

/// Row-major categorical design matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Features {
    arities: Vec<u32>,
    values: Vec<Code>,
    n_rows: usize,
}

impl Features {
    /// `rows[i][j]` is the code of feature `j` in row `i`.
    pub fn from_rows(arities: Vec<u32>, rows: &[Vec<Code>]) -> Result<Self> {
        let width = arities.len();
        let mut values = Vec::with_capacity(rows.len() * width);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} features, expected {width}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= arities[j] {
                    return Err(Error::InvalidArgument(format!(
                        "row {i} feature {j} has code {v} >= arity {}",
                        arities[j]
                    )));
                }
            }
            values.extend_from_slice(row);
        }
        Ok(Features {
            arities,
            values,
            n_rows: rows.len(),
        })
    }

    /// Picks `columns` of `d` for the given `rows`.
    pub fn from_dataset(d: &Dataset, columns: &[usize], rows: &[usize]) -> Result<Self> {
        for &c in columns {
            d.check_column(c)?;
        }
        let cols: Vec<&[Code]> = columns.iter().map(|&c| d.column(c)).collect();
        let mut values = Vec::with_capacity(rows.len() * columns.len());
        for &r in rows {
            values.extend(cols.iter().map(|col| col[r]));
        }
        Ok(Features {
            arities: columns.iter().map(|&c| d.arity(c)).collect(),
            values,
            n_rows: rows.len(),
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.arities.len()
    }

    pub fn arities(&self) -> &[u32] {
        &self.arities
    }

    pub fn row(&self, i: usize) -> &[Code] {
        let w = self.n_features();
        &self.values[i * w..(i + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Code]> {
        (0..self.n_rows).map(move |i| self.row(i))
    }
}

pub(crate) fn check_labels(x: &Features, y: &[Code]) -> Result<()> {
    if x.n_rows() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "{} feature rows but {} labels",
            x.n_rows(),
            y.len()
        )));
    }
    if x.n_rows() == 0 {
        return Err(Error::InvalidArgument("empty training set".into()));
    }
    if y.iter().any(|&v| v > 1) {
        return Err(Error::InvalidArgument("labels must be 0 or 1".into()));
    }
    Ok(())
}

/// Majority class of binary labels; ties go to 0.
pub(crate) fn majority(y: &[Code]) -> Code {
    let pos = y.iter().filter(|&&v| v == 1).count();
    Code::from(pos * 2 > y.len())
}

/// Returns the single class present in `y`, if only one is.
pub(crate) fn single_class(y: &[Code]) -> Option<Code> {
    let first = *y.first()?;
    y.iter().all(|&v| v == first).then_some(first)
}
