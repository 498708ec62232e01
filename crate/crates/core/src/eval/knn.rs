use std::collections::HashMap;

use super::features::{check_labels, Features};
use crate::data::Code;
use crate::error::{Error, Result};

pub const DEFAULT_K: usize = 5;

/// k-nearest-neighbour vote under Hamming distance.
///
/// Neighbours are ordered by distance and then by training-row index; a tied
/// vote predicts 0. Identical test rows share one neighbour search.
pub fn knn_predict(train: &Features, labels: &[Code], test: &Features, k: usize) -> Result<Vec<Code>> {
    check_labels(train, labels)?;
    if k == 0 || k > train.n_rows() {
        return Err(Error::InvalidArgument(format!(
            "k must satisfy 1 <= k <= {} training rows, got {k}",
            train.n_rows()
        )));
    }
    if test.n_features() != train.n_features() {
        return Err(Error::InvalidArgument("train and test feature counts differ".into()));
    }
    let mut cache: HashMap<&[Code], Code> = HashMap::new();
    let mut scratch: Vec<(u32, usize)> = Vec::with_capacity(train.n_rows());
    let mut out = Vec::with_capacity(test.n_rows());
    for row in test.rows() {
        if let Some(&p) = cache.get(row) {
            out.push(p);
            continue;
        }
        scratch.clear();
        scratch.extend(train.rows().enumerate().map(|(i, t)| (hamming(row, t), i)));
        let (nearest, kth, _) = scratch.select_nth_unstable(k - 1);
        let votes: usize = nearest
            .iter()
            .chain(std::iter::once(&*kth))
            .map(|&(_, i)| labels[i] as usize)
            .sum();
        let p = Code::from(votes * 2 > k);
        cache.insert(row, p);
        out.push(p);
    }
    Ok(out)
}

fn hamming(a: &[Code], b: &[Code]) -> u32 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u32
}
