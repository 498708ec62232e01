use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub fold_of_row: Vec<usize>,
    pub k: usize,
    pub seed: u64,
}

impl FoldAssignment {
    /// Row indices held out in `fold`, ascending.
    pub fn test_rows(&self, fold: usize) -> Vec<usize> {
        self.rows_where(|f| f == fold)
    }

    /// Row indices used for training when `fold` is held out, ascending.
    pub fn train_rows(&self, fold: usize) -> Vec<usize> {
        self.rows_where(|f| f != fold)
    }

    fn rows_where(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        self.fold_of_row
            .iter()
            .enumerate()
            .filter(|&(_, &f)| keep(f))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Stratified k-fold assignment on the label column.
///
/// Rows of each label value are shuffled with a seeded generator, the
/// per-class lists are concatenated in label order, and position `i` goes to
/// fold `i mod k`. Every fold therefore receives the floor or ceiling of each
/// class's share.
pub fn stratified_folds(d: &Dataset, k: usize, seed: u64) -> Result<FoldAssignment> {
    let n = d.n_rows();
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!(
            "fold count must satisfy 2 <= k <= n_rows ({n}), got {k}"
        )));
    }
    let label = d.column(d.label());
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); d.arity(d.label()) as usize];
    for (row, &y) in label.iter().enumerate() {
        by_class[y as usize].push(row);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of_row = vec![0usize; n];
    let mut position = 0usize;
    for rows in &mut by_class {
        rows.shuffle(&mut rng);
        for &row in rows.iter() {
            fold_of_row[row] = position % k;
            position += 1;
        }
    }
    Ok(FoldAssignment {
        fold_of_row,
        k,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Dataset;

    fn dataset_with_labels(labels: Vec<u32>) -> Dataset {
        let n = labels.len();
        Dataset::from_codes(
            vec!["s".into(), "y".into()],
            vec![vec![0; n], labels],
            vec![2, 2],
            0,
            1,
        )
        .unwrap()
    }

    fn positives_per_fold(d: &Dataset, f: &FoldAssignment) -> Vec<usize> {
        (0..f.k)
            .map(|fold| {
                f.test_rows(fold)
                    .iter()
                    .filter(|&&r| d.column(d.label())[r] == 1)
                    .count()
            })
            .collect()
    }

    #[test]
    fn exact_divisibility() {
        let d = dataset_with_labels((0..10).map(|i| (i % 2) as u32).collect());
        for seed in 0..5 {
            let f = stratified_folds(&d, 5, seed).unwrap();
            for fold in 0..5 {
                let rows = f.test_rows(fold);
                assert_eq!(rows.len(), 2);
                assert_eq!(positives_per_fold(&d, &f)[fold], 1);
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let d = dataset_with_labels((0..10).map(|i| (i % 2) as u32).collect());
        assert_eq!(
            stratified_folds(&d, 5, 42).unwrap(),
            stratified_folds(&d, 5, 42).unwrap()
        );
    }

    #[test]
    fn thirty_seventy_split() {
        let d = dataset_with_labels((0..100).map(|i| u32::from(i < 30)).collect());
        let f = stratified_folds(&d, 10, 7).unwrap();
        assert_eq!(positives_per_fold(&d, &f), vec![3; 10]);
    }

    #[test]
    fn k_out_of_range() {
        let d = dataset_with_labels(vec![0, 1, 0]);
        assert!(stratified_folds(&d, 1, 0).is_err());
        assert!(stratified_folds(&d, 4, 0).is_err());
        assert!(stratified_folds(&d, 3, 0).is_ok());
    }

    proptest::proptest! {
        #[test]
        fn partitions_and_stratifies(
            labels in proptest::collection::vec(0u32..2, 2..200),
            k in 2usize..12,
            seed in proptest::prelude::any::<u64>(),
        ) {
            proptest::prop_assume!(k <= labels.len());
            let d = dataset_with_labels(labels.clone());
            let f = stratified_folds(&d, k, seed).unwrap();
            let mut seen = vec![0usize; labels.len()];
            for fold in 0..k {
                let rows = f.test_rows(fold);
                proptest::prop_assert!(!rows.is_empty());
                for r in rows {
                    seen[r] += 1;
                }
            }
            proptest::prop_assert!(seen.iter().all(|&c| c == 1));

            let total_pos = labels.iter().filter(|&&y| y == 1).count() as f64;
            for &pos in &positives_per_fold(&d, &f) {
                proptest::prop_assert!((pos as f64 - total_pos / k as f64).abs() < 1.0);
            }
        }
    }
}
