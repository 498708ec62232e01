use crate::error::{Error, Result};

/// Equal-frequency discretization.
///
/// Cut points are taken at sorted positions `floor(i * n / n_bins)` for
/// `i = 1..n_bins`, deduplicated, and any cut equal to the minimum is dropped.
/// A value's code is the number of cut points `<= value`, so codes are dense,
/// monotone in the value, and fewer than `n_bins` bins appear only when
/// quantiles collide.
pub fn discretize(values: &[f64], n_bins: usize) -> Result<Vec<u32>> {
    let cuts = cut_points(values, n_bins)?;
    Ok(values.iter().map(|&v| code_for(&cuts, v)).collect())
}

/// Cut points used by [`discretize`]; `cuts.len() + 1` is the number of bins.
pub fn cut_points(values: &[f64], n_bins: usize) -> Result<Vec<f64>> {
    if n_bins < 2 {
        return Err(Error::InvalidArgument(format!(
            "n_bins must be at least 2, got {n_bins}"
        )));
    }
    if values.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot discretize an empty vector".into(),
        ));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("NaN in numeric column".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let min = sorted[0];
    let mut cuts: Vec<f64> = (1..n_bins)
        .map(|i| sorted[i * n / n_bins])
        .filter(|&c| c > min)
        .collect();
    cuts.dedup();
    Ok(cuts)
}

pub fn code_for(cuts: &[f64], value: f64) -> u32 {
    cuts.partition_point(|&c| c <= value) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent rank-based oracle: a value's bin is the number of
    /// quantile thresholds (distinct, above the minimum) that it reaches.
    fn oracle(values: &[f64], n_bins: usize) -> Vec<u32> {
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = sorted.len();
        let mut thresholds = Vec::new();
        for i in 1..n_bins {
            let q = sorted[i * n / n_bins];
            if q > sorted[0] && !thresholds.contains(&q) {
                thresholds.push(q);
            }
        }
        values
            .iter()
            .map(|v| thresholds.iter().filter(|&&t| t <= *v).count() as u32)
            .collect()
    }

    #[test]
    fn median_split() {
        assert_eq!(discretize(&[3.0, 1.0, 2.0, 4.0], 2).unwrap(), vec![1, 0, 0, 1]);
        assert_eq!(oracle(&[3.0, 1.0, 2.0, 4.0], 2), vec![1, 0, 0, 1]);
    }

    #[test]
    fn constant_vector_collapses() {
        assert_eq!(discretize(&[7.0, 7.0, 7.0], 3).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn two_values_two_bins() {
        assert_eq!(discretize(&[10.0, 20.0], 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn five_values_five_bins() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(oracle(&v, 5), vec![0, 1, 2, 3, 4]);
        assert_eq!(discretize(&v, 5).unwrap(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(discretize(&[1.0, 2.0], 1).is_err());
        assert!(discretize(&[], 3).is_err());
        assert!(discretize(&[f64::NAN], 3).is_err());
    }

    proptest! {
        #[test]
        fn matches_oracle_and_is_monotone(
            values in prop::collection::vec(-50i32..50, 1..60),
            n_bins in 2usize..8,
        ) {
            let values: Vec<f64> = values.into_iter().map(f64::from).collect();
            let codes = discretize(&values, n_bins).unwrap();
            prop_assert_eq!(&codes, &oracle(&values, n_bins));
            let max = *codes.iter().max().unwrap() as usize;
            prop_assert!(max < n_bins);
            for i in 0..values.len() {
                for j in 0..values.len() {
                    if values[i] <= values[j] {
                        prop_assert!(codes[i] <= codes[j]);
                    }
                }
            }
        }

        #[test]
        fn permutation_equivariant(
            values in prop::collection::vec(-20i32..20, 1..40),
            n_bins in 2usize..6,
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let values: Vec<f64> = values.into_iter().map(f64::from).collect();
            let mut perm: Vec<usize> = (0..values.len()).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let permuted: Vec<f64> = perm.iter().map(|&i| values[i]).collect();
            let codes = discretize(&values, n_bins).unwrap();
            let permuted_codes = discretize(&permuted, n_bins).unwrap();
            let expected: Vec<u32> = perm.iter().map(|&i| codes[i]).collect();
            prop_assert_eq!(permuted_codes, expected);
        }
    }
}
