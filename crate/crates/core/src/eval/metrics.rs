use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::Code;
use crate::error::{Error, Result};

/// Binary predictions alongside the truth and the sensitive value of each row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predictions {
    pub y_hat: Vec<Code>,
    pub y_true: Vec<Code>,
    pub s: Vec<Code>,
    pub scores: Option<Vec<f64>>,
}

impl Predictions {
    pub fn new(y_hat: Vec<Code>, y_true: Vec<Code>, s: Vec<Code>) -> Result<Self> {
        Self::with_scores(y_hat, y_true, s, None)
    }

    pub fn with_scores(
        y_hat: Vec<Code>,
        y_true: Vec<Code>,
        s: Vec<Code>,
        scores: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = y_hat.len();
        if y_true.len() != n || s.len() != n || scores.as_ref().is_some_and(|v| v.len() != n) {
            return Err(Error::InvalidArgument("prediction vectors differ in length".into()));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("no predictions".into()));
        }
        if y_hat.iter().chain(&y_true).any(|&v| v > 1) {
            return Err(Error::InvalidArgument("predictions and labels must be 0 or 1".into()));
        }
        if let Some(sc) = &scores {
            if sc.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::InvalidArgument("scores must lie in [0, 1]".into()));
            }
        }
        Ok(Predictions {
            y_hat,
            y_true,
            s,
            scores,
        })
    }

    pub fn len(&self) -> usize {
        self.y_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_hat.is_empty()
    }
}

/// Fraction of rows predicted correctly.
pub fn accuracy(p: &Predictions) -> f64 {
    let correct = p.y_hat.iter().zip(&p.y_true).filter(|(a, b)| a == b).count();
    correct as f64 / p.len() as f64
}

/// Largest gap in positive-prediction rate between any two sensitive groups.
/// `None` when fewer than two groups are present.
pub fn spd(p: &Predictions) -> Option<f64> {
    let mut groups: BTreeMap<Code, (u64, u64)> = BTreeMap::new();
    for (&s, &yh) in p.s.iter().zip(&p.y_hat) {
        let e = groups.entry(s).or_default();
        e.0 += u64::from(yh);
        e.1 += 1;
    }
    max_gap(&groups)
}

/// Largest gap in false-positive rate between any two sensitive groups.
/// `None` when fewer than two groups are present or a group has no
/// negative-label rows.
pub fn predictive_equality(p: &Predictions) -> Option<f64> {
    let mut groups: BTreeMap<Code, (u64, u64)> = BTreeMap::new();
    for i in 0..p.len() {
        let e = groups.entry(p.s[i]).or_default();
        if p.y_true[i] == 0 {
            e.0 += u64::from(p.y_hat[i]);
            e.1 += 1;
        }
    }
    if groups.values().any(|&(_, n)| n == 0) {
        return None;
    }
    max_gap(&groups)
}

fn max_gap(groups: &BTreeMap<Code, (u64, u64)>) -> Option<f64> {
    if groups.len() < 2 {
        return None;
    }
    let rates = groups.values().map(|&(pos, n)| pos as f64 / n as f64);
    let (lo, hi) = rates.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
        (lo.min(r), hi.max(r))
    });
    Some(hi - lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn preds(y_hat: &[u32], y_true: &[u32], s: &[u32]) -> Predictions {
        Predictions::new(y_hat.to_vec(), y_true.to_vec(), s.to_vec()).unwrap()
    }

    #[test]
    fn accuracy_counts() {
        assert_eq!(accuracy(&preds(&[1, 0, 1], &[1, 0, 1], &[0, 0, 1])), 1.0);
        assert_eq!(accuracy(&preds(&[1, 0], &[0, 1], &[0, 1])), 0.0);
        assert_eq!(accuracy(&preds(&[1, 0, 1, 1], &[1, 0, 1, 0], &[0, 0, 1, 1])), 0.75);
    }

    #[test]
    fn spd_examples() {
        let s = [0, 0, 1, 1];
        assert_eq!(spd(&preds(&[1, 0, 0, 1], &[0; 4], &s)), Some(0.0));
        // 3/5 vs 2/5
        let s10 = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        let yh = [1, 1, 1, 0, 0, 1, 1, 0, 0, 0];
        assert!((spd(&preds(&yh, &[0; 10], &s10)).unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(spd(&preds(&s, &[0; 4], &s)), Some(1.0));
        assert_eq!(spd(&preds(&[1, 0], &[0, 0], &[1, 1])), None);
    }

    #[test]
    fn spd_multi_group_takes_widest_gap() {
        let s = [0, 0, 1, 1, 2, 2];
        let yh = [1, 1, 1, 0, 0, 0];
        assert_eq!(spd(&preds(&yh, &[0; 6], &s)), Some(1.0));
    }

    #[test]
    fn pe_examples() {
        // group 0 FPR 1/4, group 1 FPR 1/10
        let mut yh = vec![1, 0, 0, 0];
        let mut yt = vec![0; 4];
        let mut s = vec![0; 4];
        yh.extend([1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        yt.extend([0; 10]);
        s.extend([1; 10]);
        assert!((predictive_equality(&preds(&yh, &yt, &s)).unwrap() - 0.15).abs() < 1e-12);
        assert_eq!(predictive_equality(&preds(&[0, 0, 1, 1], &[0, 0, 1, 1], &[0, 1, 0, 1])), Some(0.0));
        // group 1 has only positives
        assert_eq!(predictive_equality(&preds(&[0, 1], &[0, 1], &[0, 1])), None);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Predictions::new(vec![], vec![], vec![]).is_err());
        assert!(Predictions::new(vec![2], vec![0], vec![0]).is_err());
        assert!(Predictions::new(vec![0], vec![0, 1], vec![0]).is_err());
    }

    #[test]
    fn predictions_independent_of_group_have_vanishing_spd() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let n = 100_000;
        let y_hat: Vec<u32> = (0..n).map(|_| u32::from(rng.random_bool(0.4))).collect();
        let mut s: Vec<u32> = (0..n).map(|i| (i % 2) as u32).collect();
        s.shuffle(&mut rng);
        let p = preds(&y_hat, &vec![0; n], &s);
        assert!(spd(&p).unwrap() < 0.01);
    }

    proptest! {
        #[test]
        fn group_swap_invariance(rows in prop::collection::vec((0u32..2, 0u32..2, 0u32..2), 1..60)) {
            let yh: Vec<u32> = rows.iter().map(|r| r.0).collect();
            let yt: Vec<u32> = rows.iter().map(|r| r.1).collect();
            let s: Vec<u32> = rows.iter().map(|r| r.2).collect();
            let swapped: Vec<u32> = s.iter().map(|v| 1 - v).collect();
            let a = preds(&yh, &yt, &s);
            let b = preds(&yh, &yt, &swapped);
            prop_assert_eq!(spd(&a), spd(&b));
            prop_assert_eq!(predictive_equality(&a), predictive_equality(&b));
            let err = yh.iter().zip(&yt).filter(|(x, y)| x != y).count() as f64 / yh.len() as f64;
            prop_assert_eq!(accuracy(&a) + err, 1.0);
        }

        #[test]
        fn constant_predictions_have_zero_spd(
            s in prop::collection::vec(0u32..3, 2..40),
            value in 0u32..2,
        ) {
            let p = preds(&vec![value; s.len()], &vec![0; s.len()], &s);
            if let Some(v) = spd(&p) {
                prop_assert_eq!(v, 0.0);
            }
        }
    }
}
