use super::features::{check_labels, single_class, Features};
use crate::data::Code;
use crate::error::Result;

pub const DEFAULT_SMOOTHING: f64 = 1.0;

/// Categorical naive Bayes with additive smoothing on priors and likelihoods.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayes {
    log_prior: [f64; 2],
    /// `log_lik[j][c][v] = ln P(x_j = v | y = c)`.
    log_lik: Vec<[Vec<f64>; 2]>,
    constant: Option<Code>,
}

impl NaiveBayes {
    pub fn fit(x: &Features, y: &[Code], smoothing: f64) -> Result<Self> {
        check_labels(x, y)?;
        let constant = single_class(y);
        if let Some(c) = constant {
            log::warn!("training labels are all {c}; naive Bayes predicts a constant");
        }
        let mut class_n = [0u64; 2];
        for &c in y {
            class_n[c as usize] += 1;
        }
        let n = y.len() as f64;
        let log_prior = [0, 1].map(|c| ((class_n[c] as f64 + smoothing) / (n + 2.0 * smoothing)).ln());

        let mut log_lik = Vec::with_capacity(x.n_features());
        for (j, &a) in x.arities().iter().enumerate() {
            let mut counts = [vec![0u64; a as usize], vec![0u64; a as usize]];
            for (row, &c) in x.rows().zip(y) {
                counts[c as usize][row[j] as usize] += 1;
            }
            let table = [0, 1].map(|c| {
                let denom = class_n[c] as f64 + smoothing * f64::from(a);
                counts[c]
                    .iter()
                    .map(|&k| ((k as f64 + smoothing) / denom).ln())
                    .collect()
            });
            log_lik.push(table);
        }
        Ok(NaiveBayes {
            log_prior,
            log_lik,
            constant,
        })
    }

    /// Posterior `P(y = 1 | row)`.
    pub fn predict_proba_row(&self, row: &[Code]) -> f64 {
        if let Some(c) = self.constant {
            return f64::from(c);
        }
        let mut score = self.log_prior;
        for (table, &v) in self.log_lik.iter().zip(row) {
            score[0] += table[0][v as usize];
            score[1] += table[1][v as usize];
        }
        1.0 / (1.0 + (score[0] - score[1]).exp())
    }

    /// Posterior argmax; equal posteriors give 0.
    pub fn predict_row(&self, row: &[Code]) -> Code {
        if let Some(c) = self.constant {
            return c;
        }
        let mut score = self.log_prior;
        for (table, &v) in self.log_lik.iter().zip(row) {
            score[0] += table[0][v as usize];
            score[1] += table[1][v as usize];
        }
        Code::from(score[1] > score[0])
    }

    pub fn predict(&self, x: &Features) -> Vec<Code> {
        x.rows().map(|r| self.predict_row(r)).collect()
    }

    pub fn predict_proba(&self, x: &Features) -> Vec<f64> {
        x.rows().map(|r| self.predict_proba_row(r)).collect()
    }
}
