use serde::{Deserialize, Serialize};

use super::features::{check_labels, single_class, Features};
use crate::data::Code;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrParams {
    pub lambda: f64,
    pub learning_rate: f64,
    pub epochs: usize,
}

impl Default for LrParams {
    fn default() -> Self {
        LrParams {
            lambda: 1e-4,
            learning_rate: 0.1,
            epochs: 500,
        }
    }
}

/// One-hot encoding: every level of every feature gets its own indicator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneHot {
    offsets: Vec<usize>,
    width: usize,
}

impl OneHot {
    pub fn new(arities: &[u32]) -> Self {
        let mut offsets = Vec::with_capacity(arities.len());
        let mut width = 0;
        for &a in arities {
            offsets.push(width);
            width += a as usize;
        }
        OneHot { offsets, width }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Indices of the active indicators for `row`.
    pub fn active(&self, row: &[Code]) -> Vec<usize> {
        row.iter().zip(&self.offsets).map(|(&v, &o)| o + v as usize).collect()
    }
}

/// Weights over one-hot indicators plus an unpenalised intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticRegression {
    pub weights: Vec<f64>,
    pub bias: f64,
    encoder: OneHot,
    constant: Option<Code>,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn encode(x: &Features, enc: &OneHot) -> Vec<Vec<usize>> {
    x.rows().map(|r| enc.active(r)).collect()
}

/// Mean log-loss plus `lambda / 2 * ||w||²`.
pub fn loss(weights: &[f64], bias: f64, active: &[Vec<usize>], y: &[Code], lambda: f64) -> f64 {
    let n = y.len() as f64;
    let mut total = 0.0;
    for (idx, &t) in active.iter().zip(y) {
        let z = bias + idx.iter().map(|&k| weights[k]).sum::<f64>();
        // log(1 + e^z) - t z, computed stably
        let softplus = if z > 0.0 { z + (-z).exp().ln_1p() } else { z.exp().ln_1p() };
        total += softplus - f64::from(t) * z;
    }
    total / n + 0.5 * lambda * weights.iter().map(|w| w * w).sum::<f64>()
}

/// Gradient of [`loss`] as `(d weights, d bias)`.
pub fn gradient(
    weights: &[f64],
    bias: f64,
    active: &[Vec<usize>],
    y: &[Code],
    lambda: f64,
) -> (Vec<f64>, f64) {
    let n = y.len() as f64;
    let mut gw = vec![0.0; weights.len()];
    let mut gb = 0.0;
    for (idx, &t) in active.iter().zip(y) {
        let z = bias + idx.iter().map(|&k| weights[k]).sum::<f64>();
        let r = sigmoid(z) - f64::from(t);
        gb += r;
        for &k in idx {
            gw[k] += r;
        }
    }
    for (g, w) in gw.iter_mut().zip(weights) {
        *g = *g / n + lambda * w;
    }
    (gw, gb / n)
}

impl LogisticRegression {
    /// Full-batch gradient descent from zero weights.
    pub fn fit(x: &Features, y: &[Code], params: &LrParams) -> Result<Self> {
        check_labels(x, y)?;
        let encoder = OneHot::new(x.arities());
        let constant = single_class(y);
        if let Some(c) = constant {
            log::warn!("training labels are all {c}; logistic regression predicts a constant");
        }
        let mut weights = vec![0.0; encoder.width()];
        let mut bias = 0.0;
        if constant.is_none() {
            let active = encode(x, &encoder);
            for _ in 0..params.epochs {
                let (gw, gb) = gradient(&weights, bias, &active, y, params.lambda);
                for (w, g) in weights.iter_mut().zip(&gw) {
                    *w -= params.learning_rate * g;
                }
                bias -= params.learning_rate * gb;
            }
        }
        Ok(LogisticRegression {
            weights,
            bias,
            encoder,
            constant,
        })
    }

    pub fn predict_proba_row(&self, row: &[Code]) -> f64 {
        if let Some(c) = self.constant {
            return f64::from(c);
        }
        let z = self.bias + self.encoder.active(row).iter().map(|&k| self.weights[k]).sum::<f64>();
        sigmoid(z)
    }

    /// Positive when the probability exceeds 0.5.
    pub fn predict_row(&self, row: &[Code]) -> Code {
        Code::from(self.predict_proba_row(row) > 0.5)
    }

    pub fn predict(&self, x: &Features) -> Vec<Code> {
        x.rows().map(|r| self.predict_row(r)).collect()
    }

    pub fn predict_proba(&self, x: &Features) -> Vec<f64> {
        x.rows().map(|r| self.predict_proba_row(r)).collect()
    }
}
