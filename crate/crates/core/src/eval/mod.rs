//! Classifiers, accuracy and fairness metrics, and the cross-validation
//! harness that ties them to a feature selector.

mod cv;
mod features;
mod knn;
mod lr;
mod metrics;
mod nb;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use cv::{cross_validate, fit_predict, select_features, EvalConfig, EvalReport, FoldResult};
pub use features::Features;
pub use knn::{knn_predict, DEFAULT_K};
pub use lr::{gradient as lr_gradient, loss as lr_loss, LogisticRegression, LrParams, OneHot};
pub use metrics::{accuracy, predictive_equality, spd, Predictions};
pub use nb::{NaiveBayes, DEFAULT_SMOOTHING};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Classifier {
    #[default]
    Nb,
    Lr,
    Knn,
}

impl Classifier {
    pub fn as_str(self) -> &'static str {
        match self {
            Classifier::Nb => "nb",
            Classifier::Lr => "lr",
            Classifier::Knn => "knn",
        }
    }
}

impl fmt::Display for Classifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Classifier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nb" => Ok(Classifier::Nb),
            "lr" => Ok(Classifier::Lr),
            "knn" => Ok(Classifier::Knn),
            other => Err(Error::UnknownClassifier(other.to_string())),
        }
    }
}

/// Feature-selection strategy run on each training split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Selector {
    #[default]
    #[serde(rename = "faircfs")]
    FairCfs,
    /// The label's estimated Markov blanket, without fairness screening.
    #[serde(rename = "mb-only")]
    MbOnly,
    /// Every feature column.
    #[serde(rename = "all-features")]
    AllFeatures,
}

impl Selector {
    pub fn as_str(self) -> &'static str {
        match self {
            Selector::FairCfs => "faircfs",
            Selector::MbOnly => "mb-only",
            Selector::AllFeatures => "all-features",
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "faircfs" => Ok(Selector::FairCfs),
            "mb-only" => Ok(Selector::MbOnly),
            "all-features" => Ok(Selector::AllFeatures),
            other => Err(Error::UnknownSelector(other.to_string())),
        }
    }
}
