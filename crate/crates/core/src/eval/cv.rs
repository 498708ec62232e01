use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::features::{majority, Features};
use super::{accuracy, knn_predict, predictive_equality, spd, Classifier, LogisticRegression, LrParams, NaiveBayes, Predictions, Selector};
use crate::data::{stratified_folds, Code, Dataset};
use crate::error::Result;
use crate::mbdiscovery::get_mb;
use crate::selection::{select_fair_features, FairCfsConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub selector: Selector,
    pub classifier: Classifier,
    pub folds: usize,
    pub seed: u64,
    pub selection: FairCfsConfig,
    pub nb_smoothing: f64,
    pub lr: LrParams,
    pub knn_k: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            selector: Selector::default(),
            classifier: Classifier::default(),
            folds: 10,
            seed: 0,
            selection: FairCfsConfig::default(),
            nb_smoothing: super::DEFAULT_SMOOTHING,
            lr: LrParams::default(),
            knn_k: super::DEFAULT_K,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    /// Selected column names, in column order.
    pub selected: Vec<String>,
    pub accuracy: f64,
    pub spd: Option<f64>,
    pub pe: Option<f64>,
    /// The selector returned nothing and the fold used the majority class.
    pub prior_only: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub selector: Selector,
    pub classifier: Classifier,
    pub per_fold: Vec<FoldResult>,
    pub mean_acc: f64,
    /// Mean over folds where the metric is defined; `None` if it never is.
    pub mean_spd: Option<f64>,
    pub mean_pe: Option<f64>,
    pub mean_selected: f64,
}

fn mean_defined(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let (sum, count) = values.flatten().fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

impl EvalReport {
    fn from_folds(selector: Selector, classifier: Classifier, per_fold: Vec<FoldResult>) -> Self {
        let k = per_fold.len() as f64;
        let mean_acc = per_fold.iter().map(|f| f.accuracy).sum::<f64>() / k;
        let mean_spd = mean_defined(per_fold.iter().map(|f| f.spd));
        let mean_pe = mean_defined(per_fold.iter().map(|f| f.pe));
        let mean_selected = per_fold.iter().map(|f| f.selected.len() as f64).sum::<f64>() / k;
        for f in &per_fold {
            if f.spd.is_none() || f.pe.is_none() {
                log::warn!("fold {}: a fairness metric is undefined and left out of the mean", f.fold);
            }
        }
        EvalReport {
            selector,
            classifier,
            per_fold,
            mean_acc,
            mean_spd,
            mean_pe,
            mean_selected,
        }
    }

    /// One row per fold and a final `mean` row. Undefined metrics are empty
    /// cells; selected names are joined with `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fold,n_train,n_test,n_selected,selected,accuracy,spd,pe,prior_only\n");
        for f in &self.per_fold {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                f.fold,
                f.n_train,
                f.n_test,
                f.selected.len(),
                f.selected.join(";"),
                f.accuracy,
                fmt_opt(f.spd),
                fmt_opt(f.pe),
                f.prior_only
            );
        }
        let _ = writeln!(
            out,
            "mean,,,{},,{},{},{},",
            self.mean_selected,
            self.mean_acc,
            fmt_opt(self.mean_spd),
            fmt_opt(self.mean_pe)
        );
        out
    }

    pub fn summary(&self) -> String {
        let show = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"));
        format!(
            "selector={} classifier={} folds={} mean_acc={:.4} mean_spd={} mean_pe={} mean_selected={:.1}",
            self.selector,
            self.classifier,
            self.per_fold.len(),
            self.mean_acc,
            show(self.mean_spd),
            show(self.mean_pe),
            self.mean_selected
        )
    }
}

/// Columns chosen by `selector` on `train`, never including the sensitive or
/// label column.
pub fn select_features(train: &Dataset, selector: Selector, cfg: &FairCfsConfig) -> Result<Vec<usize>> {
    let mut cols = match selector {
        Selector::FairCfs => select_fair_features(train, cfg)?.selected(),
        Selector::MbOnly => get_mb(train, train.label(), &cfg.mb)?.blanket,
        Selector::AllFeatures => train.feature_columns(),
    };
    cols.retain(|&c| c != train.sensitive() && c != train.label());
    Ok(cols)
}

/// Trains `cfg.classifier` on `(x_train, y_train)` and predicts `x_test`.
pub fn fit_predict(
    cfg: &EvalConfig,
    x_train: &Features,
    y_train: &[Code],
    x_test: &Features,
) -> Result<(Vec<Code>, Option<Vec<f64>>)> {
    Ok(match cfg.classifier {
        Classifier::Nb => {
            let m = NaiveBayes::fit(x_train, y_train, cfg.nb_smoothing)?;
            (m.predict(x_test), Some(m.predict_proba(x_test)))
        }
        Classifier::Lr => {
            let m = LogisticRegression::fit(x_train, y_train, &cfg.lr)?;
            (m.predict(x_test), Some(m.predict_proba(x_test)))
        }
        Classifier::Knn => (knn_predict(x_train, y_train, x_test, cfg.knn_k)?, None),
    })
}

fn run_fold(d: &Dataset, cfg: &EvalConfig, fold: usize, train_rows: &[usize], test_rows: &[usize]) -> Result<FoldResult> {
    let train = d.subset_rows(train_rows);
    let selected = select_features(&train, cfg.selector, &cfg.selection)?;
    let y_train: Vec<Code> = train_rows.iter().map(|&r| d.column(d.label())[r]).collect();
    let y_test: Vec<Code> = test_rows.iter().map(|&r| d.column(d.label())[r]).collect();
    let s_test: Vec<Code> = test_rows.iter().map(|&r| d.column(d.sensitive())[r]).collect();

    let prior_only = selected.is_empty();
    let (y_hat, scores) = if prior_only {
        log::warn!("fold {fold}: no features selected; predicting the training majority class");
        let m = majority(&y_train);
        (vec![m; test_rows.len()], None)
    } else {
        let x_train = Features::from_dataset(d, &selected, train_rows)?;
        let x_test = Features::from_dataset(d, &selected, test_rows)?;
        fit_predict(cfg, &x_train, &y_train, &x_test)?
    };
    let p = Predictions::with_scores(y_hat, y_test, s_test, scores)?;
    Ok(FoldResult {
        fold,
        n_train: train_rows.len(),
        n_test: test_rows.len(),
        selected: selected.iter().map(|&c| d.name(c).to_string()).collect(),
        accuracy: accuracy(&p),
        spd: spd(&p),
        pe: predictive_equality(&p),
        prior_only,
    })
}

/// Stratified k-fold evaluation. Selection runs on each training split only;
/// folds are evaluated in parallel and reported in fold order.
///
/// The label column must be binary with codes 0 and 1.
pub fn cross_validate(d: &Dataset, cfg: &EvalConfig) -> Result<EvalReport> {
    if d.arity(d.label()) > 2 {
        return Err(crate::error::Error::InvalidDataset(format!(
            "label `{}` has {} values; evaluation needs a binary label",
            d.name(d.label()),
            d.arity(d.label())
        )));
    }
    let assignment = stratified_folds(d, cfg.folds, cfg.seed)?;
    let per_fold = (0..cfg.folds)
        .into_par_iter()
        .map(|f| run_fold(d, cfg, f, &assignment.train_rows(f), &assignment.test_rows(f)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport::from_folds(cfg.selector, cfg.classifier, per_fold))
}
