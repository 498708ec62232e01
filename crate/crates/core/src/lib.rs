//! Fair causal feature selection over categorical data.
//!
//! The pipeline discovers the Markov blankets of the label and of the
//! sensitive attribute, then keeps only those label-blanket members that a
//! G² test certifies as independent of the sensitive attribute given some
//! subset of the sensitive attribute's blanket.
//!
//! Modules:
//! - [`data`]: categorical datasets, CSV ingestion, discretization, folds.
//! - [`citest`]: G² conditional-independence testing.
//! - [`graph`]: DAGs, d-separation, Bayesian-network sampling, ground truth.
//! - [`mbdiscovery`]: IAMB and HITON-MB blanket discovery.
//! - [`selection`]: the fair causal feature selector.
//! - [`eval`]: classifiers, fairness metrics and cross-validation.
//! - [`cli`]: command-line front end.

pub mod citest;
pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod graph;
pub mod mbdiscovery;
pub mod selection;
pub mod subsets;

pub use citest::{chi_square_sf, CiConfig, CiResult, UnreliablePolicy};
pub use data::{Dataset, Role};
pub use error::{Error, Result};
pub use graph::{BayesNet, Dag};
pub use mbdiscovery::{get_mb, MbAlgorithm, MbConfig, MbResult};
pub use selection::{select_fair_features, FairCfsConfig, FairSelection, Rejection};
