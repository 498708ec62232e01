//! Markov blanket discovery from data.
//!
//! Two interchangeable implementations are provided: [`iamb`] (grow–shrink
//! with association-ranked growth) and [`hiton_mb`] (divide and conquer over
//! parents/children sets, then spouses).

mod hiton;
mod iamb;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use hiton::{hiton_mb, hiton_pc, PcResult};
pub use iamb::iamb;

use crate::citest::{CiConfig, CiResult, UnreliablePolicy};
use crate::data::Dataset;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_K: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum MbAlgorithm {
    #[serde(rename = "iamb")]
    Iamb,
    #[default]
    #[serde(rename = "hiton-mb")]
    HitonMb,
}

impl MbAlgorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            MbAlgorithm::Iamb => "iamb",
            MbAlgorithm::HitonMb => "hiton-mb",
        }
    }
}

impl fmt::Display for MbAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MbAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iamb" => Ok(MbAlgorithm::Iamb),
            "hiton-mb" | "hiton_mb" | "hitonmb" => Ok(MbAlgorithm::HitonMb),
            other => Err(Error::UnknownAlgorithm(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MbConfig {
    pub algorithm: MbAlgorithm,
    pub ci: CiConfig,
    /// Largest conditioning set HITON-PC searches.
    pub max_k: usize,
}

impl Default for MbConfig {
    fn default() -> Self {
        MbConfig {
            algorithm: MbAlgorithm::default(),
            ci: CiConfig::default().with_policy(UnreliablePolicy::Independent),
            max_k: DEFAULT_MAX_K,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MbResult {
    pub target: usize,
    /// Ascending column indices.
    pub blanket: Vec<usize>,
    pub tests_performed: usize,
    pub algorithm: MbAlgorithm,
}

/// Runs the configured discovery algorithm.
pub fn get_mb(d: &Dataset, target: usize, cfg: &MbConfig) -> Result<MbResult> {
    let result = match cfg.algorithm {
        MbAlgorithm::Iamb => iamb(d, target, cfg)?,
        MbAlgorithm::HitonMb => hiton_mb(d, target, cfg)?,
    };
    assert!(
        !result.blanket.contains(&target),
        "target {target} in its own blanket"
    );
    Ok(result)
}

/// Same as [`get_mb`] with the algorithm given by name.
pub fn get_mb_by_name(d: &Dataset, target: usize, algorithm: &str, cfg: &MbConfig) -> Result<MbResult> {
    let algorithm: MbAlgorithm = algorithm.parse()?;
    get_mb(d, target, &MbConfig { algorithm, ..*cfg })
}

/// Strongest association first: smaller p-value, then larger G², then
/// smaller column index.
pub(crate) fn association_order(a: (&CiResult, usize), b: (&CiResult, usize)) -> Ordering {
    a.0.p_value
        .total_cmp(&b.0.p_value)
        .then_with(|| b.0.g2.total_cmp(&a.0.g2))
        .then_with(|| a.1.cmp(&b.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names() {
        assert_eq!("iamb".parse::<MbAlgorithm>().unwrap(), MbAlgorithm::Iamb);
        assert_eq!("hiton-mb".parse::<MbAlgorithm>().unwrap(), MbAlgorithm::HitonMb);
        let err = "pcmb".parse::<MbAlgorithm>().unwrap_err();
        assert!(err.to_string().contains("unknown algorithm"));
        assert_eq!(MbAlgorithm::default(), MbAlgorithm::HitonMb);
    }

    #[test]
    fn ordering_is_total() {
        let r = |p: f64, g2: f64| CiResult {
            g2,
            dof: 1,
            p_value: p,
            independent: false,
            reliable: true,
            alpha: 0.01,
        };
        assert_eq!(association_order((&r(0.001, 5.0), 3), (&r(0.002, 9.0), 1)), Ordering::Less);
        assert_eq!(association_order((&r(0.0, 50.0), 3), (&r(0.0, 40.0), 1)), Ordering::Less);
        assert_eq!(association_order((&r(0.0, 40.0), 3), (&r(0.0, 40.0), 1)), Ordering::Greater);
    }
}
