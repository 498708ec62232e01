use std::fmt;
use std::path::Path;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use super::Failure;
use crate::citest::{CiConfig, UnreliablePolicy, DEFAULT_ALPHA, DEFAULT_RELIABILITY_FACTOR};
use crate::eval::{Classifier, EvalConfig, Selector};
use crate::mbdiscovery::{MbAlgorithm, MbConfig, DEFAULT_MAX_K};
use crate::selection::FairCfsConfig;

pub const DEFAULT_FOLDS: usize = 10;
pub const DEFAULT_SYNTH_ROWS: usize = 20_000;
pub const ENV_PREFIX: &str = "FAIRCFS_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Select,
    Eval,
    Synth,
    Citest,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Select => "select",
            Command::Eval => "eval",
            Command::Synth => "synth",
            Command::Citest => "citest",
        })
    }
}

/// Fully resolved settings for one invocation. Echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub data: Option<String>,
    pub schema: Option<String>,
    pub out: Option<String>,
    pub seed: u64,
    pub alpha: f64,
    pub reliability_factor: f64,
    pub mb_alg: MbAlgorithm,
    pub max_k: usize,
    pub max_z: Option<usize>,
    pub extended_search: bool,
    pub classifier: Classifier,
    pub folds: usize,
    pub selector: Selector,
    pub threads: Option<usize>,
    pub bn: Option<String>,
    pub n: usize,
    pub sensitive: Option<String>,
    pub label: Option<String>,
    pub x: Option<String>,
    pub y: Option<String>,
    pub z: Vec<String>,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        RunConfig {
            command,
            data: None,
            schema: None,
            out: None,
            seed: 0,
            alpha: DEFAULT_ALPHA,
            reliability_factor: DEFAULT_RELIABILITY_FACTOR,
            mb_alg: MbAlgorithm::default(),
            max_k: DEFAULT_MAX_K,
            max_z: None,
            extended_search: false,
            classifier: Classifier::default(),
            folds: DEFAULT_FOLDS,
            selector: Selector::default(),
            threads: None,
            bn: None,
            n: DEFAULT_SYNTH_ROWS,
            sensitive: None,
            label: None,
            x: None,
            y: None,
            z: Vec::new(),
        }
    }

    pub fn ci(&self) -> CiConfig {
        CiConfig {
            alpha: self.alpha,
            reliability_factor: self.reliability_factor,
            unreliable_policy: UnreliablePolicy::Independent,
        }
    }

    pub fn mb(&self) -> MbConfig {
        MbConfig {
            algorithm: self.mb_alg,
            ci: self.ci(),
            max_k: self.max_k,
        }
    }

    pub fn selection(&self) -> FairCfsConfig {
        FairCfsConfig {
            mb: self.mb(),
            screening: self.ci().with_policy(UnreliablePolicy::Dependent),
            max_z: self.max_z,
            extended_search: self.extended_search,
        }
    }

    pub fn eval(&self) -> EvalConfig {
        EvalConfig {
            selector: self.selector,
            classifier: self.classifier,
            folds: self.folds,
            seed: self.seed,
            selection: self.selection(),
            ..EvalConfig::default()
        }
    }

    /// Compact single-line JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    fn validate(&self) -> Result<(), Failure> {
        let bad = |msg: String| Err(Failure::Config(msg));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.reliability_factor >= 0.0) {
            return bad(format!("reliability factor must be non-negative, got {}", self.reliability_factor));
        }
        if self.folds < 2 {
            return bad(format!("--folds must be at least 2, got {}", self.folds));
        }
        if self.threads == Some(0) {
            return bad("--threads must be at least 1".into());
        }
        if self.command == Command::Synth && self.n == 0 {
            return bad("--n must be at least 1".into());
        }
        Ok(())
    }
}

/// Options shared by every subcommand. Unset options fall back to the
/// `FAIRCFS_*` environment, then to `--config`, then to defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Re-use settings from a JSON config, a selection report, an evaluation
    /// CSV or a synth sidecar.
    #[arg(long, env = "FAIRCFS_CONFIG")]
    pub config: Option<String>,
    /// Input CSV.
    #[arg(long, env = "FAIRCFS_DATA")]
    pub data: Option<String>,
    /// Schema file naming the sensitive and label columns.
    #[arg(long, env = "FAIRCFS_SCHEMA")]
    pub schema: Option<String>,
    /// Output path.
    #[arg(long, env = "FAIRCFS_OUT")]
    pub out: Option<String>,
    #[arg(long, env = "FAIRCFS_SEED")]
    pub seed: Option<u64>,
    /// Significance level of every G² test.
    #[arg(long, env = "FAIRCFS_ALPHA")]
    pub alpha: Option<f64>,
    /// Tests need at least this many rows per degree of freedom.
    #[arg(long = "reliability-factor", env = "FAIRCFS_RELIABILITY_FACTOR")]
    pub reliability_factor: Option<f64>,
    /// Markov blanket algorithm: iamb or hiton-mb.
    #[arg(long = "mb-alg", env = "FAIRCFS_MB_ALG")]
    pub mb_alg: Option<String>,
    #[arg(long = "max-k", env = "FAIRCFS_MAX_K")]
    pub max_k: Option<usize>,
    /// Largest witness set tried for features inside the sensitive blanket.
    #[arg(long = "max-z", env = "FAIRCFS_MAX_Z")]
    pub max_z: Option<usize>,
    #[arg(long = "extended-search", env = "FAIRCFS_EXTENDED_SEARCH", num_args = 0..=1, default_missing_value = "true")]
    pub extended_search: Option<bool>,
    /// nb, lr or knn.
    #[arg(long, env = "FAIRCFS_CLASSIFIER")]
    pub classifier: Option<String>,
    #[arg(long, env = "FAIRCFS_FOLDS")]
    pub folds: Option<usize>,
    /// faircfs, mb-only or all-features.
    #[arg(long, env = "FAIRCFS_SELECTOR")]
    pub selector: Option<String>,
    /// Worker threads.
    #[arg(long, env = "FAIRCFS_THREADS")]
    pub threads: Option<usize>,
    /// Network file to sample from; the bundled testbed when absent.
    #[arg(long, env = "FAIRCFS_BN")]
    pub bn: Option<String>,
    /// Rows to sample.
    #[arg(long, env = "FAIRCFS_N")]
    pub n: Option<usize>,
    /// Sensitive node of a sampled network.
    #[arg(long, env = "FAIRCFS_SENSITIVE")]
    pub sensitive: Option<String>,
    /// Label node of a sampled network.
    #[arg(long, env = "FAIRCFS_LABEL")]
    pub label: Option<String>,
    /// First column of an ad-hoc test.
    #[arg(long, env = "FAIRCFS_X")]
    pub x: Option<String>,
    /// Second column of an ad-hoc test.
    #[arg(long, env = "FAIRCFS_Y")]
    pub y: Option<String>,
    /// Conditioning columns, comma separated.
    #[arg(long, env = "FAIRCFS_Z", value_delimiter = ',')]
    pub z: Option<Vec<String>>,
}

/// Reads a [`RunConfig`] from a plain JSON config, a JSON report with a
/// `config` field, or a CSV report whose first line is `# config: {...}`.
pub fn load_embedded_config(path: &Path) -> Result<RunConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read config {}: {e}", path.display())))?;
    let json = match text.lines().find_map(|l| l.strip_prefix("# config: ")) {
        Some(line) => line.to_string(),
        None => text.clone(),
    };
    let value: serde_json::Value = serde_json::from_str(&json)
        .map_err(|e| Failure::Config(format!("config {} is not valid JSON: {e}", path.display())))?;
    let value = match value.get("config") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(value)
        .map_err(|e| Failure::Config(format!("config {} is incomplete: {e}", path.display())))
}

impl Opts {
    /// Merges these options over an optional config file and the defaults.
    pub fn resolve(&self, command: Command) -> Result<RunConfig, Failure> {
        let base = match &self.config {
            Some(path) => {
                let mut c = load_embedded_config(Path::new(path))?;
                c.command = command;
                c
            }
            None => RunConfig::defaults(command),
        };
        let parse = |what: &str, v: &Option<String>| -> Result<Option<String>, Failure> {
            match v {
                Some(s) if s.trim().is_empty() => Err(Failure::Config(format!("--{what} is empty"))),
                other => Ok(other.clone()),
            }
        };
        let mb_alg = match &self.mb_alg {
            Some(s) => s.parse().map_err(|e: crate::Error| Failure::Config(e.to_string()))?,
            None => base.mb_alg,
        };
        let classifier = match &self.classifier {
            Some(s) => s.parse().map_err(|e: crate::Error| Failure::Config(e.to_string()))?,
            None => base.classifier,
        };
        let selector = match &self.selector {
            Some(s) => s.parse().map_err(|e: crate::Error| Failure::Config(e.to_string()))?,
            None => base.selector,
        };
        let cfg = RunConfig {
            command,
            data: parse("data", &self.data)?.or(base.data),
            schema: parse("schema", &self.schema)?.or(base.schema),
            out: parse("out", &self.out)?.or(base.out),
            seed: self.seed.unwrap_or(base.seed),
            alpha: self.alpha.unwrap_or(base.alpha),
            reliability_factor: self.reliability_factor.unwrap_or(base.reliability_factor),
            mb_alg,
            max_k: self.max_k.unwrap_or(base.max_k),
            max_z: self.max_z.or(base.max_z),
            extended_search: self.extended_search.unwrap_or(base.extended_search),
            classifier,
            folds: self.folds.unwrap_or(base.folds),
            selector,
            threads: self.threads.or(base.threads),
            bn: self.bn.clone().or(base.bn),
            n: self.n.unwrap_or(base.n),
            sensitive: self.sensitive.clone().or(base.sensitive),
            label: self.label.clone().or(base.label),
            x: self.x.clone().or(base.x),
            y: self.y.clone().or(base.y),
            z: self.z.clone().unwrap_or(base.z),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
