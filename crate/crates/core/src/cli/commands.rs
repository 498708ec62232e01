use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Failure, RunConfig};
use crate::citest::{CiResult, CiTester};
use crate::data::{load_csv, Dataset, Schema};
use crate::error::Error;
use crate::eval::cross_validate;
use crate::graph::{oracle_fair_set, true_mb, BayesNet, FIGURE2_BN};
use crate::selection::{select_fair_features, Rejection};

const DEFAULT_SELECT_OUT: &str = "selection.json";
const DEFAULT_EVAL_OUT: &str = "eval.csv";
const DEFAULT_SYNTH_OUT: &str = "synth.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub config: RunConfig,
    pub sensitive: String,
    pub label: String,
    pub n_rows: usize,
    pub dropped_rows: usize,
    pub mb_y: Vec<String>,
    pub mb_s: Vec<String>,
    pub m1: Vec<String>,
    pub m2: Vec<String>,
    pub selected: Vec<String>,
    pub witnesses: BTreeMap<String, Vec<String>>,
    pub rejected: BTreeMap<String, Rejection>,
    pub empty_mb_y: bool,
    pub tests_performed: usize,
}

/// Ground truth written next to a sampled CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthSidecar {
    pub config: RunConfig,
    pub sensitive: String,
    pub label: String,
    pub n_rows: usize,
    pub mb_y: Vec<String>,
    pub mb_s: Vec<String>,
    pub oracle_fair_set: Vec<String>,
    pub witnesses: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CitestReport {
    config: RunConfig,
    x: String,
    y: String,
    z: Vec<String>,
    result: CiResult,
}

fn write_file(path: &str, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Data(format!("cannot write {path}: {e}")))
}

fn algorithm(e: Error) -> Failure {
    Failure::Algorithm(e.to_string())
}

fn load_inputs(cfg: &RunConfig) -> Result<(Dataset, usize), Failure> {
    let schema_path = cfg
        .schema
        .as_deref()
        .ok_or_else(|| Failure::Config("--schema is required".into()))?;
    let schema = Schema::from_file(Path::new(schema_path)).map_err(|e| Failure::Config(e.to_string()))?;
    let data_path = cfg
        .data
        .as_deref()
        .ok_or_else(|| Failure::Config("--data is required".into()))?;
    let loaded = load_csv(Path::new(data_path), &schema).map_err(|e| Failure::Data(e.to_string()))?;
    if loaded.dropped_rows > 0 {
        log::warn!("dropped {} rows with missing cells", loaded.dropped_rows);
    }
    Ok((loaded.dataset, loaded.dropped_rows))
}

fn names(d: &Dataset, cols: &[usize]) -> Vec<String> {
    cols.iter().map(|&c| d.name(c).to_string()).collect()
}

/// Runs the selector and writes a JSON report.
pub fn cmd_select(cfg: &RunConfig) -> Result<(), Failure> {
    let (d, dropped_rows) = load_inputs(cfg)?;
    let sel = select_fair_features(&d, &cfg.selection()).map_err(algorithm)?;
    let report = SelectionReport {
        config: cfg.clone(),
        sensitive: d.name(d.sensitive()).to_string(),
        label: d.name(d.label()).to_string(),
        n_rows: d.n_rows(),
        dropped_rows,
        mb_y: names(&d, &sel.mb_y),
        mb_s: names(&d, &sel.mb_s),
        m1: names(&d, &sel.m1),
        m2: names(&d, &sel.m2),
        selected: names(&d, &sel.selected()),
        witnesses: sel
            .witnesses
            .iter()
            .map(|(&k, z)| (d.name(k).to_string(), names(&d, z)))
            .collect(),
        rejected: sel
            .rejected
            .iter()
            .map(|(&k, &r)| (d.name(k).to_string(), r))
            .collect(),
        empty_mb_y: sel.empty_mb_y,
        tests_performed: sel.tests_performed,
    };
    let out = cfg.out.as_deref().unwrap_or(DEFAULT_SELECT_OUT);
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    write_file(out, &text)?;
    println!("selected: {}", report.selected.join(", "));
    Ok(())
}

/// Cross-validates the configured selector and classifier and writes a CSV
/// report headed by the embedded configuration.
pub fn cmd_eval(cfg: &RunConfig) -> Result<(), Failure> {
    let (d, _) = load_inputs(cfg)?;
    let report = cross_validate(&d, &cfg.eval()).map_err(|e| match e {
        Error::InvalidArgument(m) => Failure::Config(m),
        Error::InvalidDataset(m) => Failure::Data(m),
        other => algorithm(other),
    })?;
    let out = cfg.out.as_deref().unwrap_or(DEFAULT_EVAL_OUT);
    let text = format!("# config: {}\n{}", cfg.to_json(), report.to_csv());
    write_file(out, &text)?;
    println!("{}", report.summary());
    Ok(())
}

/// Samples a network and writes the CSV, a `<out>.truth.json` sidecar and a
/// `<out>.schema` file.
pub fn cmd_synth(cfg: &RunConfig) -> Result<(), Failure> {
    let text = match &cfg.bn {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("cannot read {path}: {e}")))?,
        None => FIGURE2_BN.to_string(),
    };
    let bn = BayesNet::parse(&text).map_err(|e| Failure::Data(e.to_string()))?;
    let dag = bn.dag();
    let find = |flag: &str, name: &str| {
        dag.node_index(name)
            .ok_or_else(|| Failure::Config(format!("--{flag}: the network has no node `{name}`")))
    };
    let s = find("sensitive", cfg.sensitive.as_deref().unwrap_or("S"))?;
    let y = find("label", cfg.label.as_deref().unwrap_or("Y"))?;
    if s == y {
        return Err(Failure::Config("sensitive and label must be different nodes".into()));
    }
    let d = bn.sample(cfg.n, cfg.seed, s, y).map_err(algorithm)?;
    let oracle = oracle_fair_set(dag, y, s, cfg.max_z).map_err(algorithm)?;
    let node_names = |v: &[usize]| v.iter().map(|&i| dag.name(i).to_string()).collect::<Vec<_>>();
    let sidecar = TruthSidecar {
        config: cfg.clone(),
        sensitive: dag.name(s).to_string(),
        label: dag.name(y).to_string(),
        n_rows: cfg.n,
        mb_y: node_names(&true_mb(dag, y).map_err(algorithm)?),
        mb_s: node_names(&true_mb(dag, s).map_err(algorithm)?),
        oracle_fair_set: node_names(&oracle.fair_set),
        witnesses: oracle
            .witness
            .iter()
            .map(|(&k, z)| (dag.name(k).to_string(), node_names(z)))
            .collect(),
    };

    let out = cfg.out.as_deref().unwrap_or(DEFAULT_SYNTH_OUT);
    let mut csv = Vec::new();
    d.write_csv(&mut csv).map_err(|e| Failure::Data(e.to_string()))?;
    std::fs::write(out, csv).map_err(|e| Failure::Data(format!("cannot write {out}: {e}")))?;
    let mut truth = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    truth.push('\n');
    write_file(&format!("{out}.truth.json"), &truth)?;
    let mut schema = Schema::new(dag.name(s), dag.name(y));
    if bn.arity(y) == 2 {
        schema = schema.with_positive("1");
    }
    write_file(&format!("{out}.schema"), &schema.to_text())?;
    println!("wrote {} rows to {out}", cfg.n);
    Ok(())
}

/// Runs one test between named columns and prints the result; also writes a
/// JSON report when `out` is set.
pub fn cmd_citest(cfg: &RunConfig) -> Result<(), Failure> {
    let x_name = cfg.x.as_deref().ok_or_else(|| Failure::Config("--x is required".into()))?;
    let y_name = cfg.y.as_deref().ok_or_else(|| Failure::Config("--y is required".into()))?;
    if x_name == y_name {
        return Err(Failure::Config(format!("--x and --y both name `{x_name}`")));
    }
    let (d, _) = load_inputs(cfg)?;
    let col = |name: &str| {
        d.column_index(name)
            .ok_or_else(|| Failure::Config(format!("unknown column `{name}`")))
    };
    let x = col(x_name)?;
    let y = col(y_name)?;
    let z = cfg.z.iter().map(|n| col(n)).collect::<Result<Vec<_>, _>>()?;
    if z.contains(&x) || z.contains(&y) {
        return Err(Failure::Config("the conditioning set must not contain --x or --y".into()));
    }
    let r = CiTester::new(&d, cfg.ci()).test(x, y, &z).map_err(algorithm)?;
    println!(
        "x={x_name} y={y_name} z=[{}] g2={} dof={} p_value={} decision={} reliable={}",
        cfg.z.join(","),
        r.g2,
        r.dof,
        r.p_value,
        if r.independent { "independent" } else { "dependent" },
        r.reliable
    );
    if let Some(out) = &cfg.out {
        let report = CitestReport {
            config: cfg.clone(),
            x: x_name.to_string(),
            y: y_name.to_string(),
            z: cfg.z.clone(),
            result: r,
        };
        let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
        text.push('\n');
        write_file(out, &text)?;
    }
    Ok(())
}
