use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Dag;
use crate::data::Dataset;
use crate::error::{Error, Result};

const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Discrete Bayesian network: a DAG plus one conditional probability table per node.
///
/// `cpt(v)` is flattened parent-configuration-major: row `c` holds
/// `P(v = 0..arity | parents = c)`, where `c` is the mixed-radix index of the
/// parent values over `dag.parents(v)` (ascending node id, first parent most
/// significant).
#[derive(Debug, Clone, PartialEq)]
pub struct BayesNet {
    dag: Dag,
    arities: Vec<u32>,
    cpts: Vec<Vec<f64>>,
}

impl BayesNet {
    pub fn new(dag: Dag, arities: Vec<u32>, cpts: Vec<Vec<f64>>) -> Result<Self> {
        let n = dag.n_nodes();
        if arities.len() != n || cpts.len() != n {
            return Err(Error::MalformedGraph(format!(
                "{} arities and {} CPTs for {n} nodes",
                arities.len(),
                cpts.len()
            )));
        }
        for v in 0..n {
            let bad = |reason: String| Error::MalformedCpt {
                node: dag.name(v).to_string(),
                reason,
            };
            if arities[v] < 2 {
                return Err(bad(format!("arity {} is below 2", arities[v])));
            }
            let configs: usize = dag.parents(v).iter().map(|&p| arities[p] as usize).product();
            let k = arities[v] as usize;
            if cpts[v].len() != configs * k {
                return Err(bad(format!(
                    "expected {} entries ({configs} parent configurations x arity {k}), found {}",
                    configs * k,
                    cpts[v].len()
                )));
            }
            for (c, row) in cpts[v].chunks(k).enumerate() {
                if row.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
                    return Err(bad(format!("row {c} has a negative or non-finite entry")));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    return Err(bad(format!("row {c} sums to {sum}")));
                }
            }
        }
        Ok(BayesNet { dag, arities, cpts })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn arities(&self) -> &[u32] {
        &self.arities
    }

    pub fn arity(&self, v: usize) -> u32 {
        self.arities[v]
    }

    pub fn cpt(&self, v: usize) -> &[f64] {
        &self.cpts[v]
    }

    /// Conditional distribution of `v` given one assignment of its parents
    /// (values listed in `dag.parents(v)` order).
    pub fn cpt_row(&self, v: usize, parent_values: &[u32]) -> &[f64] {
        let c = self.config_index(v, |i| parent_values[i]);
        let k = self.arities[v] as usize;
        &self.cpts[v][c * k..(c + 1) * k]
    }

    fn config_index(&self, v: usize, value_of: impl Fn(usize) -> u32) -> usize {
        self.dag
            .parents(v)
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &p)| {
                acc * self.arities[p] as usize + value_of(i) as usize
            })
    }

    /// Draws `n` rows by ancestral sampling, returned column-major.
    pub fn sample_columns(&self, n: usize, seed: u64) -> Result<Vec<Vec<u32>>> {
        if n == 0 {
            return Err(Error::InvalidArgument("sample size must be at least 1".into()));
        }
        let order = self.dag.topological_order();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut columns = vec![vec![0u32; n]; self.dag.n_nodes()];
        let mut row = vec![0u32; self.dag.n_nodes()];
        for r in 0..n {
            for &v in &order {
                let parents = self.dag.parents(v);
                let c = self.config_index(v, |i| row[parents[i]]);
                let k = self.arities[v] as usize;
                let probs = &self.cpts[v][c * k..(c + 1) * k];
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut value = k - 1;
                for (i, &p) in probs.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        value = i;
                        break;
                    }
                }
                // zero-probability tail values are never drawn
                while probs[value] == 0.0 && value > 0 {
                    value -= 1;
                }
                row[v] = value as u32;
                columns[v][r] = value as u32;
            }
        }
        Ok(columns)
    }

    /// Samples a dataset whose column `j` is node `j`, with the given
    /// sensitive and label nodes.
    pub fn sample(&self, n: usize, seed: u64, sensitive: usize, label: usize) -> Result<Dataset> {
        let columns = self.sample_columns(n, seed)?;
        Dataset::from_codes(
            self.dag.names().to_vec(),
            columns,
            self.arities.clone(),
            sensitive,
            label,
        )
    }

    /// Parses the line-oriented network format:
    ///
    /// ```text
    /// # comment
    /// NAME ARITY [PARENT ...] : p p p ...
    /// ```
    ///
    /// Probabilities are listed per parent configuration, with the parents
    /// enumerated in the order written and the first written parent most
    /// significant. Nodes may appear in any order.
    pub fn parse(text: &str) -> Result<Self> {
        struct RawNode {
            name: String,
            arity: u32,
            parents: Vec<String>,
            probs: Vec<f64>,
            line: usize,
        }
        let mut raw = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: &str| Error::BnParse {
                line: lineno,
                reason: reason.to_string(),
            };
            let (head, tail) = line
                .split_once(':')
                .ok_or_else(|| err("expected `NAME ARITY [PARENT ...] : probabilities`"))?;
            let mut head = head.split_whitespace();
            let name = head.next().ok_or_else(|| err("missing node name"))?.to_string();
            let arity: u32 = head
                .next()
                .ok_or_else(|| err("missing arity"))?
                .parse()
                .map_err(|_| err("arity is not an integer"))?;
            let parents: Vec<String> = head.map(str::to_string).collect();
            let probs = tail
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| err(&format!("`{t}` is not a number"))))
                .collect::<Result<Vec<f64>>>()?;
            raw.push(RawNode {
                name,
                arity,
                parents,
                probs,
                line: lineno,
            });
        }
        if raw.is_empty() {
            return Err(Error::BnParse {
                line: 0,
                reason: "no nodes".into(),
            });
        }

        let names: Vec<String> = raw.iter().map(|r| r.name.clone()).collect();
        let index = |name: &str, line: usize| {
            names.iter().position(|n| n == name).ok_or_else(|| Error::BnParse {
                line,
                reason: format!("unknown parent `{name}`"),
            })
        };
        let mut parents = Vec::with_capacity(raw.len());
        for r in &raw {
            let ids = r
                .parents
                .iter()
                .map(|p| index(p, r.line))
                .collect::<Result<Vec<usize>>>()?;
            parents.push(ids);
        }
        let written_parents = parents.clone();
        let dag = Dag::from_parents(names, parents)?;
        let arities: Vec<u32> = raw.iter().map(|r| r.arity).collect();
        if let Some(r) = raw.iter().find(|r| r.arity < 2) {
            return Err(Error::BnParse {
                line: r.line,
                reason: format!("arity of `{}` must be at least 2", r.name),
            });
        }

        // Reorder rows from written-parent order to sorted-parent order.
        let mut cpts = Vec::with_capacity(raw.len());
        for (v, r) in raw.iter().enumerate() {
            let k = r.arity as usize;
            let written = &written_parents[v];
            let configs: usize = written.iter().map(|&p| arities[p] as usize).product();
            if r.probs.len() != configs * k {
                return Err(Error::MalformedCpt {
                    node: r.name.clone(),
                    reason: format!(
                        "expected {} probabilities, found {}",
                        configs * k,
                        r.probs.len()
                    ),
                });
            }
            let sorted = dag.parents(v);
            let mut cpt = vec![0.0; configs * k];
            let mut values = vec![0u32; written.len()];
            for c in 0..configs {
                // decode c in written order (first parent most significant)
                let mut rem = c;
                for i in (0..written.len()).rev() {
                    let a = arities[written[i]] as usize;
                    values[i] = (rem % a) as u32;
                    rem /= a;
                }
                let target = sorted.iter().fold(0usize, |acc, &p| {
                    let i = written.iter().position(|&w| w == p).expect("same parent set");
                    acc * arities[p] as usize + values[i] as usize
                });
                cpt[target * k..(target + 1) * k].copy_from_slice(&r.probs[c * k..(c + 1) * k]);
            }
            cpts.push(cpt);
        }
        BayesNet::new(dag, arities, cpts)
    }

    /// Serializes in the format read by [`BayesNet::parse`], nodes in id order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in 0..self.dag.n_nodes() {
            out.push_str(self.dag.name(v));
            out.push(' ');
            out.push_str(&self.arities[v].to_string());
            for &p in self.dag.parents(v) {
                out.push(' ');
                out.push_str(self.dag.name(p));
            }
            out.push_str(" :");
            for p in &self.cpts[v] {
                out.push(' ');
                out.push_str(&format!("{p}"));
            }
            out.push('\n');
        }
        out
    }
}
