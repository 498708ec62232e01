//! Ground-truth machinery: DAGs, d-separation, Bayesian networks and the
//! oracle fair-feature set.

mod bayesnet;
mod dsep;
mod oracle;
pub mod random;
mod testbed;

use std::collections::BinaryHeap;
use std::cmp::Reverse;

pub use bayesnet::BayesNet;
pub use dsep::d_separated;
pub use oracle::{mutilate, oracle_fair_set, true_mb, OracleFairResult};
pub use random::{random_bayes_net, random_dag, DEFAULT_EDGE_PROB};
pub use testbed::{figure2_testbed, Testbed, TestbedRole, FIGURE2_BN};

use crate::error::{Error, Result};

/// Directed acyclic graph with named nodes and sorted parent lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    names: Vec<String>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl Dag {
    /// Builds a DAG from `(parent, child)` edges.
    pub fn new(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut parents = vec![Vec::new(); n];
        for &(from, to) in edges {
            for v in [from, to] {
                if v >= n {
                    return Err(Error::NodeOutOfRange { index: v, n_nodes: n });
                }
            }
            parents[to].push(from);
        }
        Self::from_parents(names, parents)
    }

    pub fn from_parents(names: Vec<String>, mut parents: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if parents.len() != n {
            return Err(Error::MalformedGraph(format!(
                "{} parent lists for {n} nodes",
                parents.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::MalformedGraph(format!("duplicate node name `{name}`")));
            }
        }
        for (v, pa) in parents.iter_mut().enumerate() {
            pa.sort_unstable();
            if let Some(&p) = pa.iter().find(|&&p| p >= n) {
                return Err(Error::NodeOutOfRange { index: p, n_nodes: n });
            }
            if pa.contains(&v) {
                return Err(Error::MalformedGraph(format!("self-loop on `{}`", names[v])));
            }
            if pa.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MalformedGraph(format!(
                    "duplicate edge into `{}`",
                    names[v]
                )));
            }
        }
        topological_order(&parents)?;
        let mut children = vec![Vec::new(); n];
        for (v, pa) in parents.iter().enumerate() {
            for &p in pa {
                children[p].push(v);
            }
        }
        Ok(Dag {
            names,
            parents,
            children,
        })
    }

    /// Graph with nodes named `V0`, `V1`, ...
    pub fn with_default_names(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new((0..n).map(|i| format!("V{i}")).collect(), edges)
    }

    pub fn n_nodes(&self) -> usize {
        self.names.len()
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// All `(parent, child)` edges, ordered by child then parent.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parents
            .iter()
            .enumerate()
            .flat_map(|(v, pa)| pa.iter().map(move |&p| (p, v)))
            .collect()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.parents[to].binary_search(&from).is_ok()
    }

    pub fn topological_order(&self) -> Vec<usize> {
        topological_order(&self.parents).expect("Dag is acyclic by construction")
    }

    pub(crate) fn check_node(&self, v: usize) -> Result<()> {
        if v < self.n_nodes() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                index: v,
                n_nodes: self.n_nodes(),
            })
        }
    }

    /// Descendants of `v`, excluding `v` itself, as a membership mask.
    pub fn descendants_mask(&self, v: usize) -> Vec<bool> {
        let mut mask = vec![false; self.n_nodes()];
        let mut stack: Vec<usize> = self.children[v].clone();
        while let Some(u) = stack.pop() {
            if !mask[u] {
                mask[u] = true;
                stack.extend_from_slice(&self.children[u]);
            }
        }
        mask
    }
}

/// Kahn's algorithm over parent lists, taking the smallest ready id first.
/// Fails with [`Error::Cycle`] if no complete order exists.
pub fn topological_order(parents: &[Vec<usize>]) -> Result<Vec<usize>> {
    let n = parents.len();
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut children = vec![Vec::new(); n];
    for (v, pa) in parents.iter().enumerate() {
        for &p in pa {
            if p >= n {
                return Err(Error::NodeOutOfRange { index: p, n_nodes: n });
            }
            children[p].push(v);
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&v| indegree[v] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.push(Reverse(c));
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err(Error::Cycle)
    }
}
