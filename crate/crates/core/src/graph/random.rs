//! Seeded random DAGs and Bayesian networks for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Exp1;

use super::{BayesNet, Dag};

pub const DEFAULT_EDGE_PROB: f64 = 0.3;

/// Erdős–Rényi DAG over a random topological order: each forward pair gets an
/// edge with probability `edge_prob`.
pub fn random_dag<R: Rng>(n_nodes: usize, edge_prob: f64, rng: &mut R) -> Dag {
    let mut order: Vec<usize> = (0..n_nodes).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n_nodes {
        for j in i + 1..n_nodes {
            if rng.random_bool(edge_prob) {
                edges.push((order[i], order[j]));
            }
        }
    }
    Dag::with_default_names(n_nodes, &edges).expect("forward edges over an order are acyclic")
}

/// Random DAG with arities drawn from `2..=3` and CPT rows from a symmetric
/// Dirichlet(1).
pub fn random_bayes_net<R: Rng>(n_nodes: usize, edge_prob: f64, rng: &mut R) -> BayesNet {
    let dag = random_dag(n_nodes, edge_prob, rng);
    let arities: Vec<u32> = (0..n_nodes).map(|_| rng.random_range(2..=3)).collect();
    let cpts = (0..n_nodes)
        .map(|v| {
            let configs: usize = dag.parents(v).iter().map(|&p| arities[p] as usize).product();
            let k = arities[v] as usize;
            let mut cpt = Vec::with_capacity(configs * k);
            for _ in 0..configs {
                cpt.extend(dirichlet_ones(k, rng));
            }
            cpt
        })
        .collect();
    BayesNet::new(dag, arities, cpts).expect("generated CPTs are valid")
}

/// One draw from Dirichlet(1, ..., 1) via normalized unit exponentials.
fn dirichlet_ones<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    let mut row: Vec<f64> = draws.iter().map(|d| d / total).collect();
    // absorb rounding so the row sums to 1 within 1e-12
    let drift = 1.0 - row.iter().sum::<f64>();
    row[k - 1] += drift;
    row
}
