//! Bundled local causal diagram exercising every feature class the selector
//! distinguishes.
//!
//! | node          | role                                                      |
//! |---------------|-----------------------------------------------------------|
//! | `X1`–`X3`     | parents of `Y`, outside `MB(S)`; blocked by `MB(S)`        |
//! | `X4`          | parent of `Y` and spouse of `S`; blocked by `Z = ∅`        |
//! | `S5`, `X7`–`X9` | in both blankets and adjacent to `S`; never separable   |
//! | `X5`, `X6`, `X10`–`X12` | outside `MB(Y)`; separable from `S`, not eligible |
//!
//! The fair features are also marginally independent of `S` and independent
//! of `S` given `Y`, so a classifier restricted to them has vanishing
//! statistical-parity and false-positive-rate gaps.

use serde::{Deserialize, Serialize};

use super::BayesNet;

pub const FIGURE2_BN: &str = include_str!("../../assets/figure2.bn");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestbedRole {
    Sensitive,
    Label,
    /// In `MB(Y) \ MB(S)`: certified by the full-blanket test.
    FairOutsideSensitiveBlanket,
    /// In `MB(Y) ∩ MB(S)`: certified by a proper subset of `MB(S)`.
    FairWithinSensitiveBlanket,
    /// In `MB(Y)`, adjacent to `S`: no conditioning set blocks it.
    Unfair,
    /// Not in `MB(Y)`; never selected regardless of fairness.
    OutsideLabelBlanket,
}

#[derive(Debug, Clone)]
pub struct Testbed {
    pub bn: BayesNet,
    pub sensitive: usize,
    pub label: usize,
    /// Node ids of the oracle fair set, ascending.
    pub expected_fair: Vec<usize>,
    pub roles: Vec<TestbedRole>,
}

impl Testbed {
    pub fn node(&self, name: &str) -> usize {
        self.bn
            .dag()
            .node_index(name)
            .unwrap_or_else(|| panic!("testbed has no node `{name}`"))
    }

    pub fn nodes_with_role(&self, role: TestbedRole) -> Vec<usize> {
        (0..self.roles.len()).filter(|&v| self.roles[v] == role).collect()
    }
}

pub fn figure2_testbed() -> Testbed {
    let bn = BayesNet::parse(FIGURE2_BN).expect("bundled network parses");
    let dag = bn.dag();
    let id = |name: &str| dag.node_index(name).expect("bundled node");
    let roles: Vec<TestbedRole> = dag
        .names()
        .iter()
        .map(|name| match name.as_str() {
            "S" => TestbedRole::Sensitive,
            "Y" => TestbedRole::Label,
            "X1" | "X2" | "X3" => TestbedRole::FairOutsideSensitiveBlanket,
            "X4" => TestbedRole::FairWithinSensitiveBlanket,
            "S5" | "X7" | "X8" | "X9" => TestbedRole::Unfair,
            _ => TestbedRole::OutsideLabelBlanket,
        })
        .collect();
    let mut expected_fair: Vec<usize> = ["X1", "X2", "X3", "X4"].iter().map(|n| id(n)).collect();
    expected_fair.sort_unstable();
    Testbed {
        sensitive: id("S"),
        label: id("Y"),
        bn,
        expected_fair,
        roles,
    }
}
