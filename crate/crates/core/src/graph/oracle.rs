use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{d_separated, Dag};
use crate::error::{Error, Result};
use crate::subsets::subsets_up_to;

/// Parents, children and spouses of `v`, ascending, `v` excluded.
pub fn true_mb(g: &Dag, v: usize) -> Result<Vec<usize>> {
    g.check_node(v)?;
    let mut mb: Vec<usize> = g.parents(v).to_vec();
    for &c in g.children(v) {
        mb.push(c);
        mb.extend(g.parents(c).iter().copied().filter(|&p| p != v));
    }
    mb.sort_unstable();
    mb.dedup();
    Ok(mb)
}

/// Copy of `g` with every edge into `s` removed.
pub fn mutilate(g: &Dag, s: usize) -> Result<Dag> {
    g.check_node(s)?;
    let mut parents: Vec<Vec<usize>> = (0..g.n_nodes()).map(|v| g.parents(v).to_vec()).collect();
    parents[s].clear();
    Dag::from_parents(g.names().to_vec(), parents)
}

/// Fair members of the label's blanket according to the d-separation oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleFairResult {
    pub fair_set: Vec<usize>,
    /// Smallest conditioning set found for each fair member.
    pub witness: BTreeMap<usize, Vec<usize>>,
}

/// Members `x` of the blanket of `y` (other than `s`) for which some
/// `Z ⊆ MB(s) \ {x}` with `|Z| <= max_z` d-separates `x` from `s`.
///
/// Candidate sets are tried smallest first, lexicographically within a size;
/// the first success is recorded as the witness. `max_z = None` searches
/// every subset.
pub fn oracle_fair_set(
    g: &Dag,
    y: usize,
    s: usize,
    max_z: Option<usize>,
) -> Result<OracleFairResult> {
    g.check_node(y)?;
    g.check_node(s)?;
    if y == s {
        return Err(Error::InvalidArgument(
            "label and sensitive node must differ".into(),
        ));
    }
    let mb_y = true_mb(g, y)?;
    let mb_s = true_mb(g, s)?;
    let cap = max_z.unwrap_or(mb_s.len());

    let mut fair_set = Vec::new();
    let mut witness = BTreeMap::new();
    for &x in mb_y.iter().filter(|&&x| x != s) {
        let pool: Vec<usize> = mb_s.iter().copied().filter(|&v| v != x).collect();
        for z in subsets_up_to(&pool, cap) {
            if d_separated(g, x, s, &z)? {
                fair_set.push(x);
                witness.insert(x, z);
                break;
            }
        }
    }
    Ok(OracleFairResult { fair_set, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(names: &[&str], edges: &[(&str, &str)]) -> Dag {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let idx = |n: &str| names.iter().position(|m| m == n).unwrap();
        let edges: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
        Dag::new(names, &edges).unwrap()
    }

    #[test]
    fn blankets() {
        let chain = named(&["A", "B", "C"], &[("A", "B"), ("B", "C")]);
        assert_eq!(true_mb(&chain, 1).unwrap(), vec![0, 2]);
        let collider = named(&["A", "B", "C"], &[("A", "B"), ("C", "B")]);
        assert_eq!(true_mb(&collider, 0).unwrap(), vec![1, 2]);
        let isolated = named(&["A", "B", "C"], &[("A", "B")]);
        assert!(true_mb(&isolated, 2).unwrap().is_empty());
        assert!(true_mb(&isolated, 3).is_err());
    }

    #[test]
    fn mutilation() {
        let g = named(&["A", "S", "B"], &[("A", "S"), ("S", "B")]);
        let m = mutilate(&g, 1).unwrap();
        assert_eq!(m.edges(), vec![(1, 2)]);

        let g = named(&["A", "S", "B"], &[("S", "B")]);
        assert_eq!(mutilate(&g, 1).unwrap(), g);

        let g = named(&["A", "B", "S", "C"], &[("A", "S"), ("B", "S"), ("S", "C")]);
        assert_eq!(mutilate(&g, 2).unwrap().edges(), vec![(2, 3)]);
        assert!(mutilate(&g, 9).is_err());
    }

    #[test]
    fn chain_into_label_is_unfair() {
        let g = named(&["S", "A", "Y"], &[("S", "A"), ("A", "Y")]);
        let r = oracle_fair_set(&g, 2, 0, None).unwrap();
        assert!(r.fair_set.is_empty());
    }

    #[test]
    fn blanket_member_blocks_path() {
        // S -> B -> A -> Y, B -> Y
        let g = named(
            &["S", "B", "A", "Y"],
            &[("S", "B"), ("B", "A"), ("A", "Y"), ("B", "Y")],
        );
        let r = oracle_fair_set(&g, 3, 0, None).unwrap();
        assert_eq!(r.fair_set, vec![2]);
        assert_eq!(r.witness[&2], vec![1]);
    }

    #[test]
    fn disconnected_sensitive() {
        let g = named(
            &["S", "T", "A", "B", "Y"],
            &[("S", "T"), ("A", "Y"), ("Y", "B")],
        );
        let r = oracle_fair_set(&g, 4, 0, None).unwrap();
        assert_eq!(r.fair_set, true_mb(&g, 4).unwrap());
        assert!(r.witness.values().all(Vec::is_empty));
    }

    #[test]
    fn rejects_same_node() {
        let g = named(&["S", "Y"], &[]);
        assert!(oracle_fair_set(&g, 0, 0, None).is_err());
    }
}
