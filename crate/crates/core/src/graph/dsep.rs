use std::collections::VecDeque;

use super::Dag;
use crate::error::{Error, Result};

/// Whether `z` d-separates `x` from `y` in `g`.
///
/// Reachability ("Bayes ball") from `x`: a trail may pass a non-collider only
/// if it is not in `z`, and a collider only if it is in `z` or has a
/// descendant in `z`.
pub fn d_separated(g: &Dag, x: usize, y: usize, z: &[usize]) -> Result<bool> {
    for v in [x, y].iter().chain(z) {
        g.check_node(*v)?;
    }
    if x == y {
        return Err(Error::InvalidArgument(
            "d-separation query needs two distinct nodes".into(),
        ));
    }
    if z.contains(&x) || z.contains(&y) {
        return Err(Error::InvalidArgument(
            "conditioning set must not contain a queried node".into(),
        ));
    }
    Ok(!reachable(g, x, z)[y])
}

/// Nodes reachable from `x` along trails active given `z`.
pub(crate) fn reachable(g: &Dag, x: usize, z: &[usize]) -> Vec<bool> {
    let n = g.n_nodes();
    let mut in_z = vec![false; n];
    for &v in z {
        in_z[v] = true;
    }
    // ancestors of z, including z itself
    let mut anc = vec![false; n];
    let mut stack: Vec<usize> = z.to_vec();
    while let Some(v) = stack.pop() {
        if !anc[v] {
            anc[v] = true;
            stack.extend_from_slice(g.parents(v));
        }
    }

    const UP: usize = 0; // arrived from a child
    const DOWN: usize = 1; // arrived from a parent
    let mut visited = vec![[false; 2]; n];
    let mut reached = vec![false; n];
    let mut queue = VecDeque::from([(x, UP)]);
    while let Some((v, dir)) = queue.pop_front() {
        if visited[v][dir] {
            continue;
        }
        visited[v][dir] = true;
        if !in_z[v] {
            reached[v] = true;
        }
        if dir == UP && !in_z[v] {
            queue.extend(g.parents(v).iter().map(|&p| (p, UP)));
            queue.extend(g.children(v).iter().map(|&c| (c, DOWN)));
        } else if dir == DOWN {
            if !in_z[v] {
                queue.extend(g.children(v).iter().map(|&c| (c, DOWN)));
            }
            if anc[v] {
                queue.extend(g.parents(v).iter().map(|&p| (p, UP)));
            }
        }
    }
    reached[x] = false;
    reached
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(n: usize, edges: &[(usize, usize)]) -> Dag {
        Dag::with_default_names(n, edges).unwrap()
    }

    #[test]
    fn chain() {
        let g = dag(3, &[(0, 1), (1, 2)]);
        assert!(d_separated(&g, 0, 2, &[1]).unwrap());
        assert!(!d_separated(&g, 0, 2, &[]).unwrap());
    }

    #[test]
    fn collider() {
        let g = dag(3, &[(0, 1), (2, 1)]);
        assert!(d_separated(&g, 0, 2, &[]).unwrap());
        assert!(!d_separated(&g, 0, 2, &[1]).unwrap());
    }

    #[test]
    fn descendant_of_collider() {
        let g = dag(4, &[(0, 1), (2, 1), (1, 3)]);
        assert!(!d_separated(&g, 0, 2, &[3]).unwrap());
        assert!(d_separated(&g, 0, 2, &[]).unwrap());
    }

    #[test]
    fn fork() {
        let g = dag(3, &[(1, 0), (1, 2)]);
        assert!(!d_separated(&g, 0, 2, &[]).unwrap());
        assert!(d_separated(&g, 0, 2, &[1]).unwrap());
    }

    #[test]
    fn invalid_queries() {
        let g = dag(3, &[(0, 1)]);
        assert!(d_separated(&g, 0, 0, &[]).is_err());
        assert!(d_separated(&g, 0, 1, &[0]).is_err());
        assert!(d_separated(&g, 0, 7, &[]).is_err());
    }
}
