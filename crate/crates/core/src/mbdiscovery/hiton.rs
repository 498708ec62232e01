use std::collections::BTreeMap;

use super::{association_order, MbAlgorithm, MbConfig, MbResult};
use crate::citest::{CiResult, CiTester};
use crate::data::Dataset;
use crate::error::Result;
use crate::subsets::subsets_up_to;

/// Parents-and-children estimate with the separating sets that removed every
/// other variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcResult {
    pub target: usize,
    /// In order of admission.
    pub pc: Vec<usize>,
    pub sepsets: BTreeMap<usize, Vec<usize>>,
}

/// Interleaved HITON-PC.
///
/// Candidates that are marginally dependent on the target are admitted in
/// order of association. After each admission the newcomer is tested against
/// every subset of the other members (up to `max_k`), and each existing member
/// against the subsets that contain the newcomer; anything found independent is
/// evicted with its separating set.
pub fn hiton_pc(tester: &CiTester<'_>, target: usize, max_k: usize) -> Result<PcResult> {
    let d = tester.data();
    d.check_column(target)?;
    let mut sepsets = BTreeMap::new();
    let mut ranked: Vec<(CiResult, usize)> = Vec::new();
    for x in (0..d.n_columns()).filter(|&x| x != target) {
        let r = tester.test(x, target, &[])?;
        if r.independent {
            sepsets.insert(x, Vec::new());
        } else {
            ranked.push((r, x));
        }
    }
    ranked.sort_by(|a, b| association_order((&a.0, a.1), (&b.0, b.1)));

    let mut pc: Vec<usize> = Vec::new();
    for (_, c) in ranked {
        // newcomer against non-empty subsets of the current members
        if let Some(z) = find_sepset(tester, c, target, &pc, max_k, None)? {
            sepsets.insert(c, z);
            continue;
        }
        pc.push(c);
        // existing members against subsets that include the newcomer
        let mut i = 0;
        while i < pc.len() {
            let x = pc[i];
            if x == c {
                i += 1;
                continue;
            }
            let others: Vec<usize> = pc.iter().copied().filter(|&v| v != x).collect();
            if let Some(z) = find_sepset(tester, x, target, &others, max_k, Some(c))? {
                sepsets.insert(x, z);
                pc.remove(i);
            } else {
                i += 1;
            }
        }
    }
    Ok(PcResult {
        target,
        pc,
        sepsets,
    })
}

/// First subset `z` of `pool` (non-empty, at most `max_k` elements, and
/// containing `must` when given) with `x ⫫ target | z`.
fn find_sepset(
    tester: &CiTester<'_>,
    x: usize,
    target: usize,
    pool: &[usize],
    max_k: usize,
    must: Option<usize>,
) -> Result<Option<Vec<usize>>> {
    let mut sorted: Vec<usize> = pool.iter().copied().filter(|&v| Some(v) != must).collect();
    sorted.sort_unstable();
    let cap = match must {
        Some(_) => max_k.saturating_sub(1),
        None => max_k,
    };
    if must.is_some() && max_k == 0 {
        return Ok(None);
    }
    for mut z in subsets_up_to(&sorted, cap) {
        match must {
            Some(m) => {
                z.push(m);
                z.sort_unstable();
            }
            None if z.is_empty() => continue,
            None => {}
        }
        if tester.test(x, target, &z)?.independent {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// HITON-MB: the target's PC set plus spouses.
///
/// A variable `y` outside PC(target), found in PC(x) for some member `x`, is a
/// spouse when it is dependent on the target given its separating set plus `x`.
pub fn hiton_mb(d: &Dataset, target: usize, cfg: &MbConfig) -> Result<MbResult> {
    let tester = CiTester::new(d, cfg.ci);
    let pc_t = hiton_pc(&tester, target, cfg.max_k)?;

    let mut spouses: Vec<usize> = Vec::new();
    for &x in &pc_t.pc {
        let pc_x = hiton_pc(&tester, x, cfg.max_k)?;
        for &y in &pc_x.pc {
            if y == target || pc_t.pc.contains(&y) || spouses.contains(&y) {
                continue;
            }
            let mut z = pc_t.sepsets.get(&y).cloned().unwrap_or_default();
            if !z.contains(&x) {
                z.push(x);
            }
            z.sort_unstable();
            if !tester.test(y, target, &z)?.independent {
                spouses.push(y);
            }
        }
    }

    let mut blanket: Vec<usize> = pc_t.pc.iter().chain(&spouses).copied().collect();
    blanket.sort_unstable();
    blanket.dedup();
    Ok(MbResult {
        target,
        blanket,
        tests_performed: tester.tests_performed(),
        algorithm: MbAlgorithm::HitonMb,
    })
}
