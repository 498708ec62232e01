use super::{association_order, MbConfig, MbResult};
use crate::citest::{CiResult, CiTester};
use crate::data::Dataset;
use crate::error::Result;

/// Incremental association Markov blanket.
///
/// Grow: repeatedly add the candidate most associated with the target given
/// the current blanket, as long as it tests dependent. Shrink: drop each member
/// that is independent of the target given the remaining members.
pub fn iamb(d: &Dataset, target: usize, cfg: &MbConfig) -> Result<MbResult> {
    d.check_column(target)?;
    let tester = CiTester::new(d, cfg.ci);
    let mut blanket: Vec<usize> = Vec::new();

    loop {
        let mut best: Option<(CiResult, usize)> = None;
        for x in (0..d.n_columns()).filter(|&x| x != target && !blanket.contains(&x)) {
            let r = tester.test(x, target, &blanket)?;
            if r.independent {
                continue;
            }
            let better = match &best {
                None => true,
                Some((b, bx)) => association_order((&r, x), (b, *bx)).is_lt(),
            };
            if better {
                best = Some((r, x));
            }
        }
        match best {
            Some((_, x)) => blanket.push(x),
            None => break,
        }
    }

    let mut i = 0;
    while i < blanket.len() {
        let x = blanket[i];
        let rest: Vec<usize> = blanket.iter().copied().filter(|&v| v != x).collect();
        if tester.test(x, target, &rest)?.independent {
            blanket.remove(i);
        } else {
            i += 1;
        }
    }

    blanket.sort_unstable();
    Ok(MbResult {
        target,
        blanket,
        tests_performed: tester.tests_performed(),
        algorithm: super::MbAlgorithm::Iamb,
    })
}
