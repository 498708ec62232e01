//! The fair causal feature selector.
//!
//! 1. Discover `MB(Y)` and `MB(S)`.
//! 2. Keep each `X ∈ MB(Y) \ MB(S)` with `X ⫫ S | MB(S)` (set `m1`).
//! 3. Keep each `X ∈ MB(Y) ∩ MB(S)` with `X ⫫ S | Z` for some
//!    `Z ⊆ MB(S) \ {X}` (set `m2`).
//!
//! A feature is admitted only on a reliable test that declares independence;
//! an unreliable test counts against it.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::citest::{CiConfig, CiTester, UnreliablePolicy};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::mbdiscovery::{get_mb, MbConfig};
use crate::subsets::subsets_up_to;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FairCfsConfig {
    pub mb: MbConfig,
    /// Test settings for the fairness screens; the unreliable policy is
    /// always treated as dependent.
    pub screening: CiConfig,
    /// Largest witness set tried in the subset search; `None` means every
    /// subset of `MB(S) \ {X}`.
    pub max_z: Option<usize>,
    /// Also give features that fail the full-blanket test the subset search.
    pub extended_search: bool,
}

impl Default for FairCfsConfig {
    fn default() -> Self {
        FairCfsConfig {
            mb: MbConfig::default(),
            screening: CiConfig::default().with_policy(UnreliablePolicy::Dependent),
            max_z: None,
            extended_search: false,
        }
    }
}

impl FairCfsConfig {
    fn screening_ci(&self) -> CiConfig {
        self.screening.with_policy(UnreliablePolicy::Dependent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    /// Reliably dependent on `S` given the whole of `MB(S)`.
    DependentGivenMbs,
    /// No tried subset of `MB(S)` made it independent of `S`.
    NoWitnessSubset,
    /// No test on this feature had enough samples.
    UnreliableTest,
}

impl Rejection {
    pub fn as_str(self) -> &'static str {
        match self {
            Rejection::DependentGivenMbs => "dependent_given_mbs",
            Rejection::NoWitnessSubset => "no_witness_subset",
            Rejection::UnreliableTest => "unreliable_test",
        }
    }
}

/// Outcome of one screening step.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Screen {
    pub passed: Vec<usize>,
    pub witnesses: BTreeMap<usize, Vec<usize>>,
    pub failures: BTreeMap<usize, Rejection>,
    pub tests_performed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FairSelection {
    pub sensitive: usize,
    pub label: usize,
    pub mb_y: Vec<usize>,
    pub mb_s: Vec<usize>,
    pub m1: Vec<usize>,
    pub m2: Vec<usize>,
    pub witnesses: BTreeMap<usize, Vec<usize>>,
    pub rejected: BTreeMap<usize, Rejection>,
    /// Set when the label's blanket came back empty.
    pub empty_mb_y: bool,
    pub tests_performed: usize,
}

impl FairSelection {
    /// `m1 ∪ m2`, ascending.
    pub fn selected(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.m1.iter().chain(&self.m2).copied().collect();
        all.sort_unstable();
        all
    }
}

fn check_indices(d: &Dataset, candidates: &[usize], mb_s: &[usize], s: usize) -> Result<()> {
    d.check_column(s)?;
    for &c in candidates.iter().chain(mb_s) {
        d.check_column(c)?;
    }
    if candidates.contains(&s) || mb_s.contains(&s) {
        return Err(Error::InvalidArgument(
            "the sensitive column cannot be screened or conditioned on".into(),
        ));
    }
    Ok(())
}

/// Admits each candidate that a reliable test finds independent of `s`
/// given all of `mb_s`.
pub fn step2_screen(
    d: &Dataset,
    candidates: &[usize],
    mb_s: &[usize],
    s: usize,
    cfg: &FairCfsConfig,
) -> Result<Screen> {
    check_indices(d, candidates, mb_s, s)?;
    if let Some(&c) = candidates.iter().find(|c| mb_s.contains(c)) {
        return Err(Error::InvalidArgument(format!(
            "candidate {c} belongs to the sensitive blanket"
        )));
    }
    let tester = CiTester::new(d, cfg.screening_ci());
    let outcomes = candidates
        .par_iter()
        .map(|&x| tester.test(x, s, mb_s).map(|r| (x, r)))
        .collect::<Result<Vec<_>>>()?;

    let mut screen = Screen::default();
    for (x, r) in outcomes {
        if r.reliable && r.independent {
            screen.passed.push(x);
            screen.witnesses.insert(x, sorted(mb_s));
        } else if !r.reliable {
            screen.failures.insert(x, Rejection::UnreliableTest);
        } else {
            screen.failures.insert(x, Rejection::DependentGivenMbs);
        }
    }
    screen.tests_performed = tester.tests_performed();
    Ok(screen)
}

/// Admits each candidate that a reliable test finds independent of `s` given
/// some `Z ⊆ mb_s \ {X}` with `|Z| <= max_z`; subsets are tried smallest
/// first, lexicographically within a size, and the first success is kept.
pub fn step3_screen(
    d: &Dataset,
    candidates: &[usize],
    mb_s: &[usize],
    s: usize,
    cfg: &FairCfsConfig,
) -> Result<Screen> {
    check_indices(d, candidates, mb_s, s)?;
    let tester = CiTester::new(d, cfg.screening_ci());
    let outcomes = candidates
        .par_iter()
        .map(|&x| {
            let pool: Vec<usize> = sorted(mb_s).into_iter().filter(|&v| v != x).collect();
            let cap = cfg.max_z.unwrap_or(pool.len());
            let mut any_reliable = false;
            for z in subsets_up_to(&pool, cap) {
                let r = tester.test(x, s, &z)?;
                any_reliable |= r.reliable;
                if r.reliable && r.independent {
                    return Ok((x, Ok(z)));
                }
            }
            let reason = if any_reliable {
                Rejection::NoWitnessSubset
            } else {
                Rejection::UnreliableTest
            };
            Ok((x, Err(reason)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut screen = Screen::default();
    for (x, outcome) in outcomes {
        match outcome {
            Ok(z) => {
                screen.passed.push(x);
                screen.witnesses.insert(x, z);
            }
            Err(reason) => {
                screen.failures.insert(x, reason);
            }
        }
    }
    screen.tests_performed = tester.tests_performed();
    Ok(screen)
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

/// Runs blanket discovery and both screens on `d`, using its sensitive and
/// label columns.
pub fn select_fair_features(d: &Dataset, cfg: &FairCfsConfig) -> Result<FairSelection> {
    let s = d.sensitive();
    let y = d.label();
    let (mb_y, mb_s) = rayon::join(|| get_mb(d, y, &cfg.mb), || get_mb(d, s, &cfg.mb));
    let (mb_y, mb_s) = (mb_y?, mb_s?);
    let mut tests_performed = mb_y.tests_performed + mb_s.tests_performed;
    let mb_y = mb_y.blanket;
    let mb_s = mb_s.blanket;
    let empty_mb_y = mb_y.is_empty();
    if empty_mb_y {
        log::warn!("the label's Markov blanket is empty; nothing to select");
    }

    let outside: Vec<usize> = mb_y
        .iter()
        .copied()
        .filter(|&x| x != s && !mb_s.contains(&x))
        .collect();
    let shared: Vec<usize> = mb_y
        .iter()
        .copied()
        .filter(|&x| x != s && mb_s.contains(&x))
        .collect();

    let step2 = step2_screen(d, &outside, &mb_s, s, cfg)?;
    let step3 = step3_screen(d, &shared, &mb_s, s, cfg)?;
    tests_performed += step2.tests_performed + step3.tests_performed;

    let mut m1 = step2.passed;
    let mut m2 = step3.passed;
    let mut witnesses = step2.witnesses;
    witnesses.extend(step3.witnesses);
    let mut rejected = step3.failures;

    if cfg.extended_search && !step2.failures.is_empty() {
        let retry: Vec<usize> = step2.failures.keys().copied().collect();
        let rescue = step3_screen(d, &retry, &mb_s, s, cfg)?;
        tests_performed += rescue.tests_performed;
        m2.extend(rescue.passed);
        witnesses.extend(rescue.witnesses);
        rejected.extend(rescue.failures);
    } else {
        rejected.extend(step2.failures);
    }
    m1.sort_unstable();
    m2.sort_unstable();

    Ok(FairSelection {
        sensitive: s,
        label: y,
        mb_y,
        mb_s,
        m1,
        m2,
        witnesses,
        rejected,
        empty_mb_y,
        tests_performed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn coins(n: usize, seed: u64) -> Vec<u32> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_range(0..2)).collect()
    }

    #[test]
    fn empty_candidates_are_vacuous() {
        let d = Dataset::from_codes(
            vec!["s".into(), "y".into(), "a".into()],
            vec![coins(100, 1), coins(100, 2), coins(100, 3)],
            vec![2, 2, 2],
            0,
            1,
        )
        .unwrap();
        let cfg = FairCfsConfig::default();
        assert_eq!(step2_screen(&d, &[], &[2], 0, &cfg).unwrap().passed, Vec::<usize>::new());
        assert!(step2_screen(&d, &[], &[2], 0, &cfg).unwrap().failures.is_empty());
        assert_eq!(step3_screen(&d, &[], &[2], 0, &cfg).unwrap(), Screen::default());
    }

    #[test]
    fn copy_of_sensitive_fails_step2() {
        let s = coins(2000, 4);
        let d = Dataset::from_codes(
            vec!["s".into(), "y".into(), "copy".into(), "z".into()],
            vec![s.clone(), coins(2000, 5), s, coins(2000, 6)],
            vec![2, 2, 2, 2],
            0,
            1,
        )
        .unwrap();
        let screen = step2_screen(&d, &[2], &[3], 0, &FairCfsConfig::default()).unwrap();
        assert!(screen.passed.is_empty());
        assert_eq!(screen.failures[&2], Rejection::DependentGivenMbs);
    }

    #[test]
    fn singleton_blanket_tests_only_empty_set() {
        let d = Dataset::from_codes(
            vec!["s".into(), "y".into(), "a".into()],
            vec![coins(5000, 7), coins(5000, 8), coins(5000, 9)],
            vec![2, 2, 2],
            0,
            1,
        )
        .unwrap();
        let screen = step3_screen(&d, &[2], &[2], 0, &FairCfsConfig::default()).unwrap();
        assert_eq!(screen.tests_performed, 1);
        assert_eq!(screen.witnesses.get(&2), Some(&vec![]));
    }

    #[test]
    fn rejects_overlapping_inputs() {
        let d = Dataset::from_codes(
            vec!["s".into(), "y".into(), "a".into()],
            vec![coins(50, 1), coins(50, 2), coins(50, 3)],
            vec![2, 2, 2],
            0,
            1,
        )
        .unwrap();
        let cfg = FairCfsConfig::default();
        assert!(step2_screen(&d, &[2], &[2], 0, &cfg).is_err());
        assert!(step2_screen(&d, &[0], &[2], 0, &cfg).is_err());
        assert!(step3_screen(&d, &[9], &[2], 0, &cfg).is_err());
    }

    #[test]
    fn unreliable_tests_reject() {
        // 30 rows cannot support a test given four ternary columns
        let mut cols = vec![coins(30, 1), coins(30, 2), coins(30, 3)];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..4 {
            cols.push((0..30).map(|_| rng.random_range(0..3)).collect());
        }
        let names = (0..7).map(|i| format!("c{i}")).collect();
        let d = Dataset::from_codes(names, cols, vec![2, 2, 2, 3, 3, 3, 3], 0, 1).unwrap();
        let cfg = FairCfsConfig::default();
        let screen = step2_screen(&d, &[2], &[3, 4, 5, 6], 0, &cfg).unwrap();
        assert_eq!(screen.failures[&2], Rejection::UnreliableTest);
    }
}
