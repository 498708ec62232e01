//! G² conditional-independence testing over categorical columns.

mod gamma;

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

pub use gamma::{chi_square_sf, gamma_q, ln_gamma};

use crate::data::Dataset;
use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.01;
pub const DEFAULT_RELIABILITY_FACTOR: f64 = 10.0;

/// How a test that fails the sample-size heuristic is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnreliablePolicy {
    Independent,
    Dependent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CiConfig {
    pub alpha: f64,
    /// A test is reliable iff `n >= reliability_factor * df`, where `df` is the
    /// structural `(arity_x - 1)(arity_y - 1) * n_z_configs`.
    pub reliability_factor: f64,
    pub unreliable_policy: UnreliablePolicy,
}

impl Default for CiConfig {
    fn default() -> Self {
        CiConfig {
            alpha: DEFAULT_ALPHA,
            reliability_factor: DEFAULT_RELIABILITY_FACTOR,
            unreliable_policy: UnreliablePolicy::Independent,
        }
    }
}

impl CiConfig {
    pub fn with_policy(self, unreliable_policy: UnreliablePolicy) -> Self {
        CiConfig {
            unreliable_policy,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CiResult {
    pub g2: f64,
    pub dof: u64,
    pub p_value: f64,
    pub independent: bool,
    pub reliable: bool,
    pub alpha: f64,
}

/// Joint counts of (x, y) within each observed configuration of the
/// conditioning set.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    pub arity_x: usize,
    pub arity_y: usize,
    /// Number of structurally possible conditioning configurations.
    pub n_z_configs: u64,
    /// Configuration id of each stored slice, ascending.
    z_keys: Vec<u64>,
    /// `counts[(slice * arity_x + x) * arity_y + y]`.
    counts: Vec<u64>,
    pub n: u64,
}

impl ContingencyTable {
    /// Count for cell (x, y) under the conditioning configuration `z_config`
    /// (mixed-radix over the conditioning columns, first column most significant).
    pub fn count(&self, x: usize, y: usize, z_config: u64) -> u64 {
        match self.z_keys.binary_search(&z_config) {
            Ok(s) => self.counts[(s * self.arity_x + x) * self.arity_y + y],
            Err(_) => 0,
        }
    }

    /// Stored slices as `(config id, arity_x × arity_y counts)`.
    pub fn slices(&self) -> impl Iterator<Item = (u64, &[u64])> {
        let cell = self.arity_x * self.arity_y;
        self.z_keys
            .iter()
            .copied()
            .zip(self.counts.chunks(cell.max(1)))
    }

    /// Unreduced degrees of freedom, `(arity_x - 1)(arity_y - 1) * n_z_configs`.
    pub fn structural_dof(&self) -> u64 {
        ((self.arity_x.saturating_sub(1) * self.arity_y.saturating_sub(1)) as u64)
            .saturating_mul(self.n_z_configs)
            .max(1)
    }

    /// Builds a table from explicit slices (each `arity_x × arity_y`, row-major).
    pub fn from_slices(arity_x: usize, arity_y: usize, slices: &[Vec<Vec<u64>>]) -> Self {
        let mut counts = Vec::with_capacity(slices.len() * arity_x * arity_y);
        for slice in slices {
            assert_eq!(slice.len(), arity_x);
            for row in slice {
                assert_eq!(row.len(), arity_y);
                counts.extend_from_slice(row);
            }
        }
        let n = counts.iter().sum();
        ContingencyTable {
            arity_x,
            arity_y,
            n_z_configs: slices.len() as u64,
            z_keys: (0..slices.len() as u64).collect(),
            counts,
            n,
        }
    }
}

fn validate_query(d: &Dataset, x: usize, y: usize, z: &[usize]) -> Result<()> {
    d.check_column(x)?;
    d.check_column(y)?;
    for &c in z {
        d.check_column(c)?;
    }
    if x == y {
        return Err(Error::InvalidArgument(format!(
            "tested variables must differ (both are column {x})"
        )));
    }
    if z.contains(&x) || z.contains(&y) {
        return Err(Error::InvalidArgument(
            "conditioning set must not contain a tested variable".into(),
        ));
    }
    for (i, a) in z.iter().enumerate() {
        if z[i + 1..].contains(a) {
            return Err(Error::InvalidArgument(format!(
                "column {a} repeated in conditioning set"
            )));
        }
    }
    Ok(())
}

pub fn contingency(d: &Dataset, x: usize, y: usize, z: &[usize]) -> Result<ContingencyTable> {
    validate_query(d, x, y, z)?;
    let ax = d.arity(x) as usize;
    let ay = d.arity(y) as usize;
    let n = d.n_rows();

    let mut n_z_configs: u64 = 1;
    for &c in z {
        n_z_configs = n_z_configs
            .checked_mul(u64::from(d.arity(c)))
            .ok_or_else(|| Error::InvalidArgument("conditioning set too large".into()))?;
    }

    let mut keys = vec![0u64; n];
    for &c in z {
        let arity = u64::from(d.arity(c));
        for (k, &code) in keys.iter_mut().zip(d.column(c)) {
            *k = *k * arity + u64::from(code);
        }
    }

    let cell = ax * ay;
    let xs = d.column(x);
    let ys = d.column(y);
    let dense_limit = (2 * n + 1024) as u64;

    let (z_keys, counts) = if n_z_configs.saturating_mul(cell as u64) <= dense_limit {
        let mut counts = vec![0u64; n_z_configs as usize * cell];
        for r in 0..n {
            counts[keys[r] as usize * cell + xs[r] as usize * ay + ys[r] as usize] += 1;
        }
        // keep only non-empty slices
        let mut z_keys = Vec::new();
        let mut kept = Vec::new();
        for (s, chunk) in counts.chunks(cell).enumerate() {
            if chunk.iter().any(|&c| c > 0) {
                z_keys.push(s as u64);
                kept.extend_from_slice(chunk);
            }
        }
        (z_keys, kept)
    } else {
        let mut slot: HashMap<u64, usize> = HashMap::new();
        let mut sparse: Vec<u64> = Vec::new();
        let mut order: Vec<u64> = Vec::new();
        for r in 0..n {
            let s = *slot.entry(keys[r]).or_insert_with(|| {
                order.push(keys[r]);
                sparse.extend(std::iter::repeat_n(0, cell));
                order.len() - 1
            });
            sparse[s * cell + xs[r] as usize * ay + ys[r] as usize] += 1;
        }
        let mut idx: Vec<usize> = (0..order.len()).collect();
        idx.sort_by_key(|&i| order[i]);
        let z_keys = idx.iter().map(|&i| order[i]).collect();
        let mut counts = Vec::with_capacity(sparse.len());
        for &i in &idx {
            counts.extend_from_slice(&sparse[i * cell..(i + 1) * cell]);
        }
        (z_keys, counts)
    };

    Ok(ContingencyTable {
        arity_x: ax,
        arity_y: ay,
        n_z_configs,
        z_keys,
        counts,
        n: n as u64,
    })
}

/// Likelihood-ratio statistic `G² = 2 Σ O ln(O / E)` with expected counts from
/// the per-slice margins.
///
/// Each non-empty slice contributes `(r - 1)(c - 1)` degrees of freedom, where
/// `r` and `c` count the non-zero row and column margins of that slice. Empty
/// slices contribute nothing. The total is at least 1.
pub fn g2_statistic(t: &ContingencyTable) -> (f64, u64) {
    let (ax, ay) = (t.arity_x, t.arity_y);
    let mut g2 = 0.0;
    let mut dof: u64 = 0;
    let mut row = vec![0u64; ax];
    let mut col = vec![0u64; ay];
    for (_, slice) in t.slices() {
        row.iter_mut().for_each(|v| *v = 0);
        col.iter_mut().for_each(|v| *v = 0);
        for xi in 0..ax {
            for yi in 0..ay {
                let o = slice[xi * ay + yi];
                row[xi] += o;
                col[yi] += o;
            }
        }
        let total: u64 = row.iter().sum();
        if total == 0 {
            continue;
        }
        let total = total as f64;
        for xi in 0..ax {
            for yi in 0..ay {
                let o = slice[xi * ay + yi];
                if o > 0 {
                    let o = o as f64;
                    g2 += o * (o * total / (row[xi] as f64 * col[yi] as f64)).ln();
                }
            }
        }
        let nr = row.iter().filter(|&&v| v > 0).count() as u64;
        let nc = col.iter().filter(|&&v| v > 0).count() as u64;
        dof += nr.saturating_sub(1) * nc.saturating_sub(1);
    }
    ((2.0 * g2).max(0.0), dof.max(1))
}

/// Decision for a statistic `g2` on `dof` degrees of freedom, from a table of
/// `n` samples whose structural degrees of freedom are `structural_dof`.
pub fn decide(g2: f64, dof: u64, structural_dof: u64, n: u64, cfg: &CiConfig) -> CiResult {
    let p_value = chi_square_sf(g2, dof);
    let reliable = n as f64 >= cfg.reliability_factor * structural_dof as f64;
    let independent = if reliable {
        p_value > cfg.alpha
    } else {
        cfg.unreliable_policy == UnreliablePolicy::Independent
    };
    CiResult {
        g2,
        dof,
        p_value,
        independent,
        reliable,
        alpha: cfg.alpha,
    }
}

/// Tests `x ⫫ y | z` with the G² statistic.
pub fn is_independent(
    d: &Dataset,
    x: usize,
    y: usize,
    z: &[usize],
    cfg: &CiConfig,
) -> Result<CiResult> {
    let table = contingency(d, x, y, z)?;
    let (g2, dof) = g2_statistic(&table);
    Ok(decide(g2, dof, table.structural_dof(), table.n, cfg))
}

/// A dataset bound to a test configuration, counting the tests it runs.
#[derive(Debug)]
pub struct CiTester<'a> {
    data: &'a Dataset,
    cfg: CiConfig,
    performed: AtomicUsize,
}

impl<'a> CiTester<'a> {
    pub fn new(data: &'a Dataset, cfg: CiConfig) -> Self {
        CiTester {
            data,
            cfg,
            performed: AtomicUsize::new(0),
        }
    }

    pub fn data(&self) -> &'a Dataset {
        self.data
    }

    pub fn config(&self) -> &CiConfig {
        &self.cfg
    }

    pub fn test(&self, x: usize, y: usize, z: &[usize]) -> Result<CiResult> {
        self.performed.fetch_add(1, Ordering::Relaxed);
        is_independent(self.data, x, y, z, &self.cfg)
    }

    pub fn tests_performed(&self) -> usize {
        self.performed.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dataset(columns: Vec<Vec<u32>>) -> Dataset {
        let m = columns.len();
        let names = (0..m).map(|j| format!("c{j}")).collect();
        let arities = columns
            .iter()
            .map(|c| c.iter().copied().max().unwrap_or(0).max(1) + 1)
            .collect();
        Dataset::from_codes(names, columns, arities, 0, 1).unwrap()
    }

    #[test]
    fn contingency_without_conditioning() {
        let d = dataset(vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]]);
        let t = contingency(&d, 0, 1, &[]).unwrap();
        assert_eq!(t.n, 4);
        assert_eq!(t.n_z_configs, 1);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(t.count(x, y, 0), 1);
            }
        }
    }

    #[test]
    fn contingency_with_one_binary_conditioner() {
        let d = dataset(vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]);
        let t = contingency(&d, 0, 1, &[2]).unwrap();
        assert_eq!(t.n_z_configs, 2);
        assert_eq!(
            (t.count(0, 0, 0), t.count(0, 1, 0), t.count(1, 0, 0), t.count(1, 1, 0)),
            (1, 1, 0, 0)
        );
        assert_eq!(
            (t.count(0, 0, 1), t.count(0, 1, 1), t.count(1, 0, 1), t.count(1, 1, 1)),
            (0, 0, 1, 1)
        );
    }

    #[test]
    fn contingency_rejects_bad_queries() {
        let d = dataset(vec![vec![0, 1], vec![1, 0], vec![0, 0]]);
        assert!(contingency(&d, 0, 0, &[]).is_err());
        assert!(contingency(&d, 0, 1, &[0]).is_err());
        assert!(contingency(&d, 0, 1, &[2, 2]).is_err());
        assert!(contingency(&d, 0, 5, &[]).is_err());
    }

    #[test]
    fn g2_closed_forms() {
        let t = ContingencyTable::from_slices(2, 2, &[vec![vec![5, 5], vec![5, 5]]]);
        let (g2, dof) = g2_statistic(&t);
        assert!(g2.abs() < 1e-12);
        assert_eq!(dof, 1);

        let t = ContingencyTable::from_slices(2, 2, &[vec![vec![10, 0], vec![0, 10]]]);
        let (g2, dof) = g2_statistic(&t);
        assert!((g2 - 40.0 * 2f64.ln()).abs() < 1e-9);
        assert!((g2 - 27.725_887_222_397_812).abs() < 1e-9);
        assert_eq!(dof, 1);

        let slice = vec![vec![10, 0], vec![0, 10]];
        let t = ContingencyTable::from_slices(2, 2, &[slice.clone(), slice]);
        let (g2, dof) = g2_statistic(&t);
        assert!((g2 - 80.0 * 2f64.ln()).abs() < 1e-9);
        assert!((g2 - 55.451_774_444_795_62).abs() < 1e-9);
        assert_eq!(dof, 2);
    }

    #[test]
    fn g2_degenerate_tables() {
        // empty slice skipped, constant-x slice contributes no dof
        let t = ContingencyTable::from_slices(
            2,
            2,
            &[vec![vec![0, 0], vec![0, 0]], vec![vec![3, 4], vec![0, 0]]],
        );
        assert_eq!(g2_statistic(&t), (0.0, 1));
    }

    #[test]
    fn perfect_dependence_is_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<u32> = (0..1000).map(|_| rng.random_range(0..2)).collect();
        let d = dataset(vec![x.clone(), x]);
        let r = is_independent(&d, 0, 1, &[], &CiConfig::default()).unwrap();
        assert!(!r.independent);
        assert!(r.reliable);
    }

    #[test]
    fn independent_coins_usually_pass() {
        let mut passes = 0;
        for seed in 0..200u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<u32> = (0..10_000).map(|_| rng.random_range(0..2)).collect();
            let y: Vec<u32> = (0..10_000).map(|_| rng.random_range(0..2)).collect();
            let d = dataset(vec![x, y]);
            if is_independent(&d, 0, 1, &[], &CiConfig::default()).unwrap().independent {
                passes += 1;
            }
        }
        // 1 - alpha = 0.99; 200 trials, binomial sd ~1.4
        assert!(passes >= 193, "passes = {passes}");
    }

    #[test]
    fn sparse_conditioning_is_unreliable() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut cols: Vec<Vec<u32>> = Vec::new();
        for _ in 0..8 {
            cols.push((0..50).map(|_| rng.random_range(0..2)).collect());
        }
        let d = dataset(cols);
        let z: Vec<usize> = (2..8).collect();
        let t = contingency(&d, 0, 1, &z).unwrap();
        assert_eq!(t.n_z_configs, 64);
        let r = is_independent(&d, 0, 1, &z, &CiConfig::default()).unwrap();
        assert!(!r.reliable, "{r:?}");
        assert!(r.independent);
        let r = is_independent(
            &d,
            0,
            1,
            &z,
            &CiConfig::default().with_policy(UnreliablePolicy::Dependent),
        )
        .unwrap();
        assert!(!r.independent);
    }

    #[test]
    fn sparse_and_dense_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cols: Vec<Vec<u32>> = (0..12)
            .map(|_| (0..300).map(|_| rng.random_range(0..3)).collect())
            .collect();
        let d = dataset(cols);
        // 3^10 configurations forces the hashed path
        let z: Vec<usize> = (2..12).collect();
        let t = contingency(&d, 0, 1, &z).unwrap();
        let total: u64 = t.slices().map(|(_, s)| s.iter().sum::<u64>()).sum();
        assert_eq!(total, 300);
        let keys: Vec<u64> = t.slices().map(|(k, _)| k).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        // brute-force recount of every cell
        for r in 0..300 {
            let key = z
                .iter()
                .fold(0u64, |acc, &c| acc * 3 + u64::from(d.column(c)[r]));
            let expected = (0..300)
                .filter(|&q| {
                    z.iter().fold(0u64, |acc, &c| acc * 3 + u64::from(d.column(c)[q])) == key
                        && d.column(0)[q] == d.column(0)[r]
                        && d.column(1)[q] == d.column(1)[r]
                })
                .count() as u64;
            assert_eq!(
                t.count(d.column(0)[r] as usize, d.column(1)[r] as usize, key),
                expected
            );
        }
    }

    proptest::proptest! {
        #[test]
        fn symmetric_and_doubling(
            rows in proptest::collection::vec((0u32..3, 0u32..2, 0u32..2), 5..120)
        ) {
            let x: Vec<u32> = rows.iter().map(|r| r.0).collect();
            let y: Vec<u32> = rows.iter().map(|r| r.1).collect();
            let z: Vec<u32> = rows.iter().map(|r| r.2).collect();
            let d = Dataset::from_codes(
                vec!["x".into(), "y".into(), "z".into()],
                vec![x.clone(), y.clone(), z.clone()],
                vec![3, 2, 2], 0, 1,
            ).unwrap();
            let (g_xy, dof_xy) = g2_statistic(&contingency(&d, 0, 1, &[2]).unwrap());
            let (g_yx, dof_yx) = g2_statistic(&contingency(&d, 1, 0, &[2]).unwrap());
            proptest::prop_assert!((g_xy - g_yx).abs() <= 1e-9 * g_xy.max(1.0));
            proptest::prop_assert_eq!(dof_xy, dof_yx);

            let dup = |v: &Vec<u32>| v.iter().chain(v.iter()).copied().collect::<Vec<_>>();
            let d2 = Dataset::from_codes(
                vec!["x".into(), "y".into(), "z".into()],
                vec![dup(&x), dup(&y), dup(&z)],
                vec![3, 2, 2], 0, 1,
            ).unwrap();
            let (g_dup, dof_dup) = g2_statistic(&contingency(&d2, 0, 1, &[2]).unwrap());
            proptest::prop_assert!((g_dup - 2.0 * g_xy).abs() <= 1e-9 * g_dup.max(1.0));
            proptest::prop_assert_eq!(dof_dup, dof_xy);
        }

        #[test]
        fn decision_monotone_in_g2(a in 0.0f64..60.0, b in 0.0f64..60.0, dof in 1u64..10) {
            let cfg = CiConfig::default();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let r_lo = decide(lo, dof, dof, 10_000, &cfg);
            let r_hi = decide(hi, dof, dof, 10_000, &cfg);
            proptest::prop_assert!(r_lo.independent || !r_hi.independent);
            proptest::prop_assert!((0.0..=1.0).contains(&r_lo.p_value));
        }
    }
}
