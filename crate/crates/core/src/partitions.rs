//! Exact partition counts `p(k)`, `p*_ℓ(k)` and counts of distinct-part sets
//! with a capped sumset.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::BigCount;

/// Default cap on enumerated candidates.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Unrestricted partition count via the coin recurrence over part sizes.
pub fn p(k: u32) -> BigCount {
    let k = k as usize;
    let mut ways = vec![BigUint::zero(); k + 1];
    ways[0] = BigUint::one();
    for part in 1..=k {
        for s in part..=k {
            let prev = ways[s - part].clone();
            ways[s] += prev;
        }
    }
    ways.swap_remove(k)
}

/// Table of `p*_ℓ(k)` for `k ≤ max_k`, `ℓ ≤ max_ell`, from
/// `p*_ℓ(k) = p*_ℓ(k − ℓ) + p*_{ℓ−1}(k − ℓ)` (shift every part down by one;
/// a part that hits zero is dropped).
#[derive(Debug, Clone)]
pub struct DistinctPartitionTable {
    rows: Vec<Vec<BigCount>>,
}

impl DistinctPartitionTable {
    pub fn new(max_k: u32, max_ell: usize) -> Self {
        let max_k = max_k as usize;
        let mut rows = vec![vec![BigUint::zero(); max_k + 1]; max_ell + 1];
        rows[0][0] = BigUint::one();
        for ell in 1..=max_ell {
            for k in ell..=max_k {
                let v = &rows[ell][k - ell] + &rows[ell - 1][k - ell];
                rows[ell][k] = v;
            }
        }
        DistinctPartitionTable { rows }
    }

    pub fn get(&self, k: u32, ell: usize) -> BigCount {
        self.rows
            .get(ell)
            .and_then(|r| r.get(k as usize))
            .cloned()
            .unwrap_or_default()
    }

    /// Number of partitions of `k` into distinct parts of any count.
    pub fn distinct_total(&self, k: u32) -> BigCount {
        self.rows.iter().filter_map(|r| r.get(k as usize)).sum()
    }
}

/// `p*_ℓ(k)`: sets of `ℓ` distinct positive integers summing to `k`.
pub fn p_star(k: u32, ell: usize) -> BigCount {
    if ell as u64 * (ell as u64 + 1) / 2 > k as u64 {
        return BigUint::zero();
    }
    DistinctPartitionTable::new(k, ell).get(k, ell)
}

/// Sets `S` with `|S| = ell`, `Σ S = k`, optional cap on `|S + S|` and on the
/// largest part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionQuery {
    pub k: u32,
    pub ell: usize,
    pub sumset_cap: Option<usize>,
    pub universe_cap: Option<u32>,
}

impl PartitionQuery {
    pub fn new(k: u32, ell: usize) -> Self {
        PartitionQuery {
            k,
            ell,
            sumset_cap: None,
            universe_cap: None,
        }
    }

    pub fn with_sumset_cap(mut self, cap: usize) -> Self {
        self.sumset_cap = Some(cap);
        self
    }

    pub fn with_universe_cap(mut self, cap: u32) -> Self {
        self.universe_cap = Some(cap);
        self
    }
}

/// Calls `visit` on every set of `ell` distinct positive parts summing to
/// `k` with every part at most `max_part`. Parts are passed in descending order.
pub fn for_each_distinct_set<F>(k: u32, ell: usize, max_part: Option<u32>, mut visit: F)
where
    F: FnMut(&[u32]),
{
    let mut parts = Vec::with_capacity(ell);
    let cap = max_part.unwrap_or(k).min(k);
    descend(k as u64, ell as u64, cap as u64, &mut parts, &mut visit);
}

fn descend<F: FnMut(&[u32])>(rest: u64, count: u64, cap: u64, parts: &mut Vec<u32>, visit: &mut F) {
    if count == 0 {
        if rest == 0 {
            visit(parts);
        }
        return;
    }
    let below = count * (count - 1) / 2;
    // smallest feasible largest part: x + (x-1) + ... + (x-count+1) >= rest
    let lo = (rest + below).div_ceil(count).max(count);
    // the other count-1 parts need at least 1 + ... + (count-1)
    let hi = cap.min(rest.saturating_sub(below));
    let mut x = hi;
    while x >= lo && x >= 1 {
        parts.push(x as u32);
        descend(rest - x, count - 1, x - 1, parts, visit);
        parts.pop();
        x -= 1;
    }
}

/// Counts distinct sums `a + b` (`a`, `b` in `parts`, repetition allowed).
#[derive(Debug, Default)]
pub struct SumsetSizer {
    bits: Vec<u64>,
    touched: Vec<usize>,
}

impl SumsetSizer {
    pub fn size(&mut self, parts: &[u32]) -> usize {
        let mut distinct = 0;
        for (i, &a) in parts.iter().enumerate() {
            for &b in &parts[i..] {
                let s = (a + b) as usize;
                let w = s / 64;
                if w >= self.bits.len() {
                    self.bits.resize(w + 1, 0);
                }
                let bit = 1u64 << (s % 64);
                if self.bits[w] & bit == 0 {
                    if self.bits[w] == 0 {
                        self.touched.push(w);
                    }
                    self.bits[w] |= bit;
                    distinct += 1;
                }
            }
        }
        for w in self.touched.drain(..) {
            self.bits[w] = 0;
        }
        distinct
    }
}

fn check_budget(k: u32, ell: usize, budget: u64) -> Result<()> {
    let estimate = p_star(k, ell);
    if estimate > BigUint::from(budget) {
        return Err(Error::InstanceTooLarge {
            estimated: estimate,
            budget,
        });
    }
    Ok(())
}

/// Histogram `|S + S| → count` over the candidates of `(k, ell, universe_cap)`.
pub fn sumset_size_histogram(
    k: u32,
    ell: usize,
    universe_cap: Option<u32>,
    budget: u64,
) -> Result<BTreeMap<usize, u64>> {
    check_budget(k, ell, budget)?;
    let mut hist = BTreeMap::new();
    let mut sizer = SumsetSizer::default();
    for_each_distinct_set(k, ell, universe_cap, |parts| {
        *hist.entry(sizer.size(parts)).or_insert(0) += 1;
    });
    Ok(hist)
}

/// Exact count by enumerating all `p*_ℓ(k)` candidates and filtering on `|S + S|`.
pub fn count_restricted(q: &PartitionQuery, budget: u64) -> Result<BigCount> {
    let hist = sumset_size_histogram(q.k, q.ell, q.universe_cap, budget)?;
    let cap = q.sumset_cap.unwrap_or(usize::MAX);
    Ok(hist.range(..=cap).map(|(_, &c)| BigUint::from(c)).sum())
}

/// `m`-subsets of `[n]` with `|S + S| ≤ cap`, by a search that abandons a
/// branch once its partial sumset exceeds the cap.
pub fn count_small_sumset_sets(n: u32, m: usize, cap: usize, budget: u64) -> Result<BigCount> {
    let mut search = SmallSumsetSearch {
        n,
        m,
        cap,
        budget,
        visited: 0,
        count: 0,
        chosen: Vec::with_capacity(m),
        layers: vec![vec![0u64; (2 * n as usize) / 64 + 1]; m + 1],
    };
    if search.run(1, 0).is_err() {
        return Err(Error::InstanceTooLarge {
            estimated: crate::bounds::binom_exact(n as u64, m as u64),
            budget,
        });
    }
    Ok(BigUint::from(search.count))
}

struct SmallSumsetSearch {
    n: u32,
    m: usize,
    cap: usize,
    budget: u64,
    visited: u64,
    count: u64,
    chosen: Vec<u32>,
    /// Sumset bitmap of the chosen prefix at each depth.
    layers: Vec<Vec<u64>>,
}

impl SmallSumsetSearch {
    fn run(&mut self, next: u32, size: usize) -> std::result::Result<(), ()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(());
        }
        let depth = self.chosen.len();
        if depth == self.m {
            self.count += 1;
            return Ok(());
        }
        let needed = (self.m - depth) as u32;
        let mut x = next;
        while x + needed - 1 <= self.n {
            let (head, tail) = self.layers.split_at_mut(depth + 1);
            let layer = &mut tail[0];
            layer.copy_from_slice(&head[depth]);
            let mut grown = size;
            for &c in self.chosen.iter().chain(std::iter::once(&x)) {
                let s = (c + x) as usize;
                let bit = 1u64 << (s % 64);
                if layer[s / 64] & bit == 0 {
                    layer[s / 64] |= bit;
                    grown += 1;
                }
            }
            if grown <= self.cap {
                self.chosen.push(x);
                let r = self.run(x + 1, grown);
                self.chosen.pop();
                r?;
            }
            x += 1;
        }
        Ok(())
    }
}

/// Hardy–Ramanujan normalization `p(k) · 4k√3 · e^{−π√(2k/3)}`.
pub fn hardy_ramanujan_ratio(k: u32) -> f64 {
    let k_f = k as f64;
    let ln_p = crate::bounds::ln_big(&p(k));
    (ln_p + (4.0 * k_f * 3f64.sqrt()).ln() - std::f64::consts::PI * (2.0 * k_f / 3.0).sqrt()).exp()
}

/// Lossy conversion used by reports.
pub fn to_f64(c: &BigCount) -> f64 {
    c.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intset::IntSet;
    use crate::oracle;
    use crate::sumsets::sumset;

    fn big(v: u64) -> BigCount {
        BigUint::from(v)
    }

    #[test]
    fn p_examples() {
        assert_eq!(p(3), big(3));
        assert_eq!(p(0), big(1));
        assert_eq!(p(10), big(oracle::partitions_brute(10)));
        assert_eq!(p(10), big(42));
        for k in 0..=30 {
            assert_eq!(p(k), big(oracle::partitions_brute(k)), "k = {k}");
        }
    }

    #[test]
    fn p_star_examples() {
        assert_eq!(p_star(8, 3), big(2));
        for k in 1..=40 {
            assert_eq!(p_star(k, 1), big(1));
        }
        assert_eq!(p_star(5, 3), big(0));
        assert_eq!(p_star(0, 0), big(1));
        assert_eq!(p_star(4, 0), big(0));
    }

    #[test]
    fn p_star_matches_enumeration() {
        for k in 0..=40u32 {
            for ell in 0..=9usize {
                let brute = oracle::distinct_sets_brute(k, ell).len() as u64;
                assert_eq!(p_star(k, ell), big(brute), "k={k} ell={ell}");
                let mut walked = 0u64;
                for_each_distinct_set(k, ell, None, |parts| {
                    assert!(parts.windows(2).all(|w| w[0] > w[1]));
                    assert_eq!(parts.iter().sum::<u32>(), k);
                    walked += 1;
                });
                assert_eq!(walked, brute);
            }
        }
    }

    #[test]
    fn distinct_totals_match_enumeration() {
        let table = DistinctPartitionTable::new(80, 13);
        for k in 0..=80 {
            assert_eq!(table.distinct_total(k), big(oracle::distinct_partitions_brute(k)), "k={k}");
        }
    }

    #[test]
    fn restricted_examples() {
        assert_eq!(count_restricted(&PartitionQuery::new(12, 3), DEFAULT_BUDGET).unwrap(), big(7));
        assert_eq!(
            // the progressions {1,4,7}, {2,4,6}, {3,4,5}
            count_restricted(&PartitionQuery::new(12, 3).with_sumset_cap(5), DEFAULT_BUDGET).unwrap(),
            big(3)
        );
        assert_eq!(count_restricted(&PartitionQuery::new(0, 0), DEFAULT_BUDGET).unwrap(), big(1));
        assert_eq!(
            count_restricted(&PartitionQuery::new(12, 3).with_universe_cap(7), DEFAULT_BUDGET).unwrap(),
            big(5)
        );
    }

    #[test]
    fn restricted_budget_is_an_error() {
        let err = count_restricted(&PartitionQuery::new(200, 6), 1000).unwrap_err();
        assert!(matches!(err, Error::InstanceTooLarge { budget: 1000, .. }));
    }

    #[test]
    fn restricted_is_monotone_in_cap() {
        for (k, ell) in [(30, 4), (45, 5), (28, 3)] {
            let full = p_star(k, ell);
            let mut prev = big(0);
            for cap in 0..=(ell * (ell + 1) / 2 + 1) {
                let c = count_restricted(&PartitionQuery::new(k, ell).with_sumset_cap(cap), DEFAULT_BUDGET).unwrap();
                assert!(c >= prev);
                prev = c;
            }
            assert_eq!(prev, full);
        }
    }

    #[test]
    fn sizer_matches_sumset() {
        let mut sizer = SumsetSizer::default();
        for_each_distinct_set(30, 4, None, |parts| {
            let s = IntSet::from_members(30, parts.iter().map(|&x| x as u64)).unwrap();
            assert_eq!(sizer.size(parts), sumset(&s, &s).len());
        });
    }

    #[test]
    fn small_sumset_examples() {
        assert_eq!(count_small_sumset_sets(6, 2, 3, DEFAULT_BUDGET).unwrap(), big(15));
        assert_eq!(count_small_sumset_sets(4, 3, 5, DEFAULT_BUDGET).unwrap(), big(2));
        assert_eq!(count_small_sumset_sets(4, 3, 4, DEFAULT_BUDGET).unwrap(), big(0));
        assert!(count_small_sumset_sets(40, 10, 1000, 100).is_err());
    }

    #[test]
    fn small_sumset_matches_filter() {
        for n in 1..=12u32 {
            for m in 0..=5usize {
                for cap in [3, 5, 8, 12, 30] {
                    let brute = oracle::subsets_of_size(n, m)
                        .filter(|s| sumset(s, s).len() <= cap)
                        .count() as u64;
                    assert_eq!(count_small_sumset_sets(n, m, cap, DEFAULT_BUDGET).unwrap(), big(brute));
                }
            }
        }
    }

    #[test]
    fn hardy_ramanujan_window() {
        for k in (50..=500).step_by(25) {
            let r = hardy_ramanujan_ratio(k);
            assert!((0.8..=1.25).contains(&r), "k={k} ratio={r}");
        }
    }
}
