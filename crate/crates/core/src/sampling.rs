//! Rejection sampling of uniform sum-free `m`-subsets of `[n]` and the
//! empirical `(ℓ, k)` distributions built from them.
//!
//! Worker `w` of `W` draws from a ChaCha8 stream seeded by `seed` on stream
//! `w` and produces `count / W` samples (the first `count % W` workers take
//! one extra). Samples are concatenated in worker order, so a report is a
//! pure function of `(n, m, count, seed, W)`.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::bounds::{binom_exact, ln_big};
use crate::enumeration::{count_sum_free, enumerate_sum_free, stratified_counts, CountQuery, SearchConfig};
use crate::error::{Error, Result};
use crate::intset::IntSet;
use crate::sets::{statistics_of, Convention, HalfInt};

/// Smallest acceptance rate the rejection sampler will attempt.
pub const MIN_ACCEPTANCE: f64 = 1e-6;
/// Node budget for the exact count that calibrates acceptance.
pub const EXACT_ACCEPTANCE_BUDGET: u64 = 50_000_000;
pub const PILOT_DRAWS: u64 = 2_000_000;
/// Quantile levels reported for `ℓ` and `k`.
pub const QUANTILE_LEVELS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AcceptanceSource {
    Exact,
    Pilot,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Acceptance {
    pub rate: f64,
    pub source: AcceptanceSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub n: u32,
    pub m: usize,
    pub sample_count: u64,
    pub seed: u64,
    pub workers: usize,
    pub convention: Convention,
    pub acceptance: Acceptance,
    /// `(ℓ, k, I ⊆ O_n) → number of samples`.
    pub histogram: BTreeMap<(usize, HalfInt, bool), u64>,
    /// `(level, value)` pairs.
    pub ell_quantiles: Vec<(f64, f64)>,
    pub k_quantiles: Vec<(f64, f64)>,
}

impl SampleReport {
    pub fn mass(&self) -> u64 {
        self.histogram.values().sum()
    }

    /// Empirical law of `ℓ`.
    pub fn ell_distribution(&self) -> BTreeMap<usize, f64> {
        let total = self.sample_count.max(1) as f64;
        let mut out = BTreeMap::new();
        for ((ell, _, _), c) in &self.histogram {
            *out.entry(*ell).or_insert(0.0) += *c as f64 / total;
        }
        out
    }

    /// Empirical law of `(ℓ, k, odd)`.
    pub fn joint_distribution(&self) -> BTreeMap<(usize, HalfInt, bool), f64> {
        let total = self.sample_count.max(1) as f64;
        self.histogram.iter().map(|(k, c)| (*k, *c as f64 / total)).collect()
    }
}

pub(crate) fn mask_is_sum_free(mask: u128, conv: Convention) -> bool {
    let mut rest = mask;
    while rest != 0 {
        let x = rest.trailing_zeros();
        rest &= rest - 1;
        // bits z with z ∈ I and z − x ∈ I; bit 2x is the witness y = x
        let mut hits = mask & (mask << x);
        if !conv.allow_equal_summands && 2 * x <= 127 {
            hits &= !(1u128 << (2 * x));
        }
        if hits != 0 {
            return false;
        }
    }
    true
}

fn draw_mask(rng: &mut ChaCha8Rng, n: u32, m: usize) -> u128 {
    index::sample(rng, n as usize, m)
        .into_iter()
        .fold(0u128, |acc, i| acc | 1u128 << (i + 1))
}

fn check_shape(n: u32, m: usize) -> Result<()> {
    if n == 0 || n > 127 {
        return Err(Error::invalid(format!("sampling needs 1 ≤ n ≤ 127, got {n}")));
    }
    if m > n as usize {
        return Err(Error::invalid(format!("m = {m} exceeds n = {n}")));
    }
    Ok(())
}

/// Fraction of uniform `m`-subsets of `[n]` that are sum-free: exact when
/// the count fits in the search budget, else from a seeded pilot run.
pub fn estimate_acceptance(n: u32, m: usize, conv: Convention, seed: u64) -> Result<Acceptance> {
    check_shape(n, m)?;
    let q = CountQuery::new(n).size(m).convention(conv);
    match count_sum_free(&q, &SearchConfig::default().with_budget(EXACT_ACCEPTANCE_BUDGET)) {
        Ok(res) => {
            let total = binom_exact(n as u64, m as u64);
            let rate = if res.total == 0u32.into() {
                0.0
            } else {
                (ln_big(&res.total) - ln_big(&total)).exp()
            };
            Ok(Acceptance { rate, source: AcceptanceSource::Exact })
        }
        Err(e) if e.is_budget() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
            let hits = (0..PILOT_DRAWS)
                .filter(|_| mask_is_sum_free(draw_mask(&mut rng, n, m), conv))
                .count();
            Ok(Acceptance { rate: hits as f64 / PILOT_DRAWS as f64, source: AcceptanceSource::Pilot })
        }
        Err(e) => Err(e),
    }
}

/// Draws `count` uniform sum-free `m`-subsets of `[n]` as bitmasks (bit `x` for element `x`).
pub fn draw_sum_free(n: u32, m: usize, count: u64, seed: u64, workers: usize, conv: Convention) -> Result<Vec<u128>> {
    check_shape(n, m)?;
    let acceptance = estimate_acceptance(n, m, conv, seed)?;
    if acceptance.rate < MIN_ACCEPTANCE {
        return Err(Error::SamplingInfeasible { acceptance: acceptance.rate, threshold: MIN_ACCEPTANCE });
    }
    Ok(draw_accepted(n, m, count, seed, workers, conv))
}

fn draw_accepted(n: u32, m: usize, count: u64, seed: u64, workers: usize, conv: Convention) -> Vec<u128> {
    let workers = workers.max(1);
    let quota = |w: usize| count / workers as u64 + u64::from((w as u64) < count % workers as u64);
    let chunks: Vec<Vec<u128>> = (0..workers)
        .into_par_iter()
        .map(|w| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(w as u64);
            let want = quota(w) as usize;
            let mut out = Vec::with_capacity(want);
            while out.len() < want {
                let mask = draw_mask(&mut rng, n, m);
                if mask_is_sum_free(mask, conv) {
                    out.push(mask);
                }
            }
            out
        })
        .collect();
    chunks.concat()
}

fn quantiles(mut values: Vec<f64>) -> Vec<(f64, f64)> {
    values.sort_by(f64::total_cmp);
    QUANTILE_LEVELS
        .iter()
        .map(|&q| {
            if values.is_empty() {
                return (q, f64::NAN);
            }
            // nearest rank
            let rank = ((q * values.len() as f64).ceil() as usize).clamp(1, values.len());
            (q, values[rank - 1])
        })
        .collect()
}

pub fn sample_uniform(n: u32, m: usize, count: u64, seed: u64) -> Result<SampleReport> {
    sample_uniform_with(n, m, count, seed, 1, Convention::default())
}

pub fn sample_uniform_with(
    n: u32,
    m: usize,
    count: u64,
    seed: u64,
    workers: usize,
    conv: Convention,
) -> Result<SampleReport> {
    check_shape(n, m)?;
    let acceptance = estimate_acceptance(n, m, conv, seed)?;
    if acceptance.rate < MIN_ACCEPTANCE {
        return Err(Error::SamplingInfeasible { acceptance: acceptance.rate, threshold: MIN_ACCEPTANCE });
    }
    let masks = draw_accepted(n, m, count, seed, workers, conv);
    let mut histogram: BTreeMap<(usize, HalfInt, bool), u64> = BTreeMap::new();
    let mut ells = Vec::with_capacity(masks.len());
    let mut ks = Vec::with_capacity(masks.len());
    for &mask in &masks {
        let st = statistics_of(&IntSet::from_mask(n, mask), n);
        *histogram.entry((st.ell, st.k, st.odd_flag)).or_default() += 1;
        ells.push(st.ell as f64);
        ks.push(st.k.to_f64());
    }
    Ok(SampleReport {
        n,
        m,
        sample_count: count,
        seed,
        workers: workers.max(1),
        convention: conv,
        acceptance,
        histogram,
        ell_quantiles: quantiles(ells),
        k_quantiles: quantiles(ks),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    /// Critical value at the requested level.
    pub critical: f64,
    pub level: f64,
}

impl ChiSquareOutcome {
    pub fn passes(&self) -> bool {
        self.statistic < self.critical
    }
}

/// Pearson goodness-of-fit of `samples` against the uniform law on all
/// sum-free `m`-subsets of `[n]`, obtained by exact enumeration.
pub fn chi_square_uniformity(n: u32, m: usize, samples: &[u128], conv: Convention, level: f64) -> Result<ChiSquareOutcome> {
    let q = CountQuery::new(n).size(m).convention(conv);
    let support: Vec<u128> = enumerate_sum_free(&q, 1_000_000, &SearchConfig::default())?
        .map(|s| s.to_mask().expect("n < 128"))
        .collect();
    if support.len() < 2 {
        return Err(Error::invalid("chi-square needs at least two sum-free sets"));
    }
    let mut observed: BTreeMap<u128, u64> = support.iter().map(|&s| (s, 0)).collect();
    for s in samples {
        match observed.get_mut(s) {
            Some(c) => *c += 1,
            None => return Err(Error::invalid(format!("sample {} is outside the support", IntSet::from_mask(n, *s)))),
        }
    }
    let expected = samples.len() as f64 / support.len() as f64;
    let statistic = observed
        .values()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    let dof = support.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::invalid(e.to_string()))?;
    Ok(ChiSquareOutcome { statistic, degrees_of_freedom: dof, critical: dist.inverse_cdf(level), level })
}

/// How `m` is chosen from `n` in a trend table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "param", rename_all = "lowercase")]
pub enum SizeRule {
    /// `m = c`.
    Const(usize),
    /// `m = ⌈c·√n⌉`.
    Sqrt(f64),
    /// `m = ⌈f·n⌉`.
    Fraction(f64),
    /// `m = ⌈n/2⌉`.
    Half,
}

impl SizeRule {
    pub fn size_for(&self, n: u32) -> usize {
        let m = match *self {
            SizeRule::Const(c) => c,
            SizeRule::Sqrt(c) => (c * (n as f64).sqrt()).ceil() as usize,
            SizeRule::Fraction(f) => (f * n as f64).ceil() as usize,
            SizeRule::Half => n.div_ceil(2) as usize,
        };
        m.min(n as usize)
    }

    /// `const:6`, `sqrt`, `sqrt:1.5`, `frac:0.25`, `half`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let num = |default: Option<f64>| -> Result<f64> {
            match arg {
                Some(a) => a.parse::<f64>().map_err(|_| Error::invalid(format!("bad size rule parameter `{a}`"))),
                None => default.ok_or_else(|| Error::invalid(format!("size rule `{name}` needs a parameter"))),
            }
        };
        match name {
            "const" => Ok(SizeRule::Const(num(None)? as usize)),
            "sqrt" => Ok(SizeRule::Sqrt(num(Some(1.0))?)),
            "frac" => Ok(SizeRule::Fraction(num(None)?)),
            "half" => Ok(SizeRule::Half),
            _ => Err(Error::invalid(format!("unknown size rule `{s}`"))),
        }
    }
}

/// Heuristic bands for the scaled medians; they stand in for the slowly
/// growing slack in the structure statements and carry no finite-n guarantee.
pub const ELL_WINDOW: (f64, f64) = (0.0, 4.0);
pub const K_WINDOW: (f64, f64) = (0.0, 4.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub n: u32,
    pub m: usize,
    pub exact: bool,
    /// Law of `ℓ(I)` over sets not inside the odds.
    pub ell_distribution: BTreeMap<usize, f64>,
    pub odd_fraction: f64,
    /// Medians of `ℓ·m/n` and `k·m³/n³` over sets not inside the odds.
    pub ell_scaled_median: f64,
    pub k_scaled_median: f64,
    pub in_window: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendTable {
    pub rule: SizeRule,
    pub seed: u64,
    pub rows: Vec<TrendRow>,
    pub ell_window: (f64, f64),
    pub k_window: (f64, f64),
    /// Every row's medians fall inside the windows.
    pub stable: bool,
}

/// Weighted median of `(value, weight)` pairs; lower median on ties.
fn weighted_median(mut items: Vec<(f64, f64)>) -> f64 {
    let total: f64 = items.iter().map(|(_, w)| w).sum();
    if total <= 0.0 {
        return f64::NAN;
    }
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut acc = 0.0;
    for (v, w) in &items {
        acc += w;
        if acc >= total / 2.0 {
            return *v;
        }
    }
    items.last().map_or(f64::NAN, |x| x.0)
}

/// Largest `n` for which trend rows use exact strata instead of samples.
pub const EXACT_TREND_LIMIT: u32 = 40;

fn trend_row(n: u32, m: usize, cells: &BTreeMap<(usize, HalfInt, bool), f64>, exact: bool) -> TrendRow {
    let scale_l = m as f64 / n as f64;
    let scale_k = scale_l.powi(3);
    let mut ell_distribution = BTreeMap::new();
    let mut odd = 0.0;
    let mut ell_items = Vec::new();
    let mut k_items = Vec::new();
    let total: f64 = cells.values().sum();
    for (&(ell, k, is_odd), &w) in cells {
        if is_odd {
            odd += w;
            continue;
        }
        *ell_distribution.entry(ell).or_insert(0.0) += w;
        ell_items.push((ell as f64 * scale_l, w));
        k_items.push((k.to_f64() * scale_k, w));
    }
    let rest: f64 = ell_distribution.values().sum();
    if rest > 0.0 {
        ell_distribution.values_mut().for_each(|v| *v /= rest);
    }
    let ell_scaled_median = weighted_median(ell_items);
    let k_scaled_median = weighted_median(k_items);
    let inside = |v: f64, (lo, hi): (f64, f64)| v.is_nan() || (lo..=hi).contains(&v);
    TrendRow {
        n,
        m,
        exact,
        ell_distribution,
        odd_fraction: if total > 0.0 { odd / total } else { 0.0 },
        ell_scaled_median,
        k_scaled_median,
        in_window: inside(ell_scaled_median, ELL_WINDOW) && inside(k_scaled_median, K_WINDOW),
    }
}

/// Per-`n` structure of sum-free `m`-sets with `m = rule(n)`: exact strata
/// for `n ≤ EXACT_TREND_LIMIT` when the search fits `cfg`, otherwise samples.
pub fn structure_trend(n_list: &[u32], rule: SizeRule, count: u64, seed: u64, cfg: &SearchConfig) -> Result<TrendTable> {
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let m = rule.size_for(n);
        let exact = if n <= EXACT_TREND_LIMIT {
            match stratified_counts(n, m, Convention::default(), cfg) {
                Ok(t) => Some(t),
                Err(e) if e.is_budget() => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        let row = match exact {
            Some(t) => {
                let total = t.total.to_f64().unwrap_or(f64::INFINITY);
                let cells = t
                    .cells
                    .iter()
                    .map(|(k, c)| (*k, c.to_f64().unwrap_or(f64::INFINITY) / total))
                    .collect();
                trend_row(n, m, &cells, true)
            }
            None => {
                let report = sample_uniform_with(n, m, count, seed, cfg.threads.max(1), Convention::default())?;
                trend_row(n, m, &report.joint_distribution(), false)
            }
        };
        rows.push(row);
    }
    let stable = rows.iter().all(|r| r.in_window);
    Ok(TrendTable { rule, seed, rows, ell_window: ELL_WINDOW, k_window: K_WINDOW, stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::is_sum_free;

    #[test]
    fn mask_check_agrees_with_pair_loop() {
        for n in 1..=12u32 {
            for mask in 0u128..(1u128 << n) {
                let mask = mask << 1;
                let set = IntSet::from_mask(n, mask);
                for conv in Convention::both() {
                    assert_eq!(mask_is_sum_free(mask, conv), is_sum_free(&set, conv), "{set} {conv:?}");
                }
            }
        }
    }

    #[test]
    fn every_sample_is_sum_free() {
        let r = draw_sum_free(10, 5, 100, 7, 1, Convention::default()).unwrap();
        assert_eq!(r.len(), 100);
        for mask in r {
            let s = IntSet::from_mask(10, mask);
            assert_eq!(s.len(), 5);
            assert!(is_sum_free(&s, Convention::default()));
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let a = sample_uniform_with(16, 4, 2_000, 42, 3, Convention::default()).unwrap();
        let b = sample_uniform_with(16, 4, 2_000, 42, 3, Convention::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mass(), 2_000);
        let c = sample_uniform_with(16, 4, 2_000, 43, 3, Convention::default()).unwrap();
        assert_ne!(a.histogram, c.histogram);
    }

    #[test]
    fn chi_square_small_instance() {
        let samples = draw_sum_free(12, 3, 10_000, 1, 1, Convention::default()).unwrap();
        let out = chi_square_uniformity(12, 3, &samples, Convention::default(), 0.999).unwrap();
        assert!(out.degrees_of_freedom > 10);
        assert!(out.critical > out.degrees_of_freedom as f64);
    }

    #[test]
    fn infeasible_acceptance_is_an_error() {
        // sum-free 40-subsets of [80] are the odds and a few intervals
        let err = sample_uniform(80, 40, 10, 0).unwrap_err();
        assert!(matches!(err, Error::SamplingInfeasible { .. }));
    }

    #[test]
    fn histogram_close_to_exact_strata() {
        let exact = stratified_counts(18, 5, Convention::default(), &SearchConfig::default()).unwrap();
        let total = exact.total.to_f64().unwrap();
        let report = sample_uniform_with(18, 5, 100_000, 11, 2, Convention::default()).unwrap();
        let emp = report.joint_distribution();
        let mut tv = 0.0;
        for (key, c) in &exact.cells {
            tv += (c.to_f64().unwrap() / total - emp.get(key).copied().unwrap_or(0.0)).abs();
        }
        for (key, p) in &emp {
            if !exact.cells.contains_key(key) {
                tv += p;
            }
        }
        assert!(tv / 2.0 <= 0.05, "tv = {}", tv / 2.0);
    }

    #[test]
    fn singletons_spread_over_ell() {
        let r = sample_uniform(20, 1, 20_000, 5).unwrap();
        let d = r.ell_distribution();
        assert!(d.keys().all(|&l| l <= 1));
        assert!((d[&1] - 0.5).abs() < 0.02);
    }

    #[test]
    fn size_rules() {
        assert_eq!(SizeRule::parse("sqrt").unwrap().size_for(25), 5);
        assert_eq!(SizeRule::parse("const:6").unwrap().size_for(24), 6);
        assert_eq!(SizeRule::parse("frac:0.25").unwrap().size_for(24), 6);
        assert_eq!(SizeRule::parse("half").unwrap().size_for(25), 13);
        assert!(SizeRule::parse("const").is_err());
        assert!(SizeRule::parse("cube").is_err());
    }

    #[test]
    fn trend_uses_exact_strata_when_small() {
        let t = structure_trend(&[24], SizeRule::Const(6), 1_000, 3, &SearchConfig::default()).unwrap();
        let row = &t.rows[0];
        assert!(row.exact);
        let exact = stratified_counts(24, 6, Convention::default(), &SearchConfig::default()).unwrap();
        let mut expect: BTreeMap<usize, f64> = BTreeMap::new();
        let mut rest = 0.0;
        for ((ell, _, odd), c) in &exact.cells {
            if !odd {
                *expect.entry(*ell).or_insert(0.0) += c.to_f64().unwrap();
                rest += c.to_f64().unwrap();
            }
        }
        for (ell, p) in &row.ell_distribution {
            assert!((p - expect[ell] / rest).abs() < 1e-12);
        }
    }

    #[test]
    fn half_size_concentrates_on_small_ell() {
        for n in [20u32, 24, 30] {
            let t = structure_trend(&[n], SizeRule::Half, 1_000, 0, &SearchConfig::default()).unwrap();
            let row = &t.rows[0];
            let small: f64 = row.ell_distribution.iter().filter(|(l, _)| **l <= 2).map(|(_, p)| p).sum();
            assert!(small > 0.9, "n={n}: {:?}", row.ell_distribution);
        }
    }

    #[test]
    fn singleton_trend() {
        let t = structure_trend(&[20], SizeRule::Const(1), 1_000, 0, &SearchConfig::default()).unwrap();
        assert!(t.rows[0].ell_distribution.keys().all(|&l| l <= 1));
    }
}
