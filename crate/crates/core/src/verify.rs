//! The verification suite: twelve numbered checks, each run at a quick
//! `Small` scale or at the `Full` scale with the thresholds below.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    binom_exact, build_pair_graph, check_binom_inequalities, check_gamma_sum, empirical_constant, janson_quantities,
    ln_big, theorem_rhs, BoundFormula, JansonInput, GAMMA_SUM_CONSTANT, REL_TOL,
};
use crate::enumeration::{count_in_window, count_oracle, count_sum_free, CountQuery, SearchConfig};
use crate::error::Result;
use crate::intset::IntSet;
use crate::oracle;
use crate::partitions::{p, p_star, sumset_size_histogram, DEFAULT_BUDGET};
use crate::sampling::{chi_square_uniformity, draw_sum_free};
use crate::sets::Convention;
use crate::sumsets::{b_set, freiman_cover, span, sumset, BSetQuery};

/// Upper cap on `count / 2^{n/2}` in the growth check.
pub const GROWTH_RATIO_CAP: f64 = 12.0;
/// Upper cap on the empirical constant `C*(n, m)` for `m ≥ √n`.
pub const EMPIRICAL_CONSTANT_CAP: f64 = 4.0;
/// Small constant in the window construction: `a = ⌊c n² / m²⌋`, target `e^{−cn/(2m)}`.
pub const WINDOW_CONSTANT: f64 = 0.05;
pub const GAMMA_GRID_A: std::ops::RangeInclusive<u32> = 1..=10;
/// `b = 0.1, 0.2, ..., 5.0`.
pub const GAMMA_GRID_B_TENTHS: std::ops::RangeInclusive<u32> = 1..=50;
pub const CHI_SQUARE_LEVEL: f64 = 0.999;
pub const CHI_SQUARE_SEEDS: u64 = 10;
pub const CHI_SQUARE_REQUIRED: usize = 9;
/// Slack exponent for the restricted-partition bounds.
pub const RESTRICTED_DELTA: f64 = 1.0;
pub const RESTRICTED_FACTORS: [f64; 3] = [2.0, 2.5, 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Small,
    Full,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "small" => Some(Suite::Small),
            "full" => Some(Suite::Full),
            _ => None,
        }
    }

    fn pick<T>(self, small: T, full: T) -> T {
        match self {
            Suite::Small => small,
            Suite::Full => full,
        }
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "search agrees with the exhaustive oracle"),
    (2, "pinned partition values"),
    (3, "distinct-part count bound"),
    (4, "growth of the total count"),
    (5, "lower bound and window construction"),
    (6, "3k-4 progression covers"),
    (7, "approximate-translate set size"),
    (8, "span of the sumset"),
    (9, "Janson quantities and pair graphs"),
    (10, "restricted partitions under bounds"),
    (11, "sampler uniformity"),
    (12, "binomial and gamma-sum inequalities"),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(with = "millis")]
    pub elapsed: Duration,
}

mod millis {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {} ({:.1?}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed,
            self.detail
        )
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

/// Runs one criterion. Unknown ids yield `None`.
pub fn run_criterion(id: u8, suite: Suite, cfg: &SearchConfig) -> Option<CriterionReport> {
    let name = CRITERIA.iter().find(|(i, _)| *i == id)?.1;
    let start = Instant::now();
    let result = match id {
        1 => oracle_equivalence(suite, cfg),
        2 => pinned_partitions(),
        3 => distinct_part_bound(suite),
        4 => growth(suite, cfg),
        5 => lower_bound_window(suite, cfg),
        6 => freiman_sweep(suite),
        7 => b_set_sweep(suite),
        8 => span_sweep(suite),
        9 => janson_sweep(suite),
        10 => restricted_sweep(suite),
        11 => sampler_uniformity(suite, cfg),
        12 => inequality_sweep(suite),
        _ => return None,
    };
    let outcome = result.unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
    Some(CriterionReport {
        id,
        name: name.to_string(),
        passed: outcome.passed,
        detail: outcome.detail,
        elapsed: start.elapsed(),
    })
}

/// Runs the selected criteria (all when `only` is empty) in order.
pub fn run_suite(suite: Suite, only: &[u8], cfg: &SearchConfig) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .filter(|(id, _)| only.is_empty() || only.contains(id))
        .filter_map(|(id, _)| run_criterion(*id, suite, cfg))
        .collect()
}

fn oracle_equivalence(suite: Suite, cfg: &SearchConfig) -> Result<Outcome> {
    let max_n = suite.pick(14, 20);
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 0..=max_n {
        for conv in Convention::both() {
            for m in 0..=n as usize {
                let q = CountQuery::new(n).size(m).convention(conv);
                let fast = count_sum_free(&q, cfg)?.total;
                let slow = count_oracle(&q)?.total;
                checked += 1;
                if fast != slow {
                    failures.push(format!("n={n} m={m} {}: {fast} vs {slow}", conv.name()));
                }
            }
        }
    }
    Ok(Outcome::new(
        failures.is_empty(),
        format!("{checked} (n, m, convention) cases up to n = {max_n}, {} mismatches {:?}", failures.len(), failures),
    ))
}

fn pinned_partitions() -> Result<Outcome> {
    let p3 = p(3);
    let ps = p_star(8, 3);
    let ok = p3 == BigUint::from(3u32) && ps == BigUint::from(2u32);
    Ok(Outcome::new(ok, format!("p(3) = {p3}, p*(8, 3) = {ps}")))
}

fn distinct_part_bound(suite: Suite) -> Result<Outcome> {
    let max_k = suite.pick(60, 120);
    let mut checked = 0;
    let mut violations = Vec::new();
    let mut tightest = f64::NEG_INFINITY;
    for ell in 1usize.. {
        let min_k = (ell * (ell + 1) / 2) as u32;
        if min_k > max_k {
            break;
        }
        for k in min_k..=max_k {
            let count = p_star(k, ell);
            let lhs = ln_big(&count);
            let rhs = theorem_rhs(&BoundFormula::DistinctParts { k: k as f64, ell: ell as f64 }).ln();
            checked += 1;
            tightest = tightest.max(lhs - rhs);
            if lhs > rhs {
                violations.push((k, ell));
            }
        }
    }
    Ok(Outcome::new(
        violations.is_empty(),
        format!(
            "{checked} (k, ℓ) pairs with k ≤ {max_k}, {} violations, max ln(count/bound) = {tightest:.4}",
            violations.len()
        ),
    ))
}

fn ratio_to_half_power(count: &BigUint, n: u32) -> f64 {
    (ln_big(count) - (n / 2) as f64 * std::f64::consts::LN_2).exp()
}

fn growth(suite: Suite, cfg: &SearchConfig) -> Result<Outcome> {
    let max_n = suite.pick(26, 40);
    let mut ok = true;
    let mut ratios = Vec::new();
    let mut worst_c = (f64::NEG_INFINITY, 0, 0);
    for n in (10..=max_n).step_by(2) {
        let res = count_sum_free(&CountQuery::new(n), cfg)?;
        let ratio = ratio_to_half_power(&res.total, n);
        ok &= (1.0..=GROWTH_RATIO_CAP).contains(&ratio);
        ratios.push(format!("{n}:{ratio:.3}"));
        for m in (1..=n as usize).filter(|&m| (m * m) as u32 >= n) {
            if let Some(c) = empirical_constant(n as u64, m as u64, &res.of_size(m)) {
                ok &= c <= EMPIRICAL_CONSTANT_CAP;
                if c > worst_c.0 {
                    worst_c = (c, n, m);
                }
            }
        }
    }
    Ok(Outcome::new(
        ok,
        format!(
            "count/2^(n/2) in [1, {GROWTH_RATIO_CAP}]: [{}]; max C* = {:.4} at (n, m) = ({}, {}), cap {EMPIRICAL_CONSTANT_CAP}",
            ratios.join(" "),
            worst_c.0,
            worst_c.1,
            worst_c.2
        ),
    ))
}

/// Sizes `m` with `√n ≤ m ≤ ⌈n/2⌉`.
fn window_sizes(n: u32) -> impl Iterator<Item = usize> {
    (1..=n.div_ceil(2) as usize).filter(move |&m| (m * m) as u32 >= n)
}

/// Window offset `⌊c n² / m²⌋`.
pub fn window_offset(n: u32, m: usize) -> u32 {
    (WINDOW_CONSTANT * (n as f64).powi(2) / (m as f64).powi(2)).floor() as u32
}

fn lower_bound_window(suite: Suite, cfg: &SearchConfig) -> Result<Outcome> {
    let ns: Vec<u32> = suite.pick(vec![16, 18], (16..=28).step_by(2).collect());
    let mut count_failures = Vec::new();
    let mut window_failures = Vec::new();
    let mut cases = 0;
    for &n in &ns {
        let res = count_sum_free(&CountQuery::new(n), cfg)?;
        for m in (1..=n as usize).filter(|&m| (m * m) as u32 >= n) {
            if res.of_size(m) < binom_exact(n.div_ceil(2) as u64, m as u64) {
                count_failures.push((n, m));
            }
        }
        for m in window_sizes(n) {
            let a = window_offset(n, m);
            let w = count_in_window(n, a, m, Convention::default(), cfg)?;
            let target = -WINDOW_CONSTANT * n as f64 / (2.0 * m as f64);
            cases += 1;
            if w.ln_probability() < target {
                window_failures.push(format!("n={n} m={m} a={a}: P={:.4} < {:.4}", w.probability(), target.exp()));
            }
        }
    }
    let first = window_failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ");
    Ok(Outcome::new(
        count_failures.is_empty() && window_failures.is_empty(),
        format!(
            "count(n, m) ≥ C(⌈n/2⌉, m): {} failures; window probability ≥ e^(-{WINDOW_CONSTANT}n/2m): {}/{cases} failures{}",
            count_failures.len(),
            window_failures.len(),
            if first.is_empty() { String::new() } else { format!(" (e.g. {first})") }
        ),
    ))
}

/// Sets of the given size with minimum 1 and maximum at most `max`.
fn sets_from_one(size: usize, max: u32, mut visit: impl FnMut(&[u32])) {
    fn rec(cur: &mut Vec<u32>, size: usize, max: u32, visit: &mut dyn FnMut(&[u32])) {
        if cur.len() == size {
            visit(cur);
            return;
        }
        let from = cur.last().copied().unwrap_or(0) + 1;
        for x in from..=max {
            cur.push(x);
            rec(cur, size, max, visit);
            cur.pop();
        }
    }
    let mut cur = vec![1];
    rec(&mut cur, size, max, &mut visit);
}

fn freiman_sweep(suite: Suite) -> Result<Outcome> {
    let max = suite.pick(20, 40);
    let mut checked = 0u64;
    let mut failures: Vec<String> = Vec::new();
    for size in 3..=5usize {
        sets_from_one(size, max, |members| {
            let set = IntSet::from_slice(members).expect("positive members");
            let ss = sumset(&set, &set).len();
            if ss > 3 * size - 4 {
                return;
            }
            checked += 1;
            let bound = (ss - size + 1) as u64;
            if oracle::shortest_cover_brute(members, bound).is_none() {
                failures.push(format!("{set}: no cover of length ≤ {bound}"));
                return;
            }
            match freiman_cover(&set) {
                Ok(out) => match out.cover() {
                    Some(c) if c.covers(&set) && c.length <= bound => {}
                    _ => failures.push(format!("{set}: freiman_cover gave {out:?}")),
                },
                Err(e) => failures.push(format!("{set}: {e}")),
            }
        });
    }
    Ok(Outcome::new(
        failures.is_empty(),
        format!("{checked} sets with min 1, max ≤ {max} in the 3k-4 regime, {} failures {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>()),
    ))
}

fn random_set(rng: &mut ChaCha8Rng, max_size: usize, max: u32) -> IntSet {
    let size = rng.random_range(1..=max_size);
    let members = index::sample(rng, max as usize, size).into_iter().map(|i| i as u64 + 1);
    IntSet::from_members(max, members).expect("inside [max]")
}

fn b_set_sweep(suite: Suite) -> Result<Outcome> {
    let trials = suite.pick(1_000, 10_000);
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b5e7);
    let deltas = [Ratio::new(0u64, 1), Ratio::new(1, 4), Ratio::new(1, 2)];
    let mut failures = Vec::new();
    let mut tightest = 0.0f64;
    for _ in 0..trials {
        let set = random_set(&mut rng, 12, 60);
        let delta = deltas[rng.random_range(0..deltas.len())];
        let ss = sumset(&set, &set).len() as u64;
        let b = b_set(&BSetQuery::new(set.clone(), delta)?).len() as u64;
        // |B| ≤ |S+S| / (1 − δ), compared exactly
        let lhs = Ratio::from_integer(b) * (Ratio::from_integer(1) - delta);
        tightest = tightest.max((lhs / Ratio::from_integer(ss)).to_f64().unwrap_or(0.0));
        if lhs > Ratio::from_integer(ss) {
            failures.push(format!("{set} δ={delta}: |B|={b}, |S+S|={ss}"));
        }
    }
    Ok(Outcome::new(
        failures.is_empty(),
        format!("{trials} random (S, δ), {} failures, max |B|(1-δ)/|S+S| = {tightest:.3}", failures.len()),
    ))
}

fn span_sweep(suite: Suite) -> Result<Outcome> {
    let trials = suite.pick(1_000, 10_000);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a4);
    let mut failures = 0;
    for _ in 0..trials {
        let set = random_set(&mut rng, 20, 200);
        if span(&sumset(&set, &set))? != 2 * span(&set)? {
            failures += 1;
        }
    }
    Ok(Outcome::new(failures == 0, format!("{trials} random sets, {failures} failures")))
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()) || (a == 0.0 && b == 0.0)
}

fn janson_sweep(suite: Suite) -> Result<Outcome> {
    let trials = suite.pick(200, 1_000);
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a45);
    let mut moment_failures = 0;
    for _ in 0..trials {
        let bound = rng.random_range(10..=60u32);
        let ground = random_set(&mut rng, bound as usize, bound);
        let elems = ground.to_vec();
        let members = rng.random_range(0..=25usize);
        let family: Vec<Vec<u32>> = (0..members)
            .map(|_| {
                let size = rng.random_range(1..=elems.len().min(4));
                let mut u: Vec<u32> = index::sample(&mut rng, elems.len(), size).into_iter().map(|i| elems[i]).collect();
                u.sort_unstable();
                u
            })
            .collect();
        let m = rng.random_range(0..=elems.len() as u64);
        let sets = family.iter().map(|u| IntSet::from_slice(u).and_then(|s| s.with_bound(bound))).collect::<Result<Vec<_>>>()?;
        let q = janson_quantities(&JansonInput::new(sets, ground.clone(), m)?);
        let (mu, delta) = oracle::janson_double_loop(&family, elems.len() as u64, m);
        if !rel_close(q.mu.value(), mu) || !rel_close(q.delta.value(), delta) {
            moment_failures += 1;
        }
    }
    let mut graph_failures = 0;
    let mut graphs = 0;
    for n in (2..=200u32).step_by(2) {
        for _ in 0..5 {
            let half = n / 2;
            let shifts = random_set(&mut rng, half.min(12) as usize, half);
            let g = build_pair_graph(n, &shifts, &IntSet::empty(n))?;
            let expect: u64 = shifts.iter().map(|s| (half - s) as u64).sum();
            graphs += 1;
            if g.edge_count() as u64 != expect || g.max_degree() > 2 * shifts.len() {
                graph_failures += 1;
            }
        }
    }
    Ok(Outcome::new(
        moment_failures == 0 && graph_failures == 0,
        format!("{trials} random families: {moment_failures} μ/Δ mismatches at rel {REL_TOL:e}; {graphs} pair graphs for even n ≤ 200: {graph_failures} failures"),
    ))
}

/// One line of the restricted-partition tables: `(k, ℓ)`, the cap rule and
/// factor, exact count, and `count / bound` with slack exponent one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictedRow {
    pub k: u32,
    pub ell: usize,
    /// `"ck/l"` or `"lambda*l"`.
    pub rule: String,
    pub factor: f64,
    pub cap: usize,
    pub count: u64,
    pub ln_bound: f64,
    pub ratio: f64,
}

/// Restricted counts for `ℓ ≤ max_ell`, `k ≤ max_k` against both bound shapes.
pub fn restricted_table(max_ell: usize, max_k: u32) -> Result<Vec<RestrictedRow>> {
    let mut rows = Vec::new();
    for ell in 1..=max_ell {
        let min_k = (ell * (ell + 1) / 2) as u32;
        for k in min_k..=max_k {
            let hist = sumset_size_histogram(k, ell, None, DEFAULT_BUDGET)?;
            let below = |cap: usize| hist.range(..=cap).map(|(_, c)| *c).sum::<u64>();
            for &c in &RESTRICTED_FACTORS {
                let cap = (c * k as f64 / ell as f64).floor() as usize;
                let rhs = theorem_rhs(&BoundFormula::SmallSumset { k: k as f64, ell: ell as f64, c, delta: RESTRICTED_DELTA });
                rows.push(row(k, ell, "ck/l", c, cap, below(cap), rhs.ln()));
            }
            for &lambda in &RESTRICTED_FACTORS {
                let cap = (lambda * ell as f64).floor() as usize;
                let rhs = theorem_rhs(&BoundFormula::SmallDoubling {
                    k: k as f64,
                    ell: ell as f64,
                    lambda,
                    delta: RESTRICTED_DELTA,
                });
                rows.push(row(k, ell, "lambda*l", lambda, cap, below(cap), rhs.ln()));
            }
        }
    }
    Ok(rows)
}

fn row(k: u32, ell: usize, rule: &str, factor: f64, cap: usize, count: u64, ln_bound: f64) -> RestrictedRow {
    let ratio = if count == 0 { 0.0 } else { ((count as f64).ln() - ln_bound).exp() };
    RestrictedRow { k, ell, rule: rule.to_string(), factor, cap, count, ln_bound, ratio }
}

fn restricted_sweep(suite: Suite) -> Result<Outcome> {
    let (max_ell, max_k) = suite.pick((8, 50), (12, 90));
    let rows = restricted_table(max_ell, max_k)?;
    let mut failures = 0;
    // the doubling-form bound is only claimed for k ≤ ℓ²/δ
    let mut failures_in_range = 0;
    let mut worst: [(f64, String); 2] = [(0.0, String::new()), (0.0, String::new())];
    for r in &rows {
        let holds = r.count == 0 || (r.count as f64).ln() <= r.ln_bound + REL_TOL * r.ln_bound.abs().max(1.0);
        if !holds {
            failures += 1;
            if r.rule == "ck/l" || (r.k as f64) <= (r.ell * r.ell) as f64 / RESTRICTED_DELTA {
                failures_in_range += 1;
            }
        }
        let slot = usize::from(r.rule != "ck/l");
        if r.ratio > worst[slot].0 {
            worst[slot] = (r.ratio, format!("k={} ℓ={} factor={}", r.k, r.ell, r.factor));
        }
    }
    Ok(Outcome::new(
        failures == 0,
        format!(
            "{} rows (ℓ ≤ {max_ell}, k ≤ {max_k}), {failures} over the bound ({failures_in_range} of them with k ≤ ℓ²/δ or under the ck/ℓ cap); max ratio ck/ℓ cap {:.3e} ({}), λℓ cap {:.3e} ({})",
            rows.len(),
            worst[0].0,
            worst[0].1,
            worst[1].0,
            worst[1].1
        ),
    ))
}

fn sampler_uniformity(suite: Suite, cfg: &SearchConfig) -> Result<Outcome> {
    let samples = suite.pick(5_000, 10_000);
    let mut passes = 0;
    let mut stats = Vec::new();
    for seed in 0..CHI_SQUARE_SEEDS {
        let draws = draw_sum_free(12, 3, samples, seed, cfg.threads.max(1), Convention::default())?;
        let out = chi_square_uniformity(12, 3, &draws, Convention::default(), CHI_SQUARE_LEVEL)?;
        passes += usize::from(out.passes());
        stats.push(format!("{:.1}", out.statistic));
        if seed == 0 {
            stats.insert(0, format!("critical {:.1} (dof {}):", out.critical, out.degrees_of_freedom));
        }
    }
    Ok(Outcome::new(
        passes >= CHI_SQUARE_REQUIRED,
        format!("{passes}/{CHI_SQUARE_SEEDS} seeds below the {CHI_SQUARE_LEVEL} quantile at {samples} samples; {}", stats.join(" ")),
    ))
}

fn inequality_sweep(suite: Suite) -> Result<Outcome> {
    let trials = suite.pick(1_000, 10_000);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e9);
    let mut binom_failures = Vec::new();
    for _ in 0..trials {
        let a = rng.random_range(2..=1000u64);
        let b = rng.random_range(1..a);
        let c = rng.random_range(0..b);
        let d = rng.random_range(0..=b);
        if !check_binom_inequalities(a, b, c, d)?.all_hold() {
            binom_failures.push((a, b, c, d));
        }
    }
    let mut gamma_failures = 0;
    let mut tightest = 0.0f64;
    let mut grid = 0;
    for a in GAMMA_GRID_A {
        for tenths in GAMMA_GRID_B_TENTHS {
            let r = check_gamma_sum(a as f64, tenths as f64 / 10.0)?;
            grid += 1;
            tightest = tightest.max(r.tightest_constant);
            gamma_failures += usize::from(!r.holds);
        }
    }
    Ok(Outcome::new(
        binom_failures.is_empty() && gamma_failures == 0,
        format!(
            "{trials} random tuples: {} failures {:?}; gamma sum on {grid} grid points: {gamma_failures} above C = {GAMMA_SUM_CONSTANT}, tightest {tightest:.4}",
            binom_failures.len(),
            binom_failures.iter().take(3).collect::<Vec<_>>()
        ),
    ))
}
