//! Exact counting and enumeration of sum-free subsets of `[n]`.
//!
//! The search picks elements in decreasing order. With every chosen element
//! larger than the next candidate `x`, adding `x` can only create a violation
//! as a summand: `x + c = c'` for chosen `c < c'`, or `x + x = c'`. So the
//! search keeps one bitmap of forbidden values, extended on each choice by
//! `{c − x : c chosen}` and, under the equal-summands convention, `x / 2`.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::binom_exact;
use crate::error::{Error, Result};
use crate::intset::{low_bits, IntSet};
use crate::sets::{is_sum_free, statistics_of, Convention, HalfInt};
use crate::BigCount;

/// Largest universe the exhaustive oracle accepts.
pub const ORACLE_LIMIT: usize = 24;
/// Largest `n` the bitmap search supports.
pub const MAX_SEARCH_N: u32 = 127;

/// Which statistics to split counts by.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Stratify {
    pub ell: bool,
    pub k: bool,
    pub a: bool,
    pub odd_flag: bool,
}

impl Stratify {
    pub const NONE: Stratify = Stratify { ell: false, k: false, a: false, odd_flag: false };
    pub const ALL: Stratify = Stratify { ell: true, k: true, a: true, odd_flag: true };

    pub fn is_none(&self) -> bool {
        *self == Self::NONE
    }

    /// Parses a comma-separated list drawn from `ell`, `k`, `a`, `odd`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = Stratify::NONE;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "ell" => out.ell = true,
                "k" => out.k = true,
                "a" => out.a = true,
                "odd" | "odd_flag" => out.odd_flag = true,
                "all" => out = Stratify::ALL,
                other => return Err(Error::invalid(format!("unknown stratum `{other}`"))),
            }
        }
        Ok(out)
    }
}

/// Projection of a set's statistics onto the requested strata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StrataKey {
    pub size: usize,
    pub ell: Option<usize>,
    pub k: Option<HalfInt>,
    /// `Some(None)` when `a` was requested but `S(I)` is empty.
    pub a: Option<Option<HalfInt>>,
    pub odd_flag: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountQuery {
    pub n: u32,
    pub m: Option<usize>,
    pub universe: Option<IntSet>,
    pub convention: Convention,
    pub stratify: Stratify,
}

impl CountQuery {
    pub fn new(n: u32) -> Self {
        CountQuery {
            n,
            m: None,
            universe: None,
            convention: Convention::default(),
            stratify: Stratify::NONE,
        }
    }

    pub fn size(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    pub fn universe(mut self, universe: IntSet) -> Self {
        self.universe = Some(universe);
        self
    }

    pub fn convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    pub fn stratify(mut self, stratify: Stratify) -> Self {
        self.stratify = stratify;
        self
    }

    /// The universe the query ranges over, `[n]` unless restricted.
    pub fn universe_set(&self) -> IntSet {
        self.universe.clone().unwrap_or_else(|| IntSet::full(self.n))
    }

    fn validate(&self) -> Result<IntSet> {
        let universe = self.universe_set();
        if universe.max().is_some_and(|x| x > self.n) {
            return Err(Error::invalid(format!("universe {universe} is not inside [{}]", self.n)));
        }
        if let Some(m) = self.m {
            if m > universe.len() {
                return Err(Error::invalid(format!("m = {m} exceeds the universe size {}", universe.len())));
            }
        }
        Ok(universe)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Backtracking,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub total: BigCount,
    pub by_size: BTreeMap<usize, BigCount>,
    pub strata: BTreeMap<StrataKey, BigCount>,
    pub method: Method,
    pub elapsed: Duration,
}

impl CountResult {
    pub fn of_size(&self, m: usize) -> BigCount {
        self.by_size.get(&m).cloned().unwrap_or_default()
    }

    /// Equal totals, size profile and strata; `method` and `elapsed` are ignored.
    pub fn same_counts(&self, other: &CountResult) -> bool {
        self.total == other.total && self.by_size == other.by_size && self.strata == other.strata
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Maximum number of search nodes before giving up.
    pub budget: u64,
    /// Worker threads; 1 runs sequentially, 0 uses every available core.
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: 20_000_000_000, threads: 1 }
    }
}

impl SearchConfig {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

/// Ground truth by filtering all `2^|universe|` subsets through [`is_sum_free`].
pub fn count_oracle(q: &CountQuery) -> Result<CountResult> {
    let start = Instant::now();
    let universe = q.validate()?;
    let elems = universe.to_vec();
    if elems.len() > ORACLE_LIMIT {
        return Err(Error::OracleUniverseTooLarge { size: elems.len(), limit: ORACLE_LIMIT });
    }
    let mut by_size: BTreeMap<usize, BigCount> = BTreeMap::new();
    let mut strata: BTreeMap<StrataKey, BigCount> = BTreeMap::new();
    for mask in 0u32..(1u32 << elems.len()) {
        let size = mask.count_ones() as usize;
        if q.m.is_some_and(|m| m != size) {
            continue;
        }
        let members = (0..elems.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| elems[i] as u64);
        let set = IntSet::from_members(q.n.max(1), members)?;
        if !is_sum_free(&set, q.convention) {
            continue;
        }
        *by_size.entry(size).or_default() += 1u32;
        if !q.stratify.is_none() {
            let st = statistics_of(&set, q.n);
            let key = StrataKey {
                size,
                ell: q.stratify.ell.then_some(st.ell),
                k: q.stratify.k.then_some(st.k),
                a: q.stratify.a.then_some(st.a),
                odd_flag: q.stratify.odd_flag.then_some(st.odd_flag),
            };
            *strata.entry(key).or_default() += 1u32;
        }
    }
    if let Some(m) = q.m {
        by_size.entry(m).or_default();
    }
    Ok(CountResult {
        total: by_size.values().sum(),
        by_size,
        strata,
        method: Method::Oracle,
        elapsed: start.elapsed(),
    })
}

#[derive(Debug, Clone, Copy)]
struct Node {
    chosen: u128,
    forbidden: u128,
    /// Every chosen element is ≥ `last`; candidates lie strictly below it.
    last: u32,
    depth: u32,
    ell: u32,
    twice_k: u64,
}

const EVEN_MASK: u128 = 0x5555_5555_5555_5555_5555_5555_5555_5555;

#[derive(Clone, Copy)]
struct Rules {
    n: u32,
    universe: u128,
    equal_summands: bool,
    m: Option<u32>,
}

impl Rules {
    fn root(&self) -> Node {
        Node { chosen: 0, forbidden: 0, last: self.n + 1, depth: 0, ell: 0, twice_k: 0 }
    }

    fn is_leaf(&self, node: &Node) -> bool {
        self.m == Some(node.depth)
    }

    fn emits(&self, node: &Node) -> bool {
        self.m.is_none_or(|m| m == node.depth)
    }

    /// Candidate children of `node`, already pruned against the size target.
    fn candidates(&self, node: &Node) -> u128 {
        if self.is_leaf(node) {
            return 0;
        }
        let cand = self.universe & low_bits(node.last) & !node.forbidden;
        match self.m {
            Some(m) if cand.count_ones() < m - node.depth => 0,
            _ => cand,
        }
    }

    /// With `rest` the candidates still below the child, is the child worth visiting?
    fn child_viable(&self, node: &Node, rest: u128) -> bool {
        self.m.is_none_or(|m| rest.count_ones() + 1 >= m - node.depth)
    }

    fn child(&self, node: &Node, x: u32) -> Node {
        let mut forbidden = node.forbidden | node.chosen >> x;
        if self.equal_summands && x.is_multiple_of(2) {
            forbidden |= 1u128 << (x / 2);
        }
        let low = 2 * x <= self.n;
        Node {
            chosen: node.chosen | 1u128 << x,
            forbidden,
            last: x,
            depth: node.depth + 1,
            ell: node.ell + u32::from(low),
            twice_k: node.twice_k + if low { (self.n - 2 * x) as u64 } else { 0 },
        }
    }

    fn key(&self, node: &Node, stratify: Stratify) -> StrataKey {
        // S(I) is nonempty iff the smallest chosen element (the last one) is ≤ n/2
        let a = (node.ell > 0).then(|| HalfInt((self.n - 2 * node.last) as u64));
        StrataKey {
            size: node.depth as usize,
            ell: stratify.ell.then_some(node.ell as usize),
            k: stratify.k.then_some(HalfInt(node.twice_k)),
            a: stratify.a.then_some(a),
            odd_flag: stratify.odd_flag.then_some(node.chosen & EVEN_MASK == 0),
        }
    }

    fn set_of(&self, node: &Node) -> IntSet {
        IntSet::from_mask(self.n.max(1), node.chosen)
    }
}

#[derive(Debug, Default)]
struct Tally {
    by_size: Vec<u128>,
    strata: HashMap<StrataKey, u128>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        if self.by_size.len() < other.by_size.len() {
            self.by_size.resize(other.by_size.len(), 0);
        }
        for (i, c) in other.by_size.into_iter().enumerate() {
            self.by_size[i] += c;
        }
        for (k, c) in other.strata {
            *self.strata.entry(k).or_default() += c;
        }
        self
    }

    fn total(&self) -> BigCount {
        BigUint::from(self.by_size.iter().sum::<u128>())
    }
}

struct Budget {
    limit: u64,
    visited: AtomicU64,
    aborted: AtomicBool,
}

const FLUSH_EVERY: u64 = 1 << 12;

struct Searcher<'a> {
    rules: Rules,
    stratify: Stratify,
    budget: &'a Budget,
    pending: u64,
    tally: Tally,
}

struct Abort;

impl<'a> Searcher<'a> {
    fn new(rules: Rules, stratify: Stratify, budget: &'a Budget) -> Self {
        Searcher { rules, stratify, budget, pending: 0, tally: Tally::default() }
    }

    fn tick(&mut self) -> std::result::Result<(), Abort> {
        self.pending += 1;
        if self.pending == FLUSH_EVERY {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> std::result::Result<(), Abort> {
        let total = self.budget.visited.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if total > self.budget.limit || self.budget.aborted.load(Ordering::Relaxed) {
            self.budget.aborted.store(true, Ordering::Relaxed);
            return Err(Abort);
        }
        Ok(())
    }

    fn record(&mut self, node: &Node) {
        if !self.rules.emits(node) {
            return;
        }
        let d = node.depth as usize;
        if self.tally.by_size.len() <= d {
            self.tally.by_size.resize(d + 1, 0);
        }
        self.tally.by_size[d] += 1;
        if !self.stratify.is_none() {
            let key = self.rules.key(node, self.stratify);
            *self.tally.strata.entry(key).or_default() += 1;
        }
    }

    fn dfs(&mut self, node: Node) -> std::result::Result<(), Abort> {
        self.tick()?;
        self.record(&node);
        let mut cand = self.rules.candidates(&node);
        while cand != 0 {
            let x = 127 - cand.leading_zeros();
            cand &= !(1u128 << x);
            if !self.rules.child_viable(&node, cand) {
                break;
            }
            self.dfs(self.rules.child(&node, x))?;
        }
        Ok(())
    }

    /// Expands nodes breadth-first until at least `target` unexpanded nodes
    /// remain; expanded nodes are tallied here, the rest become tasks.
    fn frontier(&mut self, root: Node, target: usize) -> std::result::Result<Vec<Node>, Abort> {
        const MAX_DEPTH: u32 = 16;
        let mut level = vec![root];
        while level.len() < target && level.iter().any(|n| !self.rules.is_leaf(n) && n.depth < MAX_DEPTH) {
            let mut next = Vec::with_capacity(level.len() * 4);
            for node in level {
                if self.rules.is_leaf(&node) || node.depth >= MAX_DEPTH {
                    next.push(node);
                    continue;
                }
                self.tick()?;
                self.record(&node);
                let mut cand = self.rules.candidates(&node);
                while cand != 0 {
                    let x = 127 - cand.leading_zeros();
                    cand &= !(1u128 << x);
                    if !self.rules.child_viable(&node, cand) {
                        break;
                    }
                    next.push(self.rules.child(&node, x));
                }
            }
            level = next;
        }
        Ok(level)
    }
}

fn rules_for(q: &CountQuery, universe: &IntSet) -> Result<Rules> {
    if q.n > MAX_SEARCH_N {
        return Err(Error::invalid(format!("n = {} exceeds the search limit {MAX_SEARCH_N}", q.n)));
    }
    Ok(Rules {
        n: q.n,
        universe: universe.to_mask().expect("universe inside [n], n < 128"),
        equal_summands: q.convention.allow_equal_summands,
        m: q.m.map(|m| m as u32),
    })
}

fn in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return job();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

/// Exact counts by pruned backtracking over decreasing elements.
pub fn count_sum_free(q: &CountQuery, cfg: &SearchConfig) -> Result<CountResult> {
    let start = Instant::now();
    let universe = q.validate()?;
    let rules = rules_for(q, &universe)?;
    let budget = Budget {
        limit: cfg.budget,
        visited: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    };

    let (tally, aborted) = if cfg.threads == 1 {
        let mut s = Searcher::new(rules, q.stratify, &budget);
        let outcome = s.dfs(rules.root()).and_then(|_| s.flush());
        (s.tally, outcome.is_err())
    } else {
        in_pool(cfg.threads, || {
            let workers = rayon::current_num_threads().max(1);
            let mut head = Searcher::new(rules, q.stratify, &budget);
            let tasks = match head.frontier(rules.root(), 64 * workers) {
                Ok(t) => t,
                Err(Abort) => return (head.tally, true),
            };
            let aborted = head.flush().is_err();
            let merged = tasks
                .into_par_iter()
                .map(|task| {
                    let mut s = Searcher::new(rules, q.stratify, &budget);
                    let outcome = s.dfs(task).and_then(|_| s.flush());
                    (s.tally, outcome.is_err())
                })
                .reduce(
                    || (Tally::default(), false),
                    |(a, ea), (b, eb)| (a.merge(b), ea || eb),
                );
            (head.tally.merge(merged.0), aborted || merged.1)
        })
    };

    if aborted {
        return Err(Error::BudgetExceeded {
            budget: cfg.budget,
            visited: budget.visited.load(Ordering::Relaxed),
            partial: tally.total(),
        });
    }

    let mut by_size: BTreeMap<usize, BigCount> = tally
        .by_size
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (i, BigUint::from(c)))
        .collect();
    if let Some(m) = q.m {
        by_size.entry(m).or_default();
    }
    let strata = tally
        .strata
        .into_iter()
        .map(|(k, c)| (k, BigUint::from(c)))
        .collect();
    Ok(CountResult {
        total: by_size.values().sum(),
        by_size,
        strata,
        method: Method::Backtracking,
        elapsed: start.elapsed(),
    })
}

/// Sum-free `m`-sets inside `{⌈n/2⌉ − a, ..., n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowCount {
    pub n: u32,
    pub a: u32,
    pub m: usize,
    pub universe: IntSet,
    pub count: BigCount,
    /// `C(|window|, m)`, the number of `m`-subsets of the window.
    pub candidates: BigCount,
}

impl WindowCount {
    /// Probability that a uniform `m`-subset of the window is sum-free.
    pub fn probability(&self) -> f64 {
        if self.candidates.is_zero() {
            return 0.0;
        }
        (crate::bounds::ln_big(&self.count) - crate::bounds::ln_big(&self.candidates)).exp()
    }

    /// `ln(count / candidates)`; `-inf` for a zero count.
    pub fn ln_probability(&self) -> f64 {
        if self.count.is_zero() {
            return f64::NEG_INFINITY;
        }
        crate::bounds::ln_big(&self.count) - crate::bounds::ln_big(&self.candidates)
    }
}

pub fn window(n: u32, a: u32) -> Result<IntSet> {
    let half = n.div_ceil(2);
    if a >= half {
        return Err(Error::invalid(format!("window offset a = {a} must be below ⌈n/2⌉ = {half}")));
    }
    IntSet::interval(n, half - a, n)
}

pub fn count_in_window(n: u32, a: u32, m: usize, conv: Convention, cfg: &SearchConfig) -> Result<WindowCount> {
    let universe = window(n, a)?;
    let size = universe.len();
    let count = if m > size {
        BigUint::zero()
    } else {
        let q = CountQuery::new(n).size(m).universe(universe.clone()).convention(conv);
        count_sum_free(&q, cfg)?.total
    };
    Ok(WindowCount {
        n,
        a,
        m,
        candidates: binom_exact(size as u64, m as u64),
        universe,
        count,
    })
}

/// Streams every sum-free set matching a query, in depth-first order of
/// decreasing element choice: a set is followed by its extensions with
/// smaller elements, and larger next elements are tried first.
pub struct SumFreeStream {
    rules: Rules,
    root: Option<Node>,
    stack: Vec<(Node, u128)>,
}

impl Iterator for SumFreeStream {
    type Item = IntSet;

    fn next(&mut self) -> Option<IntSet> {
        if let Some(root) = self.root.take() {
            self.stack.push((root, self.rules.candidates(&root)));
            if self.rules.emits(&root) {
                return Some(self.rules.set_of(&root));
            }
        }
        loop {
            let (node, cand) = self.stack.last_mut()?;
            if *cand == 0 {
                self.stack.pop();
                continue;
            }
            let x = 127 - cand.leading_zeros();
            *cand &= !(1u128 << x);
            let node = *node;
            if !self.rules.child_viable(&node, *cand) {
                *cand = 0;
                continue;
            }
            let child = self.rules.child(&node, x);
            self.stack.push((child, self.rules.candidates(&child)));
            if self.rules.emits(&child) {
                return Some(self.rules.set_of(&child));
            }
        }
    }
}

/// Counts first, then streams, so an over-budget query fails before emitting anything.
pub fn enumerate_sum_free(q: &CountQuery, stream_budget: u64, cfg: &SearchConfig) -> Result<SumFreeStream> {
    let plain = CountQuery { stratify: Stratify::NONE, ..q.clone() };
    let total = count_sum_free(&plain, cfg)?.total;
    if total > BigUint::from(stream_budget) {
        return Err(Error::InstanceTooLarge { estimated: total, budget: stream_budget });
    }
    let universe = q.validate()?;
    let rules = rules_for(q, &universe)?;
    Ok(SumFreeStream { rules, root: Some(rules.root()), stack: Vec::new() })
}

/// Joint distribution of `(ℓ(I), k(I))` over sum-free `m`-subsets of `[n]`,
/// split by whether `I ⊆ O_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataTable {
    pub n: u32,
    pub m: usize,
    /// `(ℓ, k, I ⊆ O_n) → count`.
    pub cells: BTreeMap<(usize, HalfInt, bool), BigCount>,
    pub total: BigCount,
}

impl StrataTable {
    pub fn odd_total(&self) -> BigCount {
        self.cells.iter().filter(|((_, _, odd), _)| *odd).map(|(_, c)| c).sum()
    }

    /// `ℓ → count`, both classes together.
    pub fn ell_marginal(&self) -> BTreeMap<usize, BigCount> {
        let mut out: BTreeMap<usize, BigCount> = BTreeMap::new();
        for ((ell, _, _), c) in &self.cells {
            *out.entry(*ell).or_default() += c;
        }
        out
    }

    pub fn get(&self, ell: usize, k: HalfInt, odd: bool) -> BigCount {
        self.cells.get(&(ell, k, odd)).cloned().unwrap_or_default()
    }
}

pub fn stratified_counts(n: u32, m: usize, conv: Convention, cfg: &SearchConfig) -> Result<StrataTable> {
    let strat = Stratify { ell: true, k: true, a: false, odd_flag: true };
    let q = CountQuery::new(n).size(m).convention(conv).stratify(strat);
    let res = count_sum_free(&q, cfg)?;
    Ok(strata_table(n, m, &res))
}

/// Folds a stratified [`CountResult`] (with `ell`, `k`, `odd_flag`) into a table.
pub fn strata_table(n: u32, m: usize, res: &CountResult) -> StrataTable {
    let mut cells: BTreeMap<(usize, HalfInt, bool), BigCount> = BTreeMap::new();
    for (key, c) in &res.strata {
        if key.size != m {
            continue;
        }
        let cell = (key.ell.unwrap_or(0), key.k.unwrap_or_default(), key.odd_flag.unwrap_or(false));
        *cells.entry(cell).or_default() += c;
    }
    StrataTable { n, m, cells, total: res.of_size(m) }
}
