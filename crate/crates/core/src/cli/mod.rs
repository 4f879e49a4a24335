//! The `sumfree` command line.
//!
//! Exit status: 0 on success, 1 when `verify` reports a failure (or on I/O
//! errors), 2 on usage errors, 3 when a search or enumeration budget is exceeded.

mod cache;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use serde_json::{json, Map, Value};

use crate::bounds::{
    build_pair_graph, check_binom_inequalities, check_gamma_sum, empirical_constant, janson_quantities, odd_pair_family,
    theorem_rhs, BoundFormula, JansonInput,
};
use crate::enumeration::{
    count_in_window, count_oracle, count_sum_free, enumerate_sum_free, stratified_counts, CountQuery, CountResult,
    Stratify,
};
use crate::error::{Error, Result};
use crate::intset::IntSet;
use crate::partitions::{count_restricted, count_small_sumset_sets, p, p_star, PartitionQuery};
use crate::sampling::{sample_uniform_with, structure_trend, SizeRule};
use crate::sets::Convention;
use crate::sumsets::{b_set, doubling, freiman_cover, span, sumset, BSetQuery, FreimanOutcome};
use crate::verify::{restricted_table, run_suite, Suite};

pub use cache::{fingerprint, Cache, CacheRecord};
pub use config::Config;
pub use output::{tabulate, Format, Record, SCHEMA_VERSION, TOOL_VERSION};

#[derive(Debug, Parser)]
#[command(name = "sumfree", version, about = "Exact counts and structure of sum-free sets of integers")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Search node budget.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for cached results.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Settings file with `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// `equal` forbids x + x = z as well; `distinct` only x + y = z with x ≠ y.
    #[arg(long, global = true)]
    pub convention: Option<String>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count sum-free subsets of [n].
    Count(CountArgs),
    /// List sum-free subsets of [n].
    Enumerate(EnumerateArgs),
    /// Counts of sum-free m-sets by (ℓ, k) and odd class.
    Strata(SizeArgs),
    /// Sum-free m-sets inside {⌈n/2⌉ − a, ..., n}.
    Window(WindowArgs),
    /// p(k), or p*_ℓ(k) with --ell.
    Partitions(PartitionArgs),
    /// Sets with prescribed size and sum (or inside [n]) and a sumset cap.
    Restricted(RestrictedArgs),
    /// A + B (or S + S), its size, span and doubling.
    Sumset(SumsetArgs),
    /// Short progression containing S when |S+S| ≤ 3|S| − 4.
    Freiman(SetArgs),
    /// Shifts y with |(S + y) \ (S + S)| ≤ δ|S|.
    Bset(BsetArgs),
    /// Janson moments of a family, or the pair graph for shifts S.
    Janson(JansonArgs),
    /// Evaluate a closed-form bound, or the empirical constant of exact counts.
    Bounds(BoundsArgs),
    /// Check the binomial inequalities or the gamma-sum estimate.
    Inequalities(InequalityArgs),
    /// Rejection-sample uniform sum-free m-sets.
    Sample(SampleArgs),
    /// Scaled ℓ and k medians across n.
    Trend(TrendArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: Option<usize>,
    /// Restrict to this universe, e.g. "5,6,7,8,9,10" or "5..10".
    #[arg(long)]
    pub universe: Option<String>,
    /// Split counts by any of ell,k,a,odd.
    #[arg(long)]
    pub stratify: Option<String>,
    /// Use the exhaustive filter instead of the search.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub universe: Option<String>,
    /// Largest number of sets to stream.
    #[arg(long)]
    pub stream_budget: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SizeArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: usize,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub a: u32,
    #[arg(long)]
    pub m: usize,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub ell: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RestrictedArgs {
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub ell: Option<usize>,
    /// Keep sets with |S+S| at most this.
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub universe_cap: Option<u32>,
    /// Count m-subsets of [n] instead of partitions.
    #[arg(long, requires = "m")]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Emit the count/bound ratio table for ℓ ≤ max-ell, k ≤ max-k.
    #[arg(long)]
    pub table: bool,
    #[arg(long, default_value_t = 12)]
    pub max_ell: usize,
    #[arg(long, default_value_t = 90)]
    pub max_k: u32,
}

#[derive(Debug, Args)]
pub struct SetArgs {
    /// Elements, e.g. "1,2,4,8".
    #[arg(long)]
    pub set: String,
}

#[derive(Debug, Args)]
pub struct SumsetArgs {
    #[arg(long)]
    pub set: String,
    /// Second summand; defaults to the first.
    #[arg(long)]
    pub with: Option<String>,
}

#[derive(Debug, Args)]
pub struct BsetArgs {
    #[arg(long)]
    pub set: String,
    /// Rational in [0, 1), e.g. "1/4".
    #[arg(long, default_value = "0")]
    pub delta: String,
}

#[derive(Debug, Args)]
pub struct JansonArgs {
    /// Family members separated by ';', e.g. "1,2;2,3".
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub ground: Option<String>,
    /// Odd pairs {x, y} with x + y or |x − y| in these evens.
    #[arg(long)]
    pub evens: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u64>,
    /// Build the pair graph on the top half of [n] with these shifts.
    #[arg(long)]
    pub shifts: Option<String>,
    #[arg(long)]
    pub excluded: Option<String>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// CEthm, S+S, S+S2, parts or conj.
    #[arg(long)]
    pub formula: Option<String>,
    /// Comma-separated parameters for --formula.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// Empirical constants from exact counts of sum-free m-subsets of [n].
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Args)]
pub struct InequalityArgs {
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub b: Option<u64>,
    #[arg(long)]
    pub c: Option<u64>,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub gamma_a: Option<f64>,
    #[arg(long)]
    pub gamma_b: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 1000)]
    pub count: u64,
}

#[derive(Debug, Args)]
pub struct TrendArgs {
    /// Comma-separated n values.
    #[arg(long)]
    pub ns: String,
    /// const:C, sqrt[:c], frac:f or half.
    #[arg(long, default_value = "sqrt")]
    pub rule: String,
    #[arg(long, default_value_t = 10_000)]
    pub count: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "small")]
    pub suite: String,
    /// Only these criteria, e.g. "1,2,8".
    #[arg(long)]
    pub only: Option<String>,
}

/// Effective settings: config file values overridden by flags.
#[derive(Debug, Clone)]
pub struct Settings {
    pub config: Config,
    pub out: Option<PathBuf>,
}

impl Settings {
    pub fn resolve(global: &GlobalArgs) -> Result<Settings> {
        let mut config = match &global.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        if let Some(f) = global.format {
            config.format = f;
        }
        if let Some(t) = global.threads {
            config.threads = t;
        }
        if let Some(b) = global.budget {
            config.budget = b;
        }
        if let Some(s) = global.seed {
            config.seed = s;
        }
        if let Some(c) = &global.cache {
            config.cache = Some(c.clone());
        }
        if let Some(c) = &global.convention {
            config.convention =
                Convention::parse(c).ok_or_else(|| Error::invalid(format!("unknown convention `{c}`")))?;
        }
        Ok(Settings { config, out: global.out.clone() })
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. }
        | Error::InstanceTooLarge { .. }
        | Error::OracleUniverseTooLarge { .. }
        | Error::SamplingInfeasible { .. } => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

/// Parses `"1,2,5"`, `"{1, 2, 5}"`, `"1 2 5"` or ranges like `"5..10"`.
pub fn parse_members(text: &str) -> Result<Vec<u32>> {
    let trimmed = text.trim().trim_start_matches('{').trim_end_matches('}');
    let mut out = Vec::new();
    for tok in trimmed.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let num = |s: &str| s.parse::<u32>().map_err(|_| Error::invalid(format!("not a positive integer: `{s}`")));
        match tok.split_once("..") {
            Some((lo, hi)) => {
                let hi = hi.trim_start_matches('=');
                out.extend(num(lo)?..=num(hi)?);
            }
            None => out.push(num(tok)?),
        }
    }
    Ok(out)
}

fn parse_set(text: &str) -> Result<IntSet> {
    IntSet::from_slice(&parse_members(text)?)
}

fn parse_set_in(text: &str, bound: u32) -> Result<IntSet> {
    IntSet::from_members(bound, parse_members(text)?.into_iter().map(u64::from))
}

fn big(v: &crate::BigCount) -> Value {
    Value::String(v.to_string())
}

fn ratio_str(r: &Ratio<u64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_ratio(text: &str) -> Result<Ratio<u64>> {
    let bad = || Error::invalid(format!("not a rational: `{text}`"));
    match text.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse::<u64>().map_err(|_| bad())?);
            if b == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(a, b))
        }
        None => {
            let x: f64 = text.trim().parse().map_err(|_| bad())?;
            // decimals like 0.25
            let scale = 1_000_000u64;
            Ok(Ratio::new((x * scale as f64).round() as u64, scale))
        }
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::invalid(format!("missing --{flag}")))
}

fn count_query(n: u32, m: Option<usize>, universe: &Option<String>, conv: Convention) -> Result<CountQuery> {
    let mut q = CountQuery::new(n).convention(conv);
    q.m = m;
    if let Some(u) = universe {
        q.universe = Some(parse_set_in(u, n.max(1))?);
    }
    Ok(q)
}

fn strata_rows(res: &CountResult) -> Vec<Value> {
    res.strata
        .iter()
        .map(|(key, c)| {
            let mut row = Map::new();
            row.insert("m".into(), json!(key.size));
            if let Some(ell) = key.ell {
                row.insert("ell".into(), json!(ell));
            }
            if let Some(k) = key.k {
                row.insert("k".into(), json!(k.to_string()));
            }
            if let Some(a) = key.a {
                row.insert("a".into(), a.map_or(Value::Null, |a| json!(a.to_string())));
            }
            if let Some(odd) = key.odd_flag {
                row.insert("odd".into(), json!(odd));
            }
            row.insert("count".into(), big(c));
            Value::Object(row)
        })
        .collect()
}

impl Command {
    pub fn op(&self) -> &'static str {
        match self {
            Command::Count(_) => "count",
            Command::Enumerate(_) => "enumerate",
            Command::Strata(_) => "strata",
            Command::Window(_) => "window",
            Command::Partitions(_) => "partitions",
            Command::Restricted(_) => "restricted",
            Command::Sumset(_) => "sumset",
            Command::Freiman(_) => "freiman",
            Command::Bset(_) => "bset",
            Command::Janson(_) => "janson",
            Command::Bounds(_) => "bounds",
            Command::Inequalities(_) => "inequalities",
            Command::Sample(_) => "sample",
            Command::Trend(_) => "trend",
            Command::Verify(_) => "verify",
        }
    }

    /// Parameters that determine the result; the cache key.
    pub fn params(&self, s: &Settings) -> Value {
        let conv = s.config.convention.name();
        match self {
            Command::Count(a) => json!({
                "n": a.n, "m": a.m, "universe": a.universe, "stratify": a.stratify,
                "oracle": a.oracle, "convention": conv,
            }),
            Command::Enumerate(a) => json!({"n": a.n, "m": a.m, "universe": a.universe, "convention": conv}),
            Command::Strata(a) => json!({"n": a.n, "m": a.m, "convention": conv}),
            Command::Window(a) => json!({"n": a.n, "a": a.a, "m": a.m, "convention": conv}),
            Command::Partitions(a) => json!({"k": a.k, "ell": a.ell}),
            Command::Restricted(a) => json!({
                "k": a.k, "ell": a.ell, "cap": a.cap, "universe_cap": a.universe_cap, "n": a.n, "m": a.m,
                "table": a.table, "max_ell": a.table.then_some(a.max_ell), "max_k": a.table.then_some(a.max_k),
            }),
            Command::Sumset(a) => json!({"set": a.set, "with": a.with}),
            Command::Freiman(a) => json!({"set": a.set}),
            Command::Bset(a) => json!({"set": a.set, "delta": a.delta}),
            Command::Janson(a) => json!({
                "family": a.family, "ground": a.ground, "evens": a.evens, "n": a.n, "m": a.m,
                "shifts": a.shifts, "excluded": a.excluded,
            }),
            Command::Bounds(a) => json!({"formula": a.formula, "params": a.params, "n": a.n, "m": a.m, "convention": conv}),
            Command::Inequalities(a) => json!({
                "a": a.a, "b": a.b, "c": a.c, "d": a.d, "gamma_a": a.gamma_a, "gamma_b": a.gamma_b,
            }),
            Command::Sample(a) => json!({
                "n": a.n, "m": a.m, "count": a.count, "seed": s.config.seed,
                "workers": s.config.threads.max(1), "convention": conv,
            }),
            Command::Trend(a) => json!({
                "ns": a.ns, "rule": a.rule, "count": a.count, "seed": s.config.seed, "workers": s.config.threads.max(1),
            }),
            Command::Verify(a) => json!({"suite": a.suite, "only": a.only}),
        }
    }

    pub fn execute(&self, s: &Settings) -> Result<Value> {
        let cfg = s.config.search();
        let conv = s.config.convention;
        match self {
            Command::Count(a) => {
                let mut q = count_query(a.n, a.m, &a.universe, conv)?;
                if let Some(st) = &a.stratify {
                    q.stratify = Stratify::parse(st)?;
                }
                let res = if a.oracle { count_oracle(&q)? } else { count_sum_free(&q, &cfg)? };
                let mut out = json!({
                    "n": a.n, "m": a.m, "convention": conv.name(), "count": big(&res.total),
                    "method": res.method,
                });
                if !q.stratify.is_none() {
                    out["rows"] = Value::Array(strata_rows(&res));
                } else if a.m.is_none() {
                    out["rows"] = res.by_size.iter().map(|(m, c)| json!({"m": m, "count": big(c)})).collect();
                }
                Ok(out)
            }
            Command::Enumerate(a) => {
                let q = count_query(a.n, a.m, &a.universe, conv)?;
                let limit = a.stream_budget.unwrap_or(s.config.stream_budget);
                let rows: Vec<Value> = enumerate_sum_free(&q, limit, &cfg)?
                    .map(|set| json!({"size": set.len(), "set": set.to_string()}))
                    .collect();
                Ok(json!({"n": a.n, "m": a.m, "convention": conv.name(), "count": rows.len(), "rows": rows}))
            }
            Command::Strata(a) => {
                let t = stratified_counts(a.n, a.m, conv, &cfg)?;
                let rows: Vec<Value> = t
                    .cells
                    .iter()
                    .map(|((ell, k, odd), c)| json!({"ell": ell, "k": k.to_string(), "odd": odd, "count": big(c)}))
                    .collect();
                Ok(json!({
                    "n": a.n, "m": a.m, "convention": conv.name(), "total": big(&t.total),
                    "odd_total": big(&t.odd_total()), "rows": rows,
                }))
            }
            Command::Window(a) => {
                let w = count_in_window(a.n, a.a, a.m, conv, &cfg)?;
                Ok(json!({
                    "n": a.n, "a": a.a, "m": a.m, "window_min": w.universe.min(), "window_size": w.universe.len(),
                    "count": big(&w.count), "candidates": big(&w.candidates), "probability": w.probability(),
                }))
            }
            Command::Partitions(a) => Ok(match a.ell {
                Some(ell) => json!({"k": a.k, "ell": ell, "count": big(&p_star(a.k, ell))}),
                None => json!({"k": a.k, "count": big(&p(a.k))}),
            }),
            Command::Restricted(a) => restricted(a, s),
            Command::Sumset(a) => {
                let first = parse_set(&a.set)?;
                let second = match &a.with {
                    Some(w) => parse_set(w)?,
                    None => first.clone(),
                };
                let ss = sumset(&first, &second);
                let mut out = json!({
                    "set": first.to_string(), "sumset": ss.to_string(), "size": ss.len(),
                    "span": if ss.is_empty() { Value::Null } else { json!(span(&ss)?) },
                });
                if a.with.is_none() && !first.is_empty() {
                    out["doubling"] = json!(ratio_str(&doubling(&first)?));
                }
                Ok(out)
            }
            Command::Freiman(a) => {
                let set = parse_set(&a.set)?;
                Ok(match freiman_cover(&set)? {
                    FreimanOutcome::Cover { cover, sumset_size, length_bound } => json!({
                        "set": set.to_string(), "applicable": true, "sumset_size": sumset_size,
                        "first": cover.first, "difference": cover.difference, "length": cover.length,
                        "length_bound": length_bound,
                    }),
                    FreimanOutcome::NotApplicable { sumset_size } => json!({
                        "set": set.to_string(), "applicable": false, "sumset_size": sumset_size,
                    }),
                })
            }
            Command::Bset(a) => {
                let set = parse_set(&a.set)?;
                let delta = parse_ratio(&a.delta)?;
                let b = b_set(&BSetQuery::new(set.clone(), delta)?);
                let ss = sumset(&set, &set).len();
                let bound = ss as f64 / (1.0 - delta.to_f64_lossy());
                Ok(json!({
                    "set": set.to_string(), "delta": ratio_str(&delta),
                    "b_set": b.iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
                    "size": b.len(), "sumset_size": ss, "bound": bound, "holds": (b.len() as f64) <= bound,
                }))
            }
            Command::Janson(a) => janson(a),
            Command::Bounds(a) => bounds(a, s),
            Command::Inequalities(a) => inequalities(a),
            Command::Sample(a) => {
                let r = sample_uniform_with(a.n, a.m, a.count, s.config.seed, s.config.threads.max(1), conv)?;
                let quant = |q: &[(f64, f64)]| q.iter().map(|(l, v)| json!({"level": l, "value": v})).collect::<Vec<_>>();
                let rows: Vec<Value> = r
                    .histogram
                    .iter()
                    .map(|((ell, k, odd), c)| json!({"ell": ell, "k": k.to_string(), "odd": odd, "samples": c}))
                    .collect();
                Ok(json!({
                    "n": r.n, "m": r.m, "sample_count": r.sample_count, "seed": r.seed, "workers": r.workers,
                    "convention": conv.name(), "acceptance": r.acceptance.rate, "acceptance_source": r.acceptance.source,
                    "ell_quantiles": quant(&r.ell_quantiles), "k_quantiles": quant(&r.k_quantiles), "rows": rows,
                }))
            }
            Command::Trend(a) => {
                let ns = parse_members(&a.ns)?;
                let rule = SizeRule::parse(&a.rule)?;
                let t = structure_trend(&ns, rule, a.count, s.config.seed, &cfg)?;
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| {
                        json!({
                            "n": r.n, "m": r.m, "exact": r.exact, "ell_scaled_median": r.ell_scaled_median,
                            "k_scaled_median": r.k_scaled_median, "odd_fraction": r.odd_fraction,
                            "in_window": r.in_window,
                        })
                    })
                    .collect();
                Ok(json!({
                    "rule": a.rule, "seed": s.config.seed, "heuristic_windows": true,
                    "ell_window": [t.ell_window.0, t.ell_window.1], "k_window": [t.k_window.0, t.k_window.1],
                    "stable": t.stable, "rows": rows,
                }))
            }
            Command::Verify(a) => {
                let suite = Suite::parse(&a.suite).ok_or_else(|| Error::invalid(format!("unknown suite `{}`", a.suite)))?;
                let only: Vec<u8> = match &a.only {
                    Some(list) => parse_members(list)?.into_iter().map(|x| x as u8).collect(),
                    None => Vec::new(),
                };
                let reports = run_suite(suite, &only, &cfg);
                let passed = reports.iter().all(|r| r.passed);
                Ok(json!({"suite": a.suite, "passed": passed, "rows": reports}))
            }
        }
    }
}

trait LossyF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyF64 for Ratio<u64> {
    fn to_f64_lossy(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

fn restricted(a: &RestrictedArgs, s: &Settings) -> Result<Value> {
    let budget = s.config.partition_budget;
    if a.table {
        let rows = restricted_table(a.max_ell, a.max_k)?;
        return Ok(json!({"max_ell": a.max_ell, "max_k": a.max_k, "rows": rows}));
    }
    if let Some(n) = a.n {
        let m = need(a.m, "m")?;
        let cap = need(a.cap, "cap")?;
        let count = count_small_sumset_sets(n, m, cap, budget)?;
        return Ok(json!({"n": n, "m": m, "cap": cap, "count": big(&count)}));
    }
    let mut q = PartitionQuery::new(need(a.k, "k")?, need(a.ell, "ell")?);
    q.sumset_cap = a.cap;
    q.universe_cap = a.universe_cap;
    let count = count_restricted(&q, budget)?;
    Ok(json!({"k": q.k, "ell": q.ell, "cap": a.cap, "universe_cap": a.universe_cap, "count": big(&count)}))
}

fn janson(a: &JansonArgs) -> Result<Value> {
    if let Some(shifts) = &a.shifts {
        let n = need(a.n, "n")?;
        let shifts = parse_set_in(shifts, n.max(1))?;
        let excluded = match &a.excluded {
            Some(e) => parse_set_in(e, n.max(1))?,
            None => IntSet::empty(n.max(1)),
        };
        let g = build_pair_graph(n, &shifts, &excluded)?;
        return Ok(json!({
            "n": n, "shifts": shifts.to_string(), "vertices": g.vertices().len(),
            "edges": g.edge_count(), "max_degree": g.max_degree(),
        }));
    }
    let m = need(a.m, "m")?;
    let (family, ground) = if let Some(evens) = &a.evens {
        let n = need(a.n, "n")?;
        let evens = parse_set_in(evens, n.max(1))?;
        (odd_pair_family(n, &evens), IntSet::odds(n))
    } else {
        let ground = parse_set(&need(a.ground.clone(), "ground")?)?;
        let bound = ground.bound();
        let family = need(a.family.clone(), "family")?
            .split(';')
            .filter(|p| !p.trim().is_empty())
            .map(|p| parse_set_in(p, bound))
            .collect::<Result<Vec<_>>>()?;
        (family, ground)
    };
    let size = family.len();
    let q = janson_quantities(&JansonInput::new(family, ground, m)?);
    Ok(json!({
        "members": size, "m": m, "mu": q.mu.value(), "delta": q.delta.value(),
        "ln_bound": q.bound.ln(), "bound": q.bound.value(),
    }))
}

fn bounds(a: &BoundsArgs, s: &Settings) -> Result<Value> {
    if let Some(name) = &a.formula {
        let params = match &a.params {
            Some(p) => p
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| Error::invalid(format!("bad parameter `{x}`"))))
                .collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        let f = BoundFormula::parse(name, &params)?;
        let v = theorem_rhs(&f);
        return Ok(json!({"formula": f.name(), "params": params, "ln": v.ln(), "log2": v.log2(), "value": v.value()}));
    }
    let n = need(a.n, "n or --formula")?;
    let q = CountQuery::new(n).convention(s.config.convention);
    let res = count_sum_free(&q, &s.config.search())?;
    let rows: Vec<Value> = (1..=n as usize)
        .filter(|m| a.m.is_none_or(|x| x == *m))
        .map(|m| {
            let count = res.of_size(m);
            json!({"n": n, "m": m, "count": big(&count), "constant": empirical_constant(n as u64, m as u64, &count)})
        })
        .collect();
    Ok(json!({"n": n, "convention": s.config.convention.name(), "rows": rows}))
}

fn inequalities(a: &InequalityArgs) -> Result<Value> {
    if let (Some(ga), Some(gb)) = (a.gamma_a, a.gamma_b) {
        let r = check_gamma_sum(ga, gb)?;
        return Ok(serde_json::to_value(r).expect("json"));
    }
    let r = check_binom_inequalities(need(a.a, "a")?, need(a.b, "b")?, need(a.c, "c")?, a.d.unwrap_or(0))?;
    let row = |name: &str, c: &crate::bounds::InequalityCheck| {
        json!({"inequality": name, "ln_lhs": c.lhs.ln(), "ln_rhs": c.rhs.ln(), "holds": c.holds})
    };
    Ok(json!({
        "all_hold": r.all_hold(),
        "rows": [row("drop_bottom", &r.drop_bottom), row("drop_top", &r.drop_top), row("combined", &r.combined)],
    }))
}

/// Parses and runs one command line, writing to `stdout`/`stderr`; returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let settings = Settings::resolve(&cli.global)?;
    let op = cli.command.op();
    let params = cli.command.params(&settings);
    let cache = match (&cli.command, &settings.config.cache) {
        (Command::Verify(_), _) | (_, None) => None,
        (_, Some(dir)) => Some(Cache::new(dir)),
    };

    let record = match cache.as_ref().and_then(|c| c.load(op, &params)) {
        Some(hit) => hit.to_record(),
        None => {
            let start = Instant::now();
            let result = cli.command.execute(&settings)?;
            let rec = Record::new(op, params, result, start.elapsed().as_millis() as u64);
            if let Some(c) = &cache {
                c.store(&CacheRecord::from_record(&rec))?;
            }
            rec
        }
    };

    let text = record.render(settings.config.format)?;
    match &settings.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    let failed = matches!(cli.command, Command::Verify(_)) && record.result["passed"] == Value::Bool(false);
    Ok(if failed { 1 } else { 0 })
}
