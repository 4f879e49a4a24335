//! Log-domain evaluation of closed-form bounds: binomial inequalities, the
//! gamma-sum estimate, hypergeometric Janson quantities, forbidden-pair
//! graphs, theorem right-hand sides and empirical constants.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::intset::IntSet;

/// Relative tolerance for every log-domain comparison.
pub const REL_TOL: f64 = 1e-9;

/// A nonnegative real stored as its natural log, with an explicit zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    ln: f64,
    zero: bool,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { ln: f64::NEG_INFINITY, zero: true };
    pub const ONE: LogValue = LogValue { ln: 0.0, zero: false };

    pub fn from_ln(ln: f64) -> Self {
        if ln == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue { ln, zero: false }
        }
    }

    /// Panics on negative or NaN input.
    pub fn from_f64(v: f64) -> Self {
        assert!(v >= 0.0, "LogValue holds nonnegative reals, got {v}");
        if v == 0.0 {
            Self::ZERO
        } else {
            LogValue { ln: v.ln(), zero: false }
        }
    }

    pub fn from_big(v: &BigUint) -> Self {
        if v.is_zero() {
            Self::ZERO
        } else {
            Self::from_ln(ln_big(v))
        }
    }

    pub fn is_zero(self) -> bool {
        self.zero
    }

    /// Natural log; `-inf` for zero.
    pub fn ln(self) -> f64 {
        self.ln
    }

    pub fn log2(self) -> f64 {
        self.ln / std::f64::consts::LN_2
    }

    pub fn value(self) -> f64 {
        if self.zero {
            0.0
        } else {
            self.ln.exp()
        }
    }

    pub fn powf(self, e: f64) -> Self {
        if self.zero {
            if e == 0.0 {
                Self::ONE
            } else {
                Self::ZERO
            }
        } else {
            Self::from_ln(self.ln * e)
        }
    }

    /// `self ≤ other` up to [`REL_TOL`].
    pub fn le_tol(self, other: LogValue) -> bool {
        if self.zero {
            return true;
        }
        if other.zero {
            return false;
        }
        self.ln <= other.ln + REL_TOL * other.ln.abs().max(1.0)
    }

    /// Three-way comparison treating values within [`REL_TOL`] as equal.
    pub fn cmp_tol(self, other: LogValue) -> Ordering {
        match (self.le_tol(other), other.le_tol(self)) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }

    pub fn max(self, other: LogValue) -> LogValue {
        if self.zero || (!other.zero && other.ln > self.ln) {
            other
        } else {
            self
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.zero || rhs.zero {
            Self::ZERO
        } else {
            Self::from_ln(self.ln + rhs.ln)
        }
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        if self.zero {
            return rhs;
        }
        if rhs.zero {
            return self;
        }
        let (hi, lo) = if self.ln >= rhs.ln { (self.ln, rhs.ln) } else { (rhs.ln, self.ln) };
        Self::from_ln(hi + (lo - hi).exp().ln_1p())
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            f.write_str("0")
        } else {
            write!(f, "exp({:.6})", self.ln)
        }
    }
}

/// `ln v` for arbitrarily large `v`.
pub fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `C(a, b)` exactly.
pub fn binom_exact(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// `ln C(a, b)` via log-gamma; zero when `b > a`.
pub fn log_binom(a: u64, b: u64) -> LogValue {
    if b > a {
        return LogValue::ZERO;
    }
    if b == 0 || b == a {
        return LogValue::ONE;
    }
    log_binom_real(a as f64, b as f64)
}

/// `ln C(x, y)` for real `x ≥ y ≥ 0` through the gamma function.
pub fn log_binom_real(x: f64, y: f64) -> LogValue {
    if y > x || y < 0.0 {
        return LogValue::ZERO;
    }
    LogValue::from_ln(ln_gamma(x + 1.0) - ln_gamma(y + 1.0) - ln_gamma(x - y + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub lhs: LogValue,
    pub rhs: LogValue,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(lhs: LogValue, rhs: LogValue) -> Self {
        InequalityCheck { lhs, rhs, holds: lhs.le_tol(rhs) }
    }
}

/// Both sides of the three binomial-coefficient inequalities for `(a, b, c, d)`:
///
/// * `C(a, b−c) ≤ (b/(a−b))^c · C(a, b)`
/// * `C(a−c, b) ≤ ((a−c)/a)^b · C(a, b)`
/// * `C(a−c, b−d) ≤ ((a−c)/a)^{b−d} · (b/(a−b))^d · C(a, b)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinomReport {
    pub drop_bottom: InequalityCheck,
    pub drop_top: InequalityCheck,
    pub combined: InequalityCheck,
}

impl BinomReport {
    pub fn all_hold(&self) -> bool {
        self.drop_bottom.holds && self.drop_top.holds && self.combined.holds
    }
}

pub fn check_binom_inequalities(a: u64, b: u64, c: u64, d: u64) -> Result<BinomReport> {
    if !(a > b && b > c) {
        return Err(Error::invalid(format!("need a > b > c >= 0, got a={a} b={b} c={c}")));
    }
    if d > b {
        return Err(Error::invalid(format!("need d <= b, got d={d} b={b}")));
    }
    let (af, bf, cf, df) = (a as f64, b as f64, c as f64, d as f64);
    let base = log_binom(a, b);
    let ratio_low = LogValue::from_f64(bf / (af - bf));
    let ratio_top = LogValue::from_f64((af - cf) / af);
    Ok(BinomReport {
        drop_bottom: InequalityCheck::new(log_binom(a, b - c), ratio_low.powf(cf) * base),
        drop_top: InequalityCheck::new(log_binom(a - c, b), ratio_top.powf(bf) * base),
        combined: InequalityCheck::new(
            log_binom(a - c, b - d),
            ratio_top.powf(bf - df) * ratio_low.powf(df) * base,
        ),
    })
}

/// Constant claimed for the gamma-sum estimate.
pub const GAMMA_SUM_CONSTANT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaSumReport {
    pub a: f64,
    pub b: f64,
    /// `Σ_{k≥1} k^a e^{−bk}`.
    pub sum: f64,
    /// `Γ(a+1) / b^{a+1}`.
    pub gamma_term: f64,
    /// `sum / gamma_term`, the tightest constant for this `(a, b)`.
    pub tightest_constant: f64,
    pub holds: bool,
}

pub fn check_gamma_sum(a: f64, b: f64) -> Result<GammaSumReport> {
    if !(a >= 1.0 && b > 0.0) {
        return Err(Error::invalid(format!("need a >= 1 and b > 0, got a={a} b={b}")));
    }
    // Terms k^a e^{-bk} peak at k = a/b; stop once past the peak and negligible.
    let peak = a / b;
    let mut sum = 0.0f64;
    let mut k = 1u64;
    loop {
        let kf = k as f64;
        let term = (a * kf.ln() - b * kf).exp();
        sum += term;
        if kf > peak && term < 1e-15 * sum {
            break;
        }
        k += 1;
    }
    let gamma_term = (ln_gamma(a + 1.0) - (a + 1.0) * b.ln()).exp();
    let tightest_constant = sum / gamma_term;
    Ok(GammaSumReport {
        a,
        b,
        sum,
        gamma_term,
        tightest_constant,
        holds: tightest_constant <= GAMMA_SUM_CONSTANT,
    })
}

/// A family `{U_i}` over a ground set `X` with a uniform random `m`-subset `R ⊆ X`.
#[derive(Debug, Clone)]
pub struct JansonInput {
    family: Vec<IntSet>,
    ground: IntSet,
    m: u64,
}

impl JansonInput {
    pub fn new(family: Vec<IntSet>, ground: IntSet, m: u64) -> Result<Self> {
        if let Some(u) = family.iter().find(|u| !u.is_subset(&ground)) {
            return Err(Error::invalid(format!("family member {u} is not inside the ground set")));
        }
        if m > ground.len() as u64 {
            return Err(Error::invalid(format!("m = {m} exceeds |X| = {}", ground.len())));
        }
        Ok(JansonInput { family, ground, m })
    }

    pub fn family(&self) -> &[IntSet] {
        &self.family
    }

    pub fn ground(&self) -> &IntSet {
        &self.ground
    }

    pub fn ground_size(&self) -> u64 {
        self.ground.len() as u64
    }

    pub fn m(&self) -> u64 {
        self.m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JansonQuantities {
    pub mu: LogValue,
    pub delta: LogValue,
    /// `max(e^{−μ/2}, e^{−μ²/(2Δ)})`, without the unspecified leading constant.
    pub bound: LogValue,
}

pub fn janson_quantities(inp: &JansonInput) -> JansonQuantities {
    let x = inp.ground_size();
    let p = if x == 0 { 0.0 } else { inp.m as f64 / x as f64 };
    let weight = |size: usize| p.powi(size as i32);
    let mu: f64 = inp.family.iter().map(|u| weight(u.len())).sum();

    // element -> indices of the members containing it
    let bound = inp.ground.max().unwrap_or(0) as usize;
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); bound + 1];
    for (i, u) in inp.family.iter().enumerate() {
        for v in u {
            holders[v as usize].push(i);
        }
    }
    let mut seen = vec![usize::MAX; inp.family.len()];
    let mut delta = 0.0;
    for (i, u) in inp.family.iter().enumerate() {
        for v in u {
            for &j in &holders[v as usize] {
                if j == i || seen[j] == i {
                    continue;
                }
                seen[j] = i;
                let w = &inp.family[j];
                delta += weight(u.len() + w.len() - u.intersection_len(w));
            }
        }
    }

    let first = LogValue::from_ln(-mu / 2.0);
    let second = if delta == 0.0 {
        LogValue::ZERO
    } else {
        LogValue::from_ln(-mu * mu / (2.0 * delta))
    };
    JansonQuantities {
        mu: LogValue::from_f64(mu),
        delta: LogValue::from_f64(delta),
        bound: first.max(second),
    }
}

/// Pairs `{x, y} ⊆ O_n`, `x ≠ y`, with `x + y ∈ evens` or `|x − y| ∈ evens`.
pub fn odd_pair_family(n: u32, evens: &IntSet) -> Vec<IntSet> {
    let odds = IntSet::odds(n).to_vec();
    let mut family = Vec::new();
    for (i, &x) in odds.iter().enumerate() {
        for &y in &odds[i + 1..] {
            if evens.contains((x + y) as i64) || evens.contains((y - x) as i64) {
                family.push(IntSet::from_members(n, [x as u64, y as u64]).expect("odds in [n]"));
            }
        }
    }
    family
}

/// Graph on the top half of `[n]` (minus `excluded`) with edges `{x, x+s}`, `s ∈ S`.
#[derive(Debug, Clone)]
pub struct PairGraph {
    vertices: IntSet,
    edges: Vec<(u32, u32)>,
}

impl PairGraph {
    pub fn vertices(&self) -> &IntSet {
        &self.vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.vertices.bound() as usize + 1];
        for &(a, b) in &self.edges {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }
}

pub fn build_pair_graph(n: u32, shifts: &IntSet, excluded: &IntSet) -> Result<PairGraph> {
    let half = n.div_ceil(2);
    if shifts.max().is_some_and(|s| s > half) {
        return Err(Error::invalid(format!("shift set {shifts} must lie in [{half}]")));
    }
    if excluded.min().is_some_and(|x| x <= half) || excluded.max().is_some_and(|x| x > n) {
        return Err(Error::invalid(format!("excluded set {excluded} must lie in the top half of [{n}]")));
    }
    let vertices = IntSet::from_members(
        n,
        (half + 1..=n).filter(|&x| !excluded.contains(x as i64)).map(u64::from),
    )?;
    let mut edges = Vec::new();
    for s in shifts {
        for x in &vertices {
            if vertices.contains((x + s) as i64) {
                edges.push((x, x + s));
            }
        }
    }
    Ok(PairGraph { vertices, edges })
}

/// The closed-form right-hand sides that can be evaluated at finite size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum BoundFormula {
    /// `2^{Cn/m} · C(⌈n/2⌉, m)`.
    #[serde(rename = "CEthm")]
    CameronErdos { n: u64, m: u64, c: f64 },
    /// `2^{δℓ} · (2cek / 3ℓ²)^ℓ`.
    #[serde(rename = "S+S")]
    SmallSumset { k: f64, ell: f64, c: f64, delta: f64 },
    /// `2^{δℓ} · ((4λ − 3)e / 6)^ℓ`.
    #[serde(rename = "S+S2")]
    SmallDoubling { k: f64, ell: f64, lambda: f64, delta: f64 },
    /// `(e²k / ℓ²)^ℓ`.
    #[serde(rename = "parts")]
    DistinctParts { k: f64, ell: f64 },
    /// `2^{δm} · C(N/2, m)`.
    #[serde(rename = "conj")]
    Conjecture { big_n: f64, m: f64, delta: f64 },
}

impl BoundFormula {
    pub const NAMES: [&'static str; 5] = ["CEthm", "S+S", "S+S2", "parts", "conj"];

    /// Builds a formula from its short name and positional parameters:
    /// `CEthm n m C`, `S+S k ℓ c δ`, `S+S2 k ℓ λ δ`, `parts k ℓ`, `conj N m δ`.
    pub fn parse(name: &str, params: &[f64]) -> Result<Self> {
        let want = match name {
            "CEthm" | "S+S" | "S+S2" => if name == "CEthm" { 3 } else { 4 },
            "parts" => 2,
            "conj" => 3,
            _ => return Err(Error::UnknownFormula(name.to_string())),
        };
        if params.len() != want {
            return Err(Error::invalid(format!("{name} takes {want} parameters, got {}", params.len())));
        }
        let p = params;
        Ok(match name {
            "CEthm" => BoundFormula::CameronErdos { n: p[0] as u64, m: p[1] as u64, c: p[2] },
            "S+S" => BoundFormula::SmallSumset { k: p[0], ell: p[1], c: p[2], delta: p[3] },
            "S+S2" => BoundFormula::SmallDoubling { k: p[0], ell: p[1], lambda: p[2], delta: p[3] },
            "parts" => BoundFormula::DistinctParts { k: p[0], ell: p[1] },
            _ => BoundFormula::Conjecture { big_n: p[0], m: p[1], delta: p[2] },
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundFormula::CameronErdos { .. } => "CEthm",
            BoundFormula::SmallSumset { .. } => "S+S",
            BoundFormula::SmallDoubling { .. } => "S+S2",
            BoundFormula::DistinctParts { .. } => "parts",
            BoundFormula::Conjecture { .. } => "conj",
        }
    }
}

fn pow2(e: f64) -> LogValue {
    LogValue::from_ln(e * std::f64::consts::LN_2)
}

fn base_pow(base: f64, e: f64) -> LogValue {
    if base <= 0.0 {
        if e == 0.0 { LogValue::ONE } else { LogValue::ZERO }
    } else {
        LogValue::from_ln(e * base.ln())
    }
}

pub fn theorem_rhs(f: &BoundFormula) -> LogValue {
    use std::f64::consts::E;
    match *f {
        BoundFormula::CameronErdos { n, m, c } => {
            pow2(c * n as f64 / m as f64) * log_binom(n.div_ceil(2), m)
        }
        BoundFormula::SmallSumset { k, ell, c, delta } => {
            pow2(delta * ell) * base_pow(2.0 * c * E * k / (3.0 * ell * ell), ell)
        }
        BoundFormula::SmallDoubling { ell, lambda, delta, .. } => {
            pow2(delta * ell) * base_pow((4.0 * lambda - 3.0) * E / 6.0, ell)
        }
        BoundFormula::DistinctParts { k, ell } => base_pow(E * E * k / (ell * ell), ell),
        BoundFormula::Conjecture { big_n, m, delta } => pow2(delta * m) * log_binom_real(big_n / 2.0, m),
    }
}

/// `C*(n, m) = (m/n) · log₂(count / C(⌈n/2⌉, m))`; `None` when the count or
/// the binomial is zero.
pub fn empirical_constant(n: u64, m: u64, count: &BigUint) -> Option<f64> {
    let base = log_binom(n.div_ceil(2), m);
    if count.is_zero() || base.is_zero() {
        return None;
    }
    let ratio = (ln_big(count) - base.ln()) / std::f64::consts::LN_2;
    Some(m as f64 / n as f64 * ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1.0)
    }

    #[test]
    fn log_value_arithmetic() {
        let a = LogValue::from_f64(3.0);
        let b = LogValue::from_f64(5.0);
        assert!(close((a + b).value(), 8.0));
        assert!(close((a * b).value(), 15.0));
        assert_eq!(a + LogValue::ZERO, a);
        assert!((a * LogValue::ZERO).is_zero());
        assert!(a.le_tol(b) && !b.le_tol(a));
        assert_eq!(a.cmp_tol(LogValue::from_ln(3f64.ln() * (1.0 + 1e-12))), Ordering::Equal);
        assert!(LogValue::ZERO.powf(0.0) == LogValue::ONE);
    }

    #[test]
    fn log_binom_examples() {
        assert_eq!(log_binom(7, 0).ln(), 0.0);
        assert!(close(log_binom(4, 2).ln(), 6f64.ln()));
        assert!(log_binom(3, 5).is_zero());
        assert!(close(log_binom(50, 25).ln(), ln_big(&oracle::binom_pascal(50, 25))));
    }

    #[test]
    fn log_binom_matches_exact_up_to_60() {
        for a in 0..=60u64 {
            for b in 0..=a {
                let exact = oracle::binom_pascal(a as usize, b as usize);
                assert_eq!(binom_exact(a, b), exact);
                assert!(close(log_binom(a, b).ln(), ln_big(&exact)), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn ln_big_handles_huge_values() {
        let v = BigUint::from(3u32).pow(2000);
        assert!(close(ln_big(&v), 2000.0 * 3f64.ln()));
    }

    #[test]
    fn binom_inequality_examples() {
        let r = check_binom_inequalities(10, 4, 2, 1).unwrap();
        assert!(r.all_hold());
        assert!(close(r.drop_bottom.lhs.value(), 45.0));
        assert!(close(r.drop_bottom.rhs.value(), (4.0f64 / 6.0).powi(2) * 210.0));

        let r = check_binom_inequalities(12, 5, 0, 0).unwrap();
        assert_eq!(r.drop_bottom.lhs.cmp_tol(r.drop_bottom.rhs), Ordering::Equal);
        assert!(r.all_hold());

        assert!(check_binom_inequalities(5, 5, 0, 0).is_err());
        assert!(check_binom_inequalities(9, 4, 1, 5).is_err());
    }

    #[test]
    fn gamma_sum_examples() {
        let r = check_gamma_sum(1.0, 1.0).unwrap();
        assert!(close(r.sum, E / (E - 1.0).powi(2)));
        assert!(r.holds);
        let r = check_gamma_sum(1.0, 40.0).unwrap();
        assert!(close(r.sum, (-40f64).exp()) || (r.sum - (-40f64).exp()).abs() < 1e-30);
        assert!(r.holds);
        for a in 1..=10 {
            for tenth in 1..=50 {
                assert!(check_gamma_sum(a as f64, tenth as f64 / 10.0).unwrap().holds);
            }
        }
        assert!(check_gamma_sum(0.5, 1.0).is_err());
    }

    fn family(sets: &[&[u64]], n: u32) -> Vec<IntSet> {
        sets.iter().map(|s| IntSet::from_members(n, s.iter().copied()).unwrap()).collect()
    }

    #[test]
    fn janson_examples() {
        let ground = IntSet::full(10);
        let inp = JansonInput::new(family(&[&[1, 2]], 10), ground.clone(), 5).unwrap();
        let q = janson_quantities(&inp);
        assert!(close(q.mu.value(), 0.25));
        assert!(q.delta.is_zero());
        assert!(close(q.bound.ln(), -0.125));

        let inp = JansonInput::new(family(&[&[1, 2], &[3, 4]], 10), ground, 5).unwrap();
        let q = janson_quantities(&inp);
        assert!(q.delta.is_zero());
        assert!(close(q.mu.value(), 2.0 * 0.25));

        let evens = IntSet::from_members(10, [2u64]).unwrap();
        let fam = odd_pair_family(10, &evens);
        assert_eq!(fam.iter().map(|u| u.to_vec()).collect::<Vec<_>>(), vec![vec![1, 3], vec![3, 5], vec![5, 7], vec![7, 9]]);
        let inp = JansonInput::new(fam.clone(), IntSet::odds(10), 3).unwrap();
        let q = janson_quantities(&inp);
        let raw: Vec<Vec<u32>> = fam.iter().map(IntSet::to_vec).collect();
        let (mu, delta) = oracle::janson_double_loop(&raw, 5, 3);
        assert!(close(q.mu.value(), mu));
        assert!(close(q.delta.value(), delta));
    }

    #[test]
    fn janson_rejects_foreign_members() {
        let fam = family(&[&[2, 4]], 10);
        assert!(JansonInput::new(fam, IntSet::odds(10), 2).is_err());
    }

    #[test]
    fn pair_graph_examples() {
        let none = IntSet::empty(10);
        let g = build_pair_graph(10, &IntSet::from_members(10, [4u64]).unwrap(), &none).unwrap();
        assert_eq!(g.edges(), &[(6, 10)]);
        let g = build_pair_graph(10, &IntSet::from_members(10, [1u64]).unwrap(), &none).unwrap();
        assert_eq!(g.edges(), &[(6, 7), (7, 8), (8, 9), (9, 10)]);
        assert_eq!(g.max_degree(), 2);
        assert_eq!(g.degree(6), 1);

        let excl = IntSet::from_members(10, [8u64]).unwrap();
        let g = build_pair_graph(10, &IntSet::from_members(10, [1u64]).unwrap(), &excl).unwrap();
        assert_eq!(g.edges(), &[(6, 7), (9, 10)]);

        assert!(build_pair_graph(10, &IntSet::from_members(10, [6u64]).unwrap(), &none).is_err());
        assert!(build_pair_graph(10, &IntSet::from_members(10, [1u64]).unwrap(), &IntSet::from_members(10, [3u64]).unwrap()).is_err());
    }

    #[test]
    fn theorem_rhs_examples() {
        let parts = theorem_rhs(&BoundFormula::DistinctParts { k: 8.0, ell: 3.0 });
        assert!(close(parts.ln(), 3.0 * (E * E * 8.0 / 9.0).ln()));
        assert!(LogValue::from_f64(2.0).le_tol(parts));

        for (n, m) in [(10u64, 3u64), (21, 4)] {
            let ce = theorem_rhs(&BoundFormula::CameronErdos { n, m, c: 0.0 });
            assert_eq!(ce, log_binom(n.div_ceil(2), m));
        }

        let s2 = theorem_rhs(&BoundFormula::SmallDoubling { k: 60.0, ell: 10.0, lambda: 2.0, delta: 0.0 });
        assert!(close(s2.ln(), 10.0 * (5.0 * E / 6.0).ln()));

        let conj = theorem_rhs(&BoundFormula::Conjecture { big_n: 20.0, m: 3.0, delta: 0.0 });
        assert!(close(conj.value(), 120.0));

        assert!(matches!(BoundFormula::parse("nope", &[]), Err(Error::UnknownFormula(_))));
        assert!(BoundFormula::parse("parts", &[1.0]).is_err());
        assert_eq!(BoundFormula::parse("parts", &[8.0, 3.0]).unwrap().name(), "parts");
    }

    #[test]
    fn empirical_constant_examples() {
        assert!(empirical_constant(10, 3, &binom_exact(5, 3)).unwrap().abs() < 1e-12);
        assert!(close(empirical_constant(4, 2, &BigUint::from(4u32)).unwrap(), 1.0));
        assert_eq!(empirical_constant(10, 3, &BigUint::zero()), None);
    }

    proptest! {
        #[test]
        fn pair_graph_counts_and_degrees(half in 1u32..=100, raw in proptest::collection::vec(1u64..=100, 0..12)) {
            let n = 2 * half;
            let shifts = IntSet::from_members(n, raw.into_iter().filter(|&s| s <= half as u64)).unwrap();
            let g = build_pair_graph(n, &shifts, &IntSet::empty(n)).unwrap();
            let expect: u64 = shifts.iter().map(|s| (half - s) as u64).sum();
            prop_assert_eq!(g.edge_count() as u64, expect);
            prop_assert!(g.max_degree() <= 2 * shifts.len());
        }
    }
}
