//! The Schur-triple hypergraph `H_n` on `[n]` and the extremal family `B_n`.

use num_bigint::BigUint;

use crate::intset::IntSet;
use crate::BigCount;

/// An unordered Schur triple `{x, y, z}` with `x < y < z = x + y`.
pub type SchurTriple = (u32, u32, u32);

/// 3-uniform hypergraph on `[n]` whose edges are the distinct-element
/// solutions of `x + y = z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchurHypergraph {
    n: u32,
}

impl SchurHypergraph {
    pub fn new(n: u32) -> Self {
        SchurHypergraph { n }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = SchurTriple> {
        schur_edges(self.n)
    }

    /// `e(H_n) = Σ_{z=3}^{n} ⌊(z − 1)/2⌋`.
    pub fn edge_count(&self) -> u64 {
        (3..=self.n as u64).map(|z| (z - 1) / 2).sum()
    }

    /// Number of edges containing the pair `{a, b}`.
    pub fn pair_degree(&self, a: u32, b: u32) -> u32 {
        let (a, b) = (a.min(b), a.max(b));
        if a == b || a == 0 || b > self.n {
            return 0;
        }
        // {a, b, a+b} and {b-a, a, b}; the latter degenerates when b = 2a.
        u32::from(a + b <= self.n) + u32::from(b != 2 * a)
    }

    /// `Δ₂(H_n)`: the maximum pair degree.
    pub fn delta2(&self) -> u32 {
        // No pair lies in more than two edges: one where it is the summand pair
        // and one where it is {summand, sum}.
        const CEILING: u32 = 2;
        let mut best = 0;
        for b in 2..=self.n {
            for a in 1..b {
                best = best.max(self.pair_degree(a, b));
                if best == CEILING {
                    return best;
                }
            }
        }
        best
    }
}

/// Each triple `x < y < x + y ≤ n` exactly once, ordered by `x` then `y`.
pub fn schur_edges(n: u32) -> impl Iterator<Item = SchurTriple> {
    (1..=n).flat_map(move |x| {
        (x + 1..=n.saturating_sub(x)).map(move |y| (x, y, x + y))
    })
}

pub fn delta2(n: u32) -> u32 {
    SchurHypergraph::new(n).delta2()
}

/// `B_n`: the intervals `{a+1, ..., a+⌈n/2⌉}` for `0 ≤ a ≤ ⌊n/2⌋`, plus `O_n`.
#[derive(Debug, Clone)]
pub struct ExtremalFamily {
    n: u32,
    members: Vec<IntSet>,
}

impl ExtremalFamily {
    pub fn new(n: u32) -> Self {
        let half = n.div_ceil(2);
        let mut members: Vec<IntSet> = (0..=n / 2)
            .map(|a| IntSet::interval(n, a + 1, a + half).expect("interval inside [n]"))
            .collect();
        members.push(IntSet::odds(n));
        ExtremalFamily { n, members }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn members(&self) -> &[IntSet] {
        &self.members
    }

    /// `‖B_n‖`, the size of the largest member.
    pub fn max_size(&self) -> usize {
        self.members.iter().map(IntSet::len).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityProfile {
    /// Distinct-element Schur triples inside `A`.
    pub schur_triples: BigCount,
    /// `min_{B ∈ B_n} |A \ B|`.
    pub min_escape: usize,
}

pub fn stability_profile(set: &IntSet, n: u32) -> StabilityProfile {
    let members = set.to_vec();
    let mut triples = 0u64;
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i + 1..] {
            if set.contains(x as i64 + y as i64) {
                triples += 1;
            }
        }
    }
    let min_escape = ExtremalFamily::new(n)
        .members()
        .iter()
        .map(|b| set.difference_len(b))
        .min()
        .unwrap_or(set.len());
    StabilityProfile {
        schur_triples: BigUint::from(triples),
        min_escape,
    }
}
