//! Brute-force reference computations.
//!
//! Nothing here shares code with the optimized routes it is used to check:
//! every function is a direct transcription of a definition, written for
//! clarity over speed.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::intset::IntSet;

/// `p(k)` by listing partitions with non-increasing parts.
pub fn partitions_brute(k: u32) -> u64 {
    fn go(rest: u32, max_part: u32) -> u64 {
        if rest == 0 {
            return 1;
        }
        (1..=max_part.min(rest)).map(|x| go(rest - x, x)).sum()
    }
    go(k, k)
}

/// All `ell`-element sets of positive integers with sum `k`, ascending.
pub fn distinct_sets_brute(k: u32, ell: usize) -> Vec<Vec<u32>> {
    fn go(next: u32, rest: u32, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in next..=rest {
            cur.push(x);
            go(x + 1, rest - x, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, k, ell, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `k` into distinct parts (any number of parts).
pub fn distinct_partitions_brute(k: u32) -> u64 {
    fn go(next: u32, rest: u32) -> u64 {
        if rest == 0 {
            return 1;
        }
        (next..=rest).map(|x| go(x + 1, rest - x)).sum()
    }
    go(1, k)
}

/// Every `m`-subset of `[n]`, in lexicographic order.
pub fn subsets_of_size(n: u32, m: usize) -> impl Iterator<Item = IntSet> {
    let mut idx: Option<Vec<u32>> = if m as u32 <= n { Some((1..=m as u32).collect()) } else { None };
    std::iter::from_fn(move || {
        let cur = idx.take()?;
        let out = IntSet::from_members(n.max(1), cur.iter().map(|&x| x as u64)).unwrap();
        let mut next = cur;
        let mut i = m;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if next[i] < n - (m - 1 - i) as u32 {
                next[i] += 1;
                for j in i + 1..m {
                    next[j] = next[j - 1] + 1;
                }
                idx = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// `C(a, b)` from Pascal's triangle.
pub fn binom_pascal(a: usize, b: usize) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let mut row = vec![BigUint::one()];
    for _ in 0..a {
        let mut next = vec![BigUint::one(); row.len() + 1];
        for j in 1..row.len() {
            next[j] = &row[j - 1] + &row[j];
        }
        row = next;
    }
    row.swap_remove(b)
}

/// `μ` and `Δ` of the hypergeometric Janson setup by a double loop over
/// the family.
pub fn janson_double_loop(family: &[Vec<u32>], ground_size: u64, m: u64) -> (f64, f64) {
    let p = m as f64 / ground_size as f64;
    let mu = family.iter().map(|u| p.powi(u.len() as i32)).sum();
    let mut delta = 0.0;
    for (i, u) in family.iter().enumerate() {
        for (j, v) in family.iter().enumerate() {
            if i == j || !u.iter().any(|x| v.contains(x)) {
                continue;
            }
            let mut union = u.clone();
            union.extend(v.iter().filter(|x| !u.contains(x)));
            delta += p.powi(union.len() as i32);
        }
    }
    (mu, delta)
}

/// Shortest arithmetic progression containing `set`, by trying every
/// start, difference and length up to `max_len`.
pub fn shortest_cover_brute(set: &[u32], max_len: u64) -> Option<(i64, u64, u64)> {
    let lo = *set.iter().min()? as i64;
    let hi = *set.iter().max()? as i64;
    let span = (hi - lo).max(1) as u64;
    let mut best: Option<(i64, u64, u64)> = None;
    for len in 1..=max_len {
        for d in 1..=span {
            for back in 0..len as i64 {
                let first = lo - back * d as i64;
                let last = first + (len as i64 - 1) * d as i64;
                let ok = set
                    .iter()
                    .all(|&x| (x as i64) >= first && (x as i64) <= last && (x as i64 - first) % d as i64 == 0);
                if ok {
                    best = Some((first, d, len));
                    return best;
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_sanity() {
        assert_eq!(partitions_brute(3), 3);
        assert_eq!(partitions_brute(10), 42);
        assert_eq!(distinct_sets_brute(8, 3), vec![vec![1, 2, 5], vec![1, 3, 4]]);
        assert_eq!(distinct_partitions_brute(6), 4);
        assert_eq!(subsets_of_size(4, 2).count(), 6);
        assert_eq!(subsets_of_size(3, 0).count(), 1);
        assert_eq!(subsets_of_size(3, 4).count(), 0);
        assert_eq!(binom_pascal(10, 4), BigUint::from(210u32));
        assert_eq!(shortest_cover_brute(&[1, 2, 3, 5], 5), Some((1, 1, 5)));
        assert_eq!(shortest_cover_brute(&[3, 5, 9], 4), Some((3, 2, 4)));
    }
}
