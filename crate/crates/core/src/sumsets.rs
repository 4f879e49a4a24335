//! Sumset algebra: `A + B`, span, doubling, δ-approximate translates and
//! arithmetic-progression covers in the 3k−4 regime.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intset::IntSet;

/// `{a + b : a ∈ A, b ∈ B}` over the universe `[1, bound(A) + bound(B)]`.
pub fn sumset(a: &IntSet, b: &IntSet) -> IntSet {
    let bound = a.bound() + b.bound();
    let bs = b.to_vec();
    let sums = a
        .iter()
        .flat_map(|x| bs.iter().map(move |&y| (x + y) as u64));
    IntSet::from_members(bound, sums).expect("sums of members stay below the summed bounds")
}

/// `max(S) − min(S)`.
pub fn span(set: &IntSet) -> Result<u32> {
    match (set.min(), set.max()) {
        (Some(lo), Some(hi)) => Ok(hi - lo),
        _ => Err(Error::UndefinedSpan),
    }
}

/// `|S + S| / |S|`.
pub fn doubling(set: &IntSet) -> Result<Ratio<u64>> {
    if set.is_empty() {
        return Err(Error::invalid("doubling of the empty set"));
    }
    Ok(Ratio::new(sumset(set, set).len() as u64, set.len() as u64))
}

/// A query for the translates of `S` that mostly land inside `S + S`.
#[derive(Debug, Clone)]
pub struct BSetQuery {
    set: IntSet,
    delta: Ratio<u64>,
}

impl BSetQuery {
    pub fn new(set: IntSet, delta: Ratio<u64>) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::invalid("b-set of the empty set"));
        }
        if delta >= Ratio::from_integer(1) {
            return Err(Error::invalid(format!("delta must be < 1, got {delta}")));
        }
        Ok(BSetQuery { set, delta })
    }

    pub fn set(&self) -> &IntSet {
        &self.set
    }

    pub fn delta(&self) -> Ratio<u64> {
        self.delta
    }
}

/// All integers `y` with `|(S + y) \ (S + S)| ≤ δ|S|`, ascending.
///
/// Outside `[min(S+S) − max(S), max(S+S) − min(S)]` every translate misses
/// `S + S` entirely, so the window is exhaustive for `δ < 1`.
pub fn b_set(q: &BSetQuery) -> Vec<i64> {
    let s = q.set.to_vec();
    let ss = sumset(&q.set, &q.set);
    let (lo, hi) = (s[0] as i64, *s.last().unwrap() as i64);
    let (sum_lo, sum_hi) = (2 * lo, 2 * hi);
    let (num, den) = (*q.delta.numer(), *q.delta.denom());
    let allowed = num * s.len() as u64;
    (sum_lo - hi..=sum_hi - lo)
        .filter(|&y| {
            let escape = s.iter().filter(|&&x| !ss.contains(x as i64 + y)).count() as u64;
            escape * den <= allowed
        })
        .collect()
}

/// The progression `{first, first + difference, ..., first + (length − 1)·difference}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApCover {
    pub first: i64,
    pub difference: u64,
    pub length: u64,
}

impl ApCover {
    pub fn last(&self) -> i64 {
        self.first + (self.length as i64 - 1) * self.difference as i64
    }

    pub fn contains(&self, x: i64) -> bool {
        let d = self.difference as i64;
        x >= self.first && x <= self.last() && (x - self.first) % d == 0
    }

    pub fn covers(&self, set: &IntSet) -> bool {
        set.iter().all(|x| self.contains(x as i64))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreimanOutcome {
    /// `|S+S| ≤ 3|S| − 4`; the tightest progression containing `S`.
    Cover {
        cover: ApCover,
        sumset_size: usize,
        /// `|S+S| − |S| + 1`.
        length_bound: u64,
    },
    NotApplicable { sumset_size: usize },
}

impl FreimanOutcome {
    pub fn cover(&self) -> Option<&ApCover> {
        match self {
            FreimanOutcome::Cover { cover, .. } => Some(cover),
            FreimanOutcome::NotApplicable { .. } => None,
        }
    }
}

/// Translates `S` to minimum 1 and divides out the gcd of the gaps.
/// Returns the normal form with `(offset, scale)` so that `x = (y − 1)·scale + offset`.
pub fn normalize(set: &IntSet) -> Result<(IntSet, u32, u32)> {
    let v = set.to_vec();
    let lo = *v.first().ok_or(Error::UndefinedSpan)?;
    let g = v.iter().fold(0u32, |g, &x| g.gcd(&(x - lo))).max(1);
    let normal = v.iter().map(|&x| ((x - lo) / g + 1) as u64);
    let hi = (v.last().unwrap() - lo) / g + 1;
    Ok((IntSet::from_members(hi, normal)?, lo, g))
}

pub fn freiman_cover(set: &IntSet) -> Result<FreimanOutcome> {
    let k = set.len();
    if k < 3 {
        return Err(Error::TooSmallForFreiman(k));
    }
    let sumset_size = sumset(set, set).len();
    if sumset_size + 4 > 3 * k {
        return Ok(FreimanOutcome::NotApplicable { sumset_size });
    }
    let (normal, offset, scale) = normalize(set)?;
    let members = normal.to_vec();
    let width = members.last().unwrap() - 1;
    // Tightest progression over the normalized set: scan differences, keep the
    // shortest; equal lengths keep the smaller difference.
    let mut best: Option<(u64, u32)> = None;
    for d in 1..=width {
        if members.iter().all(|&x| (x - 1) % d == 0) {
            let length = (width / d) as u64 + 1;
            if best.is_none_or(|(len, _)| length < len) {
                best = Some((length, d));
            }
        }
    }
    let (length, d) = best.expect("difference 1 always covers");
    let cover = ApCover {
        first: offset as i64,
        difference: d as u64 * scale as u64,
        length,
    };
    Ok(FreimanOutcome::Cover {
        cover,
        sumset_size,
        length_bound: (sumset_size - k + 1) as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[u32]) -> IntSet {
        IntSet::from_slice(v).unwrap()
    }

    #[test]
    fn sumset_examples() {
        let a = set(&[1, 2, 3]);
        assert_eq!(sumset(&a, &a).to_vec(), vec![2, 3, 4, 5, 6]);
        assert_eq!(sumset(&set(&[5]), &set(&[7])).to_vec(), vec![12]);
        let b = set(&[1, 2, 4]);
        assert_eq!(sumset(&b, &b).to_vec(), vec![2, 3, 4, 5, 6, 8]);
    }

    #[test]
    fn span_examples() {
        let s = set(&[1, 4]);
        assert_eq!(span(&s).unwrap(), 3);
        assert_eq!(sumset(&s, &s).to_vec(), vec![2, 5, 8]);
        assert_eq!(span(&sumset(&s, &s)).unwrap(), 6);
        assert_eq!(span(&set(&[7])).unwrap(), 0);
        assert!(matches!(span(&IntSet::empty(3)), Err(Error::UndefinedSpan)));
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(doubling(&IntSet::full(10)).unwrap(), Ratio::new(19, 10));
        assert_eq!(doubling(&set(&[4])).unwrap(), Ratio::from_integer(1));
        // all fifteen pairwise sums are distinct
        assert_eq!(doubling(&set(&[1, 2, 4, 8, 16])).unwrap(), Ratio::from_integer(3));
    }

    fn brute_b_set(s: &[u32], num: u64, den: u64) -> Vec<i64> {
        let ss: Vec<i64> = s
            .iter()
            .flat_map(|&x| s.iter().map(move |&y| (x + y) as i64))
            .collect();
        (-200i64..=400)
            .filter(|&y| {
                let esc = s.iter().filter(|&&x| !ss.contains(&(x as i64 + y))).count() as u64;
                esc * den <= num * s.len() as u64
            })
            .collect()
    }

    #[test]
    fn b_set_examples() {
        let q = BSetQuery::new(set(&[1, 2, 3]), Ratio::from_integer(0)).unwrap();
        assert_eq!(b_set(&q), vec![1, 2, 3]);
        let q = BSetQuery::new(set(&[5]), Ratio::from_integer(0)).unwrap();
        assert_eq!(b_set(&q), vec![5]);

        let s = set(&[1, 2, 4, 8]);
        let q = BSetQuery::new(s.clone(), Ratio::new(1, 4)).unwrap();
        let b = b_set(&q);
        assert_eq!(b, brute_b_set(&[1, 2, 4, 8], 1, 4));
        // |S+S| = 10, bound 10 / (3/4) = 13.3
        assert_eq!(sumset(&s, &s).len(), 10);
        assert_eq!(b, vec![0, 1, 2, 4, 8]);
        assert!(3 * b.len() <= 4 * 10);
    }

    #[test]
    fn b_set_rejects_bad_queries() {
        assert!(BSetQuery::new(IntSet::empty(4), Ratio::from_integer(0)).is_err());
        assert!(BSetQuery::new(set(&[1]), Ratio::from_integer(1)).is_err());
    }

    #[test]
    fn freiman_examples() {
        let out = freiman_cover(&set(&[1, 2, 3, 5])).unwrap();
        let FreimanOutcome::Cover { cover, sumset_size, length_bound } = out else {
            panic!("expected a cover");
        };
        assert_eq!(sumset_size, 8);
        assert_eq!(length_bound, 5);
        assert_eq!(cover, ApCover { first: 1, difference: 1, length: 5 });

        let out = freiman_cover(&set(&[3, 5, 7, 9])).unwrap();
        assert_eq!(out.cover(), Some(&ApCover { first: 3, difference: 2, length: 4 }));

        assert_eq!(
            freiman_cover(&set(&[1, 2, 3, 10])).unwrap(),
            FreimanOutcome::NotApplicable { sumset_size: 9 }
        );
        assert!(matches!(freiman_cover(&set(&[1, 2])), Err(Error::TooSmallForFreiman(2))));
    }

    #[test]
    fn normalize_undoes() {
        let (n, offset, scale) = normalize(&set(&[7, 13, 22])).unwrap();
        assert_eq!((n.to_vec(), offset, scale), (vec![1, 3, 6], 7, 3));
    }

    fn small_set() -> impl Strategy<Value = IntSet> {
        proptest::collection::vec(1u64..=200, 1..25)
            .prop_map(|v| IntSet::from_members(200, v).unwrap())
    }

    proptest! {
        #[test]
        fn cauchy_davenport_over_integers(a in small_set(), b in small_set()) {
            prop_assert!(sumset(&a, &b).len() + 1 >= a.len() + b.len());
        }

        #[test]
        fn span_doubles(s in small_set()) {
            prop_assert_eq!(span(&sumset(&s, &s)).unwrap(), 2 * span(&s).unwrap());
        }

        #[test]
        fn exact_translates_at_zero_delta(s in small_set()) {
            let ss = sumset(&s, &s);
            let b = b_set(&BSetQuery::new(s.clone(), Ratio::from_integer(0)).unwrap());
            let lo = -2 * s.max().unwrap() as i64;
            let hi = 2 * ss.max().unwrap() as i64;
            let direct: Vec<i64> = (lo..=hi)
                .filter(|&y| s.iter().all(|x| ss.contains(x as i64 + y)))
                .collect();
            prop_assert_eq!(b, direct);
        }

        #[test]
        fn covers_contain_the_set(v in proptest::collection::vec(1u64..=60, 3..9)) {
            let s = IntSet::from_members(60, v).unwrap();
            prop_assume!(s.len() >= 3);
            if let Some(c) = freiman_cover(&s).unwrap().cover() {
                prop_assert!(c.covers(&s));
            }
        }
    }
}
