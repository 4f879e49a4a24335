//! The sum-free predicate and the per-set statistics `ℓ(I)`, `k(I)`, `a(I)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::intset::IntSet;

/// Whether `x + x = z` counts as a violation.
///
/// The default treats `{x, 2x}` as forbidden, so `{1, 2}` is not sum-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Convention {
    pub allow_equal_summands: bool,
}

impl Convention {
    /// `x + x = z` is a violation (the default).
    pub const EQUAL_SUMMANDS: Convention = Convention {
        allow_equal_summands: true,
    };
    /// Only `x + y = z` with `x != y` is a violation.
    pub const DISTINCT_SUMMANDS: Convention = Convention {
        allow_equal_summands: false,
    };

    pub fn both() -> [Convention; 2] {
        [Self::EQUAL_SUMMANDS, Self::DISTINCT_SUMMANDS]
    }

    pub fn name(self) -> &'static str {
        if self.allow_equal_summands {
            "equal"
        } else {
            "distinct"
        }
    }

    pub fn parse(s: &str) -> Option<Convention> {
        match s {
            "equal" | "default" => Some(Self::EQUAL_SUMMANDS),
            "distinct" => Some(Self::DISTINCT_SUMMANDS),
            _ => None,
        }
    }
}

impl Default for Convention {
    fn default() -> Self {
        Self::EQUAL_SUMMANDS
    }
}

/// True iff no `x, y, z` in `set` satisfy `x + y = z`.
pub fn is_sum_free(set: &IntSet, conv: Convention) -> bool {
    let members = set.to_vec();
    for (i, &x) in members.iter().enumerate() {
        let start = if conv.allow_equal_summands { i } else { i + 1 };
        for &y in &members[start..] {
            if set.contains(x as i64 + y as i64) {
                return false;
            }
        }
    }
    true
}

/// A nonnegative multiple of 1/2, stored as twice its value.
///
/// `k(I)` and `a(I)` live on this grid because `n/2` is a half-integer for odd `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct HalfInt(pub u64);

impl HalfInt {
    pub fn from_int(v: u64) -> Self {
        HalfInt(2 * v)
    }

    pub fn twice(self) -> u64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.0 / 2)
        }
    }
}

/// The record `(m, ℓ, k, a, odd)` of a set `I ⊆ [n]`, where
/// `S(I) = {x ∈ I : x ≤ n/2}`, `ℓ = |S(I)|`, `k = Σ_{a∈S(I)} (n/2 − a)`
/// and `a = n/2 − min S(I)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Statistics {
    pub m: usize,
    pub ell: usize,
    pub k: HalfInt,
    /// `None` when `S(I)` is empty.
    pub a: Option<HalfInt>,
    /// `I ⊆ O_n`.
    pub odd_flag: bool,
}

pub fn statistics_of(set: &IntSet, n: u32) -> Statistics {
    let mut st = Statistics {
        m: set.len(),
        ell: 0,
        k: HalfInt(0),
        a: None,
        odd_flag: true,
    };
    for x in set.iter() {
        if x % 2 == 0 {
            st.odd_flag = false;
        }
        // x <= n/2  <=>  2x <= n
        if 2 * x <= n {
            st.ell += 1;
            st.k.0 += (n - 2 * x) as u64;
            if st.a.is_none() {
                st.a = Some(HalfInt((n - 2 * x) as u64));
            }
        }
    }
    st
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[u32]) -> IntSet {
        IntSet::from_slice(v).unwrap()
    }

    #[test]
    fn sum_free_examples() {
        let d = Convention::default();
        assert!(is_sum_free(&set(&[1, 3, 5, 7]), d));
        assert!(is_sum_free(&IntSet::empty(5), d));
        assert!(!is_sum_free(&set(&[1, 2]), d));
        assert!(is_sum_free(&set(&[1, 2]), Convention::DISTINCT_SUMMANDS));
        assert!(is_sum_free(&IntSet::interval(10, 6, 10).unwrap(), d));
        assert!(!is_sum_free(&set(&[1, 2, 3]), Convention::DISTINCT_SUMMANDS));
    }

    #[test]
    fn statistics_examples() {
        let st = statistics_of(&set(&[1, 3, 5, 7]), 8);
        assert_eq!((st.m, st.ell, st.k, st.a, st.odd_flag), (4, 2, HalfInt::from_int(4), Some(HalfInt::from_int(3)), true));

        let st = statistics_of(&IntSet::interval(10, 6, 10).unwrap(), 10);
        assert_eq!((st.ell, st.k, st.a, st.odd_flag), (0, HalfInt(0), None, false));

        let st = statistics_of(&IntSet::from_members(10, [4u64, 9, 10]).unwrap(), 10);
        assert_eq!((st.ell, st.k, st.a), (1, HalfInt::from_int(1), Some(HalfInt::from_int(1))));
    }

    #[test]
    fn odd_n_uses_half_integer_grid() {
        // n = 9, n/2 = 4.5: S(I) = {1, 4}, k = 3.5 + 0.5 = 4, a = 3.5
        let st = statistics_of(&IntSet::from_members(9, [1u64, 4, 9]).unwrap(), 9);
        assert_eq!(st.ell, 2);
        assert_eq!(st.k, HalfInt::from_int(4));
        assert_eq!(st.a.unwrap().to_string(), "3.5");
    }

    fn brute_sum_free(v: &[u32], conv: Convention) -> bool {
        for &x in v {
            for &y in v {
                for &z in v {
                    if x + y == z && (x != y || conv.allow_equal_summands) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn exhaustive_agreement_with_triple_loop() {
        for n in 1..=16u32 {
            for mask in 0u32..(1 << n) {
                let v: Vec<u32> = (1..=n).filter(|x| mask >> (x - 1) & 1 == 1).collect();
                let s = IntSet::from_members(n, v.iter().map(|&x| x as u64)).unwrap();
                for conv in Convention::both() {
                    assert_eq!(is_sum_free(&s, conv), brute_sum_free(&v, conv), "{s} {conv:?}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn large_elements_do_not_move_low_statistics(
            low in proptest::collection::vec(1u64..=20, 0..10),
            high in proptest::collection::vec(21u64..=40, 0..10),
        ) {
            let n = 40;
            let base = IntSet::from_members(n, low.iter().copied()).unwrap();
            let grown = IntSet::from_members(n, low.iter().chain(&high).copied()).unwrap();
            let (a, b) = (statistics_of(&base, n), statistics_of(&grown, n));
            prop_assert_eq!((a.ell, a.k, a.a), (b.ell, b.k, b.a));
            prop_assert_eq!(a.k == HalfInt(0), low.iter().all(|&x| x == 20));
        }
    }
}
