//! Finite sets of positive integers over a bounded universe `[1, bound]`.

use std::fmt;

use crate::error::{Error, Result};

const WORD: u32 = 64;

/// A set of positive integers stored as a bitmap over `{1, ..., bound}`.
///
/// Bit `x` of the bitmap is set iff `x` is a member; bit 0 is never set.
/// Values are immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntSet {
    bound: u32,
    words: Vec<u64>,
    len: usize,
}

impl IntSet {
    /// The empty set over `[1, bound]`.
    pub fn empty(bound: u32) -> Self {
        IntSet {
            bound,
            words: vec![0; (bound / WORD + 1) as usize],
            len: 0,
        }
    }

    /// Builds a set from arbitrary (possibly repeated, unsorted) members.
    pub fn from_members<I>(bound: u32, members: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<u64>,
    {
        let mut set = IntSet::empty(bound);
        for v in members {
            let v = v.into();
            if v == 0 || v > bound as u64 {
                return Err(Error::OutOfUniverse { value: v, bound });
            }
            set.set_bit(v as u32);
        }
        Ok(set)
    }

    /// Like [`from_members`](Self::from_members) with the universe bound taken
    /// as the largest member (or 1 for the empty set).
    pub fn from_slice(members: &[u32]) -> Result<Self> {
        let bound = members.iter().copied().max().unwrap_or(1).max(1);
        Self::from_members(bound, members.iter().map(|&x| x as u64))
    }

    /// `{lo, ..., hi}` over `[1, bound]`; empty when `lo > hi`.
    pub fn interval(bound: u32, lo: u32, hi: u32) -> Result<Self> {
        if lo > hi {
            return Ok(IntSet::empty(bound));
        }
        Self::from_members(bound, (lo..=hi).map(u64::from))
    }

    /// `[n] = {1, ..., n}`.
    pub fn full(n: u32) -> Self {
        Self::interval(n, 1, n).expect("interval within its own bound")
    }

    /// `O_n`, the odd numbers in `[n]`.
    pub fn odds(n: u32) -> Self {
        Self::from_members(n, (1..=n).step_by(2).map(u64::from)).expect("odds lie in [n]")
    }

    /// Builds a set from a `u128` mask whose bit `x` marks member `x`.
    pub fn from_mask(bound: u32, mask: u128) -> Self {
        assert!(bound < 128, "mask universe is limited to 127");
        let clipped = mask & !1 & low_bits(bound + 1);
        let mut set = IntSet::empty(bound);
        set.words[0] = clipped as u64;
        if set.words.len() > 1 {
            set.words[1] = (clipped >> 64) as u64;
        }
        set.len = clipped.count_ones() as usize;
        set
    }

    /// Bitmask form for small universes (`bound < 128`).
    pub fn to_mask(&self) -> Option<u128> {
        if self.bound >= 128 {
            return None;
        }
        let lo = self.words[0] as u128;
        let hi = self.words.get(1).copied().unwrap_or(0) as u128;
        Some(lo | hi << 64)
    }

    fn set_bit(&mut self, x: u32) {
        let (w, b) = ((x / WORD) as usize, x % WORD);
        if self.words[w] >> b & 1 == 0 {
            self.words[w] |= 1 << b;
            self.len += 1;
        }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, x: i64) -> bool {
        if x <= 0 || x > self.bound as i64 {
            return false;
        }
        let x = x as u32;
        self.words[(x / WORD) as usize] >> (x % WORD) & 1 == 1
    }

    /// Members in strictly increasing order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<u32> {
        self.iter().next()
    }

    pub fn max(&self) -> Option<u32> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i as u32 * WORD + 63 - w.leading_zeros())
    }

    /// Same members over a different universe bound.
    pub fn with_bound(&self, bound: u32) -> Result<Self> {
        Self::from_members(bound, self.iter().map(u64::from))
    }

    pub fn is_subset(&self, other: &IntSet) -> bool {
        self.iter().all(|x| other.contains(x as i64))
    }

    /// `|self \ other|`.
    pub fn difference_len(&self, other: &IntSet) -> usize {
        self.iter().filter(|&x| !other.contains(x as i64)).count()
    }

    pub fn union(&self, other: &IntSet) -> IntSet {
        let bound = self.bound.max(other.bound);
        Self::from_members(bound, self.iter().chain(other.iter()).map(u64::from))
            .expect("members of either set lie below the larger bound")
    }

    pub fn intersects(&self, other: &IntSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & b != 0)
    }

    pub fn intersection_len(&self, other: &IntSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
}

pub(crate) fn low_bits(count: u32) -> u128 {
    if count >= 128 {
        u128::MAX
    } else {
        (1u128 << count) - 1
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        loop {
            if self.current != 0 {
                let b = self.current.trailing_zeros();
                self.current &= self.current - 1;
                return Some(self.word_idx as u32 * WORD + b);
            }
            self.word_idx += 1;
            self.current = *self.words.get(self.word_idx)?;
        }
    }
}

impl<'a> IntoIterator for &'a IntSet {
    type Item = u32;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_out_of_universe() {
        assert!(matches!(
            IntSet::from_members(5, [0u64]),
            Err(Error::OutOfUniverse { value: 0, bound: 5 })
        ));
        assert!(IntSet::from_members(5, [6u64]).is_err());
    }

    #[test]
    fn odds_and_intervals() {
        assert_eq!(IntSet::odds(10).to_vec(), vec![1, 3, 5, 7, 9]);
        assert_eq!(IntSet::interval(10, 6, 10).unwrap().to_vec(), vec![6, 7, 8, 9, 10]);
        assert!(IntSet::interval(10, 7, 6).unwrap().is_empty());
        assert_eq!(IntSet::full(3).to_string(), "{1, 2, 3}");
    }

    #[test]
    fn min_max_across_words() {
        let s = IntSet::from_members(300, [5u64, 64, 200, 300]).unwrap();
        assert_eq!(s.min(), Some(5));
        assert_eq!(s.max(), Some(300));
        assert_eq!(IntSet::empty(7).max(), None);
    }

    #[test]
    fn mask_round_trip() {
        let s = IntSet::from_members(100, [1u64, 63, 64, 65, 100]).unwrap();
        let mask = s.to_mask().unwrap();
        assert_eq!(IntSet::from_mask(100, mask), s);
    }

    proptest! {
        #[test]
        fn iteration_is_strictly_increasing_and_counts_bits(
            members in proptest::collection::vec(1u64..=500, 0..60)
        ) {
            let s = IntSet::from_members(500, members.iter().copied()).unwrap();
            let v = s.to_vec();
            prop_assert!(v.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(v.len(), s.len());
            let mut dedup = members.clone();
            dedup.sort();
            dedup.dedup();
            prop_assert_eq!(v.iter().map(|&x| x as u64).collect::<Vec<_>>(), dedup);
            prop_assert!(v.iter().all(|&x| x >= 1 && x <= s.bound()));
        }
    }
}
