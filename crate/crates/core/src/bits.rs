//! Packed binary vectors.
//!
//! Components are stored little-endian in `u64` words: component `r` (0-based)
//! lives in word `r / 64` at bit `r % 64`. Bits beyond `len` are always zero,
//! so popcounts over the whole word slice are exact.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD)
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec {
            len,
            words: vec![u64::MAX; word_count(len)],
        };
        v.clear_tail();
        v
    }

    /// Builds a vector from booleans, component 0 first.
    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD == 0 {
                words.push(0);
            }
            if b {
                words[len / WORD] |= 1 << (len % WORD);
            }
            len += 1;
        }
        BitVec { len, words }
    }

    /// All ones except a zero at each listed component.
    pub fn ones_except(len: usize, zeros: &[usize]) -> Self {
        let mut v = Self::ones(len);
        for &r in zeros {
            v.set(r, false);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, r: usize) -> bool {
        assert!(r < self.len, "component {r} out of range for length {}", self.len);
        self.words[r / WORD] >> (r % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, value: bool) {
        assert!(r < self.len, "component {r} out of range for length {}", self.len);
        let mask = 1u64 << (r % WORD);
        if value {
            self.words[r / WORD] |= mask;
        } else {
            self.words[r / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of zero components, the cost of the vector.
    #[inline]
    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    pub fn is_all_ones(&self) -> bool {
        self.count_zeros() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |r| self.get(r))
    }

    /// 0-based positions of the zero components.
    pub fn zero_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&r| !self.get(r))
    }

    /// Componentwise AND; panics on length mismatch (use [`and_fold`](crate::and_fold)
    /// for a checked variant).
    pub fn and(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.and_assign(other);
        out
    }

    pub fn and_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "AND of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    /// True when every zero of `self` is also a zero of `other`, i.e.
    /// `self & other == other`.
    pub fn zeros_subset_of(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| b & !a == 0)
    }

    /// Number of zeros of `self & other`, without allocating.
    pub fn and_count_zeros(&self, other: &BitVec) -> usize {
        debug_assert_eq!(self.len, other.len);
        let ones: usize = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum();
        self.len - ones
    }

    /// Keeps only the listed components, in the given order.
    pub fn select(&self, components: &[usize]) -> BitVec {
        BitVec::from_bools(components.iter().map(|&r| self.get(r)))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for (col, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("illegal character {other:?} at column {}", col + 1),
                    })
                }
            }
        }
        Ok(BitVec::from_bools(bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn string_round_trip_and_counts() {
        let v = bv("110010");
        assert_eq!(v.to_string(), "110010");
        assert_eq!(v.len(), 6);
        assert_eq!(v.count_zeros(), 3);
        assert!(v.get(0) && !v.get(2));
        assert_eq!(v.zero_positions().collect::<Vec<_>>(), vec![2, 3, 5]);
    }

    #[test]
    fn multi_word_vectors() {
        let mut v = BitVec::ones(130);
        assert_eq!(v.count_zeros(), 0);
        v.set(64, false);
        v.set(129, false);
        assert_eq!(v.count_zeros(), 2);
        let w = BitVec::ones_except(130, &[0, 64]);
        let a = v.and(&w);
        assert_eq!(a.zero_positions().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.and_count_zeros(&w), 3);
        assert!(v.zeros_subset_of(&a));
        assert!(!a.zeros_subset_of(&v));
    }

    #[test]
    fn empty_vector() {
        let v = BitVec::ones(0);
        assert!(v.is_empty());
        assert_eq!(v.count_zeros(), 0);
        assert!(v.is_all_ones());
        assert_eq!(v.to_string(), "");
    }

    #[test]
    fn rejects_illegal_characters() {
        assert!("10x".parse::<BitVec>().is_err());
    }

    #[test]
    fn select_reorders_components() {
        assert_eq!(bv("1001").select(&[3, 1, 0]).to_string(), "101");
    }
}
