//! Packed bit vectors over GF(2).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A fixed-length vector of bits packed into 64-bit words.
///
/// Bits past `len` in the last word are kept at zero so that equality,
/// hashing and popcounts work on whole words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

/// A received word `r`.
pub type BinaryWord = BitVec;

/// A message `m` of length `k`.
pub type Message = BitVec;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; word_count(len)],
        };
        v.clear_tail();
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `'0'`/`'1'` characters. Returns the index of the
    /// first offending character on failure.
    pub fn parse(s: &str) -> Result<Self, usize> {
        let mut v = Self::zeros(s.len());
        for (i, ch) in s.bytes().enumerate() {
            match ch {
                b'0' => {}
                b'1' => v.set(i, true),
                _ => return Err(i),
            }
        }
        Ok(v)
    }

    /// The `len`-bit big-endian expansion of `index`: bit 0 is the most
    /// significant. Enumerating `0..2^len` gives lexicographic order.
    pub fn from_index(len: usize, index: u64) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            if (index >> (len - 1 - i)) & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    /// Inverse of [`BitVec::from_index`]; only meaningful for `len <= 64`.
    pub fn to_index(&self) -> u64 {
        (0..self.len).fold(0u64, |acc, i| (acc << 1) | self.get(i) as u64)
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
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Index of the first bit set in `self` but not in `other`.
    pub fn first_outside(&self, other: &BitVec) -> Option<usize> {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find_map(|(wi, (a, b))| {
                let d = a & !b;
                (d != 0).then(|| wi * 64 + d.trailing_zeros() as usize)
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
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

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BitVec::parse(&s).map_err(|i| serde::de::Error::custom(format!("bad bit at {i}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip_is_lexicographic() {
        let all: Vec<String> = (0..4).map(|i| BitVec::from_index(2, i).to_string()).collect();
        assert_eq!(all, ["00", "01", "10", "11"]);
        for i in 0..32 {
            assert_eq!(BitVec::from_index(5, i).to_index(), i);
        }
    }

    #[test]
    fn ones_spanning_words() {
        let v = BitVec::ones(130);
        assert_eq!(v.count_ones(), 130);
        assert_eq!(v.iter_ones().count(), 130);
        assert_eq!(v.iter_ones().last(), Some(129));
    }

    #[test]
    fn subset_and_first_outside() {
        let a = BitVec::parse("0110").unwrap();
        let b = BitVec::parse("1110").unwrap();
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert_eq!(b.first_outside(&a), Some(0));
        assert_eq!(BitVec::parse("01x"), Err(2));
    }
}
