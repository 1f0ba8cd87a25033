//! Bits and finite binary strings.
//!
//! A [`FiniteString`] is an observed prefix `x_1 ... x_t` of a developing
//! binary sequence. The empty string is a valid value and is written `^`
//! wherever strings appear in text form (CLI arguments, CSV cells).

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A single binary outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    /// Both outcomes, in the fixed order `0`, `1`.
    pub const BOTH: [Bit; 2] = [Bit::Zero, Bit::One];

    pub fn flip(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Bit::Zero => '0',
            Bit::One => '1',
        }
    }

    pub fn from_char(c: char) -> Option<Bit> {
        match c {
            '0' => Some(Bit::Zero),
            '1' => Some(Bit::One),
            _ => None,
        }
    }

    pub fn is_one(self) -> bool {
        self == Bit::One
    }

    pub fn as_usize(self) -> usize {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }
}

impl From<bool> for Bit {
    fn from(b: bool) -> Bit {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Error from parsing a string of `0`/`1` characters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("illegal character {found:?} at offset {offset} (expected '0' or '1')")]
pub struct ParseBitsError {
    pub offset: usize,
    pub found: char,
}

/// A finite, possibly empty, binary string.
///
/// Ordering is lexicographic with a proper prefix sorting before its
/// extensions, which gives deterministic iteration in maps.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteString {
    bits: Vec<Bit>,
}

impl FiniteString {
    pub fn empty() -> FiniteString {
        FiniteString { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<Bit>) -> FiniteString {
        FiniteString { bits }
    }

    /// The `len`-bit string whose bits are `index` in binary, most
    /// significant bit first. Requires `index < 2^len`.
    pub fn from_index(len: usize, index: u64) -> FiniteString {
        assert!(len < 64 && index < (1u64 << len), "index out of range");
        let bits = (0..len)
            .map(|i| Bit::from(index >> (len - 1 - i) & 1 == 1))
            .collect();
        FiniteString { bits }
    }

    /// Inverse of [`FiniteString::from_index`] for strings shorter than 64 bits.
    pub fn to_index(&self) -> u64 {
        assert!(self.len() < 64);
        self.bits
            .iter()
            .fold(0u64, |acc, b| acc << 1 | b.as_usize() as u64)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[Bit] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> Option<Bit> {
        self.bits.get(i).copied()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| b.is_one()).count()
    }

    pub fn count_zeros(&self) -> usize {
        self.len() - self.count_ones()
    }

    pub fn push(&mut self, b: Bit) {
        self.bits.push(b);
    }

    pub fn pop(&mut self) -> Option<Bit> {
        self.bits.pop()
    }

    /// A copy of this string with `b` appended (the one-bit extension `xb`).
    pub fn extended(&self, b: Bit) -> FiniteString {
        let mut bits = Vec::with_capacity(self.len() + 1);
        bits.extend_from_slice(&self.bits);
        bits.push(b);
        FiniteString { bits }
    }

    pub fn concat(&self, other: &FiniteString) -> FiniteString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        FiniteString { bits }
    }

    /// The first `n` bits. Requires `n <= len`.
    pub fn prefix(&self, n: usize) -> FiniteString {
        FiniteString { bits: self.bits[..n].to_vec() }
    }

    /// The last `n` bits, or the whole string when it is shorter.
    pub fn tail(&self, n: usize) -> FiniteString {
        let start = self.len().saturating_sub(n);
        FiniteString { bits: self.bits[start..].to_vec() }
    }

    /// Whether `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &FiniteString) -> bool {
        self.len() <= other.len() && self.bits == other.bits[..self.len()]
    }

    pub fn complement(&self) -> FiniteString {
        FiniteString { bits: self.bits.iter().map(|b| b.flip()).collect() }
    }

    /// `n` copies of `b`.
    pub fn repeated(b: Bit, n: usize) -> FiniteString {
        FiniteString { bits: vec![b; n] }
    }

    pub fn iter(&self) -> impl Iterator<Item = Bit> + '_ {
        self.bits.iter().copied()
    }
}

impl FromStr for FiniteString {
    type Err = ParseBitsError;

    /// Parses `0`/`1` characters with no separators. The single token `^`
    /// (or the empty string) denotes the empty string.
    fn from_str(s: &str) -> Result<FiniteString, ParseBitsError> {
        if s == "^" || s.is_empty() {
            return Ok(FiniteString::empty());
        }
        let mut bits = Vec::with_capacity(s.len());
        for (offset, c) in s.chars().enumerate() {
            match Bit::from_char(c) {
                Some(b) => bits.push(b),
                None => return Err(ParseBitsError { offset, found: c }),
            }
        }
        Ok(FiniteString { bits })
    }
}

impl fmt::Display for FiniteString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "^");
        }
        for b in &self.bits {
            write!(f, "{}", b.as_char())?;
        }
        Ok(())
    }
}

impl Serialize for FiniteString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FiniteString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<FiniteString, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl FromIterator<Bit> for FiniteString {
    fn from_iter<T: IntoIterator<Item = Bit>>(iter: T) -> FiniteString {
        FiniteString { bits: iter.into_iter().collect() }
    }
}

/// All strings of the given length, in ascending binary order.
pub fn strings_of_length(len: usize) -> impl Iterator<Item = FiniteString> {
    assert!(len < 64);
    (0..1u64 << len).map(move |i| FiniteString::from_index(len, i))
}

/// All strings of length at most `max_len` inclusive, shortest first.
pub fn strings_up_to(max_len: usize) -> impl Iterator<Item = FiniteString> {
    (0..=max_len).flat_map(strings_of_length)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let x: FiniteString = "0110".parse().unwrap();
        assert_eq!(x.len(), 4);
        assert_eq!(x.to_string(), "0110");
        assert_eq!("^".parse::<FiniteString>().unwrap(), FiniteString::empty());
        assert_eq!(FiniteString::empty().to_string(), "^");
    }

    #[test]
    fn parse_rejects_bad_characters() {
        let err = "012".parse::<FiniteString>().unwrap_err();
        assert_eq!(err.offset, 2);
        assert_eq!(err.found, '2');
    }

    #[test]
    fn prefix_relation() {
        let x: FiniteString = "01".parse().unwrap();
        let y: FiniteString = "0110".parse().unwrap();
        assert!(x.is_prefix_of(&y));
        assert!(!y.is_prefix_of(&x));
        assert!(FiniteString::empty().is_prefix_of(&x));
        assert!(x.is_prefix_of(&x));
    }

    #[test]
    fn index_round_trip() {
        for i in 0..32 {
            let s = FiniteString::from_index(5, i);
            assert_eq!(s.len(), 5);
            assert_eq!(s.to_index(), i);
        }
        assert_eq!(FiniteString::from_index(3, 5).to_string(), "101");
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(strings_of_length(0).count(), 1);
        assert_eq!(strings_up_to(4).count(), 31);
    }
}
