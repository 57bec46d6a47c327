//! Subsets of the terminal set `{1, .., m}` packed into a bit mask.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported terminal count; all `2^m` subsets are enumerated.
pub const MAX_TERMINALS: usize = 20;

/// A subset of `{1, .., m}`. Bit `j - 1` is set when terminal `j` is a member.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u32,
    m: u8,
}

impl SubsetMask {
    pub fn new(bits: u32, m: usize) -> Result<Self> {
        check_m(m)?;
        if (bits as u64) >= (1u64 << m) {
            return Err(Error::InvalidInput(format!(
                "subset mask {bits:#b} out of range for m = {m}"
            )));
        }
        Ok(SubsetMask { bits, m: m as u8 })
    }

    /// Caller guarantees `bits < 2^m` and `m` within range.
    pub(crate) fn from_bits_unchecked(bits: u32, m: usize) -> Self {
        debug_assert!(m <= MAX_TERMINALS && (bits as u64) < (1u64 << m));
        SubsetMask { bits, m: m as u8 }
    }

    pub fn empty(m: usize) -> Self {
        SubsetMask::from_bits_unchecked(0, m)
    }

    pub fn full(m: usize) -> Self {
        SubsetMask::from_bits_unchecked(full_bits(m), m)
    }

    /// Builds a subset from 1-based terminal labels.
    pub fn from_terminals<I: IntoIterator<Item = usize>>(m: usize, terminals: I) -> Result<Self> {
        check_m(m)?;
        let mut bits = 0u32;
        for t in terminals {
            if t == 0 || t > m {
                return Err(Error::InvalidInput(format!("terminal {t} outside 1..={m}")));
            }
            bits |= 1 << (t - 1);
        }
        Ok(SubsetMask { bits, m: m as u8 })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn m(self) -> usize {
        self.m as usize
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_full(self) -> bool {
        self.bits == full_bits(self.m())
    }

    /// Membership test for a 1-based terminal.
    pub fn contains(self, terminal: usize) -> bool {
        terminal >= 1 && terminal <= self.m() && self.bits & (1 << (terminal - 1)) != 0
    }

    pub fn union(self, other: SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.m, other.m);
        SubsetMask {
            bits: self.bits | other.bits,
            m: self.m,
        }
    }

    pub fn intersection(self, other: SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.m, other.m);
        SubsetMask {
            bits: self.bits & other.bits,
            m: self.m,
        }
    }

    pub fn complement(self) -> SubsetMask {
        SubsetMask {
            bits: !self.bits & full_bits(self.m()),
            m: self.m,
        }
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_superset_of(self, other: SubsetMask) -> bool {
        other.is_subset_of(self)
    }

    pub fn intersects(self, other: SubsetMask) -> bool {
        self.bits & other.bits != 0
    }

    /// Member terminals, 1-based, ascending.
    pub fn terminals(self) -> Vec<usize> {
        (1..=self.m()).filter(|&t| self.contains(t)).collect()
    }

    /// Smallest member (1-based).
    pub fn first(self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize + 1)
    }

    /// All `2^m` subsets in increasing mask order.
    pub fn all(m: usize) -> impl Iterator<Item = SubsetMask> {
        (0..(1u32 << m)).map(move |b| SubsetMask::from_bits_unchecked(b, m))
    }

    /// Renders as `1,3,4` (the key form used in entropy-vector files).
    pub fn key(self) -> String {
        self.terminals()
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the `1,3,4` key form; the empty string is the empty set.
    pub fn parse_key(m: usize, key: &str) -> Result<Self> {
        let key = key.trim();
        if key.is_empty() {
            return SubsetMask::new(0, m);
        }
        let mut terms = Vec::new();
        for part in key.split(',') {
            let t: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad subset key {key:?}")))?;
            terms.push(t);
        }
        SubsetMask::from_terminals(m, terms)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn full_bits(m: usize) -> u32 {
    ((1u64 << m) - 1) as u32
}

pub(crate) fn check_m(m: usize) -> Result<()> {
    if !(2..=MAX_TERMINALS).contains(&m) {
        return Err(Error::InvalidInput(format!(
            "terminal count m = {m} outside 2..={MAX_TERMINALS}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_checks() {
        assert!(SubsetMask::new(0b111, 3).is_ok());
        assert!(SubsetMask::new(0b1000, 3).is_err());
        assert!(SubsetMask::new(0, 1).is_err());
        assert!(SubsetMask::new(0, 21).is_err());
        assert!(SubsetMask::from_terminals(3, [0]).is_err());
        assert!(SubsetMask::from_terminals(3, [4]).is_err());
    }

    #[test]
    fn set_algebra() {
        let a = SubsetMask::from_terminals(6, [1, 2, 4]).unwrap();
        let b = SubsetMask::from_terminals(6, [1, 2, 5]).unwrap();
        assert_eq!(a.union(b).terminals(), vec![1, 2, 4, 5]);
        assert_eq!(a.intersection(b).terminals(), vec![1, 2]);
        assert_eq!(a.complement().terminals(), vec![3, 5, 6]);
        assert!(a.intersection(b).is_subset_of(a));
        assert_eq!(a.first(), Some(1));
        assert_eq!(a.len(), 3);
        assert_eq!(a.to_string(), "{1,2,4}");
    }

    #[test]
    fn key_round_trip() {
        let s = SubsetMask::parse_key(6, "1,3,4").unwrap();
        assert_eq!(s.key(), "1,3,4");
        assert_eq!(SubsetMask::parse_key(6, "").unwrap(), SubsetMask::empty(6));
        assert!(SubsetMask::parse_key(3, "1,x").is_err());
    }
}
