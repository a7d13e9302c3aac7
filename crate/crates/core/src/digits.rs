//! Base-k digit words.
//!
//! Words are stored most-significant digit first. `[w]_k` is [`DigitWord::value`],
//! `(n)_k` is [`DigitWord::expansion`], and `(0)_k` is the empty word.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DigitWord {
    base: u32,
    digits: Vec<u32>,
}

/// Digits of `n` in base `k`, most significant first; empty for `n = 0`.
pub fn digits_msd(mut n: u128, base: u32) -> Vec<u32> {
    let k = base as u128;
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % k) as u32);
        n /= k;
    }
    out.reverse();
    out
}

impl DigitWord {
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(Error::invalid(format!("base must be at least 2, got {base}")));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::invalid(format!("digit {d} out of range for base {base}")));
        }
        Ok(DigitWord { base, digits })
    }

    pub fn empty(base: u32) -> Self {
        DigitWord {
            base,
            digits: Vec::new(),
        }
    }

    /// Parses a word such as `"1011"`. Digits above 9 use letters; bases above
    /// 36 need the dotted form `"12.0.7"`. The empty string and `"ε"` give the
    /// empty word.
    pub fn parse(base: u32, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "eps" {
            return Ok(Self::empty(base));
        }
        let digits = if s.contains('.') {
            s.split('.')
                .map(|p| {
                    p.parse::<u32>()
                        .map_err(|_| Error::invalid(format!("bad digit `{p}` in `{s}`")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(36)
                        .ok_or_else(|| Error::invalid(format!("bad digit `{c}` in `{s}`")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(base, digits)
    }

    /// `(n)_k`.
    pub fn expansion(n: u128, base: u32) -> Self {
        DigitWord {
            base,
            digits: digits_msd(n, base),
        }
    }

    pub fn expansion_big(n: &BigUint, base: u32) -> Self {
        let mut digits: Vec<u32> = n.to_radix_le(base).into_iter().map(u32::from).collect();
        if n.is_zero() {
            digits.clear();
        }
        digits.reverse();
        DigitWord { base, digits }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `[w]_k`.
    pub fn value(&self) -> BigUint {
        let mut acc = BigUint::zero();
        for &d in &self.digits {
            acc = acc * self.base + d;
        }
        acc
    }

    /// `[w]_k` when it fits in 128 bits.
    pub fn value_u128(&self) -> Option<u128> {
        let k = self.base as u128;
        self.digits
            .iter()
            .try_fold(0u128, |acc, &d| acc.checked_mul(k)?.checked_add(d as u128))
    }

    pub fn value_u64(&self) -> Option<u64> {
        self.value_u128().and_then(|v| v.to_u64())
    }

    /// `w^R`.
    pub fn reversed(&self) -> Self {
        let mut digits = self.digits.clone();
        digits.reverse();
        DigitWord {
            base: self.base,
            digits,
        }
    }

    pub fn concat(&self, other: &DigitWord) -> Self {
        debug_assert_eq!(self.base, other.base);
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        DigitWord {
            base: self.base,
            digits,
        }
    }

    pub fn repeat(&self, times: usize) -> Self {
        DigitWord {
            base: self.base,
            digits: self.digits.repeat(times),
        }
    }

    pub fn is_all_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Drops leading zeros; the value is unchanged.
    pub fn trim_leading_zeros(&self) -> Self {
        let start = self.digits.iter().position(|&d| d != 0).unwrap_or(self.digits.len());
        DigitWord {
            base: self.base,
            digits: self.digits[start..].to_vec(),
        }
    }

    pub fn contains_factor(&self, factor: &[u32]) -> bool {
        factor.is_empty() || self.digits.windows(factor.len()).any(|w| w == factor)
    }

    /// Re-reads this word in base `base^block`, padding with leading zeros so
    /// the length is a multiple of `block`.
    pub fn to_block_base(&self, block: usize) -> Self {
        let new_base = self.base.pow(block as u32);
        let pad = (block - self.digits.len() % block) % block;
        let mut padded = vec![0; pad];
        padded.extend_from_slice(&self.digits);
        let digits = padded
            .chunks(block)
            .map(|c| c.iter().fold(0u32, |acc, &d| acc * self.base + d))
            .collect();
        DigitWord { base: new_base, digits }
    }

    /// Inverse of [`to_block_base`](Self::to_block_base): every digit is
    /// expanded into exactly `block` digits of `root` (so leading zeros are
    /// kept).
    pub fn from_block_base(&self, root: u32, block: usize) -> Self {
        let mut digits = Vec::with_capacity(self.digits.len() * block);
        for &d in &self.digits {
            let mut chunk = vec![0u32; block];
            let mut v = d;
            for slot in chunk.iter_mut().rev() {
                *slot = v % root;
                v /= root;
            }
            digits.extend(chunk);
        }
        DigitWord { base: root, digits }
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return write!(f, "ε");
        }
        if self.base <= 36 {
            for &d in &self.digits {
                write!(f, "{}", std::char::from_digit(d, 36).unwrap())?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_empty_word() {
        assert!(DigitWord::expansion(0, 2).is_empty());
        assert_eq!(DigitWord::expansion(11, 2).to_string(), "1011");
    }

    #[test]
    fn value_and_reverse() {
        let w = DigitWord::parse(2, "1101").unwrap();
        assert_eq!(w.value_u128(), Some(13));
        assert_eq!(w.reversed().value_u128(), Some(11));
        assert_eq!(DigitWord::parse(10, "ε").unwrap().value_u128(), Some(0));
    }

    #[test]
    fn rejects_bad_digits() {
        assert!(DigitWord::new(2, vec![0, 2]).is_err());
        assert!(DigitWord::parse(3, "123").is_err());
    }

    #[test]
    fn block_base_round_trip() {
        let w = DigitWord::parse(2, "10110").unwrap();
        let b = w.to_block_base(2);
        assert_eq!(b.base(), 4);
        assert_eq!(b.digits(), &[0b01, 0b01, 0b10]);
        assert_eq!(b.value(), w.value());
        assert_eq!(b.from_block_base(2, 2).value(), w.value());
    }

    #[test]
    fn big_expansion_matches() {
        let n = BigUint::from(123456789u64);
        assert_eq!(DigitWord::expansion_big(&n, 7), DigitWord::expansion(123456789, 7));
    }
}
