//! Binary-word primitives.
//!
//! Words are written most-significant digit first, exactly as they appear in a
//! binary expansion. Leading zeros are significant, so a [`DigitString`] keeps
//! its digits explicitly instead of collapsing to an integer.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest pattern accepted by the parser. Integer fast paths pack a pattern
/// into a `u64` mask.
pub const MAX_PATTERN_LEN: usize = 32;

/// A finite word over `{0, 1}`, most significant digit first.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DigitString {
    digits: Vec<u8>,
}

impl DigitString {
    pub fn empty() -> Self {
        Self { digits: Vec::new() }
    }

    /// Builds a word from digits (each must be 0 or 1).
    pub fn from_digits(digits: Vec<u8>) -> Result<Self> {
        if digits.iter().any(|&d| d > 1) {
            return Err(Error::InvalidArgument("digits must be 0 or 1".into()));
        }
        Ok(Self { digits })
    }

    /// The `width`-digit expansion of `value`, padded with leading zeros.
    ///
    /// Panics if `value` does not fit in `width` digits.
    pub fn from_value(value: u128, width: usize) -> Self {
        assert!(
            width >= 128 || value >> width == 0,
            "{value} does not fit in {width} binary digits"
        );
        let digits = (0..width)
            .rev()
            .map(|i| if i < 128 { ((value >> i) & 1) as u8 } else { 0 })
            .collect();
        Self { digits }
    }

    /// The canonical expansion `(n)_2`, without leading zeros; `(0)_2` is empty.
    pub fn canonical(n: u128) -> Self {
        Self::from_value(n, bit_len(n) as usize)
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `[x]_2`. Panics when a nonzero digit sits above bit 127.
    pub fn value(&self) -> u128 {
        self.digits.iter().fold(0u128, |acc, &d| {
            assert!(acc >> 127 == 0, "value overflows u128");
            (acc << 1) | d as u128
        })
    }

    pub fn reverse(&self) -> Self {
        Self {
            digits: self.digits.iter().rev().copied().collect(),
        }
    }

    pub fn negate(&self) -> Self {
        Self {
            digits: self.digits.iter().map(|&d| 1 - d).collect(),
        }
    }

    pub fn concat(&self, other: &DigitString) -> Self {
        let mut digits = Vec::with_capacity(self.len() + other.len());
        digits.extend_from_slice(&self.digits);
        digits.extend_from_slice(&other.digits);
        Self { digits }
    }

    /// `c` repeated `k` times.
    pub fn repeat_digit(c: u8, k: usize) -> Self {
        Self { digits: vec![c; k] }
    }

    pub fn starts_with(&self, prefix: &[u8]) -> bool {
        self.digits.starts_with(prefix)
    }

    pub fn ends_with(&self, suffix: &[u8]) -> bool {
        self.digits.ends_with(suffix)
    }
}

impl FromStr for DigitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(Error::InvalidArgument(format!(
                    "{s:?} is not a binary word"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { digits })
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("ε");
        }
        for &d in &self.digits {
            f.write_str(if d == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

/// The fixed binary pattern `w` whose occurrences are counted, `|w| >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    word: DigitString,
    value: u64,
    /// Length of the longest proper border (prefix that is also a suffix).
    max_overlap: usize,
}

impl Pattern {
    pub fn new(word: DigitString) -> Result<Self> {
        let text = word.to_string();
        if word.len() < 2 {
            return Err(Error::InvalidPattern(text, "length must be at least 2"));
        }
        if word.len() > MAX_PATTERN_LEN {
            return Err(Error::InvalidPattern(text, "length must be at most 32"));
        }
        let value = word.value() as u64;
        let max_overlap = longest_border(word.digits());
        Ok(Self {
            word,
            value,
            max_overlap,
        })
    }

    /// Every pattern of length `len`, in increasing order of `[w]_2`.
    pub fn all_of_length(len: usize) -> Vec<Pattern> {
        (0..1u128 << len)
            .map(|v| Pattern::new(DigitString::from_value(v, len)).expect("valid length"))
            .collect()
    }

    pub fn word(&self) -> &DigitString {
        &self.word
    }

    pub fn digits(&self) -> &[u8] {
        self.word.digits()
    }

    /// `ℓ = |w|`.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    /// Patterns are never empty; provided for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// `[w]_2`.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `2^ℓ - 1`.
    pub fn mask(&self) -> u64 {
        (1u64 << self.len()) - 1
    }

    /// `2^(ℓ-1)`, the number of residue classes tracked by the recursions.
    pub fn residues(&self) -> usize {
        1 << (self.len() - 1)
    }

    pub fn is_zeros(&self) -> bool {
        self.value == 0
    }

    pub fn is_ones(&self) -> bool {
        self.value == self.mask()
    }

    /// `w ∈ {0^ℓ, 1^ℓ}`.
    pub fn is_constant(&self) -> bool {
        self.is_zeros() || self.is_ones()
    }

    /// `q`, the longest proper overlap of `w` with itself.
    pub fn max_overlap(&self) -> usize {
        self.max_overlap
    }

    /// `p = ℓ - q`.
    pub fn period(&self) -> usize {
        self.len() - self.max_overlap
    }

    pub fn negate(&self) -> Pattern {
        Pattern::new(self.word.negate()).expect("negation keeps the length")
    }

    pub fn reverse(&self) -> Pattern {
        Pattern::new(self.word.reverse()).expect("reversal keeps the length")
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let word = s
            .parse::<DigitString>()
            .map_err(|_| Error::InvalidPattern(s.to_string(), "only 0 and 1 are allowed"))?;
        Pattern::new(word)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

fn longest_border(w: &[u8]) -> usize {
    (0..w.len())
        .rev()
        .find(|&q| w[..q] == w[w.len() - q..])
        .unwrap_or(0)
}

/// `h(n) = |(n)_2|`, with `h(0) = 0`.
pub fn bit_len(n: u128) -> u32 {
    128 - n.leading_zeros()
}

/// `|v|_w`: overlapping occurrences of `w` as a factor of `v`.
pub fn count_occurrences(v: &DigitString, w: &Pattern) -> usize {
    count_in(v.digits(), w.digits())
}

pub(crate) fn count_in(v: &[u8], w: &[u8]) -> usize {
    if v.len() < w.len() {
        return 0;
    }
    v.windows(w.len()).filter(|win| *win == w).count()
}

/// `occ_w(n) = |0^(ℓ-1) (n)_2|_w`.
///
/// Every length-`ℓ` window of the padded expansion ends at one of the `h(n)`
/// digits of `n`, so the count is a scan over shifts of `n`.
pub fn occ(w: &Pattern, n: u128) -> u32 {
    let mask = w.mask() as u128;
    let target = w.value() as u128;
    (0..bit_len(n))
        .filter(|&i| (n >> i) & mask == target)
        .count() as u32
}

/// `P(x)`: nonempty prefixes of `x` that are also suffixes of `w`.
pub fn prefix_suffix_set(x: &DigitString, w: &Pattern) -> BTreeSet<DigitString> {
    (1..=x.len().min(w.len()))
        .filter(|&k| w.word().ends_with(&x.digits()[..k]))
        .map(|k| DigitString {
            digits: x.digits()[..k].to_vec(),
        })
        .collect()
}

/// `Σ_{p ∈ P(x)} 2^(|p|-1)`, which also equals `Σ_u |ux|_w` over `|u| = ℓ-1`.
pub fn prefix_suffix_weight(x: &DigitString, w: &Pattern) -> u64 {
    prefix_suffix_set(x, w)
        .iter()
        .map(|p| 1u64 << (p.len() - 1))
        .sum()
}

/// Number of maximal blocks of 1s in the binary expansion of `t`, `occ_01(t)`.
pub fn blocks01(t: u128) -> u32 {
    // A block starts wherever a 1 has a 0 (or nothing) directly above it.
    (t & !(t >> 1)).count_ones()
}
