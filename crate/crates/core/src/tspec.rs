//! Structured values of `t`: plain integers and repeated-block families.
//!
//! A family is written `(block)^N` optionally followed by a suffix, e.g.
//! `(10)^N` or `(110)^N1`. Its member for a given `N` is the integer whose
//! binary expansion is `block` repeated `N` times followed by the suffix.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::words::DigitString;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    block: DigitString,
    suffix: DigitString,
}

impl Family {
    pub fn new(block: DigitString, suffix: DigitString) -> Result<Self> {
        if block.is_empty() {
            return Err(Error::InvalidArgument("family block must be nonempty".into()));
        }
        Ok(Self { block, suffix })
    }

    /// `[block^n suffix]_2`.
    pub fn member(&self, n: u32) -> Result<u128> {
        let bits = self.block.len() as u64 * n as u64 + self.suffix.len() as u64;
        let mut digits = Vec::with_capacity(bits as usize);
        for _ in 0..n {
            digits.extend_from_slice(self.block.digits());
        }
        digits.extend_from_slice(self.suffix.digits());
        let lead = digits.iter().position(|&d| d == 1).unwrap_or(digits.len());
        if digits.len() - lead > 128 {
            return Err(Error::Resource(format!("{self} at N = {n} needs more than 128 bits")));
        }
        Ok(digits[lead..].iter().fold(0u128, |acc, &d| (acc << 1) | d as u128))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^N", self.block)?;
        if !self.suffix.is_empty() {
            write!(f, "{}", self.suffix)?;
        }
        Ok(())
    }
}

/// `(block)^N suffix` with the exponent left symbolic, or `(block)^8 suffix`
/// with a fixed exponent (a space separates digits of the exponent from the suffix).
fn parse_family(s: &str) -> Result<(Family, Option<u32>)> {
    let bad = || Error::InvalidArgument(format!("cannot parse family {s:?}; expected (block)^N[suffix]"));
    let rest = s.trim().strip_prefix('(').ok_or_else(bad)?;
    let (block, rest) = rest.split_once(")^").ok_or_else(bad)?;
    let (exp, suffix) = match rest.strip_prefix('N') {
        Some(suffix) => (None, suffix),
        None => {
            let (digits, suffix) = rest.split_once(' ').unwrap_or((rest, ""));
            (Some(digits.parse::<u32>().map_err(|_| bad())?), suffix)
        }
    };
    let suffix = suffix.trim();
    let block: DigitString = block.parse().map_err(|_| bad())?;
    let suffix: DigitString = if suffix.is_empty() {
        DigitString::empty()
    } else {
        suffix.parse().map_err(|_| bad())?
    };
    Ok((Family::new(block, suffix)?, exp))
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(parse_family(s)?.0)
    }
}

/// Parses a single `t`: decimal, `0b…`, `0x…`, or a family with a fixed
/// exponent such as `(10)^8`.
pub fn parse_t(s: &str) -> Result<u128> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("cannot parse t = {s:?}"));
    if s.starts_with('(') {
        let (family, exp) = parse_family(s)?;
        return family.member(exp.ok_or_else(bad)?);
    }
    if let Some(b) = s.strip_prefix("0b") {
        return u128::from_str_radix(b, 2).map_err(|_| bad());
    }
    if let Some(h) = s.strip_prefix("0x") {
        return u128::from_str_radix(h, 16).map_err(|_| bad());
    }
    s.parse().map_err(|_| bad())
}

/// `a..b` (exclusive), `a..=b` (inclusive) or a comma-separated list.
pub fn parse_range(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("cannot parse range {s:?}"));
    let values: Vec<u32> = if let Some((a, b)) = s.split_once("..=") {
        let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        (a..=b).collect()
    } else if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        (a..b).collect()
    } else {
        s.split(',')
            .map(|x| x.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if values.is_empty() {
        return Err(Error::InvalidArgument(format!("range {s:?} is empty")));
    }
    Ok(values)
}
