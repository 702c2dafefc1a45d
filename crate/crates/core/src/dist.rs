//! Exact finite-support distributions on ℤ.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::rational::{self, Q};

/// Side of ℤ on which the untracked probability mass lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailSide {
    /// Support is complete; `tail_bound` is zero.
    None,
    /// Missing mass sits below the smallest listed `k`.
    Below,
    /// Missing mass sits above the largest listed `k`.
    Above,
}

/// A probability distribution on ℤ with exact rational weights.
///
/// For the constant patterns the support is infinite; the distribution is
/// then truncated and `tail_bound` is the exact mass that was left out.
#[derive(Clone, Debug, PartialEq)]
pub struct IntDist {
    support: BTreeMap<i64, Q>,
    tail_bound: Q,
    tail_side: TailSide,
}

impl IntDist {
    /// Builds a distribution, dropping zero weights.
    pub fn new(support: BTreeMap<i64, Q>, tail_bound: Q, tail_side: TailSide) -> Self {
        let support = support.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let tail_side = if tail_bound.is_zero() {
            TailSide::None
        } else {
            tail_side
        };
        Self {
            support,
            tail_bound,
            tail_side,
        }
    }

    pub fn point_mass(k: i64) -> Self {
        Self::new(BTreeMap::from([(k, rational::int(1))]), Q::zero(), TailSide::None)
    }

    pub fn support(&self) -> &BTreeMap<i64, Q> {
        &self.support
    }

    pub fn tail_bound(&self) -> &Q {
        &self.tail_bound
    }

    pub fn tail_side(&self) -> TailSide {
        self.tail_side
    }

    pub fn is_complete(&self) -> bool {
        self.tail_bound.is_zero()
    }

    pub fn get(&self, k: i64) -> Q {
        self.support.get(&k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn min_k(&self) -> Option<i64> {
        self.support.keys().next().copied()
    }

    pub fn max_k(&self) -> Option<i64> {
        self.support.keys().next_back().copied()
    }

    /// Sum of the listed weights (1 minus the tail).
    pub fn total(&self) -> Q {
        self.support.values().fold(Q::zero(), |acc, p| acc + p)
    }

    /// `Σ k^r p_k` over the listed support.
    pub fn moment(&self, r: u32) -> Q {
        self.support.iter().fold(Q::zero(), |acc, (&k, p)| {
            acc + rational::int(k).pow(r as i32) * p
        })
    }

    /// `k ↦ -k`.
    pub fn reflect(&self) -> Self {
        let side = match self.tail_side {
            TailSide::None => TailSide::None,
            TailSide::Below => TailSide::Above,
            TailSide::Above => TailSide::Below,
        };
        Self::new(
            self.support.iter().map(|(&k, p)| (-k, p.clone())).collect(),
            self.tail_bound.clone(),
            side,
        )
    }

    /// Restriction to `|k| <= radius`.
    pub fn window(&self, radius: i64) -> BTreeMap<i64, Q> {
        self.support
            .range(-radius..=radius)
            .map(|(&k, p)| (k, p.clone()))
            .collect()
    }

    /// Uniform mixture of several distributions.
    pub fn average(parts: &[IntDist]) -> Self {
        assert!(!parts.is_empty());
        let n = rational::int(parts.len() as i64);
        let mut support: BTreeMap<i64, Q> = BTreeMap::new();
        let mut tail = Q::zero();
        let mut side = TailSide::None;
        for part in parts {
            for (&k, p) in &part.support {
                *support.entry(k).or_insert_with(Q::zero) += p;
            }
            tail += &part.tail_bound;
            if part.tail_side != TailSide::None {
                side = if side == TailSide::None || side == part.tail_side {
                    part.tail_side
                } else {
                    // Mixed sides never arise for a single pattern.
                    TailSide::Below
                };
            }
        }
        for p in support.values_mut() {
            *p /= &n;
        }
        Self::new(support, tail / n, side)
    }

    /// All listed weights are nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.support.values().all(|p| !p.is_negative())
    }
}
