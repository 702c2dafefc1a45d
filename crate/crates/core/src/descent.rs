//! The binary descent shared by every recursion in the crate.
//!
//! A sequence `x_t` satisfies
//!
//! ```text
//! x_{2s}   = even(2s, x_s)
//! x_{2s+1} = odd(2s+1, x_s, x_{s+1})
//! ```
//!
//! so the pair `(x_t, x_{t+1})` is obtained from `(x_s, x_{s+1})`, `s = ⌊t/2⌋`,
//! and `x_t` costs one step per binary digit of `t`.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::RwLock;

use crate::error::Result;

/// One step of a pair recursion.
pub trait PairStep {
    type Value: Clone;

    /// `x_τ` for even `τ`, from `x_{τ/2}`.
    fn even(&self, tau: u128, half: &Self::Value) -> Result<Self::Value>;

    /// `x_τ` for odd `τ`, from `x_s` and `x_{s+1}` with `s = ⌊τ/2⌋`.
    fn odd(&self, tau: u128, lower: &Self::Value, upper: &Self::Value) -> Result<Self::Value>;
}

fn advance<S: PairStep>(
    step: &S,
    s: u128,
    pair: &(S::Value, S::Value),
    bit: bool,
) -> Result<(S::Value, S::Value)> {
    let (xs, xs1) = pair;
    if bit {
        let t = 2 * s + 1;
        Ok((step.odd(t, xs, xs1)?, step.even(t + 1, xs1)?))
    } else {
        let t = 2 * s;
        Ok((step.even(t, xs)?, step.odd(t + 1, xs, xs1)?))
    }
}

/// `(x_t, x_{t+1})` from the base pair `(x_0, x_1)`.
pub fn descend<S: PairStep>(step: &S, base: &(S::Value, S::Value), t: u128) -> Result<(S::Value, S::Value)> {
    let mut pair = base.clone();
    let mut s = 0u128;
    for i in (0..crate::words::bit_len(t)).rev() {
        let bit = (t >> i) & 1 == 1;
        pair = advance(step, s, &pair, bit)?;
        s = 2 * s + u128::from(bit);
    }
    Ok(pair)
}

/// Insert-if-absent store for pairs along descent paths.
///
/// Readers never block each other; concurrent inserts of the same key keep
/// whichever value arrived first, which is harmless because both are equal.
#[derive(Debug)]
pub struct PairCache<K, V> {
    map: RwLock<HashMap<K, (V, V)>>,
}

impl<K: Eq + Hash + Clone, V: Clone> Default for PairCache<K, V> {
    fn default() -> Self {
        Self {
            map: RwLock::new(HashMap::new()),
        }
    }
}

impl<K: Eq + Hash + Clone, V: Clone> PairCache<K, V> {
    pub fn get(&self, key: &K) -> Option<(V, V)> {
        self.map.read().expect("cache lock").get(key).cloned()
    }

    pub fn insert(&self, key: K, value: (V, V)) {
        self.map.write().expect("cache lock").entry(key).or_insert(value);
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn snapshot(&self) -> Vec<(K, (V, V))> {
        self.map
            .read()
            .expect("cache lock")
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

/// [`descend`], reusing and filling `cache` for every prefix of `t`.
pub fn descend_cached<S: PairStep>(
    step: &S,
    base: &(S::Value, S::Value),
    t: u128,
    cache: &PairCache<u128, S::Value>,
) -> Result<(S::Value, S::Value)> {
    if t == 0 {
        return Ok(base.clone());
    }
    if let Some(hit) = cache.get(&t) {
        return Ok(hit);
    }
    // Longest cached prefix of t, then walk down the remaining bits.
    let h = crate::words::bit_len(t);
    let mut start = h;
    let mut pair = base.clone();
    for i in 1..h {
        if let Some(hit) = cache.get(&(t >> i)) {
            start = i;
            pair = hit;
            break;
        }
    }
    for i in (0..start).rev() {
        let s = t >> (i + 1);
        let bit = (t >> i) & 1 == 1;
        pair = advance(step, s, &pair, bit)?;
        cache.insert(t >> i, pair.clone());
    }
    Ok(pair)
}

/// `x_0, …, x_{count-1}` in one pass.
pub fn sweep<S: PairStep>(step: &S, base: &(S::Value, S::Value), count: usize) -> Result<Vec<S::Value>> {
    let mut out = Vec::with_capacity(count.max(2));
    out.push(base.0.clone());
    out.push(base.1.clone());
    for t in 2..count {
        let s = t / 2;
        let next = if t % 2 == 0 {
            step.even(t as u128, &out[s])?
        } else {
            step.odd(t as u128, &out[s], &out[s + 1])?
        };
        out.push(next);
    }
    out.truncate(count);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// x_t = t itself: x_{2s} = 2 x_s, x_{2s+1} = x_s + x_{s+1}.
    struct Identity;

    impl PairStep for Identity {
        type Value = u128;
        fn even(&self, _: u128, half: &u128) -> Result<u128> {
            Ok(2 * half)
        }
        fn odd(&self, _: u128, a: &u128, b: &u128) -> Result<u128> {
            Ok(a + b)
        }
    }

    /// Stern's diatomic sequence.
    struct Stern;

    impl PairStep for Stern {
        type Value = u64;
        fn even(&self, _: u128, half: &u64) -> Result<u64> {
            Ok(*half)
        }
        fn odd(&self, _: u128, a: &u64, b: &u64) -> Result<u64> {
            Ok(a + b)
        }
    }

    #[test]
    fn descent_reproduces_identity() {
        for t in [0u128, 1, 2, 5, 1000, u64::MAX as u128, (1 << 100) + 12345] {
            assert_eq!(descend(&Identity, &(0, 1), t).unwrap(), (t, t + 1));
        }
    }

    #[test]
    fn sweep_and_cache_agree_with_descent() {
        let table = sweep(&Stern, &(0, 1), 2000).unwrap();
        assert_eq!(&table[..10], &[0, 1, 1, 2, 1, 3, 2, 3, 1, 4]);
        let cache = PairCache::default();
        for t in (0..1999u128).rev() {
            let expected = (table[t as usize], table[t as usize + 1]);
            assert_eq!(descend(&Stern, &(0, 1), t).unwrap(), expected);
            assert_eq!(descend_cached(&Stern, &(0, 1), t, &cache).unwrap(), expected);
        }
        assert!(!cache.is_empty());
    }
}
