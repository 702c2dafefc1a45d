//! Direct evaluation of `d_t(n) = occ_w(n+t) - occ_w(n)` and the exact
//! enumeration oracle.
//!
//! Two independent ways of producing distributions live here:
//!
//! * [`brute_force_counts`] evaluates `d_t(n)` for every `n < 2^λ`. The
//!   relative frequencies converge to the densities `δ_t(k)` but are never
//!   exactly equal to them for `t >= 1`: the `n` near `2^λ` whose carry leaves
//!   the window contribute an `O(t / 2^λ)` boundary error.
//! * [`empirical_dist`] enumerates the partition of ℕ into progressions
//!   `A(ux) = 2^{|ux|}ℕ + [ux]_2` on which `d_t` is constant, evaluating `d_t`
//!   on each progression through a fixed digit window. Inside a long run of
//!   equal digits, lengthening the run by one changes `d_t` by `+1` (zeros,
//!   for `0^ℓ`), `-1` (ones, for `1^ℓ`) or `0`, so the infinite family of
//!   progressions with long runs is summed in closed form. The result is the
//!   exact density, expressed as counts over one period of length `2^λ`.
//!
//! Neither route touches the transfer matrices.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{IntDist, TailSide};
use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::words::{bit_len, count_occurrences, occ, DigitString, Pattern};

/// Largest `λ` accepted by [`brute_force_counts`].
pub const MAX_SCAN_LAMBDA: u32 = 34;
/// Largest `λ` for which counts over a period fit in `u128`.
pub const MAX_COUNT_LAMBDA: u32 = 120;
/// Cap on the number of progressions visited by the exact oracle.
pub const MAX_PROGRESSIONS: u128 = 1 << 28;
/// Default cap on `λ` when none is given explicitly.
pub const DEFAULT_LAMBDA_CAP: u32 = 26;

/// `d^w_t(n)`, including the length correction for `w = 0^ℓ`.
pub fn d(w: &Pattern, t: u128, n: u128) -> i64 {
    let m = n.checked_add(t).expect("n + t overflows u128");
    let mut value = occ(w, m) as i64 - occ(w, n) as i64;
    if w.is_zeros() {
        value += bit_len(n) as i64 - bit_len(m) as i64;
    }
    value
}

/// `|uz|_w - |ux|_w` for a buffer `u` of length `ℓ-1`.
///
/// When `[z]_2 = [x]_2 + t` this equals `d_t([vux]_2)` for every prefix `v`.
pub fn d_window(w: &Pattern, u: &DigitString, x: &DigitString, z: &DigitString) -> Result<i64> {
    if u.len() != w.len() - 1 {
        return Err(Error::InvalidArgument(format!(
            "buffer has length {}, expected {}",
            u.len(),
            w.len() - 1
        )));
    }
    if x.len() != z.len() {
        return Err(Error::InvalidArgument(format!(
            "windows differ in length ({} vs {})",
            x.len(),
            z.len()
        )));
    }
    Ok(count_occurrences(&u.concat(z), w) as i64 - count_occurrences(&u.concat(x), w) as i64)
}

/// `φ(t, n) ∈ {-1, 0, 1}`, the change contributed by the lowest window.
pub fn phi(w: &Pattern, t: u128, n: u128) -> i8 {
    let modulus = w.mask() as u128 + 1;
    let t = t % modulus;
    let diff = (w.value() as u128 + modulus - n % modulus) % modulus;
    match (t == diff, diff == 0) {
        (true, false) => 1,
        (false, true) => -1,
        _ => 0,
    }
}

/// Occurrences of `w` inside the `len`-digit word whose value is `bits`.
fn count_packed(w: &Pattern, bits: u128, len: u32) -> i64 {
    let l = w.len() as u32;
    if len < l {
        return 0;
    }
    let mask = w.mask() as u128;
    let target = w.value() as u128;
    (0..=len - l).filter(|&i| (bits >> i) & mask == target).count() as i64
}

/// One member of the progression partition, `A(ux)`.
#[derive(Clone, Copy, Debug)]
struct Progression {
    /// `|ux|`; the progression has difference `2^len`.
    len: u32,
    /// `[ux]_2`.
    value: u128,
    /// Common value of `d_t` on the progression.
    d: i64,
    /// Length of the run of ones in a carry-type progression.
    run: Option<u32>,
}

/// Visits every progression of the partition, with run lengths up to `max_run`.
fn for_each_progression(w: &Pattern, t: u128, max_run: u32, mut visit: impl FnMut(Progression)) {
    let l = w.len() as u32;
    let h = bit_len(t);
    let top = 1u128 << h;
    let buffers = 1u128 << (l - 1);
    // No carry out of the low h digits.
    let len = l - 1 + h;
    for u in 0..buffers {
        for x in 0..top - t {
            let z = x + t;
            let ux = (u << h) | x;
            let uz = (u << h) | z;
            visit(Progression {
                len,
                value: ux,
                d: count_packed(w, uz, len) - count_packed(w, ux, len),
                run: None,
            });
        }
    }
    // Carry out of the low digits: x = 0 1^s y turns into 1 0^s z'.
    for s in 0..=max_run {
        let len = l + s + h;
        let ones = ((1u128 << s) - 1) << h;
        for y in top - t..top {
            let z = y + t - top;
            let x_word = ones | y;
            let z_word = (1u128 << (s + h)) | z;
            for u in 0..buffers {
                let ux = (u << (1 + s + h)) | x_word;
                let uz = (u << (1 + s + h)) | z_word;
                visit(Progression {
                    len,
                    value: ux,
                    d: count_packed(w, uz, len) - count_packed(w, ux, len),
                    run: Some(s),
                });
            }
        }
    }
}

fn progression_budget(w: &Pattern, t: u128, runs: u32) -> Result<()> {
    let h = bit_len(t);
    if h > 60 {
        return Err(Error::Resource(format!("t = {t} is too large for enumeration")));
    }
    let per_buffer = (1u128 << h) + t * runs as u128;
    let total = per_buffer.saturating_mul(w.residues() as u128);
    if total > MAX_PROGRESSIONS {
        return Err(Error::Resource(format!(
            "enumeration would visit {total} progressions (cap {MAX_PROGRESSIONS})"
        )));
    }
    Ok(())
}

/// Exact densities `δ_{t,j}(k)` obtained from the progression partition.
///
/// Weights are kept as integer multiples of `2^-scale`; for the constant
/// patterns the infinitely many long-run progressions are stored as rays
/// `k0, k0+σ, k0+2σ, ...` with weights `2^-(scale+1)`, `2^-(scale+2)`, ...
#[derive(Clone, Debug)]
pub struct ExactDensities {
    pattern: Pattern,
    t: u128,
    scale: u32,
    finite: BTreeMap<(usize, i64), u128>,
    rays: BTreeMap<(usize, i64), u128>,
    slope: i64,
}

impl ExactDensities {
    pub fn compute(w: &Pattern, t: u128) -> Result<Self> {
        let l = w.len() as u32;
        // From this run length on, one more digit shifts d_t by `slope`.
        let stable_run = l - 1;
        progression_budget(w, t, stable_run + 1)?;
        let h = bit_len(t);
        let scale = h + 2 * l - 2;
        let slope = i64::from(w.is_zeros()) - i64::from(w.is_ones());
        let residue_mask = w.residues() as u128 - 1;
        let mut finite = BTreeMap::new();
        let mut rays = BTreeMap::new();
        for_each_progression(w, t, stable_run, |p| {
            let j = (p.value & residue_mask) as usize;
            match p.run {
                Some(s) if s == stable_run => {
                    if slope == 0 {
                        // Σ_{s >= stable_run} 2^-(ℓ+s+h) = 2^-scale.
                        *finite.entry((j, p.d)).or_insert(0) += 1;
                    } else {
                        *rays.entry((j, p.d)).or_insert(0) += 1;
                    }
                }
                _ => {
                    *finite.entry((j, p.d)).or_insert(0) += 1u128 << (scale - p.len);
                }
            }
        });
        Ok(Self {
            pattern: w.clone(),
            t,
            scale,
            finite,
            rays,
            slope,
        })
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn t(&self) -> u128 {
        self.t
    }

    /// Mass of residue class `j` (or all classes) at `k`, unnormalized: the
    /// plain density `dens(D_t(k) ∩ (2^(ℓ-1)ℕ + j))`.
    fn raw(&self, j: Option<usize>, k: i64) -> Q {
        let in_class = |jj: usize| j.is_none_or(|j| j == jj);
        let mut acc = Q::zero();
        for (&(jj, kk), &c) in &self.finite {
            if kk == k && in_class(jj) {
                acc += rational::dyadic(c, self.scale);
            }
        }
        if self.slope != 0 {
            for (&(jj, k0), &c) in &self.rays {
                let m = (k - k0) * self.slope;
                if m >= 0 && in_class(jj) {
                    acc += rational::dyadic(c, 0) * rational::pow2(-(self.scale as i64 + 1 + m));
                }
            }
        }
        acc
    }

    /// `δ_t(k)`.
    pub fn density(&self, k: i64) -> Q {
        self.raw(None, k)
    }

    /// `δ_{t,j}(k)`, the density conditioned on `n ≡ j (mod 2^(ℓ-1))`.
    pub fn conditional(&self, j: usize, k: i64) -> Q {
        self.raw(Some(j), k) * rational::int(self.pattern.residues() as i64)
    }

    /// Range of `k` carrying finite (non-ray) mass.
    fn finite_range(&self) -> (i64, i64) {
        let ks = self.finite.keys().map(|&(_, k)| k).chain(self.rays.keys().map(|&(_, k)| k));
        let (lo, hi) = ks.fold((i64::MAX, i64::MIN), |(lo, hi), k| (lo.min(k), hi.max(k)));
        if lo > hi {
            (0, 0)
        } else {
            (lo, hi)
        }
    }

    /// `δ_t` (or `δ_{t,j}`) truncated to `|k| <= radius`, with the exact
    /// left-out mass as tail. Non-constant patterns are complete for any
    /// radius covering their support.
    pub fn to_dist(&self, j: Option<usize>, radius: i64) -> IntDist {
        let (lo, hi) = self.finite_range();
        let (lo, hi) = if self.slope == 0 {
            (lo, hi)
        } else {
            (lo.max(-radius).min(hi), hi.min(radius).max(lo))
        };
        let lo = lo.max(-radius);
        let hi = hi.min(radius);
        let factor = match j {
            Some(_) => rational::int(self.pattern.residues() as i64),
            None => rational::int(1),
        };
        let support: BTreeMap<i64, Q> = (lo..=hi).map(|k| (k, self.raw(j, k) * &factor)).collect();
        let total = support.values().fold(Q::zero(), |a, p| a + p);
        let tail = rational::int(1) - total;
        let side = match self.slope {
            1 => TailSide::Above,
            -1 => TailSide::Below,
            _ => TailSide::None,
        };
        IntDist::new(support, tail, side)
    }

    /// Smallest `λ` with `2^λ δ_t(k)` integral for every `|k| <= kmax`
    /// (every `k` for non-constant patterns).
    pub fn required_lambda(&self, kmax: i64) -> u32 {
        let (lo, hi) = self.finite_range();
        let (lo, hi) = if self.slope == 0 {
            (lo, hi)
        } else {
            (-kmax, kmax)
        };
        (lo..=hi)
            .map(|k| rational::dyadic_exponent(&self.density(k)).expect("densities are dyadic") as u32)
            .max()
            .unwrap_or(0)
    }
}

/// Distribution of `d_t` over one period, as produced by the oracles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub w: Pattern,
    pub t: u128,
    pub lambda: u32,
    /// `counts(k) / 2^λ = δ_t(k)` for every listed `k` (for `|k| <= kmax` when
    /// `kmax` is set).
    pub exact: bool,
    /// For the constant patterns: the window on which counts are exact.
    pub kmax: Option<i64>,
    pub counts: BTreeMap<i64, u128>,
    /// Period members not attributed to any listed `k`.
    pub residual: u128,
}

#[derive(Serialize)]
struct OracleWire<'a> {
    w: String,
    t: u128,
    lambda: u32,
    exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    kmax: Option<i64>,
    counts: Vec<(i64, u128)>,
    #[serde(skip_serializing_if = "is_zero_u128")]
    residual: u128,
    #[serde(skip)]
    _marker: std::marker::PhantomData<&'a ()>,
}

fn is_zero_u128(x: &u128) -> bool {
    *x == 0
}

impl OracleResult {
    pub fn total(&self) -> u128 {
        self.counts.values().sum::<u128>() + self.residual
    }

    /// The counts as a distribution `counts(k) / 2^λ`.
    pub fn to_dist(&self) -> IntDist {
        let support = self
            .counts
            .iter()
            .map(|(&k, &c)| (k, rational::dyadic(c, self.lambda)))
            .collect();
        let side = if self.w.is_ones() {
            TailSide::Below
        } else {
            TailSide::Above
        };
        IntDist::new(support, rational::dyadic(self.residual, self.lambda), side)
    }

    /// JSON form: `{"w","t","lambda","exact","counts":[[k,count],...]}`, `k` ascending.
    pub fn to_json(&self) -> Result<String> {
        let wire = OracleWire {
            w: self.w.to_string(),
            t: self.t,
            lambda: self.lambda,
            exact: self.exact,
            kmax: self.kmax,
            counts: self.counts.iter().map(|(&k, &c)| (k, c)).collect(),
            residual: self.residual,
            _marker: std::marker::PhantomData,
        };
        Ok(serde_json::to_string(&wire)?)
    }
}

/// `λ` at which [`empirical_dist`] is exact on `|k| <= kmax`.
///
/// The classical exponents are `h(t) + ℓ + 1` for non-constant patterns and
/// `2h(t) + kmax + ℓ - 1` for `0^ℓ`, `1^ℓ`; the result is never below the
/// exponent actually needed by the densities.
pub fn exact_lambda(w: &Pattern, t: u128, kmax: i64) -> Result<u32> {
    let l = w.len() as u32;
    let h = bit_len(t);
    let classical = if w.is_constant() {
        2 * h + kmax.max(0) as u32 + l - 1
    } else {
        h + l + 1
    };
    let needed = ExactDensities::compute(w, t)?.required_lambda(kmax);
    Ok(classical.max(needed))
}

/// The classical exponent alone, without consulting the densities.
pub fn classical_lambda(w: &Pattern, t: u128, kmax: i64) -> u32 {
    let l = w.len() as u32;
    let h = bit_len(t);
    if w.is_constant() {
        2 * h + kmax.max(0) as u32 + l - 1
    } else {
        h + l + 1
    }
}

/// Largest `kmax` whose window is exact at `λ` for a constant pattern.
fn exact_window(densities: &ExactDensities, lambda: u32) -> i64 {
    let mut kmax = -1;
    loop {
        let k = kmax + 1;
        let ok = [k, -k].iter().all(|&k| {
            rational::dyadic_exponent(&densities.density(k)).expect("dyadic") as u32 <= lambda
        });
        // Densities vanish far out on the side opposite to the ray direction,
        // and decay by halves along it: beyond `lambda` they stop being integral.
        if !ok || k > lambda as i64 + 2 {
            return kmax;
        }
        kmax = k;
    }
}

/// Exact distribution of `d_t` over one period of length `2^λ`.
///
/// `counts(k) = 2^λ δ_t(k)`. When `λ` is too small for some `k` the counts
/// are rounded down, `exact` is false and the difference goes to `residual`.
/// For `0^ℓ` and `1^ℓ` only `|k| <= kmax` is listed, where `kmax` is the
/// widest window that is exact at this `λ`.
pub fn empirical_dist(w: &Pattern, t: u128, lambda: u32) -> Result<OracleResult> {
    if lambda < w.len() as u32 - 1 {
        return Err(Error::InvalidArgument(format!(
            "λ = {lambda} is below ℓ - 1 = {}",
            w.len() - 1
        )));
    }
    if lambda > MAX_COUNT_LAMBDA {
        return Err(Error::Resource(format!("λ = {lambda} exceeds {MAX_COUNT_LAMBDA}")));
    }
    let densities = ExactDensities::compute(w, t)?;
    let (ks, kmax) = if w.is_constant() {
        let kmax = exact_window(&densities, lambda);
        ((-kmax.max(0))..=kmax.max(0), Some(kmax))
    } else {
        let (lo, hi) = densities.finite_range();
        (lo..=hi, None)
    };
    let period = rational::pow2(lambda as i64);
    let mut exact = kmax.is_none_or(|k| k >= 0);
    let mut counts = BTreeMap::new();
    for k in ks {
        if kmax.is_some_and(|m| m < 0) {
            break;
        }
        let scaled = densities.density(k) * &period;
        if !scaled.is_integer() {
            exact = false;
        }
        let c = scaled.floor().to_integer();
        let c: u128 = c.try_into().map_err(|_| Error::Internal("negative density".into()))?;
        if c > 0 {
            counts.insert(k, c);
        }
    }
    let listed: u128 = counts.values().sum();
    let full = 1u128 << lambda;
    Ok(OracleResult {
        w: w.clone(),
        t,
        lambda,
        exact,
        kmax,
        counts,
        residual: full - listed,
    })
}

/// [`empirical_dist`] with the default `λ = min(exact_lambda, 26)`, or an override.
pub fn empirical_dist_default(w: &Pattern, t: u128, kmax: i64, lambda: Option<u32>) -> Result<OracleResult> {
    let lambda = match lambda {
        Some(l) => l,
        None => exact_lambda(w, t, kmax)?.min(DEFAULT_LAMBDA_CAP),
    };
    empirical_dist(w, t, lambda)
}

/// Literal frequencies of `d_t(n)` over `n ∈ [0, 2^λ)`, evaluated in parallel.
///
/// These converge to `δ_t` as `λ → ∞` but carry a boundary error, so the
/// result is always marked inexact for `t >= 1`.
pub fn brute_force_counts(w: &Pattern, t: u128, lambda: u32) -> Result<OracleResult> {
    if lambda > MAX_SCAN_LAMBDA {
        return Err(Error::Resource(format!(
            "scanning 2^{lambda} integers exceeds the cap 2^{MAX_SCAN_LAMBDA}"
        )));
    }
    let n_max = 1u128 << lambda;
    let chunk = 1u128 << 14;
    let chunks = n_max.div_ceil(chunk);
    let counts = (0..chunks as u64)
        .into_par_iter()
        .fold(HashMap::<i64, u128>::new, |mut acc, c| {
            let start = c as u128 * chunk;
            for n in start..(start + chunk).min(n_max) {
                *acc.entry(d(w, t, n)).or_insert(0) += 1;
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            a
        });
    Ok(OracleResult {
        w: w.clone(),
        t,
        lambda,
        exact: t == 0,
        kmax: None,
        counts: counts.into_iter().collect(),
        residual: 0,
    })
}

/// `2^-λ Σ_{n < 2^λ} d_t(2^(ℓ-1) n + j)`, the finite-λ mean on a residue class.
pub fn residue_mean_estimate(w: &Pattern, t: u128, j: usize, lambda: u32) -> Q {
    let stride = w.residues() as u128;
    let sum: i64 = (0..1u128 << lambda)
        .into_par_iter()
        .map(|n| d(w, t, stride * n + j as u128))
        .sum();
    rational::int(sum) * rational::pow2(-(lambda as i64))
}

/// Counts of `d_t(n)` for `n < 2^λ`, computed from the progression partition
/// instead of per-integer evaluation. Must agree with [`brute_force_counts`].
pub fn partition_counts_below(w: &Pattern, t: u128, lambda: u32) -> Result<BTreeMap<i64, u128>> {
    let h = bit_len(t);
    let max_run = lambda.saturating_sub(h);
    progression_budget(w, t, max_run + 1)?;
    let bound = 1u128 << lambda;
    let mut counts = BTreeMap::new();
    for_each_progression(w, t, max_run, |p| {
        let members = if p.len <= lambda {
            1u128 << (lambda - p.len)
        } else {
            u128::from(p.value < bound)
        };
        if members > 0 {
            *counts.entry(p.d).or_insert(0) += members;
        }
    });
    Ok(counts)
}

impl OracleResult {
    /// Does this result agree with `dist` on the window where it is exact?
    pub fn matches(&self, dist: &IntDist) -> bool {
        let mine = self.to_dist();
        match self.kmax {
            None => mine.support() == dist.support() && dist.is_complete(),
            Some(k) => mine.window(k) == dist.window(k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    #[test]
    fn d_direct_values() {
        assert_eq!(d(&pat("11"), 1, 3), -1);
        assert_eq!(d(&pat("11"), 1, 5), 1);
        // w = 00, t = 1, n = 3: occ_00(4) - occ_00(3) - |100| + |11| = 1 - 0 - 3 + 2.
        assert_eq!(d(&pat("00"), 1, 3), 0);
        for w in Pattern::all_of_length(3) {
            for n in 0..100 {
                assert_eq!(d(&w, 0, n), 0);
            }
        }
    }

    #[test]
    fn d_window_values_and_errors() {
        let w = pat("11");
        let x: DigitString = "01".parse().unwrap();
        let z: DigitString = "10".parse().unwrap();
        let u: DigitString = "1".parse().unwrap();
        assert_eq!(d_window(&w, &u, &x, &z).unwrap(), 1);
        assert_eq!(d_window(&w, &u, &x, &x).unwrap(), 0);
        let bad_u: DigitString = "11".parse().unwrap();
        assert!(d_window(&w, &bad_u, &x, &z).is_err());
        assert!(d_window(&w, &u, &x, &"1".parse().unwrap()).is_err());
    }

    #[test]
    fn d_window_agrees_with_d_for_random_prefixes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let l = rng.gen_range(2..=5);
            let w = Pattern::new(DigitString::from_value(rng.gen_range(0..1u128 << l), l)).unwrap();
            let width = rng.gen_range(1..=8);
            let x_val = rng.gen_range(0..1u128 << width);
            let t = rng.gen_range(0..(1u128 << width) - x_val);
            let u = DigitString::from_value(rng.gen_range(0..1u128 << (l - 1)), l - 1);
            let x = DigitString::from_value(x_val, width);
            let z = DigitString::from_value(x_val + t, width);
            let local = d_window(&w, &u, &x, &z).unwrap();
            for _ in 0..100 {
                let vlen = rng.gen_range(0..10);
                let v = DigitString::from_value(rng.gen_range(0..1u128 << vlen), vlen);
                let n = v.concat(&u).concat(&x).value();
                assert_eq!(d(&w, t, n), local, "w={w} t={t} n={n}");
            }
        }
    }

    #[test]
    fn phi_cases() {
        let w = pat("011");
        for n in 0..32 {
            assert_eq!(phi(&w, 0, n), 0);
            assert_eq!(phi(&w, 8, n), 0);
        }
        assert_eq!(phi(&w, 1, 2), 1);
        assert_eq!(phi(&w, 1, 3), -1);
    }

    /// d_t(n) = d_{t'}(⌊n/2⌋) + φ(t, n) with t' = ⌊t/2⌋ + (tn mod 2).
    #[test]
    fn digit_recurrence_exhaustive() {
        for l in 2..=4 {
            for w in Pattern::all_of_length(l) {
                for t in 0..1u128 << 10 {
                    for n in 0..1u128 << 10 {
                        let t2 = t / 2 + (t * n) % 2;
                        assert_eq!(
                            d(&w, t, n) - d(&w, t2, n / 2),
                            phi(&w, t, n) as i64,
                            "w={w} t={t} n={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn partition_matches_literal_scan() {
        for l in 2..=4 {
            for w in Pattern::all_of_length(l) {
                for t in [0u128, 1, 2, 3, 5, 6, 7, 11, 22, 37, 64, 100] {
                    let lambda = 12;
                    let literal = brute_force_counts(&w, t, lambda).unwrap();
                    let partition = partition_counts_below(&w, t, lambda).unwrap();
                    assert_eq!(literal.counts, partition, "w={w} t={t}");
                }
            }
        }
    }

    #[test]
    fn hand_computed_density_for_01() {
        let dens = ExactDensities::compute(&pat("01"), 1).unwrap();
        assert_eq!(dens.density(1), rational::frac(1, 4));
        assert_eq!(dens.density(0), rational::frac(1, 2));
        assert_eq!(dens.density(-1), rational::frac(1, 4));
    }

    #[test]
    fn oracle_t_zero_is_point_mass() {
        for w in [pat("01"), pat("111"), pat("000"), pat("0110")] {
            let r = empirical_dist(&w, 0, 8).unwrap();
            assert_eq!(r.counts.get(&0), Some(&256));
            assert!(r.exact);
            assert_eq!(r.total(), 256);
        }
    }

    #[test]
    fn oracle_totals_and_exactness() {
        for l in 2..=4 {
            for w in Pattern::all_of_length(l) {
                for t in 1..40u128 {
                    let lambda = exact_lambda(&w, t, 6).unwrap();
                    let r = empirical_dist(&w, t, lambda).unwrap();
                    assert_eq!(r.total(), 1u128 << lambda);
                    assert!(r.exact, "w={w} t={t} λ={lambda}");
                    if w.is_constant() {
                        assert!(r.kmax.unwrap() >= 6);
                    } else {
                        assert_eq!(r.residual, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_stable_under_refinement() {
        for l in 2..=4 {
            for w in Pattern::all_of_length(l) {
                for t in [1u128, 6, 13, 29] {
                    let lambda = exact_lambda(&w, t, 4).unwrap();
                    let a = empirical_dist(&w, t, lambda).unwrap().to_dist();
                    let b = empirical_dist(&w, t, lambda + 2).unwrap().to_dist();
                    assert_eq!(a.window(4), b.window(4), "w={w} t={t}");
                }
            }
        }
    }

    #[test]
    fn classical_lambda_for_constant_patterns() {
        for t in [1u128, 5, 12, 200] {
            let w = pat("111");
            let h = bit_len(t);
            assert_eq!(classical_lambda(&w, t, 0), 2 * h + 3 - 1);
            let lambda = exact_lambda(&w, t, 0).unwrap();
            assert!(lambda >= 2 * h + 3 - 1);
            assert!(empirical_dist(&w, t, lambda).unwrap().exact);
            // Non-constant: independent of kmax.
            let v = pat("011");
            assert_eq!(exact_lambda(&v, t, 0).unwrap(), exact_lambda(&v, t, 9).unwrap());
        }
    }

    #[test]
    fn literal_scan_converges_to_exact() {
        let w = pat("011");
        let t = 5;
        let exact = ExactDensities::compute(&w, t).unwrap();
        let scan = brute_force_counts(&w, t, 18).unwrap();
        for (&k, &c) in &scan.counts {
            let freq = rational::dyadic(c, 18);
            let err = rational::to_f64(&(freq - exact.density(k))).abs();
            assert!(err <= (t as f64 + 8.0) / 2f64.powi(18), "k={k} err={err}");
        }
    }

    #[test]
    fn symmetry_under_negation() {
        for l in 2..=4 {
            for w in Pattern::all_of_length(l) {
                let wn = w.negate();
                for t in 0..64u128 {
                    let a = ExactDensities::compute(&w, t).unwrap().to_dist(None, 12);
                    let b = ExactDensities::compute(&wn, t).unwrap().to_dist(None, 12);
                    assert_eq!(a.window(12), b.reflect().window(12), "w={w} t={t}");
                }
            }
        }
    }

    #[test]
    fn support_bound_for_nonconstant_patterns() {
        for l in 2..=5 {
            for w in Pattern::all_of_length(l).into_iter().filter(|w| !w.is_constant()) {
                for t in 0..300u128 {
                    let h = bit_len(t) as f64;
                    let dist = ExactDensities::compute(&w, t).unwrap().to_dist(None, 1000);
                    assert!(dist.is_complete());
                    for &k in dist.support().keys() {
                        assert!((k.abs() as f64) <= h / 2.0 + 3.0, "w={w} t={t} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn resource_errors() {
        assert!(matches!(brute_force_counts(&pat("01"), 1, 40), Err(Error::Resource(_))));
        assert!(matches!(empirical_dist(&pat("01"), 1, 125), Err(Error::Resource(_))));
        assert!(matches!(ExactDensities::compute(&pat("01"), 1 << 40), Err(Error::Resource(_))));
    }

    #[test]
    fn oracle_json_shape() {
        let r = empirical_dist(&pat("01"), 1, 4).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(v["w"], "01");
        assert_eq!(v["t"], 1);
        assert_eq!(v["lambda"], 4);
        assert_eq!(v["exact"], true);
        assert_eq!(v["counts"], serde_json::json!([[-1, 4], [0, 8], [1, 4]]));
    }
}
