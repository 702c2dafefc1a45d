//! Characteristic functions of `δ_{t,j}` via the transfer matrices `A_t`,
//! `B_t`, `C_t` and the pair recursion
//!
//! ```text
//! Γ_{2t}   = A_{2t} Γ_t
//! Γ_{2t+1} = B_{2t+1} Γ_t + C_{2t+1} Γ_{t+1}
//! ```
//!
//! Entries of `Γ_t` are exact [`RationalCF`] values in `z = e^{iθ}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::descent::{self, PairCache, PairStep};
use crate::direct::phi;
use crate::dist::IntDist;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, RationalCF};
use crate::rational::{self, Q};
use crate::words::{bit_len, Pattern};

/// Largest pattern length accepted by default (matrices are `2^(ℓ-1)` square).
pub const DEFAULT_MAX_LEN: usize = 12;

/// Default tail tolerance for the constant patterns.
pub fn default_eps() -> Q {
    rational::pow2(-40)
}

/// Which rows of `A_t` are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowMask {
    All,
    Even,
    Odd,
}

/// A `2^(ℓ-1)`-square matrix whose nonzero entries are `z^e / 2`, `e ∈ {-1,0,1}`.
///
/// Row `j` stores its entries as `(column, e)` pairs; masked rows are empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, i8)>>,
}

impl CFMatrix {
    pub fn build(w: &Pattern, t: u128, mask: RowMask) -> Self {
        let dim = w.residues();
        let half = dim / 2;
        let rows = (0..dim)
            .map(|j| {
                let keep = match mask {
                    RowMask::All => true,
                    RowMask::Even => j % 2 == 0,
                    RowMask::Odd => j % 2 == 1,
                };
                if !keep {
                    return Vec::new();
                }
                vec![
                    (j / 2, phi(w, t, j as u128)),
                    (j / 2 + half, phi(w, t, (j + dim) as u128)),
                ]
            })
            .collect();
        Self { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero entries of row `j` as `(column, exponent)`.
    pub fn row(&self, j: usize) -> &[(usize, i8)] {
        &self.rows[j]
    }

    /// Exponent of `z` at `(j, k)`, if the entry is nonzero.
    pub fn entry(&self, j: usize, k: usize) -> Option<i8> {
        self.rows[j].iter().find(|(c, _)| *c == k).map(|&(_, e)| e)
    }

    /// The matrix at `z = 1`.
    pub fn at_one(&self) -> Vec<Vec<Q>> {
        let half = rational::frac(1, 2);
        let mut m = vec![vec![Q::zero(); self.dim]; self.dim];
        for (j, row) in self.rows.iter().enumerate() {
            for &(k, _) in row {
                m[j][k] += &half;
            }
        }
        m
    }

    pub fn apply(&self, v: &CFVector) -> Result<CFVector> {
        let half = rational::frac(1, 2);
        let entries = self
            .rows
            .iter()
            .map(|row| {
                row.iter().try_fold(RationalCF::zero(), |acc, &(k, e)| {
                    acc.try_add(&v.entries[k].mul_monomial(&half, e as i64))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CFVector { entries })
    }

    pub fn apply_rational(&self, v: &[Q]) -> Vec<Q> {
        self.rows
            .iter()
            .map(|row| row.iter().fold(Q::zero(), |acc, &(k, _)| acc + &v[k]) / rational::int(2))
            .collect()
    }
}

impl fmt::Display for CFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.dim {
            let cells: Vec<String> = (0..self.dim)
                .map(|k| match self.entry(j, k) {
                    None => "0".into(),
                    Some(0) => "1/2".into(),
                    Some(1) => "z/2".into(),
                    Some(_) => "1/(2z)".into(),
                })
                .collect();
            writeln!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

pub fn build_a(w: &Pattern, t: u128) -> CFMatrix {
    CFMatrix::build(w, t, RowMask::All)
}

pub fn build_b(w: &Pattern, t: u128) -> CFMatrix {
    CFMatrix::build(w, t, RowMask::Even)
}

pub fn build_c(w: &Pattern, t: u128) -> CFMatrix {
    CFMatrix::build(w, t, RowMask::Odd)
}

/// `Γ_t`: the characteristic functions `γ_{t,j}`, `j = 0, …, 2^(ℓ-1)-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFVector {
    entries: Vec<RationalCF>,
}

impl CFVector {
    pub fn ones(dim: usize) -> Self {
        Self {
            entries: vec![RationalCF::one(); dim],
        }
    }

    pub fn from_entries(entries: Vec<RationalCF>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[RationalCF] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }

    /// `γ_t`, the average of the entries.
    pub fn average(&self) -> Result<RationalCF> {
        let sum = self
            .entries
            .iter()
            .try_fold(RationalCF::zero(), |acc, e| acc.try_add(e))?;
        Ok(sum.mul_monomial(&rational::frac(1, self.entries.len() as i64), 0))
    }

    /// Largest numerator span over the entries.
    pub fn max_span(&self) -> i64 {
        self.entries.iter().map(|e| e.numerator().span()).max().unwrap_or(0)
    }
}

/// Solves `(I - C_1) Γ = B_1 1`.
///
/// Even rows are explicit. Odd row `j` refers to rows `⌊j/2⌋` and
/// `⌊j/2⌋ + 2^(ℓ-2)`; the only self-reference is row `2^(ℓ-1)-1`, whose
/// coefficient is `z^σ/2` with `σ = +1` for `0^ℓ`, `-1` for `1^ℓ` and `σ`
/// absent otherwise. Rows are resolved in dependency order.
pub fn gamma1(w: &Pattern) -> Result<CFVector> {
    let dim = w.residues();
    let a1 = build_a(w, 1);
    let half = rational::frac(1, 2);
    let mut solved: Vec<Option<RationalCF>> = vec![None; dim];
    for j in (0..dim).step_by(2) {
        let row = a1.row(j);
        let p = LaurentPoly::from_coeffs(row.iter().map(|&(_, e)| (e as i64, half.clone())));
        solved[j] = Some(RationalCF::poly(p));
    }
    fn resolve(
        j: usize,
        a1: &CFMatrix,
        solved: &mut Vec<Option<RationalCF>>,
        visiting: &mut Vec<bool>,
    ) -> Result<RationalCF> {
        if let Some(v) = &solved[j] {
            return Ok(v.clone());
        }
        if visiting[j] {
            return Err(Error::Internal(format!("cyclic dependency at row {j} of the Γ_1 system")));
        }
        visiting[j] = true;
        let half = rational::frac(1, 2);
        let mut acc = RationalCF::zero();
        let mut self_exp = None;
        for &(k, e) in a1.row(j) {
            if k == j {
                self_exp = Some(e);
                continue;
            }
            let v = resolve(k, a1, solved, visiting)?;
            acc = acc.try_add(&v.mul_monomial(&half, e as i64))?;
        }
        let value = match self_exp {
            None => acc,
            // γ (1 - z^e/2) = acc  ⇒  γ = 2 acc / (2 - z^e).
            Some(0) => acc.mul_monomial(&rational::int(2), 0),
            Some(e) => acc.mul_monomial(&rational::int(2), 0).div_pole(e)?,
        };
        visiting[j] = false;
        solved[j] = Some(value.clone());
        Ok(value)
    }
    let mut visiting = vec![false; dim];
    for j in 0..dim {
        resolve(j, &a1, &mut solved, &mut visiting)?;
    }
    let gamma = CFVector {
        entries: solved.into_iter().map(|v| v.expect("all rows resolved")).collect(),
    };
    // (I - C_1) Γ = B_1 1 must hold exactly.
    let lhs = gamma.try_add(&negate(&build_c(w, 1).apply(&gamma)?))?;
    let rhs = build_b(w, 1).apply(&CFVector::ones(dim))?;
    if lhs != rhs {
        return Err(Error::Internal("Γ_1 does not satisfy its defining system".into()));
    }
    Ok(gamma)
}

fn negate(v: &CFVector) -> CFVector {
    CFVector {
        entries: v.entries.iter().map(RationalCF::neg).collect(),
    }
}

/// One step of the `Γ` recursion; matrices depend on `τ mod 2^ℓ` only.
struct GammaStep {
    a: Vec<CFMatrix>,
    b: Vec<CFMatrix>,
    c: Vec<CFMatrix>,
    modulus: u128,
}

impl GammaStep {
    fn new(w: &Pattern) -> Self {
        let modulus = 1u128 << w.len();
        let residues = 0..modulus;
        Self {
            a: residues.clone().map(|t| build_a(w, t)).collect(),
            b: residues.clone().map(|t| build_b(w, t)).collect(),
            c: residues.map(|t| build_c(w, t)).collect(),
            modulus,
        }
    }
}

impl PairStep for GammaStep {
    type Value = CFVector;

    fn even(&self, tau: u128, half: &CFVector) -> Result<CFVector> {
        self.a[(tau % self.modulus) as usize].apply(half)
    }

    fn odd(&self, tau: u128, lower: &CFVector, upper: &CFVector) -> Result<CFVector> {
        let r = (tau % self.modulus) as usize;
        self.b[r].apply(lower)?.try_add(&self.c[r].apply(upper)?)
    }
}

/// All `Γ_t` data for one pattern, with a shared descent cache.
pub struct CfEngine {
    pattern: Pattern,
    step: GammaStep,
    base: (CFVector, CFVector),
    cache: PairCache<u128, CFVector>,
}

impl fmt::Debug for CfEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CfEngine")
            .field("pattern", &self.pattern.to_string())
            .field("cached", &self.cache.len())
            .finish()
    }
}

impl CfEngine {
    pub fn new(w: &Pattern) -> Result<Self> {
        Self::with_max_len(w, DEFAULT_MAX_LEN)
    }

    pub fn with_max_len(w: &Pattern, max_len: usize) -> Result<Self> {
        if w.len() > max_len {
            return Err(Error::Resource(format!(
                "pattern length {} exceeds the matrix cap {max_len}",
                w.len()
            )));
        }
        let g1 = gamma1(w)?;
        Ok(Self {
            pattern: w.clone(),
            step: GammaStep::new(w),
            base: (CFVector::ones(w.residues()), g1),
            cache: PairCache::default(),
        })
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn gamma1(&self) -> &CFVector {
        &self.base.1
    }

    /// `(Γ_t, Γ_{t+1})`.
    pub fn gamma_pair(&self, t: u128) -> Result<(CFVector, CFVector)> {
        let pair = descent::descend_cached(&self.step, &self.base, t, &self.cache)?;
        // Supports grow linearly with h(t); anything beyond signals a bug.
        let limit = 4 * (bit_len(t) as i64 + self.pattern.len() as i64) + 8;
        if pair.0.max_span() > limit {
            return Err(Error::Internal(format!(
                "numerator span {} exceeds {limit} at t = {t}",
                pair.0.max_span()
            )));
        }
        Ok(pair)
    }

    pub fn gamma(&self, t: u128) -> Result<CFVector> {
        Ok(self.gamma_pair(t)?.0)
    }

    /// `Γ_0, …, Γ_{count-1}`.
    pub fn gamma_table(&self, count: usize) -> Result<Vec<CFVector>> {
        descent::sweep(&self.step, &self.base, count)
    }

    /// `γ_t`.
    pub fn char_fun(&self, t: u128) -> Result<RationalCF> {
        self.gamma(t)?.average()
    }

    pub fn dist_conditional(&self, t: u128, j: usize, eps: &Q) -> Result<IntDist> {
        if j >= self.pattern.residues() {
            return Err(Error::InvalidArgument(format!("residue {j} out of range")));
        }
        self.gamma(t)?.entries[j].to_dist(eps, 0)
    }

    /// `δ_t`. For `0^ℓ`, `1^ℓ` the expansion stops once the left-out mass is
    /// at most `eps` and `|k| <= min_radius` is covered.
    pub fn dist(&self, t: u128, eps: &Q, min_radius: i64) -> Result<IntDist> {
        if self.pattern.is_constant() && !eps.is_positive() {
            return Err(Error::InvalidArgument("tail tolerance must be positive".into()));
        }
        let gamma = self.char_fun(t)?;
        let d = gamma.to_dist(eps, min_radius)?;
        if !d.is_nonnegative() {
            return Err(Error::Internal(format!("negative probability in δ_{t}")));
        }
        Ok(d)
    }

    /// `γ_t(θ)` in floating point.
    pub fn eval_cf(&self, t: u128, theta: f64) -> Result<Complex64> {
        Ok(self.char_fun(t)?.eval_angle(theta))
    }

    /// Exact `Σ k^r δ_t(k)` for `r ≤ 2`, tails included.
    pub fn moment(&self, t: u128, r: u32) -> Result<Q> {
        Ok(self.char_fun(t)?.moment(r))
    }

    /// Exact `Σ k^r δ_{t,j}(k)` for `r ≤ 2`.
    pub fn conditional_moment(&self, t: u128, j: usize, r: u32) -> Result<Q> {
        Ok(self.gamma(t)?.entries[j].moment(r))
    }

    pub fn cache_snapshot(&self) -> Vec<(u128, (CFVector, CFVector))> {
        self.cache.snapshot()
    }

    pub fn cache_insert(&self, t: u128, pair: (CFVector, CFVector)) {
        self.cache.insert(t, pair);
    }
}

fn registry() -> &'static RwLock<HashMap<Pattern, Arc<CfEngine>>> {
    static REGISTRY: OnceLock<RwLock<HashMap<Pattern, Arc<CfEngine>>>> = OnceLock::new();
    REGISTRY.get_or_init(Default::default)
}

/// Process-wide engine for `w`, created on first use.
pub fn engine(w: &Pattern) -> Result<Arc<CfEngine>> {
    if let Some(e) = registry().read().expect("registry lock").get(w) {
        return Ok(e.clone());
    }
    let fresh = Arc::new(CfEngine::new(w)?);
    let mut map = registry().write().expect("registry lock");
    Ok(map.entry(w.clone()).or_insert(fresh).clone())
}

pub fn gamma_pair(w: &Pattern, t: u128) -> Result<(CFVector, CFVector)> {
    engine(w)?.gamma_pair(t)
}

pub fn dist_conditional(w: &Pattern, t: u128, j: usize, eps: &Q) -> Result<IntDist> {
    engine(w)?.dist_conditional(t, j, eps)
}

pub fn dist(w: &Pattern, t: u128, eps: &Q) -> Result<IntDist> {
    engine(w)?.dist(t, eps, 0)
}

pub fn eval_cf(w: &Pattern, t: u128, theta: f64) -> Result<Complex64> {
    engine(w)?.eval_cf(t, theta)
}

/// Coefficients of `δ_t` as a plain map, for callers that only need the window `|k| <= radius`.
pub fn dist_window(w: &Pattern, t: u128, radius: i64) -> Result<BTreeMap<i64, Q>> {
    Ok(engine(w)?.dist(t, &default_eps(), radius)?.window(radius))
}
