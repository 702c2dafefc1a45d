//! Gaussian comparison for `δ_t` and numeric checks of the explicit bounds
//! behind the local limit theorem.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::cfengine::{default_eps, engine};
use crate::dist::{IntDist, TailSide};
use crate::error::{Error, Result};
use crate::laurent::FloatCF;
use crate::moments::MomentTables;
use crate::rational::{self, Q};
use crate::words::{blocks01, Pattern};

/// Added to the bound side of every floating-point inequality.
pub const SLACK: f64 = 1e-9;

/// `(2πv)^-1/2 exp(-k²/2v)`.
pub fn gaussian_main(k: i64, v: &Q) -> Result<f64> {
    if !v.is_positive() {
        return Err(Error::InvalidArgument(format!("variance must be positive, got {v}")));
    }
    Ok(gaussian_main_f64(k, rational::to_f64(v)))
}

fn gaussian_main_f64(k: i64, v: f64) -> f64 {
    let k = k as f64;
    (-k * k / (2.0 * v)).exp() / (2.0 * PI * v).sqrt()
}

/// `|ab| + b²θ₀/2 + (|a| + |b|θ₀)³/6 · exp(|a|θ₀ + |b|θ₀²)`.
pub fn order3_constant(a: f64, b: f64, theta0: f64) -> f64 {
    let (a, b) = (a.abs(), b.abs());
    a * b + b * b * theta0 / 2.0 + (a + b * theta0).powi(3) / 6.0 * (a * theta0 + b * theta0 * theta0).exp()
}

/// The explicit constants for patterns of one length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub len: usize,
    /// Lower variance constant `1/4^(ℓ-1)`.
    pub m: f64,
    /// Upper variance constant `3(ℓ+2)/2^(ℓ-2)`.
    pub big_m: f64,
    /// Decay constant `π²/(2^(ℓ+2)(ℓ+3))`.
    pub l: f64,
    /// `max(√(1/2L), √(1/m))`.
    pub c: f64,
}

impl Constants {
    pub fn new(len: usize) -> Self {
        let l_f = len as f64;
        let m = 4f64.powi(1 - len as i32);
        let big_m = 3.0 * (l_f + 2.0) / 2f64.powi(len as i32 - 2);
        let l = PI * PI / (2f64.powi(len as i32 + 2) * (l_f + 3.0));
        let c = (1.0 / (2.0 * l)).sqrt().max((1.0 / m).sqrt());
        Self { len, m, big_m, l, c }
    }

    /// Exact lower variance constant.
    pub fn m_exact(&self) -> Q {
        rational::pow2(-2 * (self.len as i64 - 1))
    }

    /// Exact upper variance constant.
    pub fn big_m_exact(&self) -> Q {
        rational::int(3 * (self.len as i64 + 2)) * rational::pow2(2 - self.len as i64)
    }

    /// `K(θ₀) = 4ℓ 𝒦(3, 19, θ₀)`.
    pub fn k(&self, theta0: f64) -> f64 {
        4.0 * self.len as f64 * order3_constant(3.0, 19.0, theta0)
    }

    /// `θ₀ = C √(log N / N)`.
    pub fn theta0(&self, n: u32) -> f64 {
        let n = n as f64;
        self.c * (n.ln() / n).sqrt()
    }
}

/// One row of a Gaussian comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRow {
    pub k: i64,
    pub delta: Q,
    pub delta_f64: f64,
    pub gaussian: f64,
    pub abs_error: f64,
}

#[derive(Clone, Debug)]
pub struct GaussReport {
    pub w: Pattern,
    pub t: u128,
    pub n: u32,
    pub v: Q,
    pub rows: Vec<GaussRow>,
    pub max_error: f64,
    /// Certified error budget, when the budget is defined for this `N`.
    pub bound: Option<f64>,
    /// Mass of `δ_t` outside the tabulated rows.
    pub tail: Q,
}

/// Tabulates `δ_t(k)` against the Gaussian main term.
///
/// The default range is the full support, or for `0^ℓ`, `1^ℓ` the window
/// outside which less than `2^-40` of the mass remains.
pub fn compare(w: &Pattern, t: u128, krange: Option<(i64, i64)>) -> Result<GaussReport> {
    if t == 0 {
        return Err(Error::InvalidArgument("t = 0 has variance 0".into()));
    }
    let v = MomentTables::new(w)?.variance(t)?;
    if !v.is_positive() {
        return Err(Error::InvalidArgument(format!("v_{t} = 0")));
    }
    let radius = krange.map(|(a, b)| a.abs().max(b.abs())).unwrap_or(0);
    let dist = engine(w)?.dist(t, &default_eps(), radius)?;
    let (lo, hi) = krange.unwrap_or((dist.min_k().unwrap_or(0), dist.max_k().unwrap_or(0)));
    let vf = rational::to_f64(&v);
    let rows: Vec<GaussRow> = (lo..=hi)
        .map(|k| {
            let delta = dist.get(k);
            let delta_f64 = rational::to_f64(&delta);
            let gaussian = gaussian_main_f64(k, vf);
            GaussRow {
                k,
                delta,
                delta_f64,
                gaussian,
                abs_error: (delta_f64 - gaussian).abs(),
            }
        })
        .collect();
    let max_error = rows.iter().map(|r| r.abs_error).fold(0.0, f64::max);
    let listed: Q = rows.iter().map(|r| r.delta.clone()).sum();
    let n = blocks01(t);
    let bound = error_budget(w, t).ok().map(|b| b.total);
    Ok(GaussReport {
        w: w.clone(),
        t,
        n,
        v,
        rows,
        max_error,
        bound,
        tail: rational::int(1) - listed,
    })
}

/// Outcome of the exact variance sandwich `m N <= v_t <= M N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropA {
    pub holds: bool,
    /// `v_t - m N`.
    pub lower_margin: Q,
    /// `M N - v_t`.
    pub upper_margin: Q,
}

pub fn prop_a_from(w: &Pattern, t: u128, v: &Q) -> PropA {
    let c = Constants::new(w.len());
    let n = rational::int(blocks01(t) as i64);
    let lower_margin = v - c.m_exact() * &n;
    let upper_margin = c.big_m_exact() * &n - v;
    PropA {
        holds: !lower_margin.is_negative() && !upper_margin.is_negative(),
        lower_margin,
        upper_margin,
    }
}

pub fn check_prop_a(w: &Pattern, t: u128) -> Result<PropA> {
    let v = MomentTables::new(w)?.variance(t)?;
    Ok(prop_a_from(w, t, &v))
}

fn grid(lo: f64, hi: f64, size: usize) -> impl Iterator<Item = f64> {
    let steps = size.max(2) - 1;
    (0..=steps).map(move |i| lo + (hi - lo) * i as f64 / steps as f64)
}

/// `max_θ |γ_t(θ) - exp(-v θ²/2)| - (K(θ₀) N |θ|³ + slack)` over a grid on
/// `[-θ₀, θ₀]`; the bound holds on the grid when this is `<= 0`.
pub fn prop_b_violation(w: &Pattern, cf: &FloatCF, t: u128, v: f64, theta0: f64, grid_size: usize) -> f64 {
    let k = Constants::new(w.len()).k(theta0);
    let n = blocks01(t) as f64;
    grid(-theta0, theta0, grid_size)
        .map(|th| {
            let gauss = Complex64::new((-v * th * th / 2.0).exp(), 0.0);
            (cf.eval_angle(th) - gauss).norm() - (k * n * th.abs().powi(3) + SLACK)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn check_prop_b(w: &Pattern, t: u128, theta0: f64, grid_size: usize) -> Result<f64> {
    if theta0 <= 0.0 {
        return Err(Error::InvalidArgument("θ₀ must be positive".into()));
    }
    let cf = engine(w)?.char_fun(t)?.to_float();
    let v = rational::to_f64(&MomentTables::new(w)?.variance(t)?);
    Ok(prop_b_violation(w, &cf, t, v, theta0, grid_size))
}

/// `max_θ |γ_t(θ)| - (exp(-L N θ²) + slack)` on `[-π, π]`, or `None` when
/// `N < ℓ + 3` and the bound does not apply.
pub fn prop_c_violation(w: &Pattern, cf: &FloatCF, t: u128, grid_size: usize) -> Option<f64> {
    let n = blocks01(t);
    if (n as usize) < w.len() + 3 {
        return None;
    }
    let l = Constants::new(w.len()).l;
    Some(
        grid(-PI, PI, grid_size)
            .map(|th| cf.eval_angle(th).norm() - ((-l * n as f64 * th * th).exp() + SLACK))
            .fold(f64::NEG_INFINITY, f64::max),
    )
}

pub fn check_prop_c(w: &Pattern, t: u128, grid_size: usize) -> Result<Option<f64>> {
    let cf = engine(w)?.char_fun(t)?.to_float();
    Ok(prop_c_violation(w, &cf, t, grid_size))
}

/// Per-`t` results of a grid sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridCheck {
    pub t: u128,
    pub prop_b: f64,
    pub prop_c: Option<f64>,
}

/// Runs both grid checks for every `t < tmax`, in parallel over `t`.
pub fn grid_sweep(w: &Pattern, tmax: usize, theta0: f64, grid_size: usize) -> Result<Vec<GridCheck>> {
    let eng = engine(w)?;
    let gammas = eng.gamma_table(tmax)?;
    let variances = MomentTables::new(w)?.variance_table(tmax)?;
    gammas
        .par_iter()
        .zip(variances.par_iter())
        .enumerate()
        .map(|(t, (g, v))| {
            let cf = g.average()?.to_float();
            let t = t as u128;
            Ok(GridCheck {
                t,
                prop_b: prop_b_violation(w, &cf, t, rational::to_f64(v), theta0, grid_size),
                prop_c: prop_c_violation(w, &cf, t, grid_size),
            })
        })
        .collect()
}

/// `|1 + e(kθ)| + |1 + e((k+1)θ)|` and the bound `4 - θ²/π²`.
pub fn norm_bound_sides(k: i64, theta: f64) -> (f64, f64) {
    let one = Complex64::new(1.0, 0.0);
    let lhs = (one + Complex64::from_polar(1.0, k as f64 * theta)).norm()
        + (one + Complex64::from_polar(1.0, (k + 1) as f64 * theta)).norm();
    (lhs, 4.0 - theta * theta / (PI * PI))
}

/// The three pieces of `|δ_t(k) - main term|`, uniformly in `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorBudget {
    pub n: u32,
    pub theta0: f64,
    pub v: f64,
    /// Replacing `∫_{|θ|<=θ₀}` of the Gaussian by the full line.
    pub gaussian_tail: f64,
    /// `γ_t` versus its Gaussian approximation on `[-θ₀, θ₀]`.
    pub approximation: f64,
    /// `γ_t` on `θ₀ <= |θ| <= π`.
    pub cf_tail: f64,
    pub total: f64,
    /// The decay bound for `γ_t` is proven only for `N >= ℓ + 3`.
    pub cf_tail_applies: bool,
}

pub fn error_budget(w: &Pattern, t: u128) -> Result<ErrorBudget> {
    let n = blocks01(t);
    if n < 2 {
        return Err(Error::InvalidArgument(format!("N = {n} is too small for the error budget")));
    }
    let c = Constants::new(w.len());
    let theta0 = c.theta0(n);
    if theta0 > PI {
        return Err(Error::InvalidArgument(format!("θ₀ = {theta0} exceeds π for N = {n}")));
    }
    let v = rational::to_f64(&MomentTables::new(w)?.variance(t)?);
    let nf = n as f64;
    let gaussian_tail = (-v * theta0 * theta0 / 2.0).exp() / (PI * theta0 * v);
    let approximation = c.k(theta0) * nf * theta0.powi(4) / (4.0 * PI);
    let cf_tail = (-c.l * nf * theta0 * theta0).exp() / (PI * c.l * nf * theta0) / 2.0;
    Ok(ErrorBudget {
        n,
        theta0,
        v,
        gaussian_tail,
        approximation,
        cf_tail,
        total: gaussian_tail + approximation + cf_tail,
        cf_tail_applies: n as usize >= w.len() + 3,
    })
}

/// Lower bound `(2πM)^-1/2 N^-(m + c²)/(2m)` for the main term on
/// `|k| <= c √(N log N)`, valid for `c < √m`.
pub fn main_term_floor(len: usize, n: f64, c: f64) -> f64 {
    let k = Constants::new(len);
    (2.0 * PI * k.big_m).sqrt().recip() * n.powf(-(k.m + c * c) / (2.0 * k.m))
}

/// `Σ_{k >= 0} δ_t(k)`; an interval when mass is left out above the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CusickDensity {
    pub lower: Q,
    pub upper: Q,
}

impl CusickDensity {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn midpoint(&self) -> Q {
        (&self.lower + &self.upper) / rational::int(2)
    }
}

pub fn cusick_from_dist(dist: &IntDist) -> CusickDensity {
    let lower: Q = dist.support().range(0..).map(|(_, p)| p.clone()).sum();
    let upper = match dist.tail_side() {
        TailSide::Above => &lower + dist.tail_bound(),
        _ => lower.clone(),
    };
    CusickDensity { lower, upper }
}

pub fn cusick_density(w: &Pattern, t: u128) -> Result<CusickDensity> {
    let dist = engine(w)?.dist(t, &default_eps(), 0)?;
    if dist.tail_side() == TailSide::Below && dist.min_k().is_some_and(|k| k >= 0) {
        return Err(Error::Internal("window misses negative k".into()));
    }
    Ok(cusick_from_dist(&dist))
}

/// Second central difference `(γ(h) - 2γ(0) + γ(-h)) / h²`.
pub fn second_difference(cf: &FloatCF, h: f64) -> f64 {
    ((cf.eval_angle(h) + cf.eval_angle(-h) - cf.eval_angle(0.0) * 2.0) / (h * h)).re
}
