//! Exact first and second moments of `δ_{t,j}` and `δ_t`.
//!
//! Differentiating the `Γ` recursion at `θ = 0` gives, with `z = 1` matrices,
//!
//! ```text
//! M_{2t} = A M_t + U_{2t}            V_{2t} = A V_t + Q_{2t}
//! M_{2t+1} = B M_t + C M_{t+1} + U   V_{2t+1} = B V_t + C V_{t+1} + Q_{2t+1}
//! ```
//!
//! where `U_τ(j)` collects `φ/2` over the two entries of row `j`, and
//! `Q_τ(j)` collects `φ m + φ²/2` with `m` the mean at the column the entry
//! points to. Both depend on `τ mod 2^ℓ` only.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cfengine::{build_a, CFMatrix};
use crate::descent::{self, PairStep};
use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::words::{prefix_suffix_weight, DigitString, Pattern};

/// `M_t = (m_{t,0}, …, m_{t,2^(ℓ-1)-1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentVec(pub Vec<Q>);

impl MomentVec {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![Q::zero(); dim])
    }

    pub fn entries(&self) -> &[Q] {
        &self.0
    }

    pub fn sum(&self) -> Q {
        self.0.iter().sum()
    }

    pub fn average(&self) -> Q {
        self.sum() / rational::int(self.0.len() as i64)
    }

    pub fn max_abs(&self) -> Q {
        self.0.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }

    /// `max_j x_j - min_j x_j`.
    pub fn spread(&self) -> Q {
        let max = self.0.iter().max().cloned().unwrap_or_else(Q::zero);
        let min = self.0.iter().min().cloned().unwrap_or_else(Q::zero);
        max - min
    }
}

/// Second-moment data at one `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarData {
    pub t: u128,
    /// `v_{t,j}`.
    pub v_vec: MomentVec,
    /// `v_t`, the variance of `δ_t`.
    pub v: Q,
    pub q: Q,
    /// `u_{t,j} = v_{t,j} - m_{t,j}^2`, the variance of `δ_{t,j}`.
    pub u_vec: MomentVec,
}

/// Exceptional residues in the lower bound `q_t >= 2^-(ℓ+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QCase {
    Generic,
    /// `t ≡ 0 (mod 2^ℓ)`: `q_t = 0`.
    I,
    /// `w ∈ {01^(ℓ-1), 10^(ℓ-1)}`, `t ≡ 2^(ℓ-1)`.
    Ii,
    /// `w ∈ {01^(ℓ-1), 10^(ℓ-1)}`, `t ≡ 2^(ℓ-1) ± 1`.
    Iii,
    /// `w ∈ {001^(ℓ-2), 010^(ℓ-2), 101^(ℓ-2), 110^(ℓ-2)}`, `t ≡ ±2^(ℓ-2)`.
    Iv,
}

impl fmt::Display for QCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QCase::Generic => "generic",
            QCase::I => "i",
            QCase::Ii => "ii",
            QCase::Iii => "iii",
            QCase::Iv => "iv",
        })
    }
}

fn word_of(head: &str, digit: char, count: usize) -> String {
    let mut s = head.to_string();
    s.extend(std::iter::repeat_n(digit, count));
    s
}

pub fn q_case(w: &Pattern, t: u128) -> QCase {
    let l = w.len();
    let modulus = 1u128 << l;
    let r = t % modulus;
    let text = w.to_string();
    let half = 1u128 << (l - 1);
    let quarter = 1u128 << (l - 2);
    if r == 0 {
        return QCase::I;
    }
    let edge = text == word_of("0", '1', l - 1) || text == word_of("1", '0', l - 1);
    if edge && r == half {
        return QCase::Ii;
    }
    if edge && (r == half + 1 || r == half - 1) {
        return QCase::Iii;
    }
    let near_edge = [
        word_of("00", '1', l - 2),
        word_of("01", '0', l - 2),
        word_of("10", '1', l - 2),
        word_of("11", '0', l - 2),
    ]
    .contains(&text);
    if near_edge && (r == quarter || r == modulus - quarter) {
        return QCase::Iv;
    }
    QCase::Generic
}

/// `m_{t,j}` from prefix-suffix sets: `2^-(ℓ-1) (f(y) - f(x))` with
/// `[x]_2 = j`, `[y]_2 ≡ j + t (mod 2^(ℓ-1))`.
pub fn mean_vec(w: &Pattern, t: u128) -> MomentVec {
    let dim = w.residues();
    let width = w.len() - 1;
    let weights: Vec<i64> = (0..dim)
        .map(|j| prefix_suffix_weight(&DigitString::from_value(j as u128, width), w) as i64)
        .collect();
    let shift = (t % dim as u128) as usize;
    MomentVec(
        (0..dim)
            .map(|j| rational::frac(weights[(j + shift) % dim] - weights[j], dim as i64))
            .collect(),
    )
}

/// `U_τ(j) = (φ(τ, j) + φ(τ, j + 2^(ℓ-1))) / 2`.
pub fn u_vec(w: &Pattern, tau: u128) -> Vec<Q> {
    row_phi_sums(&build_a(w, tau))
}

fn row_phi_sums(a: &CFMatrix) -> Vec<Q> {
    (0..a.dim())
        .map(|j| rational::frac(a.row(j).iter().map(|&(_, e)| e as i64).sum(), 2))
        .collect()
}

/// Solves `x = rhs + C x` with `C` the odd-row part of `A` at `z = 1`.
///
/// Row `2^(ℓ-1)-1` refers to itself with weight `1/2`; every other odd row
/// refers to earlier-resolved rows.
fn solve_odd_fixed_point(a: &CFMatrix, rhs: &[Q]) -> Result<Vec<Q>> {
    let dim = a.dim();
    let mut x: Vec<Option<Q>> = vec![None; dim];
    for j in (0..dim).step_by(2) {
        x[j] = Some(rhs[j].clone());
    }
    fn resolve(j: usize, a: &CFMatrix, rhs: &[Q], x: &mut Vec<Option<Q>>, visiting: &mut Vec<bool>) -> Result<Q> {
        if let Some(v) = &x[j] {
            return Ok(v.clone());
        }
        if visiting[j] {
            return Err(Error::Internal(format!("cyclic dependency at row {j}")));
        }
        visiting[j] = true;
        let mut acc = rhs[j].clone();
        let mut self_weight = 0;
        for &(k, _) in a.row(j) {
            if k == j {
                self_weight += 1;
            } else {
                acc += resolve(k, a, rhs, x, visiting)? / rational::int(2);
            }
        }
        // x (1 - s/2) = acc.
        let value = match self_weight {
            0 => acc,
            1 => acc * rational::int(2),
            _ => return Err(Error::Internal("singular fixed-point system".into())),
        };
        visiting[j] = false;
        x[j] = Some(value.clone());
        Ok(value)
    }
    let mut visiting = vec![false; dim];
    for j in 0..dim {
        resolve(j, a, rhs, &mut x, &mut visiting)?;
    }
    Ok(x.into_iter().map(|v| v.expect("resolved")).collect())
}

fn apply_masked(a: &CFMatrix, rows_parity: Option<usize>, v: &[Q]) -> Vec<Q> {
    let half = rational::frac(1, 2);
    (0..a.dim())
        .map(|j| {
            if rows_parity.is_some_and(|p| j % 2 != p) {
                return Q::zero();
            }
            a.row(j).iter().fold(Q::zero(), |acc, &(k, _)| acc + &v[k] * &half)
        })
        .collect()
}

fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Per-pattern tables shared by all moment recursions.
#[derive(Clone, Debug)]
pub struct MomentTables {
    pattern: Pattern,
    modulus: u128,
    /// `A_τ` for `τ < 2^ℓ`.
    a: Vec<CFMatrix>,
    /// `U_τ` for `τ < 2^ℓ`.
    u: Vec<Vec<Q>>,
    /// `Q_τ` for `τ < 2^ℓ`.
    q_vec: Vec<Vec<Q>>,
    /// `q_τ` for `τ < 2^ℓ`.
    q: Vec<Q>,
    m1: Vec<Q>,
    v1: Vec<Q>,
}

impl MomentTables {
    pub fn new(w: &Pattern) -> Result<Self> {
        let l = w.len();
        if l > crate::cfengine::DEFAULT_MAX_LEN {
            return Err(Error::Resource(format!("pattern length {l} exceeds the matrix cap")));
        }
        let modulus = 1u128 << l;
        let dim = w.residues();
        let a: Vec<CFMatrix> = (0..modulus).map(|t| build_a(w, t)).collect();
        let u: Vec<Vec<Q>> = a.iter().map(row_phi_sums).collect();
        let means: Vec<MomentVec> = (0..dim as u128).map(|t| mean_vec(w, t)).collect();
        let q_vec: Vec<Vec<Q>> = (0..modulus)
            .map(|tau| {
                let mat = &a[tau as usize];
                (0..dim)
                    .map(|j| {
                        let source = (tau / 2 + (tau * j as u128) % 2) % dim as u128;
                        let m = &means[source as usize];
                        mat.row(j).iter().fold(Q::zero(), |acc, &(col, e)| {
                            let phi = rational::int(e as i64);
                            acc + &phi * &m.0[col] + &phi * &phi / rational::int(2)
                        })
                    })
                    .collect()
            })
            .collect();
        let q: Vec<Q> = q_vec
            .iter()
            .map(|v| v.iter().sum::<Q>() / rational::int(dim as i64))
            .collect();
        let m1 = solve_odd_fixed_point(&a[1], &u[1])?;
        let v1 = solve_odd_fixed_point(&a[1], &q_vec[1])?;
        Ok(Self {
            pattern: w.clone(),
            modulus,
            a,
            u,
            q_vec,
            q,
            m1,
            v1,
        })
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    fn idx(&self, tau: u128) -> usize {
        (tau % self.modulus) as usize
    }

    pub fn u(&self, tau: u128) -> &[Q] {
        &self.u[self.idx(tau)]
    }

    pub fn q_vec(&self, tau: u128) -> &[Q] {
        &self.q_vec[self.idx(tau)]
    }

    pub fn q(&self, tau: u128) -> &Q {
        &self.q[self.idx(tau)]
    }

    pub fn v1(&self) -> &[Q] {
        &self.v1
    }

    pub fn mean_vec_rec(&self, t: u128) -> Result<MomentVec> {
        let step = VectorStep {
            tables: self,
            forcing: Forcing::Mean,
        };
        let base = (vec![Q::zero(); self.pattern.residues()], self.m1.clone());
        Ok(MomentVec(descent::descend(&step, &base, t)?.0))
    }

    /// `V_t` by the pair recursion.
    pub fn v_vec(&self, t: u128) -> Result<MomentVec> {
        Ok(MomentVec(descent::descend(&self.v_step(), &self.v_base(), t)?.0))
    }

    /// `V_0, …, V_{count-1}`.
    pub fn v_vec_table(&self, count: usize) -> Result<Vec<MomentVec>> {
        Ok(descent::sweep(&self.v_step(), &self.v_base(), count)?
            .into_iter()
            .map(MomentVec)
            .collect())
    }

    fn v_step(&self) -> VectorStep<'_> {
        VectorStep {
            tables: self,
            forcing: Forcing::Second,
        }
    }

    fn v_base(&self) -> (Vec<Q>, Vec<Q>) {
        (vec![Q::zero(); self.pattern.residues()], self.v1.clone())
    }

    fn scalar_base(&self) -> (Q, Q) {
        (Q::zero(), MomentVec(self.v1.clone()).average())
    }

    /// `v_t` by the scalar recursion.
    pub fn variance(&self, t: u128) -> Result<Q> {
        Ok(descent::descend(&ScalarStep { tables: self }, &self.scalar_base(), t)?.0)
    }

    /// `v_0, …, v_{count-1}`.
    pub fn variance_table(&self, count: usize) -> Result<Vec<Q>> {
        descent::sweep(&ScalarStep { tables: self }, &self.scalar_base(), count)
    }

    pub fn var_data(&self, t: u128) -> Result<VarData> {
        let v_vec = self.v_vec(t)?;
        let means = mean_vec(&self.pattern, t);
        Ok(Self::assemble(t, v_vec, means, self.q(t).clone()))
    }

    fn assemble(t: u128, v_vec: MomentVec, means: MomentVec, q: Q) -> VarData {
        let u_vec = MomentVec(v_vec.0.iter().zip(&means.0).map(|(v, m)| v - m * m).collect());
        let v = v_vec.average();
        VarData { t, v_vec, v, q, u_vec }
    }
}

#[derive(Clone, Copy)]
enum Forcing {
    Mean,
    Second,
}

struct VectorStep<'a> {
    tables: &'a MomentTables,
    forcing: Forcing,
}

impl VectorStep<'_> {
    fn forcing(&self, tau: u128) -> &[Q] {
        match self.forcing {
            Forcing::Mean => self.tables.u(tau),
            Forcing::Second => self.tables.q_vec(tau),
        }
    }
}

impl PairStep for VectorStep<'_> {
    type Value = Vec<Q>;

    fn even(&self, tau: u128, half: &Vec<Q>) -> Result<Vec<Q>> {
        let a = &self.tables.a[self.tables.idx(tau)];
        Ok(add(&apply_masked(a, None, half), self.forcing(tau)))
    }

    fn odd(&self, tau: u128, lower: &Vec<Q>, upper: &Vec<Q>) -> Result<Vec<Q>> {
        let a = &self.tables.a[self.tables.idx(tau)];
        let b = apply_masked(a, Some(0), lower);
        let c = apply_masked(a, Some(1), upper);
        Ok(add(&add(&b, &c), self.forcing(tau)))
    }
}

struct ScalarStep<'a> {
    tables: &'a MomentTables,
}

impl PairStep for ScalarStep<'_> {
    type Value = Q;

    fn even(&self, tau: u128, half: &Q) -> Result<Q> {
        Ok(half + self.tables.q(tau))
    }

    fn odd(&self, tau: u128, lower: &Q, upper: &Q) -> Result<Q> {
        Ok((lower + upper) / rational::int(2) + self.tables.q(tau))
    }
}

pub fn mean_vec_rec(w: &Pattern, t: u128) -> Result<MomentVec> {
    MomentTables::new(w)?.mean_vec_rec(t)
}

pub fn q_scalar(w: &Pattern, t: u128) -> Result<Q> {
    Ok(MomentTables::new(w)?.q(t).clone())
}

pub fn var_vec(w: &Pattern, t: u128) -> Result<VarData> {
    MomentTables::new(w)?.var_data(t)
}

pub fn variance(w: &Pattern, t: u128) -> Result<Q> {
    MomentTables::new(w)?.variance(t)
}

/// `q_t < 3 / 2^(ℓ-1)` and, in the generic case, `q_t >= 1 / 2^(ℓ+1)`.
pub fn q_within_bounds(w: &Pattern, t: u128, q: &Q) -> bool {
    let l = w.len() as i64;
    let upper = q < &(rational::int(3) * rational::pow2(1 - l));
    let lower = q_case(w, t) != QCase::Generic || q >= &rational::pow2(-(l + 1));
    upper && lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfengine::CfEngine;
    use crate::direct::{empirical_dist, exact_lambda, residue_mean_estimate};
    use crate::words::blocks01;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    #[test]
    fn means_vanish_on_full_periods() {
        for l in 2..=5 {
            for w in Pattern::all_of_length(l) {
                assert_eq!(mean_vec(&w, 0), MomentVec::zeros(w.residues()));
                assert_eq!(mean_vec(&w, w.residues() as u128 * 3), MomentVec::zeros(w.residues()));
            }
        }
    }

    #[test]
    fn mean_formula_against_window_average() {
        // 2^-(ℓ-1) Σ_u (|uy|_w - |ux|_w).
        for l in 2..=4 {
            for w in Pattern::all_of_length(l) {
                let dim = w.residues();
                for t in 0..dim as u128 {
                    let m = mean_vec(&w, t);
                    for j in 0..dim {
                        let x = DigitString::from_value(j as u128, l - 1);
                        let y = DigitString::from_value((j as u128 + t) % dim as u128, l - 1);
                        let total: i64 = (0..dim as u128)
                            .map(|u| {
                                let u = DigitString::from_value(u, l - 1);
                                crate::words::count_occurrences(&u.concat(&y), &w) as i64
                                    - crate::words::count_occurrences(&u.concat(&x), &w) as i64
                            })
                            .sum();
                        assert_eq!(m.0[j], rational::frac(total, dim as i64));
                    }
                }
            }
        }
    }

    #[test]
    fn recursion_matches_closed_form() {
        for l in 2..=4 {
            for w in Pattern::all_of_length(l) {
                let tables = MomentTables::new(&w).unwrap();
                for t in 0..4096u128 {
                    assert_eq!(tables.mean_vec_rec(t).unwrap(), mean_vec(&w, t), "w={w} t={t}");
                }
            }
        }
    }

    #[test]
    fn u_entries_are_half_integers() {
        for w in Pattern::all_of_length(4) {
            for t in 0..16 {
                for x in u_vec(&w, t) {
                    assert!([rational::frac(-1, 2), Q::zero(), rational::frac(1, 2)].contains(&x)
                        || x.abs() == rational::int(1));
                }
            }
        }
    }

    #[test]
    fn means_match_oracle_and_engine() {
        for w in [pat("01"), pat("110"), pat("0010"), pat("111"), pat("00")] {
            let engine = CfEngine::new(&w).unwrap();
            for t in [1u128, 2, 3, 6, 13] {
                let m = mean_vec(&w, t);
                for j in 0..w.residues() {
                    assert_eq!(engine.conditional_moment(t, j, 1).unwrap(), m.0[j]);
                }
                // Finite averages converge with an O(λ / 2^λ) boundary error.
                let lambda = 16;
                for j in 0..w.residues() {
                    let err = residue_mean_estimate(&w, t, j, lambda) - &m.0[j];
                    let err = rational::to_f64(&err).abs();
                    assert!(err <= 2.0 * (lambda as f64 + 8.0) / 2f64.powi(lambda as i32), "w={w} t={t} j={j}");
                }
            }
        }
    }

    #[test]
    fn v1_equals_conditional_second_moments() {
        for l in 2..=5 {
            for w in Pattern::all_of_length(l) {
                let tables = MomentTables::new(&w).unwrap();
                let engine = CfEngine::new(&w).unwrap();
                for j in 0..w.residues() {
                    assert_eq!(tables.v1()[j], engine.conditional_moment(1, j, 2).unwrap(), "w={w} j={j}");
                }
            }
        }
    }

    #[test]
    fn v1_is_at_most_six_for_zero_blocks() {
        for l in 2..=10 {
            let w = Pattern::new(DigitString::repeat_digit(0, l)).unwrap();
            let tables = MomentTables::new(&w).unwrap();
            let data = tables.var_data(1).unwrap();
            for (u, v) in data.u_vec.0.iter().zip(&data.v_vec.0) {
                assert!(u <= v && v <= &rational::int(6), "ℓ={l} v={v}");
            }
        }
    }

    #[test]
    fn variance_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for w in [pat("01"), pat("011"), pat("000"), pat("1101"), pat("11")] {
            let tables = MomentTables::new(&w).unwrap();
            let engine = CfEngine::new(&w).unwrap();
            let table = tables.variance_table(300).unwrap();
            let vtable = tables.v_vec_table(300).unwrap();
            for t in 0..300u128 {
                let v = &table[t as usize];
                assert_eq!(v, &tables.variance(t).unwrap());
                assert_eq!(v, &vtable[t as usize].average());
                if t < 64 {
                    assert_eq!(v, &engine.moment(t, 2).unwrap(), "w={w} t={t}");
                }
            }
            for _ in 0..4 {
                let t: u128 = rng.gen_range(0..1 << 40);
                assert_eq!(tables.variance(t).unwrap(), engine.moment(t, 2).unwrap());
            }
        }
    }

    #[test]
    fn variance_matches_oracle() {
        for w in [pat("10"), pat("011"), pat("0110")] {
            let tables = MomentTables::new(&w).unwrap();
            for t in [1u128, 5, 9, 30] {
                let lambda = exact_lambda(&w, t, 0).unwrap();
                let r = empirical_dist(&w, t, lambda).unwrap();
                assert_eq!(tables.variance(t).unwrap(), r.to_dist().moment(2));
            }
        }
    }

    #[test]
    fn q_examples() {
        for w in [pat("01"), pat("10")] {
            let t = MomentTables::new(&w).unwrap();
            let q: Vec<Q> = (0..4).map(|i| t.q(i).clone()).collect();
            assert_eq!(q, vec![Q::zero(), rational::frac(1, 4), Q::zero(), rational::frac(1, 4)]);
            assert_eq!(t.variance(1).unwrap(), rational::frac(1, 2));
            for s in 0..1024 {
                assert_eq!(t.variance(2 * s).unwrap(), t.variance(s).unwrap());
            }
        }
        for l in 3..=5 {
            let edge = Pattern::new(DigitString::from_value(1 << (l - 1), l)).unwrap();
            let tables = MomentTables::new(&edge).unwrap();
            let expected = rational::pow2(1 - l as i64) * (rational::pow2(2 - l as i64) - rational::int(1));
            assert_eq!(tables.q(1 << (l - 1)), &expected);
            assert_eq!(q_case(&edge, 1 << (l - 1)), QCase::Ii);
        }
    }

    #[test]
    fn q_case_labels() {
        assert_eq!(q_case(&pat("0111"), 0), QCase::I);
        assert_eq!(q_case(&pat("0111"), 16 * 5), QCase::I);
        assert_eq!(q_case(&pat("0111"), 9), QCase::Iii);
        assert_eq!(q_case(&pat("0111"), 7), QCase::Iii);
        assert_eq!(q_case(&pat("1000"), 8), QCase::Ii);
        assert_eq!(q_case(&pat("0100"), 4), QCase::Iv);
        assert_eq!(q_case(&pat("0100"), 12), QCase::Iv);
        assert_eq!(q_case(&pat("0110"), 4), QCase::Generic);
        assert_eq!(QCase::Iii.to_string(), "iii");
    }

    #[test]
    fn q_bounds_exhaustive() {
        for l in 2..=6 {
            for w in Pattern::all_of_length(l) {
                let tables = MomentTables::new(&w).unwrap();
                for t in 0..1u128 << l {
                    let q = tables.q(t);
                    assert!(q < &(rational::int(3) * rational::pow2(1 - l as i64)));
                    match q_case(&w, t) {
                        QCase::Generic => assert!(q >= &rational::pow2(-(l as i64 + 1)), "w={w} t={t} q={q}"),
                        QCase::I => assert!(q.is_zero()),
                        QCase::Iii => assert_eq!(q, &rational::pow2(2 - 2 * l as i64)),
                        QCase::Iv => assert!(q >= &rational::pow2(2 - 2 * l as i64)),
                        QCase::Ii => {}
                    }
                    assert!(q_within_bounds(&w, t, q));
                }
            }
        }
    }

    #[test]
    fn block_append_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for w in [pat("01"), pat("011"), pat("0100"), pat("111")] {
            let tables = MomentTables::new(&w).unwrap();
            for _ in 0..30 {
                let t: u128 = rng.gen_range(0..1 << 30);
                let k = rng.gen_range(1..=12);
                let lhs = tables.variance(t << k).unwrap() - tables.variance(t).unwrap();
                let rhs: Q = (1..=k).map(|h| tables.q(t << h).clone()).sum();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn appending_01_for_short_patterns() {
        for w in [pat("01"), pat("10")] {
            let tables = MomentTables::new(&w).unwrap();
            let v = tables.variance_table(4 * 1024 + 2).unwrap();
            for t in 0..1024usize {
                assert!(&v[4 * t + 1] - &v[t] >= rational::frac(1, 4));
                assert!(v[t] >= rational::frac(blocks01(t as u128) as i64, 4));
            }
        }
    }

    #[test]
    fn periodicity_of_means() {
        for w in Pattern::all_of_length(4) {
            for t in 0..8u128 {
                assert_eq!(mean_vec(&w, t), mean_vec(&w, t + 8));
                let m = mean_vec(&w, t);
                assert!(m.sum().is_zero());
                assert!(m.max_abs() <= rational::int(1) - rational::frac(1, 8));
            }
        }
    }
}
