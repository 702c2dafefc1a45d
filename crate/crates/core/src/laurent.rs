//! Laurent polynomials with exact rational coefficients, and the single-pole
//! rational functions `P(z) / (2 - z^σ)^d` that represent the entries of `Γ_t`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::dist::{IntDist, TailSide};
use crate::error::{Error, Result};
use crate::rational::{self, Q};

/// `Σ c_k z^k` over finitely many `k ∈ ℤ`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Q>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(rational::int(1))
    }

    /// `c z^e`.
    pub fn monomial(c: Q, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (i64, Q)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in coeffs {
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, e: i64, c: &Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Q> {
        &self.coeffs
    }

    pub fn coeff(&self, e: i64) -> Q {
        self.coeffs.get(&e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `max_exp - min_exp`, or 0 for the zero polynomial.
    pub fn span(&self) -> i64 {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    /// `c z^e · self`.
    pub fn mul_monomial(&self, c: &Q, e: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&k, v)| (k + e, v * c)).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.mul_monomial(c, 0)
    }

    /// `z ↦ z^-1`.
    pub fn reflect(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, v)| (-k, v.clone())).collect(),
        }
    }

    /// Value at `z = 1`, i.e. the sum of the coefficients.
    pub fn at_one(&self) -> Q {
        self.coeffs.values().fold(Q::zero(), |a, c| a + c)
    }

    /// Value at a rational point `z ≠ 0`.
    pub fn eval_rational(&self, z: &Q) -> Q {
        self.coeffs
            .iter()
            .fold(Q::zero(), |a, (&k, c)| a + c * z.pow(k as i32))
    }

    /// Value at `z = e^{iθ}`.
    pub fn eval_angle(&self, theta: f64) -> Complex64 {
        self.coeffs.iter().fold(Complex64::zero(), |a, (&k, c)| {
            a + Complex64::from_polar(rational::to_f64(c), k as f64 * theta)
        })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::zero(), |a, (&k, c)| a + z.powi(k as i32) * rational::to_f64(c))
    }

    /// `Σ k^r c_k`.
    pub fn moment(&self, r: u32) -> Q {
        self.coeffs
            .iter()
            .fold(Q::zero(), |a, (&k, c)| a + rational::int(k).pow(r as i32) * c)
    }

    /// Exact quotient by `2 - z`, if `self(2) = 0`.
    fn div_two_minus_z(&self) -> Option<Self> {
        let lo = self.min_exp()?;
        let hi = self.max_exp()?;
        // self = z^lo R(z) with deg R = hi - lo; R(z) = (z - 2) S(z) + R(2).
        let two = rational::int(2);
        let mut s: Vec<Q> = vec![Q::zero(); (hi - lo) as usize];
        let mut carry = Q::zero();
        for e in (lo + 1..=hi).rev() {
            carry = self.coeff(e) + &two * carry;
            s[(e - lo - 1) as usize] = carry.clone();
        }
        let remainder = self.coeff(lo) + &two * carry;
        if !remainder.is_zero() {
            return None;
        }
        // R / (2 - z) = -S.
        Some(Self::from_coeffs(
            s.into_iter().enumerate().map(|(i, c)| (lo + i as i64, -c)),
        ))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(e, &-c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &rhs.coeffs {
                out.add_term(a + b, &(ca * cb));
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·z")?,
                _ => write!(f, "{c}·z^{k}")?,
            }
        }
        Ok(())
    }
}

/// `numerator / (2 - z^σ)^d` with `d ∈ {0, 1}` and `σ = ±1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalCF {
    numerator: LaurentPoly,
    denom_exponent: u8,
    denom_sign: i8,
}

impl RationalCF {
    pub fn poly(p: LaurentPoly) -> Self {
        Self {
            numerator: p,
            denom_exponent: 0,
            denom_sign: 1,
        }
    }

    pub fn one() -> Self {
        Self::poly(LaurentPoly::one())
    }

    pub fn zero() -> Self {
        Self::poly(LaurentPoly::zero())
    }

    /// `p / (2 - z^σ)`, reduced if the pole cancels.
    pub fn with_pole(p: LaurentPoly, sigma: i8) -> Self {
        assert!(sigma == 1 || sigma == -1);
        Self {
            numerator: p,
            denom_exponent: 1,
            denom_sign: sigma,
        }
        .normalized()
    }

    /// Rebuilds a value from its stored parts.
    pub fn from_parts(numerator: LaurentPoly, denom_exponent: u8, denom_sign: i8) -> Result<Self> {
        match (denom_exponent, denom_sign) {
            (0, _) => Ok(Self::poly(numerator)),
            (1, 1 | -1) => Ok(Self::with_pole(numerator, denom_sign)),
            _ => Err(Error::InvalidArgument(format!(
                "unsupported denominator (2 - z^{denom_sign})^{denom_exponent}"
            ))),
        }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn denom_exponent(&self) -> u8 {
        self.denom_exponent
    }

    pub fn denom_sign(&self) -> i8 {
        self.denom_sign
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// `2 - z^σ` as a Laurent polynomial.
    fn pole(sigma: i8) -> LaurentPoly {
        LaurentPoly::from_coeffs([(0, rational::int(2)), (sigma as i64, rational::int(-1))])
    }

    fn normalized(self) -> Self {
        if self.denom_exponent == 0 {
            return Self {
                denom_sign: 1,
                ..self
            };
        }
        if self.numerator.is_zero() {
            return Self::zero();
        }
        let quotient = if self.denom_sign == 1 {
            self.numerator.div_two_minus_z()
        } else {
            self.numerator.reflect().div_two_minus_z().map(|q| q.reflect())
        };
        match quotient {
            Some(q) => Self::poly(q),
            None => self,
        }
    }

    /// Brings two values over a common denominator.
    fn align(&self, other: &Self) -> Result<(LaurentPoly, LaurentPoly, u8, i8)> {
        match (self.denom_exponent, other.denom_exponent) {
            (0, 0) => Ok((self.numerator.clone(), other.numerator.clone(), 0, 1)),
            (1, 0) => Ok((
                self.numerator.clone(),
                &other.numerator * &Self::pole(self.denom_sign),
                1,
                self.denom_sign,
            )),
            (0, 1) => Ok((
                &self.numerator * &Self::pole(other.denom_sign),
                other.numerator.clone(),
                1,
                other.denom_sign,
            )),
            _ if self.denom_sign == other.denom_sign => {
                Ok((self.numerator.clone(), other.numerator.clone(), 1, self.denom_sign))
            }
            _ => Err(Error::Internal(
                "denominators 2 - z and 2 - 1/z met in one sum".into(),
            )),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (a, b, d, s) = self.align(other)?;
        Ok(Self {
            numerator: &a + &b,
            denom_exponent: d,
            denom_sign: s,
        }
        .normalized())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            numerator: -&self.numerator,
            ..self.clone()
        }
    }

    /// `c z^e · self`.
    pub fn mul_monomial(&self, c: &Q, e: i64) -> Self {
        Self {
            numerator: self.numerator.mul_monomial(c, e),
            ..self.clone()
        }
        .normalized()
    }

    /// Divides by `2 - z^σ`. Fails if a pole is already present.
    pub fn div_pole(&self, sigma: i8) -> Result<Self> {
        if self.denom_exponent != 0 {
            return Err(Error::Internal("a second pole factor would arise".into()));
        }
        Ok(Self::with_pole(self.numerator.clone(), sigma))
    }

    pub fn at_one(&self) -> Q {
        // 2 - 1 = 1.
        self.numerator.at_one()
    }

    pub fn eval_angle(&self, theta: f64) -> Complex64 {
        let num = self.numerator.eval_angle(theta);
        if self.denom_exponent == 0 {
            num
        } else {
            num / (Complex64::new(2.0, 0.0) - Complex64::from_polar(1.0, self.denom_sign as f64 * theta))
        }
    }

    /// Exact `Σ k^r c_k` for `r ≤ 2`, where `c_k` are the Taylor-Laurent
    /// coefficients of the expansion `1/(2 - z^σ) = Σ z^{σm} / 2^{m+1}`.
    pub fn moment(&self, r: u32) -> Q {
        let m0 = self.numerator.moment(0);
        let m1 = self.numerator.moment(1);
        let m2 = self.numerator.moment(2);
        if self.denom_exponent == 0 {
            return self.numerator.moment(r);
        }
        // Geometric law on σℕ: mass 1, mean σ, second moment 3.
        let s = rational::int(self.denom_sign as i64);
        match r {
            0 => m0,
            1 => m1 + &s * m0,
            2 => m2 + rational::int(2) * &s * m1 + rational::int(3) * m0,
            _ => panic!("moments above the second are not supported"),
        }
    }

    /// Coefficient of `z^k`.
    pub fn coeff(&self, k: i64) -> Q {
        if self.denom_exponent == 0 {
            return self.numerator.coeff(k);
        }
        let sigma = self.denom_sign as i64;
        self.numerator
            .coeffs()
            .iter()
            .filter_map(|(&i, p)| {
                let m = sigma * (k - i);
                (m >= 0).then(|| p * rational::pow2(-(m + 1)))
            })
            .fold(Q::zero(), |a, c| a + c)
    }

    /// Expansion as a distribution. Without a pole the result is complete;
    /// otherwise the expansion runs until the left-out mass is at most `eps`
    /// and covers at least `|k| <= min_radius`.
    pub fn to_dist(&self, eps: &Q, min_radius: i64) -> Result<IntDist> {
        let (lo, hi) = match (self.numerator.min_exp(), self.numerator.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Ok(IntDist::new(BTreeMap::new(), Q::zero(), TailSide::None)),
        };
        if self.denom_exponent == 0 {
            let support = self.numerator.coeffs().clone();
            let tail = rational::int(1) - self.numerator.at_one();
            if !tail.is_zero() {
                return Err(Error::Internal(format!("total mass differs from 1 by {tail}")));
            }
            return Ok(IntDist::new(support, tail, TailSide::None));
        }
        if !eps.is_positive() {
            return Err(Error::InvalidArgument("tail tolerance must be positive".into()));
        }
        let sigma = self.denom_sign as i64;
        let (mut k, last) = if sigma == 1 { (lo, hi) } else { (hi, lo) };
        let side = if sigma == 1 { TailSide::Above } else { TailSide::Below };
        let mut support = BTreeMap::new();
        let mut total = Q::zero();
        loop {
            let c = self.coeff(k);
            total += &c;
            support.insert(k, c);
            // Beyond the numerator the coefficients halve at each step, so the
            // left-out mass is exactly the last coefficient.
            let tail = rational::int(1) - &total;
            if sigma * (k - last) >= 0 && &tail <= eps && sigma * k >= min_radius {
                return Ok(IntDist::new(support, tail, side));
            }
            k += sigma;
            if (k - last).abs() > 100_000 {
                return Err(Error::Resource("tail expansion did not converge".into()));
            }
        }
    }
}

/// Floating-point copy of a [`RationalCF`] for repeated evaluation.
#[derive(Clone, Debug)]
pub struct FloatCF {
    coeffs: Vec<(f64, f64)>,
    pole: Option<f64>,
}

impl FloatCF {
    pub fn eval_angle(&self, theta: f64) -> Complex64 {
        let num = self
            .coeffs
            .iter()
            .fold(Complex64::zero(), |a, &(k, c)| a + Complex64::from_polar(c, k * theta));
        match self.pole {
            None => num,
            Some(s) => num / (Complex64::new(2.0, 0.0) - Complex64::from_polar(1.0, s * theta)),
        }
    }
}

impl RationalCF {
    pub fn to_float(&self) -> FloatCF {
        FloatCF {
            coeffs: self
                .numerator
                .coeffs()
                .iter()
                .map(|(&k, c)| (k as f64, rational::to_f64(c)))
                .collect(),
            pole: (self.denom_exponent == 1).then_some(self.denom_sign as f64),
        }
    }
}

impl fmt::Display for RationalCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom_exponent == 0 {
            write!(f, "{}", self.numerator)
        } else if self.denom_sign == 1 {
            write!(f, "({}) / (2 - z)", self.numerator)
        } else {
            write!(f, "({}) / (2 - z^-1)", self.numerator)
        }
    }
}
