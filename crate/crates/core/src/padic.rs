//! Fixed-precision ℓ-adic integers.
//!
//! A [`PadicInt`] is a residue modulo `ℓᴺ`. Operands with different
//! precisions combine at the smaller one; operands over different primes are
//! an error. [`PadicFrac`] carries an extra power of `ℓ` in the denominator
//! and is used by power-series manipulations whose coefficients leave `Z_ℓ`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::{
    checked_pow, floor_log, inv_mod, is_prime, mul_mod, pow_mod, reduce_i64, split_ell,
    val_bigint, val_factorial, val_u64,
};

/// An ℓ-adic valuation as seen at finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    /// Zero modulo `ℓᴺ`: the true valuation is at least `N`.
    AtLeast(u32),
    /// Exactly zero (exact arithmetic only).
    Infinite,
}

impl Valuation {
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
            Valuation::Infinite => u32::MAX,
        }
    }

    pub fn is_at_least(self, m: u32) -> bool {
        self.lower_bound() >= m
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn min(self, other: Valuation) -> Valuation {
        match self.lower_bound().cmp(&other.lower_bound()) {
            Ordering::Less => self,
            Ordering::Greater => other,
            Ordering::Equal => {
                if self.is_finite() {
                    self
                } else {
                    other
                }
            }
        }
    }

    /// Shift by `ℓᵐ`, saturating at `cap` the way a residue mod `ℓ^cap` would.
    pub fn shift(self, m: u32, cap: Option<u32>) -> Valuation {
        let raised = match self {
            Valuation::Finite(v) => Valuation::Finite(v + m),
            Valuation::AtLeast(v) => Valuation::AtLeast(v + m),
            Valuation::Infinite => Valuation::Infinite,
        };
        match cap {
            Some(c) if raised.lower_bound() >= c => Valuation::AtLeast(c),
            _ => raised,
        }
    }

    pub fn of_u64(x: u64, ell: u64, precision: u32) -> Valuation {
        match val_u64(x, ell) {
            Some(v) if v < precision => Valuation::Finite(v),
            _ => Valuation::AtLeast(precision),
        }
    }

    pub fn of_bigint(x: &BigInt, ell: u64) -> Valuation {
        match val_bigint(x, ell) {
            Some(v) => Valuation::Finite(v),
            None => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Validates `(ℓ, N)` and returns `ℓᴺ`.
pub fn working_modulus(prime: u64, precision: u32) -> Result<u64> {
    if prime == 2 {
        return Err(Error::invalid("ℓ = 2 is not supported for ℓ-adic arithmetic"));
    }
    if !is_prime(prime) {
        return Err(Error::invalid(format!("{prime} is not a prime")));
    }
    if precision == 0 {
        return Err(Error::invalid("precision must be at least 1"));
    }
    match checked_pow(prime, precision) {
        Some(m) if m < (1u64 << 63) => Ok(m),
        _ => Err(Error::invalid(format!(
            "{prime}^{precision} does not fit the 63-bit residue range"
        ))),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicInt {
    prime: u64,
    precision: u32,
    modulus: u64,
    residue: u64,
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.prime, self.precision)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl PadicInt {
    pub fn new(prime: u64, precision: u32, value: i64) -> Result<Self> {
        let modulus = working_modulus(prime, precision)?;
        Ok(Self::raw(prime, precision, modulus, reduce_i64(value, modulus)))
    }

    pub fn from_bigint(prime: u64, precision: u32, value: &BigInt) -> Result<Self> {
        let modulus = working_modulus(prime, precision)?;
        let r = value.mod_floor(&BigInt::from(modulus));
        Ok(Self::raw(prime, precision, modulus, r.to_u64().unwrap()))
    }

    pub fn zero(prime: u64, precision: u32) -> Result<Self> {
        Self::new(prime, precision, 0)
    }

    pub fn one(prime: u64, precision: u32) -> Result<Self> {
        Self::new(prime, precision, 1)
    }

    pub(crate) fn raw(prime: u64, precision: u32, modulus: u64, residue: u64) -> Self {
        debug_assert!(residue < modulus);
        PadicInt {
            prime,
            precision,
            modulus,
            residue,
        }
    }

    /// An integer in the same `(ℓ, N)` as `self`.
    pub fn sibling(&self, value: i64) -> Self {
        Self::raw(
            self.prime,
            self.precision,
            self.modulus,
            reduce_i64(value, self.modulus),
        )
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.residue)
    }

    /// Representative in `(−ℓᴺ/2, ℓᴺ/2]`.
    pub fn balanced(&self) -> i64 {
        if self.residue > self.modulus / 2 {
            self.residue as i64 - self.modulus as i64
        } else {
            self.residue as i64
        }
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn is_unit(&self) -> bool {
        self.residue % self.prime != 0
    }

    pub fn val(&self) -> Valuation {
        Valuation::of_u64(self.residue, self.prime, self.precision)
    }

    /// Reduce to a lower precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        if precision > self.precision {
            return Err(Error::precondition(format!(
                "cannot raise precision from {} to {}",
                self.precision, precision
            )));
        }
        let modulus = working_modulus(self.prime, precision)?;
        Ok(Self::raw(
            self.prime,
            precision,
            modulus,
            self.residue % modulus,
        ))
    }

    fn align(&self, other: &Self) -> Result<(Self, Self)> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        match self.precision.cmp(&other.precision) {
            Ordering::Equal => Ok((*self, *other)),
            Ordering::Less => Ok((*self, other.with_precision(self.precision)?)),
            Ordering::Greater => Ok((self.with_precision(other.precision)?, *other)),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.align(other)?;
        let s = (a.residue as u128 + b.residue as u128) % a.modulus as u128;
        Ok(Self::raw(a.prime, a.precision, a.modulus, s as u64))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.align(other)?;
        let s = (a.residue as u128 + (a.modulus - b.residue) as u128) % a.modulus as u128;
        Ok(Self::raw(a.prime, a.precision, a.modulus, s as u64))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.align(other)?;
        Ok(Self::raw(
            a.prime,
            a.precision,
            a.modulus,
            mul_mod(a.residue, b.residue, a.modulus),
        ))
    }

    pub fn pow(&self, e: u64) -> Self {
        Self::raw(
            self.prime,
            self.precision,
            self.modulus,
            pow_mod(self.residue, e, self.modulus),
        )
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.sibling(k) * *self
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = inv_mod(self.residue, self.modulus)
            .ok_or_else(|| Error::precondition(format!("{self:?} is not a unit")))?;
        Ok(Self::raw(self.prime, self.precision, self.modulus, inv))
    }

    /// Exact division by an integer `k = ±ℓᵉ·u`. The result loses `e` digits.
    pub fn div_int(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::precondition("division by zero"));
        }
        let (e, u) = split_ell(k.unsigned_abs(), self.prime);
        if e >= self.precision {
            return Err(Error::PrecisionExhausted(format!(
                "dividing by {k} leaves no digits of {}^{}",
                self.prime, self.precision
            )));
        }
        if !self.val().is_at_least(e) {
            return Err(Error::precondition(format!(
                "{self:?} is not divisible by {}^{e}",
                self.prime
            )));
        }
        let modulus = self.modulus / checked_pow(self.prime, e).unwrap();
        let shifted = self.residue / (self.modulus / modulus);
        let unit = inv_mod(u % modulus, modulus).unwrap();
        let mut r = mul_mod(shifted % modulus, unit, modulus);
        if k < 0 {
            r = (modulus - r) % modulus;
        }
        Ok(Self::raw(self.prime, self.precision - e, modulus, r))
    }

    /// `self ≡ other (mod ℓᵐ)`.
    pub fn congruent(&self, other: &Self, m: u32) -> Result<bool> {
        Ok(self.try_sub(other)?.val().is_at_least(m))
    }
}

impl Add for PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: PadicInt) -> PadicInt {
        self.try_add(&rhs).expect("ℓ-adic addition")
    }
}

impl Sub for PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: PadicInt) -> PadicInt {
        self.try_sub(&rhs).expect("ℓ-adic subtraction")
    }
}

impl Mul for PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: PadicInt) -> PadicInt {
        self.try_mul(&rhs).expect("ℓ-adic multiplication")
    }
}

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        let r = (self.modulus - self.residue) % self.modulus;
        Self::raw(self.prime, self.precision, self.modulus, r)
    }
}

/// `log(u) = Σ (−1)^{k+1}(u−1)^k/k`, exact modulo `ℓᴺ`.
///
/// Terms are summed over a work modulus `ℓ^{N+G}` with `G` large enough to
/// absorb every `v_ℓ(k)` that occurs, so no digit of the result is lost.
pub fn padic_log(u: &PadicInt) -> Result<PadicInt> {
    let ell = u.prime;
    if u.residue % ell != 1 % ell {
        return Err(Error::precondition(format!(
            "log needs u ≡ 1 (mod {ell}), got {u:?}"
        )));
    }
    let n = u.precision;
    // k − ⌊log_ℓ k⌋ is a lower bound for v(x^k/k) and is nondecreasing.
    let mut last = 1u64;
    while (last + 1) - floor_log(last + 1, ell) as u64 <= n as u64 - 1 {
        last += 1;
    }
    let guard = floor_log(last, ell);
    let work = BigInt::from(ell).pow(n + guard);
    let target = BigInt::from(u.modulus);
    let x: BigInt = BigInt::from(u.residue) - 1u32;

    let mut acc = BigInt::zero();
    let mut xk = BigInt::one();
    for k in 1..=last {
        xk = (&xk * &x).mod_floor(&work);
        let (e, unit) = split_ell(k, ell);
        let term = &xk / BigInt::from(ell).pow(e);
        let unit_inv = inv_mod(unit % u.modulus, u.modulus).unwrap();
        let term = (term * BigInt::from(unit_inv)).mod_floor(&target);
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    PadicInt::from_bigint(ell, n, &acc)
}

/// `exp(t) = Σ t^k/k!` for `v(t) ≥ 1`, exact modulo `ℓᴺ`.
pub fn padic_exp(t: &PadicInt) -> Result<PadicInt> {
    let ell = t.prime;
    if t.is_unit() {
        return Err(Error::precondition(format!(
            "exp needs v(t) ≥ 1, got {t:?}"
        )));
    }
    let n = t.precision;
    // v(t^k/k!) ≥ k − (k−1)/(ℓ−1), increasing in k.
    let mut last = 0u64;
    loop {
        let k = last + 1;
        let bound = (k * (ell - 2) + 1) / (ell - 1);
        if bound >= n as u64 {
            break;
        }
        last = k;
    }
    let guard = val_factorial(last, ell);
    let work = BigInt::from(ell).pow(n + guard);
    let target = BigInt::from(t.modulus);
    let x = BigInt::from(t.residue);

    let mut acc = BigInt::one();
    let mut tk = BigInt::one();
    let mut unit_fact = 1u64;
    let mut ell_fact = 0u32;
    for k in 1..=last {
        tk = (&tk * &x).mod_floor(&work);
        let (e, u) = split_ell(k, ell);
        ell_fact += e;
        unit_fact = mul_mod(unit_fact, u % t.modulus, t.modulus);
        let term = &tk / BigInt::from(ell).pow(ell_fact);
        let inv = inv_mod(unit_fact, t.modulus).unwrap();
        acc += (term * BigInt::from(inv)).mod_floor(&target);
    }
    PadicInt::from_bigint(ell, n, &acc)
}

/// `binom(λ, k) = λ(λ−1)…(λ−k+1)/k!`; loses `v_ℓ(k!)` digits.
pub fn binom_series_coeff(lambda: &PadicInt, k: u64) -> Result<PadicInt> {
    let ell = lambda.prime;
    let loss = val_factorial(k, ell);
    if loss >= lambda.precision {
        return Err(Error::PrecisionExhausted(format!(
            "binom(λ, {k}) needs {loss} digits of division, only {} available",
            lambda.precision
        )));
    }
    let modulus = BigInt::from(lambda.modulus);
    let lam = BigInt::from(lambda.residue);
    let mut num = BigInt::one();
    let mut unit_fact = BigInt::one();
    for i in 0..k {
        num = (num * (&lam - BigInt::from(i))).mod_floor(&modulus);
        let (_, u) = split_ell(i + 1, ell);
        unit_fact = (unit_fact * BigInt::from(u)).mod_floor(&modulus);
    }
    let shifted = num / BigInt::from(ell).pow(loss);
    let out_prec = lambda.precision - loss;
    let out_mod = checked_pow(ell, out_prec).unwrap();
    let inv = inv_mod(unit_fact.to_u64().unwrap() % out_mod, out_mod).unwrap();
    let r = (shifted * BigInt::from(inv)).mod_floor(&BigInt::from(out_mod));
    PadicInt::from_bigint(ell, out_prec, &r)
}

/// `num / ℓ^shift` with `num` known modulo `ℓ^{num_precision}`.
///
/// Absolute precision is `num_precision − shift` and may be negative once
/// too many divisions have happened; such values carry no information.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicFrac {
    prime: u64,
    num: BigInt,
    num_precision: u32,
    shift: u32,
}

impl PadicFrac {
    pub fn from_int(x: &PadicInt) -> Self {
        PadicFrac {
            prime: x.prime,
            num: x.to_bigint(),
            num_precision: x.precision,
            shift: 0,
        }
    }

    pub fn zero(prime: u64, precision: u32) -> Self {
        PadicFrac {
            prime,
            num: BigInt::zero(),
            num_precision: precision,
            shift: 0,
        }
    }

    pub fn one(prime: u64, precision: u32) -> Self {
        PadicFrac {
            prime,
            num: BigInt::one(),
            num_precision: precision,
            shift: 0,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn absolute_precision(&self) -> i64 {
        self.num_precision as i64 - self.shift as i64
    }

    pub fn is_exhausted(&self) -> bool {
        self.absolute_precision() <= 0
    }

    /// Valuation, or `None` when the value is zero at its precision.
    pub fn val(&self) -> Option<i64> {
        match val_bigint(&self.num, self.prime) {
            Some(v) if v < self.num_precision => Some(v as i64 - self.shift as i64),
            _ => None,
        }
    }

    /// `(numerator residue, shift)` in lowest terms.
    pub fn parts(&self) -> (BigInt, u32) {
        (self.num.clone(), self.shift)
    }

    fn modulus(&self) -> BigInt {
        BigInt::from(self.prime).pow(self.num_precision)
    }

    fn normalize(mut self) -> Self {
        self.num = self.num.mod_floor(&self.modulus());
        let ell = BigInt::from(self.prime);
        while self.shift > 0 && self.num_precision > 0 && (&self.num % &ell).is_zero() {
            self.num /= &ell;
            self.shift -= 1;
            self.num_precision -= 1;
        }
        if self.num_precision == 0 {
            self.num = BigInt::zero();
        }
        self
    }

    fn raised(&self, shift: u32) -> (BigInt, u32) {
        let d = shift - self.shift;
        (
            &self.num * BigInt::from(self.prime).pow(d),
            self.num_precision + d,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.prime, other.prime, "ℓ-adic fractions over different primes");
        let shift = self.shift.max(other.shift);
        let (a, pa) = self.raised(shift);
        let (b, pb) = other.raised(shift);
        let num = if negate { a - b } else { a + b };
        PadicFrac {
            prime: self.prime,
            num,
            num_precision: pa.min(pb),
            shift,
        }
        .normalize()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "ℓ-adic fractions over different primes");
        let va = val_bigint(&self.num, self.prime)
            .unwrap_or(self.num_precision)
            .min(self.num_precision);
        let vb = val_bigint(&other.num, other.prime)
            .unwrap_or(other.num_precision)
            .min(other.num_precision);
        PadicFrac {
            prime: self.prime,
            num: &self.num * &other.num,
            num_precision: (self.num_precision + vb).min(other.num_precision + va),
            shift: self.shift + other.shift,
        }
        .normalize()
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let (e, _) = if k == 0 { (0, 0) } else { split_ell(k.unsigned_abs(), self.prime) };
        PadicFrac {
            prime: self.prime,
            num: &self.num * BigInt::from(k),
            num_precision: self.num_precision + e,
            shift: self.shift,
        }
        .normalize()
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        let (e, u) = split_ell(k.unsigned_abs(), self.prime);
        let m = self.modulus();
        let u_inv = BigInt::from(u)
            .extended_gcd(&m)
            .x
            .mod_floor(&m);
        let sign = if k < 0 { -1 } else { 1 };
        PadicFrac {
            prime: self.prime,
            num: &self.num * u_inv * sign,
            num_precision: self.num_precision,
            shift: self.shift + e,
        }
        .normalize()
    }

    pub fn div_ell_pow(&self, e: u32) -> Self {
        PadicFrac {
            prime: self.prime,
            num: self.num.clone(),
            num_precision: self.num_precision,
            shift: self.shift + e,
        }
        .normalize()
    }

    /// Back to `Z_ℓ`, if the value is integral at its precision.
    pub fn to_padic_int(&self) -> Result<PadicInt> {
        if self.shift > 0 {
            return Err(Error::precondition(format!(
                "value has denominator {}^{}",
                self.prime, self.shift
            )));
        }
        if self.num_precision == 0 {
            return Err(Error::PrecisionExhausted("no digits left".into()));
        }
        PadicInt::from_bigint(self.prime, self.num_precision, &self.num)
    }
}

impl fmt::Display for PadicFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0 {
            write!(f, "{} (mod {}^{})", self.num, self.prime, self.num_precision)
        } else {
            write!(
                f,
                "{}/{}^{} (mod {}^{})",
                self.num,
                self.prime,
                self.shift,
                self.prime,
                self.absolute_precision()
            )
        }
    }
}

/// Coefficients `s_d = d·[y^d] log r(y)` for `d = 1..=degree`.
///
/// These are the power sums of the inverse roots of `r`, hence integral
/// whenever `r` is; computed by `s_d = d·r_d − Σ_{j<d} s_j r_{d−j}`.
pub fn log_power_sums(r: &[PadicInt], degree: usize) -> Result<Vec<PadicInt>> {
    let first = r
        .first()
        .ok_or_else(|| Error::invalid("empty series"))?;
    if first.residue != 1 {
        return Err(Error::precondition("series must have constant term 1"));
    }
    let zero = first.sibling(0);
    let coeff = |i: usize| r.get(i).copied().unwrap_or(zero);
    let mut s: Vec<PadicInt> = Vec::with_capacity(degree);
    for d in 1..=degree {
        let mut acc = coeff(d).mul_int(d as i64);
        for j in 1..d {
            acc = acc.try_sub(&s[j - 1].try_mul(&coeff(d - j))?)?;
        }
        s.push(acc);
    }
    Ok(s)
}

/// Truncated `log r(y)` as fractions; entry 0 is zero.
pub fn series_log(r: &[PadicInt], degree: usize) -> Result<Vec<PadicFrac>> {
    let s = log_power_sums(r, degree)?;
    let mut out = vec![PadicFrac::zero(r[0].prime, r[0].precision)];
    for (i, sd) in s.iter().enumerate() {
        out.push(PadicFrac::from_int(sd).div_int(i as i64 + 1));
    }
    Ok(out)
}

/// Truncated `exp a(y)` for a series with zero constant term.
pub fn series_exp(a: &[PadicFrac]) -> Result<Vec<PadicFrac>> {
    let first = a
        .first()
        .ok_or_else(|| Error::invalid("empty series"))?;
    if first.val().is_some() {
        return Err(Error::precondition("exp needs a zero constant term"));
    }
    let prime = first.prime;
    let prec = a.iter().map(|c| c.num_precision).max().unwrap_or(1);
    let mut e = vec![PadicFrac::one(prime, prec)];
    for d in 1..a.len() {
        let mut acc = PadicFrac::zero(prime, prec);
        for j in 1..=d {
            acc = acc.add(&a[j].mul_int(j as i64).mul(&e[d - j]));
        }
        e.push(acc.div_int(d as i64));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(ell: u64, n: u32, x: i64) -> PadicInt {
        PadicInt::new(ell, n, x).unwrap()
    }

    /// Independent oracle: log u ≡ (u^{ℓᵐ} − 1)/ℓᵐ (mod ℓ^{m+2}).
    fn log_oracle(ell: u64, n: u32, u: u64) -> u64 {
        let m = n;
        let big = BigInt::from(ell).pow(2 * m + 2);
        let e = BigInt::from(ell).pow(m);
        let pw = BigInt::from(u).modpow(&e, &big);
        let q: BigInt = (pw - 1u32) / &e;
        (q % BigInt::from(ell).pow(n)).to_u64().unwrap()
    }

    /// Independent oracle: exact rational partial sum of Σ t^k/k!.
    fn exp_oracle(ell: u64, n: u32, t: u64, terms: u64) -> u64 {
        let fact = factorial(terms);
        let mut num = BigInt::zero();
        for k in 0..=terms {
            num += BigInt::from(t).pow(k as u32) * (&fact / factorial(k));
        }
        let g = num.gcd(&fact);
        let (num, den) = (num / &g, &fact / &g);
        let m = BigInt::from(ell).pow(n);
        let inv = den.extended_gcd(&m).x.mod_floor(&m);
        (num * inv).mod_floor(&m).to_u64().unwrap()
    }

    fn factorial(k: u64) -> BigInt {
        (1..=k).fold(BigInt::one(), |a, i| a * BigInt::from(i))
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(p(5, 4, 0).val(), Valuation::AtLeast(4));
        assert_eq!(p(5, 4, 50).val(), Valuation::Finite(2));
        // 486 = 2 · 3^5, trial division
        let mut m = 486u64;
        let mut v = 0;
        while m % 3 == 0 {
            m /= 3;
            v += 1;
        }
        assert_eq!(p(3, 6, 486).val(), Valuation::Finite(v));
        assert_eq!(v, 5);
    }

    #[test]
    fn construction_rejects_bad_parameters() {
        assert!(PadicInt::new(2, 4, 1).is_err());
        assert!(PadicInt::new(9, 4, 1).is_err());
        assert!(PadicInt::new(5, 0, 1).is_err());
        assert!(PadicInt::new(3, 40, 1).is_err());
        assert!(PadicInt::new(3, 39, 1).is_ok());
    }

    #[test]
    fn residues_are_reduced() {
        assert_eq!(p(5, 2, -1).residue(), 24);
        assert_eq!(p(5, 2, 26).residue(), 1);
        assert_eq!(p(5, 2, -1).balanced(), -1);
    }

    #[test]
    fn mixed_precisions_reduce_to_smaller() {
        let a = p(5, 4, 300);
        let b = p(5, 2, 1);
        let s = a + b;
        assert_eq!(s.precision(), 2);
        assert_eq!(s.residue(), 301 % 25);
    }

    #[test]
    fn mixed_primes_are_errors() {
        let a = p(5, 4, 3);
        let b = p(3, 4, 3);
        assert_eq!(a.try_add(&b), Err(Error::PrimeMismatch(5, 3)));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn log_of_one_is_zero() {
        assert!(padic_log(&p(5, 6, 1)).unwrap().is_zero());
    }

    #[test]
    fn log_of_six_has_valuation_one() {
        let l = padic_log(&p(5, 4, 6)).unwrap();
        assert_eq!(l.val(), Valuation::Finite(1));
        assert_eq!(l.residue(), log_oracle(5, 4, 6));
    }

    #[test]
    fn log_matches_power_oracle() {
        for &ell in &[3u64, 5, 7] {
            for n in 1..8u32 {
                let m = checked_pow(ell, n).unwrap();
                for u in (1..m.min(400)).step_by(ell as usize) {
                    let got = padic_log(&p(ell, n, u as i64)).unwrap();
                    assert_eq!(got.residue(), log_oracle(ell, n, u), "ℓ={ell} N={n} u={u}");
                    assert_eq!(got.precision(), n);
                }
            }
        }
    }

    #[test]
    fn log_rejects_non_one_units() {
        assert!(padic_log(&p(5, 4, 2)).is_err());
        assert!(padic_log(&p(5, 4, 5)).is_err());
    }

    #[test]
    fn exp_examples() {
        assert_eq!(padic_exp(&p(5, 4, 0)).unwrap().residue(), 1);
        let e = padic_exp(&p(3, 5, 9)).unwrap();
        assert!(e.congruent(&p(3, 5, 1), 2).unwrap());
        let e = padic_exp(&p(5, 4, 5)).unwrap();
        assert_eq!(e.residue(), exp_oracle(5, 4, 5, 40));
        assert!(padic_exp(&p(5, 4, 2)).is_err());
    }

    #[test]
    fn exp_matches_rational_oracle() {
        for &ell in &[3u64, 5, 7] {
            for n in 1..6u32 {
                for t in [ell, 2 * ell, ell * ell, 4 * ell + ell * ell] {
                    let got = padic_exp(&p(ell, n, t as i64)).unwrap();
                    assert_eq!(got.residue(), exp_oracle(ell, n, t, 60), "ℓ={ell} N={n} t={t}");
                }
            }
        }
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom_series_coeff(&p(5, 4, 123), 0).unwrap().residue(), 1);
        assert_eq!(binom_series_coeff(&p(5, 4, 7), 2).unwrap().residue(), 21);
        // λ = 1/2 in Z_3, binom(1/2, 2) = −1/8
        let n = 6;
        let m = 729i64;
        let half = inv_mod(2, m as u64).unwrap() as i64;
        let got = binom_series_coeff(&p(3, n, half), 2).unwrap();
        let inv8 = inv_mod(8, m as u64).unwrap() as i64;
        assert_eq!(got.residue() as i64, (-inv8).rem_euclid(m));
        assert_eq!(got.precision(), n);
    }

    #[test]
    fn binom_tracks_division_loss() {
        // v_3(3!) = 1
        let c = binom_series_coeff(&p(3, 4, 10), 3).unwrap();
        assert_eq!(c.precision(), 3);
        assert_eq!(c.residue(), 120 % 27);
        // v_3(9!) = 4 ≥ N
        assert!(matches!(
            binom_series_coeff(&p(3, 4, 10), 9),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn div_int_loses_digits() {
        let x = p(5, 4, 50);
        let y = x.div_int(10).unwrap();
        assert_eq!(y.precision(), 3);
        assert_eq!(y.residue(), 5);
        assert!(p(5, 4, 3).div_int(5).is_err());
    }

    #[test]
    fn power_sums_of_linear_factor() {
        // log(1 − a y) = −Σ a^d y^d / d, so s_d = −a^d
        let r = vec![p(5, 6, 1), p(5, 6, -7)];
        let s = log_power_sums(&r, 5).unwrap();
        for (d, sd) in s.iter().enumerate() {
            assert_eq!(*sd, p(5, 6, -(7i64.pow(d as u32 + 1))));
        }
    }

    #[test]
    fn series_exp_inverts_series_log() {
        let r = vec![p(3, 8, 1), p(3, 8, 4), p(3, 8, -2), p(3, 8, 9)];
        let l = series_log(&r, 6).unwrap();
        let back = series_exp(&l).unwrap();
        for (d, c) in back.iter().enumerate() {
            let expect = r.get(d).map(|x| x.residue()).unwrap_or(0);
            let prec = c.absolute_precision();
            if prec <= 0 {
                continue;
            }
            let diff = c.sub(&PadicFrac::from_int(&p(3, 8, expect as i64)));
            assert!(diff.val().map_or(true, |v| v >= prec), "degree {d}: {c}");
        }
    }

    proptest! {
        #[test]
        fn exp_log_roundtrip(ell in prop::sample::select(vec![3u64, 5, 7, 11]), n in 1u32..8, k in 0u64..100_000) {
            let m = checked_pow(ell, n).unwrap();
            let u = (1 + ell * k) % m;
            let x = p(ell, n, u as i64);
            let back = padic_exp(&padic_log(&x).unwrap()).unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn log_exp_roundtrip(ell in prop::sample::select(vec![3u64, 5, 7]), n in 1u32..8, k in 0u64..100_000) {
            let m = checked_pow(ell, n).unwrap();
            let t = p(ell, n, ((ell * k) % m) as i64);
            prop_assert_eq!(padic_log(&padic_exp(&t).unwrap()).unwrap(), t);
        }

        #[test]
        fn exp_respects_congruences(ell in prop::sample::select(vec![3u64, 5, 7]), n in 1u32..5, a in 0u64..10_000, d in 0u64..10_000) {
            let big = 8;
            let a = p(ell, big, (ell * a) as i64);
            let m = checked_pow(ell, n).unwrap();
            let b = a + p(ell, big, (m * d) as i64);
            let ea = padic_exp(&a).unwrap();
            let eb = padic_exp(&b).unwrap();
            prop_assert!(ea.congruent(&eb, n).unwrap());
        }

        #[test]
        fn valuation_of_products(ell in prop::sample::select(vec![3u64, 5, 7]), n in 1u32..10, x in 0u64..1_000_000, y in 0u64..1_000_000) {
            let a = p(ell, n, x as i64);
            let b = p(ell, n, y as i64);
            let expect = (a.val().lower_bound() + b.val().lower_bound()).min(n);
            prop_assert_eq!((a * b).val().lower_bound(), expect);
            let sum = (a + b).val().lower_bound();
            prop_assert!(sum >= a.val().lower_bound().min(b.val().lower_bound()));
        }
    }
}
