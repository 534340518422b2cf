//! The rings `Z[ζ_{ℓⁿ}]` and `Z[ζ_p, ζ_{ℓⁿ}]` in power integral bases.
//!
//! Elements of `Z[ζ_{ℓⁿ}]` are stored as `φ(ℓⁿ)` coordinates against
//! `1, ζ, …, ζ^{φ−1}`, always reduced modulo
//! `Φ_{ℓⁿ}(x) = Σ_{j<ℓ} x^{j·ℓ^{n−1}}`. Since this basis is integral,
//! divisibility by `ℓᵐ` is decided coordinate by coordinate.
//!
//! Coordinates are either residues modulo `ℓᴺ` ([`CycloElem`]) or exact
//! integers ([`ExactCyclo`]).

use std::f64::consts::TAU;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{working_modulus, PadicInt, Valuation};
use crate::util::{checked_pow, reduce_i64};

/// Coordinate type of a cyclotomic element.
pub trait Coefficient: Clone + PartialEq + Eq + fmt::Debug + Send + Sync {
    type Ctx: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, x: i64) -> Self;
    fn add(ctx: &Self::Ctx, a: &Self, b: &Self) -> Self;
    fn sub(ctx: &Self::Ctx, a: &Self, b: &Self) -> Self;
    fn neg(ctx: &Self::Ctx, a: &Self) -> Self;
    fn mul(ctx: &Self::Ctx, a: &Self, b: &Self) -> Self;
    fn vanishes(&self) -> bool;
    fn valuation(ctx: &Self::Ctx, a: &Self, ell: u64) -> Valuation;
    fn to_f64(ctx: &Self::Ctx, a: &Self) -> f64;
    fn to_decimal(&self) -> String;
    fn precision(ctx: &Self::Ctx) -> Option<u32>;

    /// `out[k] = Σ_{i+j ≡ k (mod m)} a_i b_j`.
    fn cyclic_convolve(ctx: &Self::Ctx, a: &[Self], b: &[Self], m: usize) -> Vec<Self> {
        let mut out = vec![Self::zero_in(ctx); m];
        for (i, x) in a.iter().enumerate() {
            if x.vanishes() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.vanishes() {
                    continue;
                }
                let k = (i + j) % m;
                out[k] = Self::add(ctx, &out[k], &Self::mul(ctx, x, y));
            }
        }
        out
    }
}

/// Residues modulo `ℓᴺ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    ell: u64,
    precision: u32,
    value: u64,
}

impl Modulus {
    pub fn new(ell: u64, precision: u32) -> Result<Self> {
        Ok(Modulus {
            ell,
            precision,
            value: working_modulus(ell, precision)?,
        })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn padic(&self, residue: u64) -> PadicInt {
        PadicInt::raw(self.ell, self.precision, self.value, residue % self.value)
    }
}

impl Coefficient for u64 {
    type Ctx = Modulus;

    fn zero_in(_: &Modulus) -> Self {
        0
    }
    fn from_i64(ctx: &Modulus, x: i64) -> Self {
        reduce_i64(x, ctx.value)
    }
    fn add(ctx: &Modulus, a: &Self, b: &Self) -> Self {
        ((*a as u128 + *b as u128) % ctx.value as u128) as u64
    }
    fn sub(ctx: &Modulus, a: &Self, b: &Self) -> Self {
        ((*a as u128 + (ctx.value - *b) as u128) % ctx.value as u128) as u64
    }
    fn neg(ctx: &Modulus, a: &Self) -> Self {
        (ctx.value - *a) % ctx.value
    }
    fn mul(ctx: &Modulus, a: &Self, b: &Self) -> Self {
        ((*a as u128 * *b as u128) % ctx.value as u128) as u64
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn valuation(ctx: &Modulus, a: &Self, ell: u64) -> Valuation {
        Valuation::of_u64(*a, ell, ctx.precision)
    }
    fn to_f64(ctx: &Modulus, a: &Self) -> f64 {
        if *a > ctx.value / 2 {
            -((ctx.value - *a) as f64)
        } else {
            *a as f64
        }
    }
    fn to_decimal(&self) -> String {
        self.to_string()
    }
    fn precision(ctx: &Modulus) -> Option<u32> {
        Some(ctx.precision)
    }

    fn cyclic_convolve(ctx: &Modulus, a: &[u64], b: &[u64], m: usize) -> Vec<u64> {
        const LIMIT: u128 = 1 << 127;
        let md = ctx.value as u128;
        let mut acc = vec![0u128; m];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as u128;
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let mut k = i + j;
                if k >= m {
                    k -= m;
                }
                let s = acc[k] + x * y as u128;
                acc[k] = if s >= LIMIT { s % md } else { s };
            }
        }
        acc.into_iter().map(|s| (s % md) as u64).collect()
    }
}

/// Marker context for exact integer coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Exact;

impl Coefficient for BigInt {
    type Ctx = Exact;

    fn zero_in(_: &Exact) -> Self {
        BigInt::zero()
    }
    fn from_i64(_: &Exact, x: i64) -> Self {
        BigInt::from(x)
    }
    fn add(_: &Exact, a: &Self, b: &Self) -> Self {
        a + b
    }
    fn sub(_: &Exact, a: &Self, b: &Self) -> Self {
        a - b
    }
    fn neg(_: &Exact, a: &Self) -> Self {
        -a
    }
    fn mul(_: &Exact, a: &Self, b: &Self) -> Self {
        a * b
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn valuation(_: &Exact, a: &Self, ell: u64) -> Valuation {
        Valuation::of_bigint(a, ell)
    }
    fn to_f64(_: &Exact, a: &Self) -> f64 {
        a.to_f64().unwrap_or(f64::NAN)
    }
    fn to_decimal(&self) -> String {
        self.to_string()
    }
    fn precision(_: &Exact) -> Option<u32> {
        None
    }
}

/// `φ(ℓⁿ)`, with `φ(ℓ⁰) = 1`.
pub fn totient(ell: u64, level: u32) -> usize {
    if level == 0 {
        1
    } else {
        (checked_pow(ell, level - 1).expect("level too large") * (ell - 1)) as usize
    }
}

fn order(ell: u64, level: u32) -> usize {
    checked_pow(ell, level).expect("level too large") as usize
}

/// Reduce a vector of length `ℓⁿ` (coefficients of `1, ζ, …, ζ^{ℓⁿ−1}`)
/// modulo `Φ_{ℓⁿ}` to length `φ(ℓⁿ)`.
fn reduce_full<C: Coefficient>(ctx: &C::Ctx, ell: u64, level: u32, mut raw: Vec<C>) -> Vec<C> {
    let m = order(ell, level);
    debug_assert_eq!(raw.len(), m);
    if level == 0 {
        return raw;
    }
    let phi = totient(ell, level);
    let step = m / ell as usize;
    for i in (phi..m).rev() {
        let c = std::mem::replace(&mut raw[i], C::zero_in(ctx));
        if c.vanishes() {
            continue;
        }
        for j in 0..(ell as usize - 1) {
            let idx = i - phi + j * step;
            raw[idx] = C::sub(ctx, &raw[idx], &c);
        }
    }
    raw.truncate(phi);
    raw
}

/// An element of `Z[ζ_{ℓⁿ}]` with coordinates of type `C`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclo<C: Coefficient> {
    ell: u64,
    level: u32,
    ctx: C::Ctx,
    coeffs: Vec<C>,
}

pub type CycloElem = Cyclo<u64>;
pub type ExactCyclo = Cyclo<BigInt>;

impl<C: Coefficient> fmt::Debug for Cyclo<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[ζ_{}^{}]{:?}", self.ell, self.level, self.coeffs)
    }
}

impl<C: Coefficient> fmt::Display for Cyclo<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.vanishes() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c.to_decimal())?,
                1 => write!(f, "{}·ζ", c.to_decimal())?,
                _ => write!(f, "{}·ζ^{i}", c.to_decimal())?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Serialized form: `(ℓ, n, N, coordinates)`; `N` is absent for exact elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloRecord {
    pub ell: u64,
    pub level: u32,
    pub precision: Option<u32>,
    pub coeffs: Vec<String>,
}

impl<C: Coefficient> Cyclo<C> {
    pub fn zero(ell: u64, level: u32, ctx: &C::Ctx) -> Self {
        Cyclo {
            ell,
            level,
            ctx: ctx.clone(),
            coeffs: vec![C::zero_in(ctx); totient(ell, level)],
        }
    }

    pub fn from_int(ell: u64, level: u32, ctx: &C::Ctx, k: i64) -> Self {
        let mut z = Self::zero(ell, level, ctx);
        z.coeffs[0] = C::from_i64(ctx, k);
        z
    }

    pub fn one(ell: u64, level: u32, ctx: &C::Ctx) -> Self {
        Self::from_int(ell, level, ctx, 1)
    }

    pub fn from_constant(ell: u64, level: u32, ctx: &C::Ctx, c: C) -> Self {
        let mut z = Self::zero(ell, level, ctx);
        z.coeffs[0] = c;
        z
    }

    /// `ζ_{ℓⁿ}^e`; any integer `e` is reduced modulo `ℓⁿ`.
    pub fn zeta_power(ell: u64, level: u32, ctx: &C::Ctx, e: i64) -> Self {
        let m = order(ell, level);
        let mut raw = vec![C::zero_in(ctx); m];
        raw[e.rem_euclid(m as i64) as usize] = C::from_i64(ctx, 1);
        Self::from_full(ell, level, ctx, raw)
    }

    /// `Σ c·ζ^e` over the given terms.
    pub fn from_terms(ell: u64, level: u32, ctx: &C::Ctx, terms: &[(i64, C)]) -> Self {
        let m = order(ell, level) as i64;
        let mut raw = vec![C::zero_in(ctx); m as usize];
        for (e, c) in terms {
            let k = e.rem_euclid(m) as usize;
            raw[k] = C::add(ctx, &raw[k], c);
        }
        Self::from_full(ell, level, ctx, raw)
    }

    /// From coefficients against `1, ζ, ζ², …` of any length.
    pub fn from_coeffs(ell: u64, level: u32, ctx: &C::Ctx, coeffs: Vec<C>) -> Self {
        let m = order(ell, level);
        if coeffs.len() == totient(ell, level) {
            return Cyclo {
                ell,
                level,
                ctx: ctx.clone(),
                coeffs,
            };
        }
        let mut raw = vec![C::zero_in(ctx); m];
        for (i, c) in coeffs.into_iter().enumerate() {
            raw[i % m] = C::add(ctx, &raw[i % m], &c);
        }
        Self::from_full(ell, level, ctx, raw)
    }

    fn from_full(ell: u64, level: u32, ctx: &C::Ctx, raw: Vec<C>) -> Self {
        Cyclo {
            ell,
            level,
            ctx: ctx.clone(),
            coeffs: reduce_full(ctx, ell, level, raw),
        }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// `ℓⁿ`, the order of `ζ`.
    pub fn order(&self) -> usize {
        order(self.ell, self.level)
    }

    pub fn constant_term(&self) -> &C {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.vanishes())
    }

    fn check_same(&self, other: &Self) {
        assert!(
            self.ell == other.ell && self.level == other.level && self.ctx == other.ctx,
            "cyclotomic operands from different rings: {:?} / {:?}",
            (self.ell, self.level, &self.ctx),
            (other.ell, other.level, &other.ctx)
        );
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&C::Ctx, &C, &C) -> C) -> Self {
        self.check_same(other);
        Cyclo {
            ell: self.ell,
            level: self.level,
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(&self.ctx, a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, C::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, C::sub)
    }

    pub fn neg(&self) -> Self {
        Cyclo {
            coeffs: self.coeffs.iter().map(|a| C::neg(&self.ctx, a)).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        let raw = C::cyclic_convolve(&self.ctx, &self.coeffs, &other.coeffs, self.order());
        Self::from_full(self.ell, self.level, &self.ctx, raw)
    }

    pub fn scale(&self, c: &C) -> Self {
        Cyclo {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| C::mul(&self.ctx, a, c))
                .collect(),
            ..self.clone()
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&C::from_i64(&self.ctx, k))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.ell, self.level, &self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self · Σ c·ζ^e` for a short list of monomials.
    pub fn mul_sparse(&self, terms: &[(usize, C)]) -> Self {
        let m = self.order();
        let mut raw = vec![C::zero_in(&self.ctx); m];
        for (e, c) in terms {
            if c.vanishes() {
                continue;
            }
            for (i, a) in self.coeffs.iter().enumerate() {
                if a.vanishes() {
                    continue;
                }
                let k = (i + e) % m;
                raw[k] = C::add(&self.ctx, &raw[k], &C::mul(&self.ctx, a, c));
            }
        }
        Self::from_full(self.ell, self.level, &self.ctx, raw)
    }

    pub fn mul_zeta(&self, e: i64) -> Self {
        let m = self.order() as i64;
        self.mul_sparse(&[(e.rem_euclid(m) as usize, C::from_i64(&self.ctx, 1))])
    }

    /// The embedding `Z[ζ_{ℓⁿ}] → Z[ζ_{ℓ^{n+1}}]`, `ζ_{ℓⁿ} ↦ ζ_{ℓ^{n+1}}^ℓ`.
    pub fn embed_up(&self) -> Self {
        let level = self.level + 1;
        let phi = totient(self.ell, level);
        let mut coeffs = vec![C::zero_in(&self.ctx); phi];
        let stride = if self.level == 0 { 1 } else { self.ell as usize };
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * stride] = c.clone();
        }
        // ℓ·i < ℓ·φ(ℓⁿ) = φ(ℓ^{n+1}), so no reduction is needed.
        Cyclo {
            ell: self.ell,
            level,
            ctx: self.ctx.clone(),
            coeffs,
        }
    }

    pub fn embed_to(&self, level: u32) -> Result<Self> {
        if level < self.level {
            return Err(Error::precondition(format!(
                "cannot embed level {} into level {level}",
                self.level
            )));
        }
        let mut x = self.clone();
        while x.level < level {
            x = x.embed_up();
        }
        Ok(x)
    }

    /// Move an element with no `ζ` components down to the base ring.
    pub fn demote(&self) -> Result<Self> {
        if self.coeffs[1..].iter().any(|c| !c.vanishes()) {
            return Err(Error::inconsistent(format!(
                "{self} does not lie in the base ring"
            )));
        }
        Ok(Self::from_constant(
            self.ell,
            0,
            &self.ctx,
            self.coeffs[0].clone(),
        ))
    }

    /// Largest `m` with `ℓᵐ | self`, from the coordinates.
    pub fn ell_divisibility(&self) -> Valuation {
        self.coeffs
            .iter()
            .map(|c| C::valuation(&self.ctx, c, self.ell))
            .reduce(Valuation::min)
            .unwrap()
    }

    /// The automorphism `ζ ↦ ζ^a` for `a` prime to `ℓ`.
    pub fn galois(&self, a: i64) -> Self {
        let m = self.order() as i64;
        assert!(self.level == 0 || a.rem_euclid(self.ell as i64) != 0, "not a unit");
        let terms: Vec<(i64, C)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| ((i as i64 * a).rem_euclid(m), c.clone()))
            .collect();
        Self::from_terms(self.ell, self.level, &self.ctx, &terms)
    }

    /// Complex conjugation `ζ ↦ ζ^{−1}`.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    /// Image under `ζ ↦ exp(2πi·a/ℓⁿ)`.
    pub fn to_complex(&self, a: i64) -> Complex64 {
        let m = self.order() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                Complex64::from_polar(C::to_f64(&self.ctx, c), TAU * (a as f64) * i as f64 / m)
            })
            .sum()
    }

    pub fn record(&self) -> CycloRecord {
        CycloRecord {
            ell: self.ell,
            level: self.level,
            precision: C::precision(&self.ctx),
            coeffs: self.coeffs.iter().map(|c| c.to_decimal()).collect(),
        }
    }
}

impl CycloElem {
    pub fn modulus(&self) -> &Modulus {
        &self.ctx
    }

    pub fn precision(&self) -> u32 {
        self.ctx.precision
    }

    /// Coordinates as ℓ-adic integers.
    pub fn padic_coeffs(&self) -> Vec<PadicInt> {
        self.coeffs.iter().map(|&c| self.ctx.padic(c)).collect()
    }

    pub fn from_padic(level: u32, x: &PadicInt) -> Self {
        let ctx = Modulus {
            ell: x.prime(),
            precision: x.precision(),
            value: x.modulus(),
        };
        Self::from_constant(x.prime(), level, &ctx, x.residue())
    }

    pub fn from_record(rec: &CycloRecord) -> Result<Self> {
        let precision = rec
            .precision
            .ok_or_else(|| Error::invalid("record has no precision"))?;
        let ctx = Modulus::new(rec.ell, precision)?;
        if rec.coeffs.len() != totient(rec.ell, rec.level) {
            return Err(Error::invalid("record has the wrong number of coordinates"));
        }
        let coeffs = rec
            .coeffs
            .iter()
            .map(|s| match s.parse::<u64>() {
                Ok(v) if v < ctx.value => Ok(v),
                _ => Err(Error::invalid(format!("bad residue {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(rec.ell, rec.level, &ctx, coeffs))
    }
}

impl ExactCyclo {
    pub fn exact_zeta(ell: u64, level: u32, e: i64) -> Self {
        Self::zeta_power(ell, level, &Exact, e)
    }

    /// Reduce the coordinates modulo `ℓᴺ`.
    pub fn reduce_mod(&self, ctx: &Modulus) -> CycloElem {
        let m = BigInt::from(ctx.value);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&m).to_u64().unwrap())
            .collect();
        Cyclo {
            ell: self.ell,
            level: self.level,
            ctx: *ctx,
            coeffs,
        }
    }

    /// `|x|²` under `ζ ↦ exp(2πi·a/ℓⁿ)`.
    pub fn norm_sq_at(&self, a: i64) -> f64 {
        self.to_complex(a).norm_sqr()
    }
}

impl<C: Coefficient> crate::ring::CommRing for Cyclo<C> {
    fn zero_like(&self) -> Self {
        Self::zero(self.ell, self.level, &self.ctx)
    }
    fn one_like(&self) -> Self {
        Self::one(self.ell, self.level, &self.ctx)
    }
    fn int_like(&self, k: i64) -> Self {
        Self::from_int(self.ell, self.level, &self.ctx, k)
    }
    fn add(&self, other: &Self) -> Self {
        Cyclo::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Cyclo::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Cyclo::mul(self, other)
    }
    fn neg(&self) -> Self {
        Cyclo::neg(self)
    }
    fn is_zero(&self) -> bool {
        Cyclo::is_zero(self)
    }
}

impl crate::ring::CommRing for BiCycloElem {
    fn zero_like(&self) -> Self {
        Self::zero(self.p, self.ell, self.level)
    }
    fn one_like(&self) -> Self {
        Self::one(self.p, self.ell, self.level)
    }
    fn int_like(&self, k: i64) -> Self {
        Self::from_int(self.p, self.ell, self.level, k)
    }
    fn add(&self, other: &Self) -> Self {
        BiCycloElem::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        BiCycloElem::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        BiCycloElem::mul(self, other)
    }
    fn neg(&self) -> Self {
        BiCycloElem::neg(self)
    }
    fn is_zero(&self) -> bool {
        BiCycloElem::is_zero(self)
    }
}

/// An exact element of `Z[ζ_p, ζ_{ℓⁿ}]`, coordinates against
/// `ζ_p^i ζ_{ℓⁿ}^j` with `0 ≤ i < p−1`, `0 ≤ j < φ(ℓⁿ)`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiCycloElem {
    p: u64,
    ell: u64,
    level: u32,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for BiCycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Z[ζ_{}, ζ_{}^{}]{:?}",
            self.p,
            self.ell,
            self.level,
            self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>()
        )
    }
}

impl BiCycloElem {
    pub fn zero(p: u64, ell: u64, level: u32) -> Self {
        assert!(p != ell, "auxiliary prime must differ from ℓ");
        BiCycloElem {
            p,
            ell,
            level,
            coeffs: vec![BigInt::zero(); (p as usize - 1) * totient(ell, level)],
        }
    }

    pub fn from_int(p: u64, ell: u64, level: u32, k: i64) -> Self {
        let mut z = Self::zero(p, ell, level);
        z.coeffs[0] = BigInt::from(k);
        z
    }

    pub fn one(p: u64, ell: u64, level: u32) -> Self {
        Self::from_int(p, ell, level, 1)
    }

    /// Build `Σ table[a·ℓⁿ + b] ζ_p^a ζ_{ℓⁿ}^b` from a dense `p × ℓⁿ` table.
    pub fn from_table(p: u64, ell: u64, level: u32, table: Vec<BigInt>) -> Self {
        let m = order(ell, level);
        assert_eq!(table.len(), p as usize * m, "table shape");
        let phi = totient(ell, level);
        let mut rows: Vec<Vec<BigInt>> = table
            .chunks(m)
            .map(|row| reduce_full(&Exact, ell, level, row.to_vec()))
            .collect();
        let last = rows.pop().unwrap();
        let mut coeffs = Vec::with_capacity((p as usize - 1) * phi);
        for row in rows {
            coeffs.extend(row.into_iter().zip(&last).map(|(a, b)| a - b));
        }
        BiCycloElem {
            p,
            ell,
            level,
            coeffs,
        }
    }

    /// `ζ_p^a ζ_{ℓⁿ}^b`.
    pub fn monomial(p: u64, ell: u64, level: u32, a: i64, b: i64) -> Self {
        let m = order(ell, level);
        let mut table = vec![BigInt::zero(); p as usize * m];
        let i = a.rem_euclid(p as i64) as usize * m + b.rem_euclid(m as i64) as usize;
        table[i] = BigInt::one();
        Self::from_table(p, ell, level, table)
    }

    pub fn from_cyclo(p: u64, x: &ExactCyclo) -> Self {
        let mut z = Self::zero(p, x.ell, x.level);
        z.coeffs[..x.dim()].clone_from_slice(&x.coeffs);
        z
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn phi(&self) -> usize {
        totient(self.ell, self.level)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) {
        assert!(
            (self.p, self.ell, self.level) == (other.p, other.ell, other.level),
            "bi-cyclotomic operands from different rings"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        BiCycloElem {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same(other);
        BiCycloElem {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        BiCycloElem {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
            ..self.clone()
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        BiCycloElem {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        let p = self.p as usize;
        let m = order(self.ell, self.level);
        let phi = self.phi();
        let mut table = vec![BigInt::zero(); p * m];
        for (s, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (i1, j1) = (s / phi, s % phi);
            for (t, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (i2, j2) = (t / phi, t % phi);
                let k = ((i1 + i2) % p) * m + (j1 + j2) % m;
                table[k] += a * b;
            }
        }
        Self::from_table(self.p, self.ell, self.level, table)
    }

    /// Apply `ζ_p ↦ ζ_p^a`, `ζ_{ℓⁿ} ↦ ζ_{ℓⁿ}^b`.
    pub fn galois(&self, a: i64, b: i64) -> Self {
        let p = self.p as i64;
        let m = order(self.ell, self.level) as i64;
        let phi = self.phi();
        let mut table = vec![BigInt::zero(); (p * m) as usize];
        for (s, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let i = (s / phi) as i64;
            let j = (s % phi) as i64;
            let k = (i * a).rem_euclid(p) * m + (j * b).rem_euclid(m);
            table[k as usize] += c;
        }
        Self::from_table(self.p, self.ell, self.level, table)
    }

    pub fn conjugate(&self) -> Self {
        self.galois(-1, -1)
    }

    pub fn embed_up(&self) -> Self {
        let phi = self.phi();
        let level = self.level + 1;
        let phi_up = totient(self.ell, level);
        let stride = if self.level == 0 { 1 } else { self.ell as usize };
        let mut coeffs = vec![BigInt::zero(); (self.p as usize - 1) * phi_up];
        for (s, c) in self.coeffs.iter().enumerate() {
            coeffs[(s / phi) * phi_up + (s % phi) * stride] = c.clone();
        }
        BiCycloElem {
            p: self.p,
            ell: self.ell,
            level,
            coeffs,
        }
    }

    /// The element as an exact cyclotomic integer, when it has no `ζ_p` part.
    pub fn to_cyclo(&self) -> Option<ExactCyclo> {
        let phi = self.phi();
        if self.coeffs[phi..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(ExactCyclo::from_coeffs(
            self.ell,
            self.level,
            &Exact,
            self.coeffs[..phi].to_vec(),
        ))
    }

    /// Image under `ζ_p ↦ exp(2πi·a/p)`, `ζ_{ℓⁿ} ↦ exp(2πi·b/ℓⁿ)`.
    pub fn to_complex(&self, a: i64, b: i64) -> Complex64 {
        let phi = self.phi();
        let m = order(self.ell, self.level) as f64;
        let p = self.p as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(s, c)| {
                let i = (s / phi) as f64;
                let j = (s % phi) as f64;
                let angle = TAU * (a as f64 * i / p + b as f64 * j / m);
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }
}
