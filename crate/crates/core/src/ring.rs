//! The minimal commutative-ring interface shared by matrices and polynomials.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::padic::PadicInt;

/// A commutative ring whose elements know their own parameters.
///
/// `zero_like`/`one_like` build constants in the same ring as `self`
/// (same prime, precision, cyclotomic level...).
pub trait CommRing: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, k: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl CommRing for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn int_like(&self, k: i64) -> Self {
        BigInt::from(k)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl CommRing for PadicInt {
    fn zero_like(&self) -> Self {
        self.sibling(0)
    }
    fn one_like(&self) -> Self {
        self.sibling(1)
    }
    fn int_like(&self, k: i64) -> Self {
        self.sibling(k)
    }
    fn add(&self, other: &Self) -> Self {
        *self + *other
    }
    fn sub(&self, other: &Self) -> Self {
        *self - *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self * *other
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn is_zero(&self) -> bool {
        PadicInt::is_zero(self)
    }
}
