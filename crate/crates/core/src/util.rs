use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `base^exp`, or `None` once the result would leave `u64`.
pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

pub(crate) fn reduce_i64(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

pub(crate) fn val_u64(mut x: u64, ell: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x % ell == 0 {
        x /= ell;
        v += 1;
    }
    Some(v)
}

pub(crate) fn val_bigint(x: &BigInt, ell: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let l = BigInt::from(ell);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&l);
        if !r.is_zero() {
            return Some(v);
        }
        x = q;
        v += 1;
    }
}

/// Split `k` as `ℓ^e · u` with `ℓ ∤ u`.
pub(crate) fn split_ell(mut k: u64, ell: u64) -> (u32, u64) {
    let mut e = 0;
    while k % ell == 0 {
        k /= ell;
        e += 1;
    }
    (e, k)
}

/// Largest `e` with `ℓ^e ≤ k` (for `k ≥ 1`).
pub(crate) fn floor_log(k: u64, ell: u64) -> u32 {
    let mut e = 0;
    let mut p = ell;
    while p <= k {
        e += 1;
        match p.checked_mul(ell) {
            Some(x) => p = x,
            None => break,
        }
    }
    e
}

/// Legendre: `v_ℓ(k!)`.
pub(crate) fn val_factorial(k: u64, ell: u64) -> u32 {
    let mut v = 0u64;
    let mut p = ell;
    while p <= k {
        v += k / p;
        match p.checked_mul(ell) {
            Some(x) => p = x,
            None => break,
        }
    }
    v as u32
}
