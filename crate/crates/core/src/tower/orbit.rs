//! The action of `Q` on primitive vectors of `(Z/ℓⁿ)^b`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::padic::PadicInt;
use crate::util::{checked_pow, floor_log, inv_mod, split_ell};

use super::spec::TowerSpec;

/// `α`, `β₀` and `n₀ = α + β₀` for a twist matrix `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitParams {
    pub alpha: u32,
    pub beta0: u32,
    pub n0: u32,
}

impl OrbitParams {
    /// `k_n = ℓ^{n−n₀}` for `n ≥ n₀`, else 1.
    pub fn k_n(&self, ell: u64, n: u32) -> u64 {
        if n >= self.n0 {
            ell.pow(n - self.n0)
        } else {
            1
        }
    }
}

/// A square matrix of residues modulo `m`, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    pub size: usize,
    pub modulus: u64,
    pub data: Vec<u64>,
}

impl ModMatrix {
    pub fn from_ints(rows: &[Vec<i64>], modulus: u64) -> Self {
        let size = rows.len();
        let data = rows
            .iter()
            .flatten()
            .map(|&x| (x as i128).rem_euclid(modulus as i128) as u64)
            .collect();
        ModMatrix {
            size,
            modulus,
            data,
        }
    }

    pub fn reduce(&self, modulus: u64) -> Self {
        assert_eq!(self.modulus % modulus, 0);
        ModMatrix {
            size: self.size,
            modulus,
            data: self.data.iter().map(|x| x % modulus).collect(),
        }
    }

    pub fn identity(size: usize, modulus: u64) -> Self {
        let mut data = vec![0; size * size];
        for i in 0..size {
            data[i * size + i] = 1 % modulus;
        }
        ModMatrix {
            size,
            modulus,
            data,
        }
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let m = self.modulus as u128;
        (0..self.size)
            .map(|i| {
                let s: u128 = (0..self.size)
                    .map(|j| self.data[i * self.size + j] as u128 * v[j] as u128 % m)
                    .sum();
                (s % m) as u64
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size;
        let m = self.modulus as u128;
        let mut data = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let s: u128 = (0..n)
                    .map(|k| self.data[i * n + k] as u128 * other.data[k * n + j] as u128 % m)
                    .sum();
                data[i * n + j] = (s % m) as u64;
            }
        }
        ModMatrix {
            size: n,
            modulus: self.modulus,
            data,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.size, self.modulus);
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
}

pub fn is_primitive(v: &[u64], ell: u64) -> bool {
    v.iter().any(|&x| x % ell != 0)
}

/// `log Q = Σ (−1)^{k+1}(Q − I)^k/k` modulo `ℓᴺ`, entrywise.
pub fn matrix_log(spec: &TowerSpec) -> Result<Matrix<PadicInt>> {
    let ell = spec.ell;
    let n = spec.precision;
    let b = spec.b;
    let mut last = 1u64;
    while (last + 1) - floor_log(last + 1, ell) as u64 <= n as u64 - 1 {
        last += 1;
    }
    let guard = floor_log(last, ell);
    let work = BigInt::from(ell).pow(n + guard);
    let target = BigInt::from(ell).pow(n);
    let m0 = Matrix::from_rows(
        (0..b)
            .map(|i| {
                (0..b)
                    .map(|j| BigInt::from(spec.q[i][j] - i64::from(i == j)))
                    .collect()
            })
            .collect(),
    );
    let mut power = Matrix::identity_like(b, &BigInt::one());
    let mut acc = vec![BigInt::from(0); b * b];
    for k in 1..=last {
        power = power.mul(&m0).map(|x| x.mod_floor(&work));
        let (e, unit) = split_ell(k, ell);
        let unit_inv = BigInt::from(inv_mod(unit % ell.pow(n), ell.pow(n)).unwrap());
        let div = BigInt::from(ell).pow(e);
        for (slot, x) in acc.iter_mut().zip(power.entries()) {
            let term = (x / &div * &unit_inv).mod_floor(&target);
            if k % 2 == 1 {
                *slot += term;
            } else {
                *slot -= term;
            }
        }
    }
    let entries = acc
        .iter()
        .map(|x| PadicInt::from_bigint(ell, n, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::new(b, b, entries))
}

/// Orbit parameters together with `X = ℓ^{−α} log Q` (precision `N − α`).
pub fn orbit_params_with_x(spec: &TowerSpec) -> Result<(OrbitParams, Matrix<PadicInt>)> {
    let log_q = matrix_log(spec)?;
    let alpha = log_q
        .entries()
        .iter()
        .map(|x| x.val().lower_bound())
        .min()
        .unwrap();
    if alpha >= spec.precision {
        return Err(Error::inconsistent("log Q vanishes at working precision"));
    }
    let scale = spec.ell.pow(alpha) as i64;
    let x = Matrix::new(
        spec.b,
        spec.b,
        log_q
            .entries()
            .iter()
            .map(|e| e.div_int(scale))
            .collect::<Result<Vec<_>>>()?,
    );
    let beta0 = beta_zero(spec, &x, spec.precision - alpha)?;
    Ok((
        OrbitParams {
            alpha,
            beta0,
            n0: alpha + beta0,
        },
        x,
    ))
}

pub fn orbit_params(spec: &TowerSpec) -> Result<OrbitParams> {
    Ok(orbit_params_with_x(spec)?.0)
}

/// Largest `β` for which some primitive `v` has `Xv ≡ 0 (mod ℓ^β)`.
///
/// Solutions modulo `ℓ^{m+1}` lift solutions modulo `ℓᵐ`, so the search
/// grows one digit at a time and stops at the first empty level.
fn beta_zero(spec: &TowerSpec, x: &Matrix<PadicInt>, x_precision: u32) -> Result<u32> {
    let ell = spec.ell;
    let b = spec.b;
    let x_res: Vec<u64> = x.entries().iter().map(|e| e.residue()).collect();
    let kills = |v: &[u64], m: u64| -> bool {
        (0..b).all(|i| {
            let s: u128 = (0..b)
                .map(|j| x_res[i * b + j] as u128 * v[j] as u128)
                .sum();
            s % m as u128 == 0
        })
    };
    let base_count = checked_pow(ell, b as u32)
        .filter(|&c| c <= spec.orbit_cap)
        .ok_or_else(|| Error::guard("ℓ^b exceeds the orbit cap"))?;
    let mut level: Vec<Vec<u64>> = (0..base_count)
        .map(|idx| digits(idx, ell, b))
        .filter(|v| is_primitive(v, ell) && kills(v, ell))
        .collect();
    let mut m = 1u32;
    while !level.is_empty() {
        if m >= x_precision {
            return Err(Error::inconsistent(format!(
                "β₀ search did not stabilize within precision {x_precision}"
            )));
        }
        let step = ell.pow(m);
        let next_mod = step * ell;
        let mut next = Vec::new();
        for v in &level {
            for idx in 0..base_count {
                let w = digits(idx, ell, b);
                let lifted: Vec<u64> = v.iter().zip(&w).map(|(a, d)| a + step * d).collect();
                if kills(&lifted, next_mod) {
                    next.push(lifted);
                }
            }
            if next.len() as u64 > spec.orbit_cap {
                return Err(Error::guard("β₀ search exceeded the orbit cap"));
            }
        }
        level = next;
        m += 1;
    }
    Ok(m - 1)
}

fn digits(mut idx: u64, base: u64, len: usize) -> Vec<u64> {
    let mut v = vec![0; len];
    for slot in v.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
    v
}

/// `v_ℓ(Xv)`, capped at the precision of `X`.
pub fn beta_v(x: &Matrix<PadicInt>, v: &[u64]) -> u32 {
    let first = &x.entries()[0];
    let vv: Vec<PadicInt> = v.iter().map(|&c| first.sibling(c as i64)).collect();
    x.mul_vec(&vv)
        .iter()
        .map(|c| c.val().lower_bound())
        .min()
        .unwrap()
}

/// `Q` reduced modulo `ℓⁿ`.
pub fn q_mod(spec: &TowerSpec, n: u32) -> ModMatrix {
    ModMatrix::from_ints(&spec.q, spec.ell.pow(n))
}

/// `Q^{−1}` modulo `ℓᴺ` via the adjugate.
pub fn q_inverse(spec: &TowerSpec) -> Result<ModMatrix> {
    let q = spec.q_matrix();
    let det = q.det();
    let m = spec.ell.pow(spec.precision);
    let det_res = det.mod_floor(&BigInt::from(m)).to_u64().unwrap();
    let det_inv = inv_mod(det_res, m).ok_or_else(|| Error::invalid("det Q is not a unit"))?;
    let adj = q.adjugate();
    let data = adj
        .entries()
        .iter()
        .map(|x| {
            let r = x.mod_floor(&BigInt::from(m)).to_u64().unwrap();
            ((r as u128 * det_inv as u128) % m as u128) as u64
        })
        .collect();
    Ok(ModMatrix {
        size: spec.b,
        modulus: m,
        data,
    })
}

fn reduce_vec(v: &[u64], m: u64) -> Vec<u64> {
    v.iter().map(|x| x % m).collect()
}

/// `k_n(v)`: least `k` with `Q^k v ≡ v (mod ℓⁿ)`, among powers of `ℓ`.
pub fn orbit_order(spec: &TowerSpec, n: u32, v: &[u64]) -> Result<u64> {
    if v.len() != spec.b {
        return Err(Error::invalid("vector has the wrong length"));
    }
    if !is_primitive(v, spec.ell) {
        return Err(Error::precondition(format!("{v:?} is not primitive")));
    }
    let m = spec.ell.pow(n);
    let v = reduce_vec(v, m);
    let mut power = q_mod(spec, n);
    let mut k = 1u64;
    for _ in 0..=n {
        if power.apply(&v) == v {
            return Ok(k);
        }
        power = power.pow(spec.ell);
        k *= spec.ell;
    }
    Err(Error::inconsistent(format!(
        "no ℓ-power orbit order found for {v:?} at level {n}"
    )))
}

/// A `Q`-orbit on primitive vectors modulo `ℓⁿ`, named by its
/// lexicographically smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRep {
    pub v: Vec<u64>,
    pub size: u64,
}

fn encode(v: &[u64], m: u64) -> u64 {
    v.iter().fold(0, |acc, &x| acc * m + x)
}

pub fn check_orbit_guard(spec: &TowerSpec, n: u32) -> Result<u64> {
    checked_pow(spec.ell, n * spec.b as u32)
        .filter(|&c| c <= spec.orbit_cap)
        .ok_or_else(|| {
            Error::guard(format!(
                "ℓ^(nb) = {}^{} exceeds the orbit cap {}",
                spec.ell,
                n * spec.b as u32,
                spec.orbit_cap
            ))
        })
}

/// Orbit representatives in increasing lexicographic order.
pub fn primitive_orbit_reps(spec: &TowerSpec, n: u32) -> Result<Vec<OrbitRep>> {
    let total = check_orbit_guard(spec, n)?;
    let m = spec.ell.pow(n);
    let q = q_mod(spec, n);
    let mut seen = vec![false; total as usize];
    let mut reps = Vec::new();
    for idx in 0..total {
        if seen[idx as usize] {
            continue;
        }
        let v = digits(idx, m, spec.b);
        if !is_primitive(&v, spec.ell) {
            continue;
        }
        let mut w = v.clone();
        let mut size = 0u64;
        loop {
            seen[encode(&w, m) as usize] = true;
            size += 1;
            w = q.apply(&w);
            if w == v {
                break;
            }
        }
        reps.push(OrbitRep { v, size });
    }
    Ok(reps)
}

/// The representative of the orbit through `v` modulo `ℓⁿ`.
pub fn canonical_rep(spec: &TowerSpec, n: u32, v: &[u64]) -> Vec<u64> {
    let m = spec.ell.pow(n);
    let q = q_mod(spec, n);
    let start = reduce_vec(v, m);
    let mut best = start.clone();
    let mut w = q.apply(&start);
    while w != start {
        if w < best {
            best = w.clone();
        }
        w = q.apply(&w);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::spec::Term;

    fn spec1(ell: u64, q: i64, n_max: u32) -> TowerSpec {
        TowerSpec::new(
            ell,
            vec![vec![q]],
            vec![Term::scalar(vec![0], 1), Term::scalar(vec![1], 1)],
            n_max,
            None,
        )
        .unwrap()
    }

    fn spec2(ell: u64, q: Vec<Vec<i64>>, n_max: u32) -> TowerSpec {
        TowerSpec::new(
            ell,
            q,
            vec![Term::scalar(vec![0, 0], 1), Term::scalar(vec![3, 1], 1)],
            n_max,
            None,
        )
        .unwrap()
    }

    /// Direct iteration of `Q` until `v` returns.
    fn naive_order(spec: &TowerSpec, n: u32, v: &[u64]) -> u64 {
        let q = q_mod(spec, n);
        let m = spec.ell.pow(n);
        let start = reduce_vec(v, m);
        let mut w = q.apply(&start);
        let mut k = 1;
        while w != start {
            w = q.apply(&w);
            k += 1;
        }
        k
    }

    #[test]
    fn orbit_order_examples() {
        let s = spec1(5, 6, 4);
        assert_eq!(orbit_order(&s, 1, &[1]).unwrap(), 1);
        assert_eq!(orbit_order(&s, 2, &[1]).unwrap(), 5);
        assert_eq!(orbit_order(&s, 3, &[1]).unwrap(), 25);
        let s = spec2(5, vec![vec![6, 0], vec![0, 11]], 3);
        assert_eq!(orbit_order(&s, 2, &[1, 1]).unwrap(), 5);
        let s = spec2(3, vec![vec![4, 0], vec![3, 4]], 3);
        assert_eq!(orbit_order(&s, 1, &[1, 0]).unwrap(), 1);
        assert!(orbit_order(&s, 2, &[3, 0]).is_err());
    }

    #[test]
    fn orbit_order_matches_iteration() {
        let s = spec2(3, vec![vec![4, 3], vec![3, 7]], 4);
        for n in 1..=4 {
            for rep in primitive_orbit_reps(&s, n).unwrap() {
                assert_eq!(orbit_order(&s, n, &rep.v).unwrap(), naive_order(&s, n, &rep.v));
                assert_eq!(rep.size, naive_order(&s, n, &rep.v));
            }
        }
    }

    #[test]
    fn orbit_params_examples() {
        let p = orbit_params(&spec1(5, 6, 3)).unwrap();
        assert_eq!((p.alpha, p.beta0, p.n0), (1, 0, 1));
        let p = orbit_params(&spec2(3, vec![vec![10, 0], vec![0, 10]], 3)).unwrap();
        assert_eq!((p.alpha, p.beta0, p.n0), (2, 0, 2));
        for ell in [3u64, 5, 7] {
            let q = 1 + ell as i64;
            let p = orbit_params(&spec2(ell, vec![vec![q, 0], vec![0, q]], 2)).unwrap();
            assert_eq!((p.alpha, p.beta0), (1, 0));
        }
        let p = orbit_params(&spec2(3, vec![vec![4, 0], vec![3, 4]], 3)).unwrap();
        assert_eq!((p.alpha, p.beta0, p.n0), (1, 0, 1));
    }

    #[test]
    fn nontrivial_beta() {
        // Q = diag(4, 1 + 27): X has a small and a large eigenvalue direction.
        let s = spec2(3, vec![vec![4, 0], vec![0, 28]], 5);
        let (p, x) = orbit_params_with_x(&s).unwrap();
        assert_eq!((p.alpha, p.beta0), (1, 2));
        for n in 1..=5 {
            for rep in primitive_orbit_reps(&s, n).unwrap() {
                let b = beta_v(&x, &rep.v).min(p.beta0);
                let expect = if n >= p.alpha + b { 3u64.pow(n - p.alpha - b) } else { 1 };
                assert_eq!(rep.size, expect, "n={n} v={:?}", rep.v);
            }
        }
    }

    #[test]
    fn orbit_rep_examples() {
        let s = spec1(3, 4, 3);
        let reps = primitive_orbit_reps(&s, 1).unwrap();
        assert_eq!(reps.len(), 2);
        let reps = primitive_orbit_reps(&s, 2).unwrap();
        assert_eq!(reps.len(), 2);
        assert!(reps.iter().all(|r| r.size == 3));
        assert_eq!(reps[0].v, vec![1]);
    }

    #[test]
    fn orbit_sizes_sum_to_primitive_count() {
        for (ell, q) in [
            (3u64, vec![vec![4, 0], vec![3, 4]]),
            (3, vec![vec![10, 0], vec![0, 10]]),
            (5, vec![vec![6, 0], vec![0, 11]]),
        ] {
            let s = spec2(ell, q, 3);
            for n in 1..=3u32 {
                let reps = primitive_orbit_reps(&s, n).unwrap();
                let total: u64 = reps.iter().map(|r| r.size).sum();
                assert_eq!(total, ell.pow(2 * n) - ell.pow(2 * (n - 1)));
                for r in &reps {
                    assert_eq!(canonical_rep(&s, n, &r.v), r.v);
                }
            }
        }
    }

    #[test]
    fn inverse_is_an_inverse() {
        let s = spec2(3, vec![vec![4, 3], vec![6, 4]], 3);
        let inv = q_inverse(&s).unwrap();
        let q = ModMatrix::from_ints(&s.q, inv.modulus);
        assert_eq!(q.mul(&inv), ModMatrix::identity(2, inv.modulus));
    }

    #[test]
    fn guard_refuses_large_levels() {
        let s = spec2(3, vec![vec![4, 0], vec![3, 4]], 3).with_orbit_cap(100);
        assert!(matches!(primitive_orbit_reps(&s, 3), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn orders_grow_by_at_most_ell() {
        let s = spec2(3, vec![vec![4, 0], vec![3, 4]], 4);
        let p = orbit_params(&s).unwrap();
        for n in 1..4u32 {
            for rep in primitive_orbit_reps(&s, n).unwrap() {
                let up = orbit_order(&s, n + 1, &rep.v).unwrap();
                assert!(up == rep.size || up == 3 * rep.size);
                if n >= p.n0 {
                    assert_eq!(up, 3 * rep.size);
                }
            }
        }
    }
}
