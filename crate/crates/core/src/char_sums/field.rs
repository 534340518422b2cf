//! Explicit finite fields `F_{p^f}` with discrete-log tables.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::util::{checked_pow, is_prime};

/// Largest field the tables are built for.
pub const FIELD_GUARD: u64 = 10_000_000;

/// Polynomials over `F_p`, constant term first.
mod fp_poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let dm = m.len() - 1;
        let lead_inv = crate::util::inv_mod(m[dm], p).unwrap();
        while a.len() > dm {
            let c = a.pop().unwrap() * lead_inv % p;
            if c == 0 {
                continue;
            }
            let shift = a.len() - dm;
            for (i, &mi) in m[..dm].iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - c * mi % p) % p;
            }
        }
        if a.is_empty() {
            a.push(0);
        }
        trim(a)
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, m, p);
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn is_zero(a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !is_zero(&b) {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's irreducibility test for monic `m` of degree `f`.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let f = m.len() as u64 - 1;
        let x = rem(&[0, 1], m, p);
        let x_pow = |k: u64| {
            // x^{p^k} by k successive p-th powers
            let mut r = x.clone();
            for _ in 0..k {
                r = pow_mod(&r, p, m, p);
            }
            r
        };
        if !is_zero(&sub(&x_pow(f), &x, p)) {
            return false;
        }
        let mut k = f;
        let mut r = 2;
        let mut primes = Vec::new();
        while r * r <= k {
            if k % r == 0 {
                primes.push(r);
                while k % r == 0 {
                    k /= r;
                }
            }
            r += 1;
        }
        if k > 1 {
            primes.push(k);
        }
        primes.into_iter().all(|r| {
            let g = gcd(&sub(&x_pow(f / r), &x, p), m, p);
            g.len() == 1
        })
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `F_{p^f}` realized as `F_p[α]/(m(α))`.
///
/// Elements are indices `Σ c_i p^i` standing for `Σ c_i α^i`. The modulus is
/// the first monic irreducible when candidates `x^f + Σ c_i x^i` are ordered
/// by the index `Σ c_i p^i`; the generator is the smallest index of order
/// `q − 1`.
#[derive(Debug)]
pub struct Fq {
    p: u64,
    f: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace_basis: Vec<u64>,
}

impl Fq {
    pub fn build(p: u64, f: u32) -> Result<Arc<Fq>> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if f == 0 {
            return Err(Error::invalid("field degree must be positive"));
        }
        let q = checked_pow(p, f)
            .filter(|&q| q <= FIELD_GUARD)
            .ok_or_else(|| {
                Error::guard(format!("{p}^{f} exceeds the field guard {FIELD_GUARD}"))
            })?;
        let modulus = (0..p.pow(f))
            .map(|t| {
                let mut m = digits(t, p, f);
                m.push(1);
                m
            })
            .find(|m| fp_poly::is_irreducible(m, p))
            .ok_or_else(|| Error::inconsistent("no irreducible polynomial found"))?;
        let factors = prime_factors(q - 1);
        let one = vec![1u64];
        let generator = (1..q)
            .find(|&g| {
                let gp = digits(g, p, f);
                factors
                    .iter()
                    .all(|&r| fp_poly::pow_mod(&gp, (q - 1) / r, &modulus, p) != one)
            })
            .ok_or_else(|| Error::inconsistent("no generator found"))?;
        let gp = digits(generator, p, f);
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![u32::MAX; q as usize];
        let mut e = vec![1u64];
        for k in 0..q - 1 {
            let idx = undigits(&e, p);
            if log[idx as usize] != u32::MAX {
                return Err(Error::inconsistent("generator has a short cycle"));
            }
            exp.push(idx as u32);
            log[idx as usize] = k as u32;
            e = fp_poly::mul_mod(&e, &gp, &modulus, p);
        }
        let mut field = Fq {
            p,
            f,
            q,
            modulus,
            generator: generator as u32,
            exp,
            log,
            trace_basis: Vec::new(),
        };
        field.trace_basis = (0..f)
            .map(|i| {
                let t = field.slow_trace(p.pow(i) as u32);
                if t >= p {
                    Err(Error::inconsistent("trace left the prime field"))
                } else {
                    Ok(t)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Arc::new(field))
    }

    fn slow_trace(&self, x: u32) -> u64 {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.f {
            acc = self.add(acc, y);
            y = self.pow(y, self.p);
        }
        acc as u64
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn size(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.digitwise(a, b, |x, y| (x + y) % self.p)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.digitwise(a, b, |x, y| (x + self.p - y) % self.p)
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    fn digitwise(&self, a: u32, b: u32, op: impl Fn(u64, u64) -> u64) -> u32 {
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.f {
            out += op(a % self.p, b % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q - 1);
        self.exp[k as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return u32::from(e == 0);
        }
        let k = (self.log[a as usize] as u128 * e as u128 % (self.q - 1) as u128) as usize;
        self.exp[k]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.exp[((self.q - 1 - self.log[a as usize] as u64) % (self.q - 1)) as usize])
    }

    /// Discrete log to the base of the fixed generator.
    pub fn dlog(&self, a: u32) -> Option<u64> {
        (a != 0).then(|| self.log[a as usize] as u64)
    }

    /// `g^k` for the fixed generator `g`.
    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % (self.q - 1)) as usize]
    }

    /// Absolute trace to `F_p`.
    pub fn trace(&self, a: u32) -> u64 {
        let mut a = a as u64;
        let mut acc = 0;
        for &t in &self.trace_basis {
            acc += (a % self.p) * t;
            a /= self.p;
        }
        acc % self.p
    }
}

fn digits(mut t: u64, p: u64, f: u32) -> Vec<u64> {
    (0..f)
        .map(|_| {
            let d = t % p;
            t /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// A subfield `F_{p^e} ⊆ F_{p^f}` (possibly all of it), with generator
/// `G^{(p^f−1)/(p^e−1)}` so that the norm `G^k ↦ g'^k` is compatible.
#[derive(Clone, Debug)]
pub struct FieldView {
    field: Arc<Fq>,
    degree: u32,
    size: u64,
    step: u64,
}

impl FieldView {
    pub fn full(field: &Arc<Fq>) -> Self {
        FieldView {
            field: field.clone(),
            degree: field.f,
            size: field.q,
            step: 1,
        }
    }

    pub fn subfield(field: &Arc<Fq>, degree: u32) -> Result<Self> {
        if degree == 0 || field.f % degree != 0 {
            return Err(Error::invalid(format!(
                "F_{}^{} has no subfield of degree {degree}",
                field.p, field.f
            )));
        }
        let size = field.p.pow(degree);
        Ok(FieldView {
            field: field.clone(),
            degree,
            size,
            step: (field.q - 1) / (size - 1),
        })
    }

    pub fn build(p: u64, f: u32) -> Result<Self> {
        Ok(Self::full(&Fq::build(p, f)?))
    }

    pub fn ambient(&self) -> &Fq {
        &self.field
    }

    pub fn ambient_arc(&self) -> &Arc<Fq> {
        &self.field
    }

    pub fn characteristic(&self) -> u64 {
        self.field.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn is_full(&self) -> bool {
        self.step == 1
    }

    pub fn generator(&self) -> u32 {
        self.field.exp(self.step)
    }

    /// `0` followed by `g'^0, g'^1, …`.
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        std::iter::once(0).chain((0..self.size - 1).map(move |j| self.field.exp(j * self.step)))
    }

    pub fn contains(&self, a: u32) -> bool {
        a == 0 || self.field.log[a as usize] as u64 % self.step == 0
    }

    /// Discrete log to the base `g'`.
    pub fn dlog(&self, a: u32) -> Option<u64> {
        let k = self.field.dlog(a)?;
        debug_assert!(k % self.step == 0, "element outside the subfield");
        Some(k / self.step)
    }

    /// Trace from this subfield down to `F_p`.
    pub fn trace(&self, a: u32) -> u64 {
        if self.is_full() {
            return self.field.trace(a);
        }
        let mut acc = 0;
        let mut y = a;
        for _ in 0..self.degree {
            acc = self.field.add(acc, y);
            y = self.field.pow(y, self.field.p);
        }
        acc as u64
    }

    /// Relative trace from the ambient field onto this subfield.
    pub fn trace_from_ambient(&self, a: u32) -> u32 {
        let m = self.field.f / self.degree;
        let mut acc = 0;
        let mut y = a;
        for _ in 0..m {
            acc = self.field.add(acc, y);
            y = self.field.pow(y, self.size);
        }
        acc
    }

    /// Norm from the ambient field onto this subfield.
    pub fn norm_from_ambient(&self, a: u32) -> u32 {
        match self.field.dlog(a) {
            None => 0,
            Some(k) => self.field.exp(k * self.step),
        }
    }
}
