//! Gauss and Jacobi sums, and the root-of-unity sums `S_{ρ,n}` and
//! `Σ_{P(M)} χ`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{BiCycloElem, CycloRecord, Exact, ExactCyclo};
use crate::error::{Error, Result};
use crate::padic::Valuation;
use crate::util::{is_prime, mul_mod, val_u64};

use super::characters::{AddChar, MultChar};

/// `g(ψ, χ) = Σ_{x ∈ F_q} ψ(x) χ(x)` in `Z[ζ_p, ζ_{ℓⁿ}]`.
pub fn gauss_sum(psi: &AddChar, chi: &MultChar) -> Result<BiCycloElem> {
    let view = chi.view();
    if psi.view().size() != view.size() || psi.view().generator() != view.generator() {
        return Err(Error::invalid("characters live on different fields"));
    }
    let p = view.characteristic();
    if p == chi.ell() {
        return Err(Error::invalid("ℓ must differ from the characteristic"));
    }
    let m = chi.order_modulus() as usize;
    let mut table = vec![0i64; p as usize * m];
    for x in view.elements() {
        if let Some(e) = chi.exponent(x) {
            table[psi.exponent(x) as usize * m + e as usize] += 1;
        }
    }
    Ok(BiCycloElem::from_table(
        p,
        chi.ell(),
        chi.level(),
        table.into_iter().map(BigInt::from).collect(),
    ))
}

/// `J(χ₁, χ₂) = Σ_{x ∈ F_q} χ₁(x) χ₂(1 − x)` in `Z[ζ_{ℓⁿ}]`.
pub fn jacobi_sum(chi1: &MultChar, chi2: &MultChar) -> Result<ExactCyclo> {
    chi1.check_same(chi2)?;
    let view = chi1.view();
    let k = view.ambient();
    let m = chi1.order_modulus() as usize;
    let mut counts = vec![0i64; m];
    for x in view.elements() {
        if let (Some(a), Some(b)) = (chi1.exponent(x), chi2.exponent(k.sub(1, x))) {
            counts[(a + b) as usize % m] += 1;
        }
    }
    Ok(counts_to_cyclo(chi1.ell(), chi1.level(), &counts))
}

fn counts_to_cyclo(ell: u64, level: u32, counts: &[i64]) -> ExactCyclo {
    let terms: Vec<(i64, BigInt)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(e, &c)| (e as i64, BigInt::from(c)))
        .collect();
    ExactCyclo::from_terms(ell, level, &Exact, &terms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouSum {
    pub value: CycloRecord,
    pub valuation: Valuation,
    pub required: u32,
    pub pass: bool,
}

impl RouSum {
    fn new(value: &ExactCyclo, required: u32) -> Self {
        let valuation = value.ell_divisibility();
        RouSum {
            value: value.record(),
            valuation,
            required,
            pass: valuation.is_at_least(required),
        }
    }
}

fn multiplicative_order(q: u64, m: u64) -> u64 {
    let r = q % m;
    let mut x = r;
    let mut k = 1;
    while x != 1 % m {
        x = mul_mod(x, r, m);
        k += 1;
    }
    k
}

/// `S_{ρ,n}(w) = Σ_{i=1}^{ρ} ζ_{ℓⁿ}^{q^i w}`, exact, with the bound
/// `v_ℓ(S) ≥ v_ℓ(ρ)`.
pub fn s_rho_n(ell: u64, q: u64, w: i64, rho: u64, n: u32) -> Result<(ExactCyclo, RouSum)> {
    if !is_prime(ell) || ell == 2 {
        return Err(Error::invalid("ℓ must be an odd prime"));
    }
    if q % ell != 1 {
        return Err(Error::precondition(format!("q = {q} is not 1 mod {ell}")));
    }
    if rho == 0 {
        return Err(Error::precondition("ρ must be positive"));
    }
    let m = ell.pow(n);
    let k = multiplicative_order(q, m);
    if rho % k != 0 {
        return Err(Error::precondition(format!(
            "ρ = {rho} is not a multiple of the order {k} of q mod {m}"
        )));
    }
    let mut counts = vec![0i64; m as usize];
    let w = w.rem_euclid(m as i64) as u64;
    let mut qi = q % m;
    for _ in 0..k {
        counts[mul_mod(qi, w, m) as usize] += (rho / k) as i64;
        qi = mul_mod(qi, q, m);
    }
    let s = counts_to_cyclo(ell, n, &counts);
    let report = RouSum::new(&s, val_u64(rho, ell).unwrap());
    Ok((s, report))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveSum {
    pub sum: RouSum,
    /// `(n−1)b`, asserted only for `M = (Z/ℓⁿ)^b`.
    pub free_bound: Option<u32>,
}

/// `Σ_{v ∈ P(M)} χ(v)` for `M = ⊕ Z/ℓ^{e_i}` and
/// `χ(v) = ζ_{ℓⁿ}^{Σ λ_i v_i ℓ^{n−e_i}}`, `n = max e_i`.
pub fn primitive_char_sum(
    ell: u64,
    shape: &[u32],
    lambda: &[i64],
    guard: u64,
) -> Result<(ExactCyclo, PrimitiveSum)> {
    if shape.is_empty() || shape.len() != lambda.len() {
        return Err(Error::invalid("shape and λ must have the same positive length"));
    }
    if shape.contains(&0) {
        return Err(Error::invalid("cyclic factors must be nontrivial"));
    }
    let n = *shape.iter().max().unwrap();
    let m = ell.pow(n);
    let total: u64 = shape
        .iter()
        .try_fold(1u64, |acc, &e| acc.checked_mul(ell.pow(e)))
        .filter(|&t| t <= guard)
        .ok_or_else(|| Error::guard(format!("module has more than {guard} elements")))?;
    let weights: Vec<u64> = shape
        .iter()
        .zip(lambda)
        .map(|(&e, &l)| mul_mod(l.rem_euclid(m as i64) as u64, ell.pow(n - e), m))
        .collect();
    let mut counts = vec![0i64; m as usize];
    let mut coords = vec![0u64; shape.len()];
    for _ in 0..total {
        if coords.iter().any(|&c| c % ell != 0) {
            let e = coords
                .iter()
                .zip(&weights)
                .fold(0, |acc, (&c, &w)| (acc + mul_mod(c, w, m)) % m);
            counts[e as usize] += 1;
        }
        for (c, &e) in coords.iter_mut().zip(shape) {
            *c += 1;
            if *c < ell.pow(e) {
                break;
            }
            *c = 0;
        }
    }
    let s = counts_to_cyclo(ell, n, &counts);
    let free = shape.iter().all(|&e| e == n);
    let free_bound = free.then(|| (n - 1) * shape.len() as u32);
    let mut sum = RouSum::new(&s, n - 1);
    if let Some(b) = free_bound {
        sum.pass &= sum.valuation.is_at_least(b);
    }
    Ok((s, PrimitiveSum { sum, free_bound }))
}
