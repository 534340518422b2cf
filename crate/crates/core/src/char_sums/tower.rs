//! Frobenius polynomials of the Fermat and Artin–Schreier towers assembled
//! level by level from Jacobi and Gauss sums.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::BiCycloElem;
use crate::error::{Error, Result};
use crate::poly;
use crate::util::{checked_pow, mul_mod};

use super::characters::{AddChar, MultChar};
use super::field::{FieldView, Fq};
use super::sums::{gauss_sum, jacobi_sum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Fermat,
    ArtinSchreier,
}

/// One eigenspace orbit: `h_{n,v}(y) = 1 + c·y` over `F_{q^k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HFactor {
    /// Character indices: `(v₁, v₂)` for Fermat, `(a, j)` for Artin–Schreier
    /// with `a` the discrete log of the additive twist in `F_q`.
    pub rep: Vec<u64>,
    pub k: u64,
    /// Coordinates of `c` (a Jacobi or Gauss sum).
    pub coefficient: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HLevel {
    pub family: Family,
    pub ell: u64,
    pub n: u32,
    pub q: u64,
    pub k_n: u64,
    pub factors: Vec<HFactor>,
    /// `h_n(y) = Π h_{n,v}(y^{k/k_n})`.
    #[serde(with = "crate::decimal")]
    pub h: Vec<BigInt>,
    /// `g_n(x) = h_n(x^{k_n})`.
    #[serde(with = "crate::decimal")]
    pub g: Vec<BigInt>,
}

fn ord_mod(q: u64, m: u64) -> u64 {
    let r = q % m;
    let mut x = r;
    let mut k = 1;
    while x != 1 % m {
        x = mul_mod(x, r, m);
        k += 1;
    }
    k
}

fn field_cache(
    cache: &mut BTreeMap<u32, Arc<Fq>>,
    p: u64,
    degree: u32,
) -> Result<Arc<Fq>> {
    if let Some(k) = cache.get(&degree) {
        return Ok(k.clone());
    }
    let k = Fq::build(p, degree)?;
    cache.insert(degree, k.clone());
    Ok(k)
}

fn to_integer_poly(p: &[BiCycloElem], what: &str) -> Result<Vec<BigInt>> {
    p.iter()
        .map(|c| {
            c.to_cyclo()
                .and_then(|x| x.demote().ok())
                .map(|x| x.constant_term().clone())
                .ok_or_else(|| Error::inconsistent(format!("{what} has a non-rational coefficient")))
        })
        .collect()
}

struct Factor {
    rep: Vec<u64>,
    k: u64,
    c: BiCycloElem,
}

/// New-character orbits at level `n` and their coefficients, plus `k_n`.
fn level_factors(family: Family, ell: u64, n: u32, p: u64, f: u32) -> Result<(u64, u64, Vec<Factor>)> {
    if n == 0 {
        return Err(Error::invalid("levels start at 1"));
    }
    if ell == p {
        return Err(Error::invalid("ℓ must differ from the characteristic"));
    }
    let q = checked_pow(p, f).ok_or_else(|| Error::invalid("q overflows"))?;
    let m = ell.pow(n);
    let mut fields = BTreeMap::new();
    field_cache(&mut fields, p, f)?;

    // orbit representatives of the new characters under multiplication by q
    let candidates: Vec<Vec<u64>> = match family {
        Family::Fermat => (0..m)
            .flat_map(|v1| (0..m).map(move |v2| vec![v1, v2]))
            .filter(|v| {
                (v[0] % ell != 0 || v[1] % ell != 0)
                    && v[0] != 0
                    && v[1] != 0
                    && (v[0] + v[1]) % m != 0
            })
            .collect(),
        Family::ArtinSchreier => (0..q - 1)
            .flat_map(|a| (1..m).filter(|j| j % ell != 0).map(move |j| vec![a, j]))
            .collect(),
    };
    let frobenius = |w: &[u64]| -> Vec<u64> {
        match family {
            Family::Fermat => vec![mul_mod(w[0], q, m), mul_mod(w[1], q, m)],
            Family::ArtinSchreier => vec![w[0], mul_mod(w[1], q, m)],
        }
    };
    let mut seen = BTreeSet::new();
    let mut reps: Vec<(Vec<u64>, u64)> = Vec::new();
    for v in candidates {
        if seen.contains(&v) {
            continue;
        }
        let mut w = v.clone();
        let mut k = 0;
        loop {
            seen.insert(w.clone());
            k += 1;
            w = frobenius(&w);
            if w == v {
                break;
            }
        }
        reps.push((v, k));
    }
    let k_n = reps.iter().map(|r| r.1).min().unwrap_or_else(|| ord_mod(q, m));

    let mut factors = Vec::with_capacity(reps.len());
    for (v, k) in reps {
        let ext = field_cache(&mut fields, p, f * k as u32)?;
        let view = FieldView::full(&ext);
        let c = match family {
            Family::Fermat => BiCycloElem::from_cyclo(
                p,
                &jacobi_sum(
                    &MultChar::new(&view, ell, n, v[0] as i64)?,
                    &MultChar::new(&view, ell, n, v[1] as i64)?,
                )?,
            ),
            Family::ArtinSchreier => {
                // twist a = g_q^{v₀} viewed inside F_{q^k}
                let sub = FieldView::subfield(&ext, f)?;
                let a = ext.exp(v[0] * sub_step(&sub, &ext));
                gauss_sum(
                    &AddChar::scaled(&view, a)?,
                    &MultChar::new(&view, ell, n, v[1] as i64)?,
                )?
            }
        };
        factors.push(Factor { rep: v, k, c });
    }
    Ok((q, k_n, factors))
}

/// `Π (1 + c·y^{k/k_n})` over the given factors, demoted to `Z`.
fn assemble<'a>(
    p: u64,
    ell: u64,
    n: u32,
    k_n: u64,
    factors: impl Iterator<Item = &'a Factor>,
    what: &str,
) -> Result<Vec<BigInt>> {
    let one = BiCycloElem::one(p, ell, n);
    let mut h = vec![one.clone()];
    for fac in factors {
        let e = (fac.k / k_n) as usize;
        let mut lin = vec![BiCycloElem::zero(p, ell, n); e + 1];
        lin[0] = one.clone();
        lin[e] = fac.c.clone();
        h = poly::mul(&h, &lin, None);
    }
    to_integer_poly(&h, what)
}

/// `h_n`, `g_n` for the degree-`ℓⁿ` member of the family over `F_q`,
/// `q = p^f`.
pub fn h_level(family: Family, ell: u64, n: u32, p: u64, f: u32) -> Result<HLevel> {
    let (q, k_n, factors) = level_factors(family, ell, n, p, f)?;
    let h = assemble(p, ell, n, k_n, factors.iter(), "h_n")?;
    let g = poly::stretch(&h, k_n as usize);
    Ok(HLevel {
        family,
        ell,
        n,
        q,
        k_n,
        factors: factors
            .into_iter()
            .map(|fac| HFactor {
                rep: fac.rep,
                k: fac.k,
                coefficient: fac.c.coeffs().iter().map(|x| x.to_string()).collect(),
            })
            .collect(),
        h,
        g,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stabilization {
    pub family: Family,
    pub ell: u64,
    pub n: u32,
    pub q: u64,
    pub orbits: usize,
    pub orbits_next: usize,
    /// Unit-character part of `h_{n+1}`.
    #[serde(with = "crate::decimal")]
    pub next: Vec<BigInt>,
    /// `u_n(q^{(ℓ−1)/2} y)^e`, `u_n` the unit-character part of `h_n`.
    #[serde(with = "crate::decimal")]
    pub predicted: Vec<BigInt>,
    pub pass: bool,
}

fn is_unit_rep(family: Family, ell: u64, rep: &[u64]) -> bool {
    match family {
        Family::Fermat => rep[0] % ell != 0 && rep[1] % ell != 0 && (rep[0] + rep[1]) % ell != 0,
        Family::ArtinSchreier => rep[1] % ell != 0,
    }
}

/// Normalized stabilization of the tower from level `n` to `n + 1` over
/// `F_q` with `ℓⁿ ∥ q − 1`: every unit character at level `n + 1` has
/// eigenvalue `q^{(ℓ−1)/2}` times the one of its reduction at level `n`, so
/// the unit parts satisfy `u_{n+1}(y) = u_n(q^{(ℓ−1)/2} y)^e` with `e = ℓ`
/// (Fermat) or `e = 1` (Artin–Schreier).
pub fn stabilization_check(family: Family, ell: u64, n: u32, p: u64, f: u32) -> Result<Stabilization> {
    if ell % 2 == 0 {
        return Err(Error::invalid("ℓ must be odd"));
    }
    let q = checked_pow(p, f).ok_or_else(|| Error::invalid("q overflows"))?;
    if crate::util::val_u64(q - 1, ell) != Some(n) {
        return Err(Error::precondition(format!(
            "{ell}^{n} does not exactly divide {q} − 1"
        )));
    }
    let (_, k_n, low) = level_factors(family, ell, n, p, f)?;
    let (_, k_next, high) = level_factors(family, ell, n + 1, p, f)?;
    let low: Vec<Factor> = low.into_iter().filter(|x| is_unit_rep(family, ell, &x.rep)).collect();
    let high: Vec<Factor> = high.into_iter().filter(|x| is_unit_rep(family, ell, &x.rep)).collect();
    let u_low = assemble(p, ell, n, k_n, low.iter(), "u_n")?;
    let next = assemble(p, ell, n + 1, k_next, high.iter(), "u_{n+1}")?;
    let c = BigInt::from(q).pow((ell as u32 - 1) / 2);
    let mut scale = BigInt::from(1);
    let scaled: Vec<BigInt> = u_low
        .iter()
        .map(|x| {
            let y = x * &scale;
            scale *= &c;
            y
        })
        .collect();
    let e = match family {
        Family::Fermat => ell,
        Family::ArtinSchreier => 1,
    };
    let predicted = poly::pow(&scaled, e, None);
    Ok(Stabilization {
        family,
        ell,
        n,
        q,
        orbits: low.len(),
        orbits_next: high.len(),
        pass: poly::trim(next.clone()) == poly::trim(predicted.clone()),
        next,
        predicted,
    })
}

fn sub_step(sub: &FieldView, ext: &Fq) -> u64 {
    (ext.size() - 1) / (sub.size() - 1)
}

/// `f_m(x) = Π_{n ≤ m} g_n(x)`, the Frobenius polynomial of the level-`m`
/// curve.
pub fn f_poly(family: Family, ell: u64, m: u32, p: u64, f: u32) -> Result<(Vec<HLevel>, Vec<BigInt>)> {
    let mut levels = Vec::with_capacity(m as usize);
    let mut acc = vec![BigInt::from(1)];
    for n in 1..=m {
        let level = h_level(family, ell, n, p, f)?;
        acc = poly::mul(&acc, &level.g, None);
        levels.push(level);
    }
    Ok((levels, acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_sums::curves::{
        artin_schreier_point_count, fermat_point_count, zeta_from_counts,
    };

    #[test]
    fn fermat_cubic_f1_matches_point_counts() {
        let (_, f1) = f_poly(Family::Fermat, 3, 1, 7, 1).unwrap();
        let n1 = fermat_point_count(3, 1, &FieldView::build(7, 1).unwrap()).unwrap();
        let n2 = fermat_point_count(3, 1, &FieldView::build(7, 2).unwrap()).unwrap();
        let p = zeta_from_counts(&[n1.enumeration, n2.enumeration], 7, 1).unwrap();
        assert_eq!(f1, p);
    }

    #[test]
    fn fermat_over_f4() {
        let (_, f1) = f_poly(Family::Fermat, 3, 1, 2, 2).unwrap();
        let n1 = fermat_point_count(3, 1, &FieldView::build(2, 2).unwrap()).unwrap();
        let p = zeta_from_counts(&[n1.enumeration], 4, 1).unwrap();
        assert_eq!(f1, p);
    }

    #[test]
    fn fermat_level_two_over_f7() {
        let l = h_level(Family::Fermat, 3, 2, 7, 1).unwrap();
        assert_eq!(l.k_n, 3);
        // new characters: primitive (v₁, v₂) mod 9 with v₁, v₂, v₁+v₂ ≠ 0
        let count: u64 = l.factors.iter().map(|f| f.k).sum();
        assert_eq!(count, 72 - 18);
        assert_eq!(poly::degree(&l.g), count as usize);
        let (_, f2) = f_poly(Family::Fermat, 3, 2, 7, 1).unwrap();
        assert_eq!(poly::degree(&f2), 2 * 28);
    }

    #[test]
    fn stabilization_over_f7() {
        let s = stabilization_check(Family::Fermat, 3, 1, 7, 1).unwrap();
        assert!(s.pass, "{s:?}");
        assert_eq!((s.orbits, s.orbits_next), (2, 6));
        let s = stabilization_check(Family::ArtinSchreier, 3, 1, 7, 1).unwrap();
        assert!(s.pass, "{s:?}");
        assert_eq!(s.orbits, s.orbits_next);
        assert!(stabilization_check(Family::Fermat, 3, 1, 19, 1).is_err());
    }

    #[test]
    fn artin_schreier_f1() {
        let (_, f1) = f_poly(Family::ArtinSchreier, 3, 1, 7, 1).unwrap();
        assert_eq!(poly::degree(&f1), 6 * 2);
        let counts: Vec<u64> = (1..=6)
            .map(|m| {
                let big = Fq::build(7, m).unwrap();
                let base = FieldView::subfield(&big, 1).unwrap();
                artin_schreier_point_count(3, 1, &base).unwrap().enumeration
            })
            .collect();
        let p = zeta_from_counts(&counts, 7, 6).unwrap();
        assert_eq!(f1, p);
    }
}
